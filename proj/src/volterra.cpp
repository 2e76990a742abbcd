#include "heunpath/volterra.hpp"

#include "heunpath/errors.hpp"

#include <algorithm>
#include <cmath>

namespace heunpath
{

TriangularKernel::TriangularKernel(std::size_t dim, complex step)
    : m_dim(dim), m_step(step), m_data(dim * (dim + 1) / 2, complex{0.0})
{
}

std::vector<complex> TriangularKernel::diag() const
{
    std::vector<complex> d(m_dim);
    for (std::size_t i = 0; i < m_dim; ++i) {
        d[i] = m_data[offset(i) + i];
    }
    return d;
}

double TriangularKernel::max_abs_difference(const TriangularKernel &other) const
{
    if (other.m_dim != m_dim) {
        throw DimensionMismatch("kernels have different dimensions");
    }
    double m = 0.0;
    for (std::size_t n = 0; n < m_data.size(); ++n) {
        m = std::max(m, std::abs(m_data[n] - other.m_data[n]));
    }
    return m;
}

TriangularKernel star_product(const TriangularKernel &f, const TriangularKernel &l)
{
    if (f.dim() != l.dim()) {
        throw DimensionMismatch("star_product: kernel dimensions differ");
    }
    if (f.step() != l.step()) {
        throw DimensionMismatch("star_product: kernel steps differ");
    }
    const std::size_t n = f.dim();
    const complex dz = f.step();
    TriangularKernel out(n, dz);
    for (std::size_t i = 0; i < n; ++i) {
        const auto fi = f.row(i);
        for (std::size_t j = 0; j < i; ++j) {
            complex s{0.0};
            for (std::size_t k = j; k <= i; ++k) {
                s += fi[k] * l(k, j);
            }
            s -= 0.5 * (fi[i] * l(i, j) + fi[j] * l(j, j));
            out(i, j) = dz * s;
        }
        // The diagonal is an integral over an empty interval.
        out(i, i) = 0.0;
    }
    return out;
}

std::vector<complex> resolvent_solve(const TriangularKernel &k, std::span<const complex> rhs,
                                     double tol)
{
    const std::size_t n = k.dim();
    if (rhs.size() != n) {
        throw DimensionMismatch("resolvent_solve: right-hand side length differs from kernel");
    }
    const complex dz = k.step();
    std::vector<complex> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto ki = k.row(i);
        const complex d = 1.0 - 0.5 * dz * ki[i];
        if (std::abs(d) <= tol) {
            throw NearSingularDiagonal(i, std::abs(d));
        }
        complex s = rhs[i];
        for (std::size_t j = 0; j < i; ++j) {
            s += dz * ki[j] * x[j];
        }
        x[i] = s / d;
    }
    return x;
}

std::vector<complex> resolvent_column(const TriangularKernel &k, double tol)
{
    const std::size_t n = k.dim();
    std::vector<complex> e0(n, complex{0.0});
    if (n == 0) {
        return e0;
    }
    e0[0] = 1.0;
    const complex dz = k.step();

    // Only the first column is needed, so the rhs is e_0 and x_0 is the lone
    // delta-mass contribution.
    std::vector<complex> g = resolvent_solve(k, e0, tol);
    for (std::size_t i = 1; i < n; ++i) {
        g[i] /= dz;
    }
    g[0] = k(0, 0);
    return g;
}

std::vector<complex> cumulative_integral(std::span<const complex> f, complex step)
{
    std::vector<complex> g(f.size(), complex{0.0});
    const complex half = 0.5 * step;
    for (std::size_t i = 1; i < f.size(); ++i) {
        g[i] = g[i - 1] + half * (f[i] + f[i - 1]);
    }
    return g;
}

std::vector<complex> cumulative_integral(std::span<const complex> f, const SegmentGrid &grid)
{
    if (f.size() != grid.size()) {
        throw DimensionMismatch("cumulative_integral: integrand length differs from grid");
    }
    return cumulative_integral(f, grid.step());
}

} // namespace heunpath
