#ifndef HEUNPATH_VOLTERRA_HPP
#define HEUNPATH_VOLTERRA_HPP

#include "heunpath/core.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace heunpath
{

// Minimum |diagonal| accepted by resolvent_solve.
inline constexpr double kSingularDiagonalTolerance = 1e-12;

// Lower-triangular sampling F(i, j) = f(z_i, z_j), i >= j, of a two-point
// kernel on a uniform grid with step dz. Entries above the diagonal are zero
// and are not stored (packed row-major layout).
class TriangularKernel
{
public:
    TriangularKernel() = default;
    TriangularKernel(std::size_t dim, complex step);

    // Samples f(z_i, z_j) for i >= j.
    template <typename F>
    static TriangularKernel sample(const SegmentGrid &grid, F &&f)
    {
        TriangularKernel k(grid.size(), grid.step());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            for (std::size_t j = 0; j <= i; ++j) {
                k(i, j) = f(grid[i], grid[j]);
            }
        }
        return k;
    }

    std::size_t dim() const noexcept { return m_dim; }
    complex step() const noexcept { return m_step; }

    complex &operator()(std::size_t i, std::size_t j) { return m_data[offset(i) + j]; }
    // Zero above the diagonal.
    complex operator()(std::size_t i, std::size_t j) const
    {
        return j > i ? complex{0.0} : m_data[offset(i) + j];
    }

    // Row i, columns 0..i.
    std::span<complex> row(std::size_t i) { return {m_data.data() + offset(i), i + 1}; }
    std::span<const complex> row(std::size_t i) const
    {
        return {m_data.data() + offset(i), i + 1};
    }

    std::vector<complex> diag() const;

    double max_abs_difference(const TriangularKernel &other) const;

private:
    static std::size_t offset(std::size_t i) noexcept { return i * (i + 1) / 2; }

    std::size_t m_dim = 0;
    complex m_step{0.0};
    std::vector<complex> m_data;
};

// Trapezoid-rule Volterra composition
//   (dz/2) (F - dF) L + (dz/2) F (L - dL).
// Throws DimensionMismatch if dimensions or steps differ.
TriangularKernel star_product(const TriangularKernel &f, const TriangularKernel &l);

// Forward substitution for (Id - dz K + (dz/2) dK) x = rhs. No inverse is formed.
// Throws NearSingularDiagonal when a diagonal entry has magnitude <= tol.
std::vector<complex> resolvent_solve(const TriangularKernel &k, std::span<const complex> rhs,
                                     double tol = kSingularDiagonalTolerance);

// First column of the discrete resolvent G = (1 - k)^{*-1} - 1 at (z_i, z_0).
// Entries i >= 1 are x_i/dz with x solving the system above for rhs = e_0;
// entry 0 is the coincident-point value G(z0, z0) = K(z0, z0).
std::vector<complex> resolvent_column(const TriangularKernel &k,
                                      double tol = kSingularDiagonalTolerance);

// Cumulative trapezoid: g[0] = 0, g[i] = g[i-1] + (dz/2)(f[i] + f[i-1]).
std::vector<complex> cumulative_integral(std::span<const complex> f, const SegmentGrid &grid);
std::vector<complex> cumulative_integral(std::span<const complex> f, complex step);

} // namespace heunpath

#endif
