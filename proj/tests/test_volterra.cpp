#include "heunpath/errors.hpp"
#include "heunpath/volterra.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace heunpath;

namespace
{

TriangularKernel constant_kernel(const SegmentGrid &g, complex value)
{
    return TriangularKernel::sample(g, [&](complex, complex) { return value; });
}

// Residual max|(Id - dz K + (dz/2) dK) x - v| computed with a dense row sweep.
double residual(const TriangularKernel &k, const std::vector<complex> &x,
                const std::vector<complex> &v)
{
    double m = 0.0;
    for (std::size_t i = 0; i < k.dim(); ++i) {
        complex s = x[i] - v[i];
        for (std::size_t j = 0; j <= i; ++j) {
            const double w = (j == i) ? 0.5 : 1.0;
            s -= w * k.step() * k(i, j) * x[j];
        }
        m = std::max(m, std::abs(s));
    }
    return m;
}

double associativity_defect(std::size_t n)
{
    const SegmentGrid g(0.0, 1.0, n);
    const auto f = TriangularKernel::sample(
        g, [](complex x, complex y) { return std::cos(x - y) + x * y; });
    const auto l = TriangularKernel::sample(
        g, [](complex x, complex y) { return std::exp(0.5 * x * y) - y; });
    const auto m = TriangularKernel::sample(
        g, [](complex x, complex y) { return 1.0 / (1.0 + x + y * y); });
    return star_product(star_product(f, l), m).max_abs_difference(star_product(f, star_product(l, m)));
}

} // namespace

TEST_CASE("TriangularKernel storage")
{
    TriangularKernel k(4, 0.1);
    k(2, 1) = complex{3.0, -1.0};
    CHECK(k(2, 1) == complex{3.0, -1.0});
    const TriangularKernel &ck = k;
    CHECK(ck(1, 2) == complex{0.0});
    CHECK(ck.row(3).size() == 4);
    CHECK(ck.diag().size() == 4);
}

TEST_CASE("star_product of constants integrates exactly")
{
    const SegmentGrid g(0.0, 1.0, 11);
    const auto one = constant_kernel(g, 1.0);
    const auto r = star_product(one, one);
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            CHECK(std::abs(r(i, j) - (g[i] - g[j])) < 1e-14);
        }
    }
}

TEST_CASE("star_product with a linear factor")
{
    const SegmentGrid g(0.0, 1.0, 21);
    const auto one = constant_kernel(g, 1.0);
    const auto lin = TriangularKernel::sample(g, [](complex zeta, complex) { return zeta; });
    const auto r = star_product(one, lin);
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(std::abs(r(i, 0) - 0.5 * g[i] * g[i]) < 1e-14);
    }
}

TEST_CASE("star_product with the zero kernel")
{
    const SegmentGrid g(complex{0.0, 0.0}, complex{0.5, 0.5}, 9);
    const auto f = TriangularKernel::sample(g, [](complex x, complex y) { return x + 2.0 * y; });
    const TriangularKernel zero(g.size(), g.step());
    CHECK(star_product(f, zero).max_abs_difference(zero) == 0.0);
}

TEST_CASE("star_product rejects mismatched kernels")
{
    CHECK_THROWS_AS(star_product(TriangularKernel(3, 0.1), TriangularKernel(4, 0.1)),
                    DimensionMismatch);
    CHECK_THROWS_AS(star_product(TriangularKernel(3, 0.1), TriangularKernel(3, 0.2)),
                    DimensionMismatch);
}

TEST_CASE("star_product stays lower triangular with a vanishing diagonal")
{
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        const std::size_t n = 3 + static_cast<std::size_t>(trial) * 4;
        TriangularKernel a(n, complex{0.05, 0.01}), b(n, complex{0.05, 0.01});
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j <= i; ++j) {
                a(i, j) = {u(rng), u(rng)};
                b(i, j) = {u(rng), u(rng)};
            }
        }
        const auto c = star_product(a, b);
        const TriangularKernel &cc = c;
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(cc(i, i) == complex{0.0});
            for (std::size_t j = i + 1; j < n; ++j) {
                CHECK(cc(i, j) == complex{0.0});
            }
        }
    }
}

TEST_CASE("discrete associativity defect is second order")
{
    const double coarse = associativity_defect(21);
    const double fine = associativity_defect(41);
    const double ratio = coarse / fine;
    MESSAGE("associativity defect " << coarse << " -> " << fine << " ratio " << ratio);
    CHECK(fine > 0.0);
    CHECK(ratio >= 3.0);
    CHECK(ratio <= 5.0);
}

TEST_CASE("resolvent_solve with the zero kernel is the identity")
{
    const TriangularKernel zero(5, 0.1);
    const std::vector<complex> v{1.0, complex{2.0, 1.0}, -3.0, 0.5, complex{0.0, 4.0}};
    const auto x = resolvent_solve(zero, v);
    for (std::size_t i = 0; i < v.size(); ++i) {
        CHECK(x[i] == v[i]);
    }
}

TEST_CASE("resolvent_solve on a 2x2 system by hand")
{
    TriangularKernel k(2, 0.1);
    k(0, 0) = 1.0;
    k(1, 0) = 1.0;
    k(1, 1) = 1.0;
    const std::vector<complex> v{1.0, 0.0};
    const auto x = resolvent_solve(k, v);
    const double x0 = 1.0 / 0.95;
    CHECK(std::abs(x[0] - x0) < 1e-15);
    CHECK(std::abs(x[1] - 0.1 * x0 / 0.95) < 1e-15);
}

TEST_CASE("resolvent residual is at roundoff level")
{
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (std::size_t n : {4u, 17u, 60u}) {
        const complex dz{0.02, -0.01};
        TriangularKernel k(n, dz);
        std::vector<complex> v(n);
        for (std::size_t i = 0; i < n; ++i) {
            v[i] = {u(rng), u(rng)};
            for (std::size_t j = 0; j <= i; ++j) {
                k(i, j) = {u(rng), u(rng)};
            }
        }
        const auto x = resolvent_solve(k, v);
        double vmax = 0.0;
        for (const auto &e : v) {
            vmax = std::max(vmax, std::abs(e));
        }
        CHECK(residual(k, x, v) <= 1e-12 * vmax);
    }
}

TEST_CASE("resolvent_solve reports a singular diagonal")
{
    const double dz = 0.1;
    TriangularKernel k(3, dz);
    k(0, 0) = 1.0;
    k(1, 1) = 2.0 / dz; // 1 - (dz/2) K11 = 0
    try {
        resolvent_solve(k, std::vector<complex>{1.0, 0.0, 0.0});
        FAIL("expected NearSingularDiagonal");
    } catch (const NearSingularDiagonal &e) {
        CHECK(e.index() == 1);
    }
}

TEST_CASE("constant kernel resolvent reproduces the Neumann sum e^{z - z0}")
{
    // sum_n Theta^{*n} = e^{z' - z} for the all-ones kernel.
    auto error_at = [](std::size_t n) {
        const SegmentGrid g(0.0, 1.0, n);
        const auto g1 = resolvent_column(constant_kernel(g, 1.0));
        double e = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            e = std::max(e, std::abs(g1[k] - std::exp(g[k] - g[0])));
        }
        return e;
    };
    const double e1 = error_at(51);
    const double e2 = error_at(101);
    const double e3 = error_at(201);
    MESSAGE("Neumann errors " << e1 << " " << e2 << " " << e3);
    CHECK(e1 < 1e-3);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
    CHECK(e2 / e3 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("resolvent_column first entry is the kernel diagonal")
{
    const SegmentGrid g(complex{0.2, 0.0}, complex{0.6, 0.3}, 12);
    const auto k = TriangularKernel::sample(g, [](complex x, complex y) { return x * x - y; });
    CHECK(resolvent_column(k)[0] == k(0, 0));
}

TEST_CASE("cumulative_integral")
{
    const SegmentGrid g(0.0, 1.0, 11);
    const std::vector<complex> ones(11, 1.0);
    const auto a = cumulative_integral(ones, g);
    CHECK(a[0] == complex{0.0});
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(std::abs(a[i] - (g[i] - g[0])) < 1e-15);
    }

    const auto b = cumulative_integral(g.points(), g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(std::abs(b[i] - 0.5 * g[i] * g[i]) < 1e-15);
    }

    const SegmentGrid h(0.0, 1.0, 101);
    std::vector<complex> ez(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
        ez[i] = std::exp(h[i]);
    }
    const auto c = cumulative_integral(ez, h);
    CHECK(std::abs(c.back() - (std::exp(1.0) - 1.0)) < 2e-5);

    CHECK_THROWS_AS(cumulative_integral(ones, h), DimensionMismatch);
}
