#include "heunpath/oracle.hpp"

#include "heunpath/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace heunpath
{

double OracleReport::max_error_estimate() const
{
    double m = 0.0;
    for (double e : error_estimates) {
        m = std::max(m, e);
    }
    return m;
}

namespace
{

struct State {
    complex u;
    complex v;
};

State rhs(complex z, const State &s, const HeunParameters &p)
{
    return {s.v, coeff_b1(z, p) * s.v + coeff_b2(z, p) * s.u};
}

State rk4_step(complex z, const State &s, complex h, const HeunParameters &p)
{
    const State k1 = rhs(z, s, p);
    const State k2 = rhs(z + 0.5 * h, {s.u + 0.5 * h * k1.u, s.v + 0.5 * h * k1.v}, p);
    const State k3 = rhs(z + 0.5 * h, {s.u + 0.5 * h * k2.u, s.v + 0.5 * h * k2.v}, p);
    const State k4 = rhs(z + h, {s.u + h * k3.u, s.v + h * k3.v}, p);
    return {s.u + h / 6.0 * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u),
            s.v + h / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v)};
}

} // namespace

SolutionTable rk_reference(const HeunParameters &p, const CauchyData &cauchy,
                           const std::vector<complex> &points, std::size_t substeps)
{
    if (substeps < 1) {
        throw DimensionMismatch("rk_reference needs at least one substep");
    }
    if (points.empty() || points.front() != cauchy.z0) {
        throw SegmentAnchorMismatch("rk_reference: points must start at the Cauchy anchor");
    }
    SolutionTable out;
    out.params = p;
    out.n1 = 1;
    out.n2 = points.size();
    out.points = points;
    out.H.resize(points.size());
    out.Hp.resize(points.size());
    out.H[0] = cauchy.H0;
    out.Hp[0] = cauchy.H0p;

    State s{cauchy.H0, cauchy.H0p};
    for (std::size_t i = 1; i < points.size(); ++i) {
        const complex a = points[i - 1];
        const complex h = (points[i] - a) / static_cast<double>(substeps);
        for (std::size_t m = 0; m < substeps; ++m) {
            s = rk4_step(a + static_cast<double>(m) * h, s, h, p);
        }
        out.H[i] = s.u;
        out.Hp[i] = s.v;
    }
    return out;
}

SolutionTable rk_reference(const HeunParameters &p, const CauchyData &cauchy,
                           const SegmentGrid &grid, std::size_t substeps)
{
    return rk_reference(p, cauchy, grid.points(), substeps);
}

complex hyp2f1_series(complex a, complex b, complex c, complex z, double tol)
{
    if (std::abs(z) >= 1.0) {
        throw SlowConvergence("hyp2f1_series needs |z| < 1");
    }
    if (c.imag() == 0.0 && c.real() <= 0.0 && c.real() == std::nearbyint(c.real())) {
        throw SlowConvergence("hyp2f1_series: c is a nonpositive integer");
    }
    complex sum{1.0};
    complex term{1.0};
    for (std::size_t k = 0; k < kHyp2f1MaxTerms; ++k) {
        const double kk = static_cast<double>(k);
        // (a+k)(b+k) is symmetric in a and b bit for bit.
        term *= (a + kk) * (b + kk) / ((c + kk) * (kk + 1.0)) * z;
        sum += term;
        if (std::abs(term) < tol * std::abs(sum)) {
            return sum;
        }
        if (term == complex{0.0}) {
            return sum;
        }
    }
    throw SlowConvergence("hyp2f1_series did not converge within the term cap");
}

namespace
{

std::vector<double> shared_differences(const SolutionTable &coarse, const SolutionTable &fine)
{
    if (coarse.size() < 2 || fine.size() != 2 * coarse.size() - 1) {
        throw GridMismatch("fine table must have 2n - 1 points for a coarse table of n");
    }
    std::vector<double> diff(coarse.size());
    for (std::size_t i = 0; i < coarse.size(); ++i) {
        const complex zc = coarse.points[i];
        const complex zf = fine.points[2 * i];
        if (std::abs(zc - zf) > 1e-12 * std::max(1.0, std::abs(zc))) {
            throw GridMismatch("shared grid points do not align");
        }
        diff[i] = std::abs(fine.H[2 * i] - coarse.H[i]);
    }
    return diff;
}

} // namespace

OracleReport richardson_error(const SolutionTable &coarse, const SolutionTable &fine,
                              const std::optional<SolutionTable> &quarter)
{
    OracleReport report;
    const auto diff = shared_differences(coarse, fine);
    report.points_compared = diff.size();
    report.error_estimates.resize(diff.size());
    for (std::size_t i = 0; i < diff.size(); ++i) {
        report.max_abs_deviation = std::max(report.max_abs_deviation, diff[i]);
        report.error_estimates[i] = diff[i] / 3.0;
    }
    report.observed_order = std::numeric_limits<double>::quiet_NaN();
    if (quarter) {
        const auto fine_diff = shared_differences(fine, *quarter);
        const double fine_max = *std::max_element(fine_diff.begin(), fine_diff.end());
        if (fine_max > 0.0 && report.max_abs_deviation > 0.0) {
            report.observed_order = std::log2(report.max_abs_deviation / fine_max);
        }
    }
    return report;
}

double max_abs_deviation(const SolutionTable &a, const SolutionTable &b)
{
    if (a.size() != b.size()) {
        throw GridMismatch("tables have different lengths");
    }
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a.H[i] - b.H[i]));
    }
    return m;
}

} // namespace heunpath
