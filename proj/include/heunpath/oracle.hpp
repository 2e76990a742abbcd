#ifndef HEUNPATH_ORACLE_HPP
#define HEUNPATH_ORACLE_HPP

#include "heunpath/core.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace heunpath
{

// Reference solvers that share nothing with the path-sum machinery beyond
// coeff_b1/coeff_b2.

inline constexpr std::size_t kHyp2f1MaxTerms = 10000;

struct OracleReport {
    double max_abs_deviation = 0.0;
    // NaN when no quarter-step run was supplied or the differences vanish.
    double observed_order = 0.0;
    std::size_t points_compared = 0;
    // |H_fine - H_coarse| / (2^2 - 1) at every shared point.
    std::vector<double> error_estimates;

    double max_error_estimate() const;
};

// Classical fourth-order Runge-Kutta for u' = v, v' = B1 v + B2 u along the
// grid, `substeps` steps per grid interval. Row 0 is the Cauchy data itself.
SolutionTable rk_reference(const HeunParameters &p, const CauchyData &cauchy,
                           const SegmentGrid &grid, std::size_t substeps);

// RK4 sampled on an arbitrary ordered list of points along a polyline, using
// `substeps` steps per consecutive pair.
SolutionTable rk_reference(const HeunParameters &p, const CauchyData &cauchy,
                           const std::vector<complex> &points, std::size_t substeps);

// Partial sums of the Gauss series until |term| < tol * |sum|.
// Throws SlowConvergence after kHyp2f1MaxTerms terms.
complex hyp2f1_series(complex a, complex b, complex c, complex z, double tol = 1e-16);

// Compares a run against one at half the step (shared points are every other
// fine point). With `quarter`, observed_order = log2(max|c - f| / max|f - q|).
// Throws GridMismatch if shared points differ by more than 1e-12.
OracleReport richardson_error(const SolutionTable &coarse, const SolutionTable &fine,
                              const std::optional<SolutionTable> &quarter = std::nullopt);

// Max |H_a - H_b| over two tables on the same points.
double max_abs_deviation(const SolutionTable &a, const SolutionTable &b);

} // namespace heunpath

#endif
