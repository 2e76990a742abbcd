#ifndef HEUNPATH_PATHSUM_HPP
#define HEUNPATH_PATHSUM_HPP

#include "heunpath/core.hpp"
#include "heunpath/volterra.hpp"

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace heunpath
{

// K2(z_i, z_j) = X(z_i) e^{z_i - z_j} - (q - alpha*beta*z_i) / ((z_i-1) z_i (z_i-t)).
TriangularKernel build_k2(const SegmentGrid &grid, const HeunParameters &p);

// Cumulative trapezoid integral of w(zeta) X(zeta) from z_0 to each z_i.
std::vector<complex> build_frak_i(const SegmentGrid &grid, const HeunParameters &p);

// K1(z_i, z_j) = 1 + (I(z_i) - I(z_j)) / w(z_i) for i >= j, I from build_frak_i.
TriangularKernel build_k1(const SegmentGrid &grid, const HeunParameters &p,
                          std::span<const complex> frak_i);

// Path-sum evaluation of H and H' on one grid anchored at cauchy.z0.
//
// Both kernels are reduced to their first resolvent column by forward
// substitution; everything after that is a vector operation, so the cost is
// O(n^2) in the number of grid points with O(n^2) memory for the kernels.
// Throws SegmentAnchorMismatch if grid.start() != cauchy.z0.
SolutionTable evaluate_segment(const HeunParameters &p, const CauchyData &cauchy,
                               const SegmentGrid &grid);

// Intermediate columns of a segment evaluation, exposed for testing.
struct SegmentColumns {
    std::vector<complex> g1;
    std::vector<complex> g2;
    // exp(m * dz), m = 0..n-1.
    std::vector<complex> shift;
};

SegmentColumns segment_columns(const HeunParameters &p, const SegmentGrid &grid);

// H'(z_i) = H0 g1[i] + (H0' - H0) (e^{z_i - z_0} + trapezoid sum_{k<=i} e^{z_i - z_k} g2[k]).
std::vector<complex> evaluate_derivative(const SegmentColumns &cols, const CauchyData &cauchy,
                                         complex step);

// Shortest distance from s to the straight segment [za, zb].
double distance_to_segment(complex s, complex za, complex zb);

// Splits [za, zb] into n1 equal sub-segments of n2 points each and chains the
// end values (H, H') of one sub-segment into the Cauchy data of the next. The
// returned table lists shared borders once: n1*(n2-1) + 1 points.
// Throws SegmentCrossesSingularity if the segment passes within
// puncture_radius of 0, 1 or t.
SolutionTable evaluate_interval(const HeunParameters &p, const CauchyData &cauchy, complex za,
                                complex zb, std::size_t n1, std::size_t n2,
                                double puncture_radius = kDefaultPunctureRadius);

// Seed distance from 0 used by the command line for the regular solution.
// The kernels carry gamma/z, which a uniform grid only resolves once the step
// is small against the seed distance; see the README.
inline constexpr double kDefaultRegularSeedRadius = 0.1;

struct TwoSidedTable {
    SolutionTable left;
    SolutionTable right;
};

// Regular solution (H(0) = 1, H'(0) = q/(gamma t)) on both sides of the
// singular point 0. Each side is seeded from the local power series at
// distance `puncture` from 0 and evaluated outward, toward z_min and z_max.
// The n1 sub-segments are split between the two sides in proportion to
// their lengths, each side getting at least one.
TwoSidedTable evaluate_regular_from_origin(const HeunParameters &p, complex z_min, complex z_max,
                                           double puncture, std::size_t n1, std::size_t n2);

// The proportional split used above.
std::pair<std::size_t, std::size_t> split_subsegments(double left_length, double right_length,
                                                      std::size_t n1);

} // namespace heunpath

#endif
