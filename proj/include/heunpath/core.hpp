#ifndef HEUNPATH_CORE_HPP
#define HEUNPATH_CORE_HPP

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

namespace heunpath
{

using complex = std::complex<double>;

// |z - s| < kPoleTolerance * (1 + |s|) counts as a hit on the singular point s.
inline constexpr double kPoleTolerance = 1e-13;

// Grid points closer than this to 0, 1 or t are rejected.
inline constexpr double kDefaultPunctureRadius = 1e-4;

// Constants of the general Heun equation
//
//   H'' + (gamma/z + delta/(z-1) + epsilon/(z-t)) H' + (alpha*beta*z - q)/(z(z-1)(z-t)) H = 0.
//
// fuchs_satisfied is filled in by validate_params().
struct HeunParameters {
    complex t{2.0};
    complex q{0.0};
    complex alpha{0.0};
    complex beta{0.0};
    complex gamma{0.0};
    complex delta{0.0};
    complex epsilon{0.0};
    bool fuchs_satisfied = false;
};

// epsilon = 1 + alpha + beta - gamma - delta.
complex fuchs_epsilon(const complex &alpha, const complex &beta, const complex &gamma,
                      const complex &delta);

// Rejects t in {0, 1} with DegenerateSingularity and computes fuchs_satisfied.
// A violated Fuchs relation is not an error.
HeunParameters validate_params(HeunParameters p);

// Cauchy data at an ordinary point z0.
struct CauchyData {
    complex z0;
    complex H0;
    complex H0p;
};

// Uniform grid on the straight segment [za, zb].
//
// points()[0] == za and points().back() == zb exactly; interior points are
// za + j*step. Construction fails with PoleEvaluation if any point lies closer
// than puncture_radius to one of {0, 1, t}.
class SegmentGrid
{
public:
    SegmentGrid(complex za, complex zb, std::size_t n_points, const HeunParameters &p,
                double puncture_radius = kDefaultPunctureRadius);

    // Unchecked grid, for kernels that are not tied to a Heun problem.
    SegmentGrid(complex za, complex zb, std::size_t n_points);

    complex start() const noexcept { return m_points.front(); }
    complex end() const noexcept { return m_points.back(); }
    complex step() const noexcept { return m_step; }
    std::size_t size() const noexcept { return m_points.size(); }
    const std::vector<complex> &points() const noexcept { return m_points; }
    complex operator[](std::size_t j) const { return m_points[j]; }

private:
    std::vector<complex> m_points;
    complex m_step;
};

struct SolutionTable {
    std::vector<complex> points;
    std::vector<complex> H;
    std::vector<complex> Hp;
    HeunParameters params;
    std::optional<double> error_estimate;
    // Sub-segment count and points per sub-segment.
    std::size_t n1 = 1;
    std::size_t n2 = 0;

    std::size_t size() const noexcept { return points.size(); }
    // n1 * n2, the count with sub-segment borders listed twice.
    std::size_t nominal_points() const noexcept { return n1 * n2; }
};

// B1(z) = -gamma/z - delta/(z-1) - epsilon/(z-t)
complex coeff_b1(complex z, const HeunParameters &p, double pole_tol = kPoleTolerance);

// B2(z) = -(alpha*beta*z - q) / (z(z-1)(z-t))
complex coeff_b2(complex z, const HeunParameters &p, double pole_tol = kPoleTolerance);

// X(z) = B1(z) + B2(z) - 1, the (2,1) entry of the 2x2 first-order system
// for psi = (H, H' - H). Written out term by term.
complex eval_x(complex z, const HeunParameters &p, double pole_tol = kPoleTolerance);

// w(zeta) = zeta^gamma (zeta-1)^delta (t-zeta)^epsilon e^zeta, principal branch
// for every power.
complex weight_w(complex zeta, const HeunParameters &p);

// Principal-branch power; integer real exponents are evaluated exactly.
// Throws PoleEvaluation for 0^e with Re(e) < 0.
complex principal_pow(complex base, complex exponent);

// Taylor coefficients c_0..c_{n-1} of the local solution at 0 with c_0 = 1,
// c_1 = q/(gamma t). Throws InvalidSeed if gamma*t == 0 or gamma + k == 0 for
// some k < n.
std::vector<complex> local_series_coefficients(const HeunParameters &p, std::size_t n_terms);

// Cauchy data of the regular solution (H(0) = 1, H'(0) = q/(gamma t)) at z0,
// summed from n_terms Taylor terms.
CauchyData local_series_seed(const HeunParameters &p, complex z0, std::size_t n_terms = 10);

// Smallest term count (>= 10) for which |z0/R|^n drops below machine epsilon,
// R being the radius of convergence min(1, |t|).
std::size_t seed_terms_for(const HeunParameters &p, complex z0);

} // namespace heunpath

#endif
