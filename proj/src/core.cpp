#include "heunpath/core.hpp"

#include "heunpath/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace heunpath
{

NearSingularDiagonal::NearSingularDiagonal(std::size_t index, double magnitude)
    : Error("near-singular diagonal at index " + std::to_string(index) + " (|d| = "
            + std::to_string(magnitude) + "); reduce the step size"),
      m_index(index), m_magnitude(magnitude)
{
}

SegmentCrossesSingularity::SegmentCrossesSingularity(std::string singularity, double distance,
                                                     double radius)
    : Error([&] {
          std::ostringstream os;
          os << "segment passes within " << distance << " of the singular point " << singularity
             << " (puncture radius " << radius << ")";
          return os.str();
      }()),
      m_singularity(std::move(singularity)), m_distance(distance)
{
}

namespace
{

void check_pole(complex z, complex s, double tol, const char *name)
{
    if (std::abs(z - s) < tol * (1.0 + std::abs(s))) {
        std::ostringstream os;
        os << "evaluation at z = " << z << " hits the singular point " << name;
        throw PoleEvaluation(os.str());
    }
}

void check_poles(complex z, const HeunParameters &p, double tol)
{
    check_pole(z, 0.0, tol, "0");
    check_pole(z, 1.0, tol, "1");
    check_pole(z, p.t, tol, "t");
}

} // namespace

complex fuchs_epsilon(const complex &alpha, const complex &beta, const complex &gamma,
                      const complex &delta)
{
    return 1.0 + alpha + beta - gamma - delta;
}

HeunParameters validate_params(HeunParameters p)
{
    if (p.t == complex{0.0} || p.t == complex{1.0}) {
        throw DegenerateSingularity("t must differ from 0 and 1");
    }
    const complex fuchs = fuchs_epsilon(p.alpha, p.beta, p.gamma, p.delta);
    p.fuchs_satisfied = std::abs(p.epsilon - fuchs) <= 1e-12 * (1.0 + std::abs(p.epsilon));
    return p;
}

SegmentGrid::SegmentGrid(complex za, complex zb, std::size_t n_points)
{
    if (n_points < 2) {
        throw DimensionMismatch("a segment grid needs at least two points");
    }
    m_step = (zb - za) / static_cast<double>(n_points - 1);
    m_points.resize(n_points);
    for (std::size_t j = 0; j + 1 < n_points; ++j) {
        m_points[j] = za + static_cast<double>(j) * m_step;
    }
    m_points.back() = zb;
}

SegmentGrid::SegmentGrid(complex za, complex zb, std::size_t n_points, const HeunParameters &p,
                         double puncture_radius)
    : SegmentGrid(za, zb, n_points)
{
    const std::array<std::pair<complex, const char *>, 3> sing{
        {{0.0, "0"}, {1.0, "1"}, {p.t, "t"}}};
    for (const auto &z : m_points) {
        for (const auto &[s, name] : sing) {
            if (std::abs(z - s) < puncture_radius) {
                std::ostringstream os;
                os << "grid point " << z << " lies within the puncture radius " << puncture_radius
                   << " of the singular point " << name;
                throw PoleEvaluation(os.str());
            }
        }
    }
}

complex coeff_b1(complex z, const HeunParameters &p, double pole_tol)
{
    check_poles(z, p, pole_tol);
    return -p.gamma / z - p.delta / (z - 1.0) - p.epsilon / (z - p.t);
}

complex coeff_b2(complex z, const HeunParameters &p, double pole_tol)
{
    check_poles(z, p, pole_tol);
    return -(p.alpha * p.beta * z - p.q) / (z * (z - 1.0) * (z - p.t));
}

complex eval_x(complex z, const HeunParameters &p, double pole_tol)
{
    check_poles(z, p, pole_tol);
    return (p.q - p.alpha * p.beta * z) / ((z - 1.0) * z * (z - p.t)) - p.epsilon / (z - p.t)
           - p.gamma / z - p.delta / (z - 1.0) - 1.0;
}

complex principal_pow(complex base, complex exponent)
{
    if (exponent == complex{0.0}) {
        return 1.0;
    }
    if (exponent.imag() == 0.0 && exponent.real() == std::nearbyint(exponent.real())
        && std::abs(exponent.real()) <= 64.0) {
        const int n = static_cast<int>(exponent.real());
        if (base == complex{0.0}) {
            if (n < 0) {
                throw PoleEvaluation("zero base raised to a negative power");
            }
            return 0.0;
        }
        complex r{1.0};
        complex b = n < 0 ? 1.0 / base : base;
        for (int k = std::abs(n); k > 0; k >>= 1) {
            if (k & 1) {
                r *= b;
            }
            b *= b;
        }
        return r;
    }
    if (base == complex{0.0}) {
        if (exponent.real() > 0.0) {
            return 0.0;
        }
        throw PoleEvaluation("zero base raised to a power with nonpositive real part");
    }
    return std::exp(exponent * std::log(base));
}

complex weight_w(complex zeta, const HeunParameters &p)
{
    return principal_pow(zeta, p.gamma) * principal_pow(zeta - 1.0, p.delta)
           * principal_pow(p.t - zeta, p.epsilon) * std::exp(zeta);
}

std::vector<complex> local_series_coefficients(const HeunParameters &p, std::size_t n_terms)
{
    if (p.gamma * p.t == complex{0.0}) {
        throw InvalidSeed("the regular solution at 0 needs gamma * t != 0");
    }
    std::vector<complex> c(std::max<std::size_t>(n_terms, 2));
    c[0] = 1.0;
    c[1] = p.q / (p.gamma * p.t);
    const complex ab = p.alpha * p.beta;
    const complex s = p.gamma + p.delta + p.epsilon;
    const complex lin = p.gamma * (1.0 + p.t) + p.delta * p.t + p.epsilon;
    // Coefficient of z^k in z(z-1)(z-t)H'' + (...)H' + (alpha*beta*z - q)H.
    for (std::size_t i = 1; i + 1 < c.size(); ++i) {
        const double k = static_cast<double>(i);
        const complex denom = p.t * (k + 1.0) * (k + p.gamma);
        if (denom == complex{0.0}) {
            throw InvalidSeed("gamma is a nonpositive integer; the regular series does not exist");
        }
        const complex ck = ((1.0 + p.t) * k * (k - 1.0) + lin * k + p.q) * c[i];
        const complex ckm1 = ((k - 1.0) * (k - 2.0) + s * (k - 1.0) + ab) * c[i - 1];
        c[i + 1] = (ck - ckm1) / denom;
    }
    c.resize(n_terms);
    return c;
}

CauchyData local_series_seed(const HeunParameters &p, complex z0, std::size_t n_terms)
{
    if (n_terms < 2) {
        throw InvalidSeed("at least two series terms are required");
    }
    if (p.gamma * p.t == complex{0.0}) {
        throw InvalidSeed("the regular solution at 0 needs gamma * t != 0");
    }
    const double radius = std::min(1.0, std::abs(p.t));
    if (std::abs(z0) >= radius) {
        throw SeedDivergence("seed point lies outside the disc of convergence at 0");
    }
    const auto c = local_series_coefficients(p, n_terms);

    // Horner for H and H'.
    complex h{0.0};
    complex hp{0.0};
    for (std::size_t k = n_terms; k-- > 0;) {
        h = h * z0 + c[k];
        if (k > 0) {
            hp = hp * z0 + static_cast<double>(k) * c[k];
        }
    }

    if (n_terms >= 3) {
        const auto term = [&](std::size_t k) {
            return std::abs(c[k]) * std::pow(std::abs(z0), static_cast<double>(k));
        };
        const double last = term(n_terms - 1);
        if (last > 0.0 && !(last < term(n_terms - 2) || last < term(n_terms - 3))) {
            throw SeedDivergence("series terms are not decreasing; increase n_terms or move z0 "
                                 "closer to 0");
        }
    }
    return {z0, h, hp};
}

std::size_t seed_terms_for(const HeunParameters &p, complex z0)
{
    const double radius = std::min(1.0, std::abs(p.t));
    const double ratio = std::abs(z0) / radius;
    if (ratio <= 0.0) {
        return 10;
    }
    if (ratio >= 1.0) {
        return 10;
    }
    const double n = std::ceil(std::log(std::numeric_limits<double>::epsilon() * 0.1)
                               / std::log(ratio));
    return static_cast<std::size_t>(std::clamp(n, 10.0, 2000.0));
}

} // namespace heunpath
