#include "heunpath/pathsum.hpp"

#include "heunpath/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace heunpath
{

namespace
{

// e^w - 1 without cancellation for small |w|.
complex expm1_complex(complex w)
{
    const double a = w.real();
    const double b = w.imag();
    const double s = std::sin(0.5 * b);
    return {std::expm1(a) * std::cos(b) - 2.0 * s * s, std::exp(a) * std::sin(b)};
}

std::vector<complex> shift_table(std::size_t n, complex step)
{
    std::vector<complex> e(n);
    for (std::size_t m = 0; m < n; ++m) {
        e[m] = std::exp(static_cast<double>(m) * step);
    }
    return e;
}

std::vector<complex> shift_minus_one_table(std::size_t n, complex step)
{
    std::vector<complex> e(n);
    for (std::size_t m = 0; m < n; ++m) {
        e[m] = expm1_complex(static_cast<double>(m) * step);
    }
    return e;
}

// (q - alpha*beta*z) / ((z-1) z (z-t)); the pole check happens in eval_x.
complex rational_term(complex z, const HeunParameters &p)
{
    return (p.q - p.alpha * p.beta * z) / ((z - 1.0) * z * (z - p.t));
}

} // namespace

TriangularKernel build_k2(const SegmentGrid &grid, const HeunParameters &p)
{
    const std::size_t n = grid.size();
    const auto shift = shift_table(n, grid.step());
    TriangularKernel k(n, grid.step());
    for (std::size_t i = 0; i < n; ++i) {
        const complex z = grid[i];
        const complex x = eval_x(z, p);
        const complex r = rational_term(z, p);
        auto row = k.row(i);
        for (std::size_t j = 0; j <= i; ++j) {
            row[j] = x * shift[i - j] - r;
        }
    }
    return k;
}

std::vector<complex> build_frak_i(const SegmentGrid &grid, const HeunParameters &p)
{
    std::vector<complex> integrand(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        integrand[i] = weight_w(grid[i], p) * eval_x(grid[i], p);
    }
    return cumulative_integral(integrand, grid);
}

TriangularKernel build_k1(const SegmentGrid &grid, const HeunParameters &p,
                          std::span<const complex> frak_i)
{
    const std::size_t n = grid.size();
    if (frak_i.size() != n) {
        throw DimensionMismatch("build_k1: integral table length differs from grid");
    }
    TriangularKernel k(n, grid.step());
    for (std::size_t i = 0; i < n; ++i) {
        const complex inv_w = 1.0 / weight_w(grid[i], p);
        auto row = k.row(i);
        for (std::size_t j = 0; j < i; ++j) {
            row[j] = 1.0 + inv_w * (frak_i[i] - frak_i[j]);
        }
        row[i] = 1.0;
    }
    return k;
}

SegmentColumns segment_columns(const HeunParameters &p, const SegmentGrid &grid)
{
    SegmentColumns cols;
    {
        const auto frak = build_frak_i(grid, p);
        cols.g1 = resolvent_column(build_k1(grid, p, frak));
    }
    cols.g2 = resolvent_column(build_k2(grid, p));
    cols.shift = shift_table(grid.size(), grid.step());
    return cols;
}

std::vector<complex> evaluate_derivative(const SegmentColumns &cols, const CauchyData &cauchy,
                                         complex step)
{
    const std::size_t n = cols.g1.size();
    const complex jump = cauchy.H0p - cauchy.H0;
    std::vector<complex> hp(n);
    if (n == 0) {
        return hp;
    }
    hp[0] = cauchy.H0p;
    for (std::size_t i = 1; i < n; ++i) {
        complex acc = 0.5 * (cols.shift[i] * cols.g2[0] + cols.g2[i]);
        for (std::size_t k = 1; k < i; ++k) {
            acc += cols.shift[i - k] * cols.g2[k];
        }
        hp[i] = cauchy.H0 * cols.g1[i] + jump * (cols.shift[i] + step * acc);
    }
    return hp;
}

SolutionTable evaluate_segment(const HeunParameters &p, const CauchyData &cauchy,
                               const SegmentGrid &grid)
{
    if (grid.start() != cauchy.z0) {
        throw SegmentAnchorMismatch("grid does not start at the Cauchy anchor point");
    }
    const std::size_t n = grid.size();
    const complex dz = grid.step();
    const SegmentColumns cols = segment_columns(p, grid);
    const auto em1 = shift_minus_one_table(n, dz);
    const auto g1_integral = cumulative_integral(cols.g1, grid);
    const complex jump = cauchy.H0p - cauchy.H0;

    SolutionTable table;
    table.points = grid.points();
    table.H.resize(n);
    table.params = p;
    table.n1 = 1;
    table.n2 = n;

    table.H[0] = cauchy.H0;
    for (std::size_t i = 1; i < n; ++i) {
        // The k = i term carries e^0 - 1 = 0.
        complex acc = 0.5 * em1[i] * cols.g2[0];
        for (std::size_t k = 1; k < i; ++k) {
            acc += em1[i - k] * cols.g2[k];
        }
        const complex first = cauchy.H0 * (1.0 + g1_integral[i]);
        table.H[i] = first + jump * (em1[i] + dz * acc);
    }
    table.Hp = evaluate_derivative(cols, cauchy, dz);
    return table;
}

double distance_to_segment(complex s, complex za, complex zb)
{
    const complex d = zb - za;
    const double len2 = std::norm(d);
    if (len2 == 0.0) {
        return std::abs(s - za);
    }
    const double u = std::clamp(((s - za) * std::conj(d)).real() / len2, 0.0, 1.0);
    return std::abs(s - (za + u * d));
}

SolutionTable evaluate_interval(const HeunParameters &p, const CauchyData &cauchy, complex za,
                                complex zb, std::size_t n1, std::size_t n2,
                                double puncture_radius)
{
    if (n1 < 1 || n2 < 2) {
        throw DimensionMismatch("evaluate_interval needs n1 >= 1 and n2 >= 2");
    }
    if (cauchy.z0 != za) {
        throw SegmentAnchorMismatch("Cauchy anchor differs from the segment start");
    }
    const std::array<std::pair<complex, const char *>, 3> sing{
        {{0.0, "0"}, {1.0, "1"}, {p.t, "t"}}};
    for (const auto &[s, name] : sing) {
        const double d = distance_to_segment(s, za, zb);
        if (d < puncture_radius) {
            std::ostringstream os;
            os << name;
            if (std::string(name) == "t") {
                os << " = " << p.t;
            }
            throw SegmentCrossesSingularity(os.str(), d, puncture_radius);
        }
    }

    SolutionTable out;
    out.params = p;
    out.n1 = n1;
    out.n2 = n2;
    out.points.reserve(n1 * (n2 - 1) + 1);
    out.H.reserve(n1 * (n2 - 1) + 1);
    out.Hp.reserve(n1 * (n2 - 1) + 1);

    CauchyData data = cauchy;
    const complex span = zb - za;
    for (std::size_t k = 0; k < n1; ++k) {
        const complex a = k == 0 ? za : za + span * (static_cast<double>(k) / n1);
        const complex b = k + 1 == n1 ? zb : za + span * (static_cast<double>(k + 1) / n1);
        data.z0 = a;
        const SegmentGrid grid(a, b, n2, p, 0.0);
        SolutionTable part = evaluate_segment(p, data, grid);
        const std::size_t skip = k == 0 ? 0 : 1;
        out.points.insert(out.points.end(), part.points.begin() + skip, part.points.end());
        out.H.insert(out.H.end(), part.H.begin() + skip, part.H.end());
        out.Hp.insert(out.Hp.end(), part.Hp.begin() + skip, part.Hp.end());
        data = {b, part.H.back(), part.Hp.back()};
    }
    return out;
}

std::pair<std::size_t, std::size_t> split_subsegments(double left_length, double right_length,
                                                      std::size_t n1)
{
    if (n1 < 2) {
        return {1, 1};
    }
    const double total = left_length + right_length;
    const double share = total > 0.0 ? left_length / total : 0.5;
    const auto left = static_cast<std::size_t>(
        std::clamp(std::round(share * static_cast<double>(n1)), 1.0, static_cast<double>(n1 - 1)));
    return {left, n1 - left};
}

TwoSidedTable evaluate_regular_from_origin(const HeunParameters &p, complex z_min, complex z_max,
                                           double puncture, std::size_t n1, std::size_t n2)
{
    if (!(puncture > 0.0)) {
        throw InvalidSeed("puncture radius must be positive");
    }
    if (std::abs(z_min) <= puncture || std::abs(z_max) <= puncture) {
        throw InvalidSeed("both interval ends must lie outside the puncture around 0");
    }
    if ((z_min * std::conj(z_max)).real() >= 0.0) {
        throw InvalidSeed("the interval must straddle 0");
    }
    const complex left_anchor = puncture * (z_min / std::abs(z_min));
    const complex right_anchor = puncture * (z_max / std::abs(z_max));
    const auto [n_left, n_right] = split_subsegments(std::abs(z_min), std::abs(z_max), n1);

    // The anchors sit exactly on the puncture circle; only reject genuine hits.
    const double radius = puncture * (1.0 - 1e-9);

    const CauchyData left_seed =
        local_series_seed(p, left_anchor, seed_terms_for(p, left_anchor));
    const CauchyData right_seed =
        local_series_seed(p, right_anchor, seed_terms_for(p, right_anchor));
    return {evaluate_interval(p, left_seed, left_anchor, z_min, n_left, n2, radius),
            evaluate_interval(p, right_seed, right_anchor, z_max, n_right, n2, radius)};
}

} // namespace heunpath
