#include "heunpath/cli.hpp"

#include "heunpath/errors.hpp"
#include "heunpath/oracle.hpp"
#include "heunpath/pathsum.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace heunpath::cli
{

namespace
{

double parse_real(std::string_view text, std::string_view whole)
{
    if (text == "+" || text.empty()) {
        return 1.0;
    }
    if (text == "-") {
        return -1.0;
    }
    if (text.front() == '+') {
        text.remove_prefix(1);
    }
    double value = 0.0;
    const auto *end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw std::invalid_argument("cannot parse complex number '" + std::string(whole) + "'");
    }
    return value;
}

} // namespace

complex parse_complex(std::string_view text)
{
    if (text.empty()) {
        throw std::invalid_argument("empty complex number");
    }
    const char last = text.back();
    if (last != 'j' && last != 'i') {
        return {parse_real(text, text), 0.0};
    }
    const std::string_view body = text.substr(0, text.size() - 1);
    // Split at the last sign that is not the leading one or part of an exponent.
    std::size_t split = std::string_view::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    if (split == std::string_view::npos) {
        if (body.empty()) {
            return {0.0, 1.0};
        }
        return {0.0, parse_real(body, text)};
    }
    const std::string_view re = body.substr(0, split);
    if (re.empty() || re == "+" || re == "-") {
        throw std::invalid_argument("cannot parse complex number '" + std::string(text) + "'");
    }
    return {parse_real(re, text), parse_real(body.substr(split), text)};
}

std::string format_double(double x)
{
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    if (ec != std::errc{}) {
        throw std::runtime_error("format_double: buffer too small");
    }
    return {buf, ptr};
}

namespace
{

struct RawOptions {
    std::string t, q = "0", alpha = "0", beta = "0", gamma = "0", delta = "0";
    std::string epsilon;
    std::string from, to, z0, h0, h0p;
    std::string format = "csv";
    std::string out;
    std::string sizes;
};

void add_common(CLI::App &sub, RawOptions &raw, RunConfig &cfg)
{
    sub.add_option("--t", raw.t, "location of the fourth singular point")->required();
    sub.add_option("--q", raw.q, "accessory parameter");
    sub.add_option("--alpha", raw.alpha);
    sub.add_option("--beta", raw.beta);
    sub.add_option("--gamma", raw.gamma);
    sub.add_option("--delta", raw.delta);
    sub.add_option("--epsilon", raw.epsilon, "defaults to 1 + alpha + beta - gamma - delta");
    sub.add_option("--from", raw.from, "segment start");
    sub.add_option("--to", raw.to, "segment end");
    sub.add_option("--n1", cfg.n1, "number of chained sub-segments");
    sub.add_option("--n2", cfg.n2, "grid points per sub-segment");
    sub.add_option("--puncture", cfg.puncture, "minimum distance to 0, 1 and t; seed distance from 0 for the regular solution (default 1e-4, or 0.1 when seeding on both sides of 0)");
    sub.add_option("--format", raw.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub.add_option("--out", raw.out, "write data to PATH instead of stdout");
}

void add_cauchy(CLI::App &sub, RawOptions &raw, RunConfig &cfg)
{
    sub.add_option("--z0", raw.z0, "Cauchy anchor (defaults to --from)");
    sub.add_option("--H0", raw.h0, "H(z0)");
    sub.add_option("--H0p", raw.h0p, "H'(z0)");
    sub.add_flag("--regular-seed", cfg.regular_seed,
                 "take H(z0), H'(z0) from the regular series at 0");
}

std::vector<std::size_t> parse_sizes(const std::string &text)
{
    std::vector<std::size_t> sizes;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t v = 0;
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (ec != std::errc{} || ptr != item.data() + item.size() || v == 0) {
            throw std::invalid_argument("bad --sizes entry '" + item + "'");
        }
        sizes.push_back(v);
    }
    if (sizes.empty()) {
        throw std::invalid_argument("--sizes is empty");
    }
    return sizes;
}

} // namespace

std::optional<RunConfig> parse_args(int argc, const char *const *argv, std::ostream &out)
{
    CLI::App app{"Evaluate general Heun functions from their integral-series representation"};
    app.require_subcommand(1);

    RunConfig cfg;
    RawOptions raw;

    auto *eval = app.add_subcommand("eval", "solve a Cauchy problem along a segment");
    add_common(*eval, raw, cfg);
    add_cauchy(*eval, raw, cfg);

    auto *regular = app.add_subcommand("eval-regular",
                                       "regular solution on an interval straddling 0");
    add_common(*regular, raw, cfg);

    auto *bench = app.add_subcommand("bench", "timing and accuracy report (JSON)");
    add_common(*bench, raw, cfg);
    add_cauchy(*bench, raw, cfg);
    bench->add_option("--repeats", cfg.repeats, "timed repeats per size (>= 3)");
    bench->add_option("--sizes", raw.sizes, "comma-separated point counts");

    auto *conv = app.add_subcommand("convergence", "Richardson triple at n2, 2n2-1, 4n2-3 (JSON)");
    add_common(*conv, raw, cfg);
    add_cauchy(*conv, raw, cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return std::nullopt;
    } catch (const CLI::ParseError &e) {
        throw std::invalid_argument(e.what());
    }

    if (eval->parsed()) {
        cfg.command = Command::eval;
    } else if (regular->parsed()) {
        cfg.command = Command::eval_regular;
    } else if (bench->parsed()) {
        cfg.command = Command::bench;
    } else {
        cfg.command = Command::convergence;
    }

    auto &p = cfg.params;
    p.t = parse_complex(raw.t);
    p.q = parse_complex(raw.q);
    p.alpha = parse_complex(raw.alpha);
    p.beta = parse_complex(raw.beta);
    p.gamma = parse_complex(raw.gamma);
    p.delta = parse_complex(raw.delta);
    p.epsilon = raw.epsilon.empty() ? fuchs_epsilon(p.alpha, p.beta, p.gamma, p.delta)
                                    : parse_complex(raw.epsilon);

    if (!raw.from.empty()) {
        cfg.from = parse_complex(raw.from);
    }
    if (!raw.to.empty()) {
        cfg.to = parse_complex(raw.to);
    }
    cfg.format = raw.format == "json" ? OutputFormat::json : OutputFormat::csv;
    if (!raw.out.empty()) {
        cfg.out_path = raw.out;
    }
    if (!raw.sizes.empty()) {
        cfg.bench_points = parse_sizes(raw.sizes);
    }

    const bool any_cauchy = !raw.z0.empty() || !raw.h0.empty() || !raw.h0p.empty();
    if (any_cauchy) {
        if (raw.h0.empty() || raw.h0p.empty()) {
            throw std::invalid_argument("Cauchy data needs both --H0 and --H0p");
        }
        CauchyData c;
        if (!raw.z0.empty()) {
            c.z0 = parse_complex(raw.z0);
        } else if (cfg.from) {
            c.z0 = *cfg.from;
        } else {
            throw std::invalid_argument("Cauchy data needs --z0 or --from");
        }
        c.H0 = parse_complex(raw.h0);
        c.H0p = parse_complex(raw.h0p);
        cfg.cauchy = c;
        if (!cfg.from) {
            cfg.from = c.z0;
        }
    } else if (cfg.regular_seed && !raw.z0.empty()) {
        throw std::invalid_argument("--regular-seed takes its anchor from --from");
    }
    return cfg;
}

RunConfig validate_config(RunConfig cfg)
{
    if (cfg.n1 < 1) {
        throw std::invalid_argument("--n1 must be at least 1");
    }
    if (cfg.n2 < 3) {
        throw std::invalid_argument("--n2 must be at least 3");
    }
    if (cfg.puncture && !(*cfg.puncture > 0.0)) {
        throw std::invalid_argument("--puncture must be positive");
    }
    if (!cfg.from || !cfg.to) {
        throw std::invalid_argument("both segment ends (--from, --to) are required");
    }
    if (cfg.cauchy && cfg.regular_seed) {
        throw std::invalid_argument("--regular-seed cannot be combined with --H0/--H0p");
    }
    switch (cfg.command) {
    case Command::eval:
        if (!cfg.cauchy && !cfg.regular_seed) {
            throw std::invalid_argument("eval requires Cauchy data (--H0, --H0p) or --regular-seed");
        }
        break;
    case Command::eval_regular:
        if (cfg.cauchy || cfg.regular_seed) {
            throw std::invalid_argument("eval-regular does not accept Cauchy data");
        }
        break;
    case Command::bench:
        if (cfg.repeats < 3) {
            throw std::invalid_argument("--repeats must be at least 3");
        }
        break;
    case Command::convergence:
        break;
    }
    if (cfg.cauchy && cfg.cauchy->z0 != *cfg.from) {
        throw SegmentAnchorMismatch("the Cauchy anchor --z0 must equal the segment start --from");
    }
    cfg.params = validate_params(cfg.params);
    if (cfg.command == Command::eval_regular && cfg.params.gamma * cfg.params.t == complex{0.0}) {
        throw InvalidSeed("the regular solution at 0 needs gamma * t != 0");
    }
    return cfg;
}

namespace
{

struct Side {
    std::string label;
    SolutionTable table;
};

bool straddles_origin(const RunConfig &cfg)
{
    return (*cfg.from * std::conj(*cfg.to)).real() < 0.0;
}

bool uses_two_sided(const RunConfig &cfg)
{
    if (cfg.command == Command::eval_regular) {
        return true;
    }
    if (cfg.command == Command::eval) {
        return false;
    }
    return !cfg.cauchy && !cfg.regular_seed;
}

std::vector<Side> run_protocol(const RunConfig &cfg, std::size_t n1, std::size_t n2)
{
    const auto &p = cfg.params;
    if (uses_two_sided(cfg)) {
        if (!straddles_origin(cfg)) {
            throw std::invalid_argument(
                "without Cauchy data the interval must straddle 0 (regular solution)");
        }
        auto two = evaluate_regular_from_origin(p, *cfg.from, *cfg.to, effective_puncture(cfg), n1, n2);
        return {{"left", std::move(two.left)}, {"right", std::move(two.right)}};
    }
    CauchyData c;
    if (cfg.cauchy) {
        c = *cfg.cauchy;
    } else {
        c = local_series_seed(p, *cfg.from, seed_terms_for(p, *cfg.from));
    }
    return {{"", evaluate_interval(p, c, *cfg.from, *cfg.to, n1, n2, effective_puncture(cfg))}};
}

// Left side tables run outward from 0; rows are emitted in ascending order.
std::vector<std::size_t> row_order(const Side &side)
{
    std::vector<std::size_t> idx(side.table.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        idx[i] = side.label == "left" ? idx.size() - 1 - i : i;
    }
    return idx;
}

nlohmann::json complex_json(complex z)
{
    return nlohmann::json::array({z.real(), z.imag()});
}

nlohmann::json params_json(const HeunParameters &p)
{
    return {{"t", complex_json(p.t)},         {"q", complex_json(p.q)},
            {"alpha", complex_json(p.alpha)}, {"beta", complex_json(p.beta)},
            {"gamma", complex_json(p.gamma)}, {"delta", complex_json(p.delta)},
            {"epsilon", complex_json(p.epsilon)}, {"fuchs_satisfied", p.fuchs_satisfied}};
}

const char *command_name(Command c)
{
    switch (c) {
    case Command::eval:
        return "eval";
    case Command::eval_regular:
        return "eval-regular";
    case Command::bench:
        return "bench";
    case Command::convergence:
        return "convergence";
    }
    return "";
}

std::string render_table(const RunConfig &cfg, const std::vector<Side> &sides)
{
    const bool with_side = cfg.command == Command::eval_regular;
    std::string text;
    if (cfg.format == OutputFormat::csv) {
        text = with_side ? "z_re,z_im,H_re,H_im,dH_re,dH_im,side\n"
                         : "z_re,z_im,H_re,H_im,dH_re,dH_im\n";
        for (const auto &side : sides) {
            const auto &t = side.table;
            for (std::size_t i : row_order(side)) {
                text += format_double(t.points[i].real()) + ',' + format_double(t.points[i].imag())
                        + ',' + format_double(t.H[i].real()) + ',' + format_double(t.H[i].imag())
                        + ',' + format_double(t.Hp[i].real()) + ','
                        + format_double(t.Hp[i].imag());
                if (with_side) {
                    text += ',' + side.label;
                }
                text += '\n';
            }
        }
        return text;
    }

    nlohmann::json doc;
    doc["command"] = command_name(cfg.command);
    doc["params"] = params_json(cfg.params);
    nlohmann::json columns = {"z_re", "z_im", "H_re", "H_im", "dH_re", "dH_im"};
    if (with_side) {
        columns.push_back("side");
    }
    doc["columns"] = columns;
    doc["puncture"] = effective_puncture(cfg);
    nlohmann::json segments = nlohmann::json::array();
    nlohmann::json rows = nlohmann::json::array();
    std::size_t nominal = 0;
    for (const auto &side : sides) {
        const auto &t = side.table;
        segments.push_back({{"side", side.label.empty() ? "single" : side.label},
                            {"n1", t.n1},
                            {"n2", t.n2},
                            {"points", t.size()}});
        nominal += t.nominal_points();
        for (std::size_t i : row_order(side)) {
            nlohmann::json row = {t.points[i].real(), t.points[i].imag(), t.H[i].real(),
                                  t.H[i].imag(),      t.Hp[i].real(),     t.Hp[i].imag()};
            if (with_side) {
                row.push_back(side.label);
            }
            rows.push_back(std::move(row));
        }
    }
    doc["segments"] = segments;
    doc["points"] = rows.size();
    doc["points_nominal"] = nominal;
    doc["rows"] = std::move(rows);
    return doc.dump(1) + '\n';
}

double refined_deviation(const std::vector<Side> &coarse, const std::vector<Side> &fine,
                         const std::vector<Side> *quarter, double *order)
{
    double dev = 0.0;
    double coarse_max = 0.0;
    double fine_max = 0.0;
    for (std::size_t s = 0; s < coarse.size(); ++s) {
        const auto rep = richardson_error(coarse[s].table, fine[s].table);
        coarse_max = std::max(coarse_max, rep.max_abs_deviation);
        if (quarter) {
            const auto rep2 = richardson_error(fine[s].table, (*quarter)[s].table);
            fine_max = std::max(fine_max, rep2.max_abs_deviation);
        }
    }
    dev = coarse_max;
    if (order) {
        *order = (fine_max > 0.0 && coarse_max > 0.0) ? std::log2(coarse_max / fine_max)
                                                       : std::nan("");
    }
    return dev;
}

std::string run_bench(const RunConfig &cfg)
{
    nlohmann::json doc;
    doc["command"] = "bench";
    doc["params"] = params_json(cfg.params);
    doc["from"] = complex_json(*cfg.from);
    doc["to"] = complex_json(*cfg.to);
    doc["n2"] = cfg.n2;
    doc["puncture"] = effective_puncture(cfg);
    doc["repeats"] = cfg.repeats;
    nlohmann::json results = nlohmann::json::array();
    for (std::size_t requested : cfg.bench_points) {
        const std::size_t n1 = std::max<std::size_t>(1, requested / cfg.n2);
        std::vector<double> seconds;
        std::vector<Side> sides;
        for (std::size_t r = 0; r < cfg.repeats; ++r) {
            const auto start = std::chrono::steady_clock::now();
            sides = run_protocol(cfg, n1, cfg.n2);
            const auto stop = std::chrono::steady_clock::now();
            seconds.push_back(std::chrono::duration<double>(stop - start).count());
        }
        const auto refined = run_protocol(cfg, n1, 2 * cfg.n2 - 1);
        std::size_t rows = 0;
        std::size_t nominal = 0;
        for (const auto &s : sides) {
            rows += s.table.size();
            nominal += s.table.nominal_points();
        }
        std::sort(seconds.begin(), seconds.end());
        const std::size_t m = seconds.size();
        const double median =
            m % 2 == 1 ? seconds[m / 2] : 0.5 * (seconds[m / 2 - 1] + seconds[m / 2]);
        results.push_back({{"points", nominal},
                           {"rows", rows},
                           {"n1", n1},
                           {"n2", cfg.n2},
                           {"wall_seconds_median", median},
                           {"wall_seconds_min", seconds.front()},
                           {"max_error_vs_refined",
                            refined_deviation(sides, refined, nullptr, nullptr)}});
    }
    doc["results"] = std::move(results);
    return doc.dump(1) + '\n';
}

bool is_hypergeometric_reduction(const HeunParameters &p)
{
    const auto close = [](complex a, complex b) {
        return std::abs(a - b) <= 1e-12 * (1.0 + std::abs(b));
    };
    return close(p.epsilon, 0.0) && close(p.q, p.alpha * p.beta * p.t)
           && close(p.delta, 1.0 + p.alpha + p.beta - p.gamma);
}

std::string run_convergence(const RunConfig &cfg)
{
    const std::array<std::size_t, 3> n2s{cfg.n2, 2 * cfg.n2 - 1, 4 * cfg.n2 - 3};
    std::array<std::vector<Side>, 3> runs;
    for (std::size_t k = 0; k < 3; ++k) {
        runs[k] = run_protocol(cfg, cfg.n1, n2s[k]);
    }
    double order = 0.0;
    const double d_coarse = refined_deviation(runs[0], runs[1], &runs[2], &order);
    const double d_fine = refined_deviation(runs[1], runs[2], nullptr, nullptr);

    double scale = 1.0;
    for (const auto &side : runs[2]) {
        for (const auto &h : side.table.H) {
            scale = std::max(scale, std::abs(h));
        }
    }
    const bool applicable = d_fine > 1e-12 * scale && std::isfinite(order);

    nlohmann::json doc;
    doc["command"] = "convergence";
    doc["params"] = params_json(cfg.params);
    doc["from"] = complex_json(*cfg.from);
    doc["to"] = complex_json(*cfg.to);
    doc["n1"] = cfg.n1;
    doc["n2"] = n2s;
    doc["puncture"] = effective_puncture(cfg);
    doc["max_diff"] = {d_coarse, d_fine};
    // Richardson estimates with p = 2 for the three resolutions.
    doc["error_estimates"] = {d_coarse * 4.0 / 3.0, d_fine * 4.0 / 3.0, d_fine / 3.0};
    doc["order_applicable"] = applicable;
    doc["observed_order"] = applicable ? nlohmann::json(order) : nlohmann::json(nullptr);

    const bool regular = uses_two_sided(cfg) || cfg.regular_seed;
    if (regular && is_hypergeometric_reduction(cfg.params)) {
        const auto &p = cfg.params;
        nlohmann::json errors = nlohmann::json::array();
        bool inside = true;
        for (const auto &run : runs) {
            double e = 0.0;
            for (const auto &side : run) {
                for (std::size_t i = 0; i < side.table.size(); ++i) {
                    const complex z = side.table.points[i];
                    if (std::abs(z) >= 0.95) {
                        inside = false;
                        continue;
                    }
                    e = std::max(e, std::abs(side.table.H[i]
                                             - hyp2f1_series(p.alpha, p.beta, p.gamma, z)));
                }
            }
            errors.push_back(e);
        }
        doc["oracle"] = {{"kind", "hyp2f1"},
                         {"max_abs_error", errors},
                         {"complete", inside}};
    }
    return doc.dump(1) + '\n';
}

int fail(std::ostream &err, int code, const std::string &what)
{
    err << "heunpath: " << what << '\n';
    return code;
}

} // namespace

double effective_puncture(const RunConfig &cfg)
{
    if (cfg.puncture) {
        return *cfg.puncture;
    }
    return uses_two_sided(cfg) ? kDefaultRegularSeedRadius : kDefaultPunctureRadius;
}

int run(const RunConfig &raw_cfg, std::ostream &out, std::ostream &err)
{
    try {
        const RunConfig cfg = validate_config(raw_cfg);
        std::string text;
        switch (cfg.command) {
        case Command::eval:
        case Command::eval_regular:
            text = render_table(cfg, run_protocol(cfg, cfg.n1, cfg.n2));
            break;
        case Command::bench:
            text = run_bench(cfg);
            break;
        case Command::convergence:
            text = run_convergence(cfg);
            break;
        }
        if (cfg.out_path) {
            std::ofstream file(*cfg.out_path, std::ios::binary);
            if (!file) {
                return fail(err, kExitInvalidInput, "cannot open " + *cfg.out_path);
            }
            file << text;
        } else {
            out << text;
        }
        return kExitOk;
    } catch (const SegmentCrossesSingularity &e) {
        return fail(err, kExitCrossesSingularity, e.what());
    } catch (const DegenerateSingularity &e) {
        return fail(err, kExitInvalidInput, e.what());
    } catch (const InvalidSeed &e) {
        return fail(err, kExitInvalidInput, e.what());
    } catch (const SegmentAnchorMismatch &e) {
        return fail(err, kExitInvalidInput, e.what());
    } catch (const DimensionMismatch &e) {
        return fail(err, kExitInvalidInput, e.what());
    } catch (const Error &e) {
        return fail(err, kExitNumericalFailure, e.what());
    } catch (const std::invalid_argument &e) {
        return fail(err, kExitInvalidInput, e.what());
    }
}

int main_entry(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
    std::optional<RunConfig> cfg;
    try {
        cfg = parse_args(argc, argv, out);
    } catch (const std::invalid_argument &e) {
        return fail(err, kExitInvalidInput, e.what());
    }
    if (!cfg) {
        return kExitOk;
    }
    return run(*cfg, out, err);
}

} // namespace heunpath::cli
