#include "anderson/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <omp.h>

#include "anderson/asymptotics.hpp"
#include "anderson/brownian.hpp"
#include "anderson/chaos.hpp"
#include "anderson/config.hpp"
#include "anderson/errors.hpp"
#include "anderson/json_io.hpp"
#include "anderson/variational.hpp"
#include "anderson/verify.hpp"

namespace anderson::cli {

namespace {

using json_io::format_double;

struct Rendered {
    std::string text;
    int code = kExitOk;
};

std::string key_value_table(const std::vector<std::pair<std::string, std::string>>& rows) {
    std::size_t width = 0;
    for (const auto& [k, v] : rows) width = std::max(width, k.size());
    std::ostringstream os;
    for (const auto& [k, v] : rows) os << k << std::string(width + 2 - k.size(), ' ') << v << '\n';
    return os.str();
}

std::string key_value_csv(const std::vector<std::pair<std::string, std::string>>& rows) {
    std::string s = json_io::csv_row({"field", "value"});
    for (const auto& [k, v] : rows) s += json_io::csv_row({k, v});
    return s;
}

// Flatten a JSON object into (path, scalar text) rows for table/CSV output.
void flatten(const nlohmann::json& j, const std::string& prefix,
             std::vector<std::pair<std::string, std::string>>& rows) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), rows);
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i)
            flatten(j[i], prefix + "[" + std::to_string(i) + "]", rows);
    } else if (j.is_number_float()) {
        rows.emplace_back(prefix, format_double(j.get<double>()));
    } else if (j.is_string()) {
        rows.emplace_back(prefix, j.get<std::string>());
    } else if (j.is_null()) {
        rows.emplace_back(prefix, "-");
    } else {
        rows.emplace_back(prefix, j.dump());
    }
}

std::string render_object(const nlohmann::json& j, const std::string& format) {
    if (format == "json") return json_io::dump(j) + "\n";
    std::vector<std::pair<std::string, std::string>> rows;
    flatten(j, "", rows);
    return format == "csv" ? key_value_csv(rows) : key_value_table(rows);
}

variational::RhoOptions rho_options(const RunConfig& c) {
    variational::RhoOptions o;
    o.grid_radius = c.grid_radius;
    o.grid_points = c.grid_points;
    o.tol = c.tol;
    o.threads = c.threads;
    return o;
}

variational::RhoEstimate solve_rho(const RunConfig& c, bool richardson) {
    auto o = rho_options(c);
    o.richardson = richardson;
    const auto kernel = c.kernel();
    switch (kernel.family()) {
        case spectral::Family::Riesz: return variational::rho_eigen(kernel.dim(), kernel.alpha(), c.beta_l, o);
        case spectral::Family::WhiteNoise1D: return variational::rho_flat(c.beta_l, o);
        case spectral::Family::FractionalH: break;
    }
    throw ParameterError("rho is not defined for the fractional-noise family; supply --e-gamma instead");
}

Rendered cmd_lyapunov(const RunConfig& c) {
    const auto kernel = c.kernel();
    const auto eq = c.equation();
    asymptotics::FunctionalInput in;
    in.rho = c.rho;
    in.e_gamma = c.e_gamma;
    std::optional<variational::RhoEstimate> solved;
    const bool needs_rho = kernel.family() == spectral::Family::Riesz ||
                           (kernel.family() == spectral::Family::WhiteNoise1D && c.beta_l != 2.0);
    if (needs_rho && !in.rho) {
        if (!spectral::dalang_check(kernel.alpha_eff(), c.beta_l)) {
            // Let the report builder produce the Dalang diagnostic.
            asymptotics::lambda2_closed_form(eq, kernel, {1.0, std::nullopt});
        }
        solved = solve_rho(c, false);
        in.rho = solved->value;
    }
    auto report = asymptotics::lambda2_closed_form(eq, kernel, in);
    if (solved) report.extra["rho_solver"] = variational::to_json(*solved);
    if (c.format == "table") return {asymptotics::render_table(report)};
    return {render_object(asymptotics::to_json(report), c.format)};
}

struct ChaosRow {
    int n = 0;
    MCEstimate est;
    std::optional<double> oracle;
    std::optional<MCEstimate> brownian;
};

std::optional<double> chaos_oracle(const RunConfig& c, int n) {
    const auto kernel = c.kernel();
    const auto eq = c.equation();
    if (n == 0) return 1.0;
    if (kernel.family() == spectral::Family::WhiteNoise1D && c.beta_l == 2.0) {
        // E[J_n(tau)] = 2^{-n} for both equations; J_n(t) = t^{an} E[J_n(tau)] / Gamma(an + 1).
        const double exp_time = std::pow(0.5, n);
        if (!c.t) return exp_time;
        const double a = chaos::scaling_exponent(eq, 1.0);
        return std::pow(*c.t, a * n) * exp_time / std::tgamma(a * n + 1.0);
    }
    if (n == 1) {
        if (!c.t) return chaos::j1_laplace_quadrature(eq, kernel, 1.0);
        return chaos::j1_quadrature(eq, kernel, *c.t);
    }
    return std::nullopt;
}

Rendered cmd_chaos(const RunConfig& c, bool with_brownian) {
    if (c.n > chaos::kMaxConfidentOrder)
        throw ParameterError("chaos table is limited to n <= 6 (weight variance budget)");
    const auto kernel = c.kernel();
    const auto eq = c.equation();
    std::vector<ChaosRow> rows;
    for (int n = 0; n <= c.n; ++n) {
        ChaosRow row;
        row.n = n;
        const chaos::ChaosQuery q{eq, kernel, n, c.t};
        row.est = c.t ? chaos::jn_fixed_time(q, c.samples, c.seed, c.threads)
                      : chaos::jn_exp_time_mc(q, c.samples, c.seed, c.threads);
        row.oracle = chaos_oracle(c, n);
        if (with_brownian && n >= 1 && !c.t && eq.kind == propagators::Equation::Heat &&
            c.beta_l == 2.0 && kernel.family() == spectral::Family::Riesz) {
            brownian::OracleOptions bo;
            bo.threads = c.threads;
            row.brownian = brownian::tn_bm_oracle(kernel.dim(), kernel.alpha(), n, c.samples, c.seed, bo);
        }
        rows.push_back(std::move(row));
    }
    auto z_of = [](const ChaosRow& r) -> std::optional<double> {
        if (!r.oracle) return std::nullopt;
        const double sigma = std::max(r.est.std_error, 1e-12 * std::abs(*r.oracle));
        if (sigma == 0.0) return r.est.mean == *r.oracle ? 0.0 : INFINITY;
        return (r.est.mean - *r.oracle) / sigma;
    };
    auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };

    if (c.format == "json") {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : rows) {
            nlohmann::json j;
            j["n"] = r.n;
            j["estimate"] = to_json(r.est);
            j["oracle"] = r.oracle ? nlohmann::json(*r.oracle) : nlohmann::json(nullptr);
            const auto z = z_of(r);
            j["z"] = z ? nlohmann::json(*z) : nlohmann::json(nullptr);
            if (r.brownian) j["brownian"] = to_json(*r.brownian);
            arr.push_back(j);
        }
        nlohmann::json doc;
        doc["rows"] = arr;
        doc["seed"] = c.seed;
        doc["samples"] = c.samples;
        return {json_io::dump(doc) + "\n"};
    }
    std::vector<std::vector<std::string>> table;
    table.push_back({"n", "target", "mean", "std_error", "n_samples", "oracle", "z", "bm_mean",
                     "bm_std_error", "flags"});
    for (const auto& r : rows) {
        std::string flags;
        for (const auto& f : r.est.flags) flags += (flags.empty() ? "" : ";") + f;
        table.push_back({std::to_string(r.n), r.est.target, format_double(r.est.mean),
                         format_double(r.est.std_error), std::to_string(r.est.n_samples),
                         opt(r.oracle), opt(z_of(r)),
                         r.brownian ? format_double(r.brownian->mean) : "",
                         r.brownian ? format_double(r.brownian->std_error) : "", flags});
    }
    std::string s;
    if (c.format == "csv") {
        for (const auto& row : table) s += json_io::csv_row(row);
        return {s};
    }
    std::vector<std::size_t> width(table[0].size(), 0);
    for (const auto& row : table)
        for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
    for (const auto& row : table) {
        std::string line;
        for (std::size_t i = 0; i < row.size(); ++i)
            line += row[i] + std::string(width[i] + 2 - row[i].size(), ' ');
        while (!line.empty() && line.back() == ' ') line.pop_back();
        s += line + "\n";
    }
    return {s};
}

Rendered cmd_rho(const RunConfig& c) {
    const auto r = solve_rho(c, true);
    return {render_object(variational::to_json(r), c.format)};
}

Rendered cmd_verify(const RunConfig& c, const std::string& fault) {
    verify::VerifyOptions o;
    o.seed = c.seed;
    o.samples = c.samples;
    o.threads = c.threads;
    o.fault = fault;
    const auto checks = verify::run_suite(o);
    const int code = verify::all_passed(checks) ? kExitOk : kExitVerification;
    if (c.format == "json") return {json_io::dump(verify::to_json(checks, o)) + "\n", code};
    if (c.format == "csv") {
        std::string s = json_io::csv_row({"name", "passed", "value", "tolerance", "detail"});
        for (const auto& k : checks)
            s += json_io::csv_row({k.name, k.passed ? "true" : "false", format_double(k.value),
                                   format_double(k.tolerance), k.detail});
        return {s, code};
    }
    std::ostringstream os;
    for (const auto& k : checks)
        os << (k.passed ? "PASS " : "FAIL ") << k.name << "  value=" << format_double(k.value, 6)
           << " tol=" << format_double(k.tolerance, 6) << "  " << k.detail << '\n';
    os << (code == kExitOk ? "all checks passed" : "verification FAILED") << '\n';
    return {os.str(), code};
}

Rendered cmd_ml(const RunConfig& c) {
    nlohmann::json j;
    j["a"] = c.ml_a;
    j["x"] = c.ml_x;
    j["log_value"] = asymptotics::log_mittag_leffler(c.ml_a, c.ml_x);
    j["value"] = asymptotics::mittag_leffler(c.ml_a, c.ml_x);
    j["branch"] = std::pow(c.ml_x, 1.0 / c.ml_a) > asymptotics::kHandover ? "asymptotic" : "series";
    if (c.ml_c) {
        if (!c.t) throw ParameterError("--c needs --t for the growth rate");
        j["c"] = *c.ml_c;
        j["t"] = *c.t;
        j["at_growth"] = asymptotics::at_growth(c.ml_a, *c.ml_c, *c.t);
    }
    return {render_object(j, c.format)};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Second-order Lyapunov exponents of hyperbolic and parabolic Anderson models"};
    app.require_subcommand(1, 1);
    app.fallthrough();
    app.set_help_all_flag("--help-all", "Help for every subcommand");

    std::map<std::string, std::string> flag_values;
    std::vector<std::pair<std::string, std::string>> keyed = {
        {"--family", "family"}, {"--d", "d"}, {"--alpha", "alpha"}, {"--H", "H"},
        {"--eq", "eq"}, {"--beta-l", "beta_l"}, {"--n", "n"}, {"--t", "t"},
        {"--samples", "samples"}, {"--seed", "seed"}, {"--grid-radius", "grid_radius"},
        {"--grid-points", "grid_points"}, {"--tol", "tol"}, {"--rho", "rho"},
        {"--e-gamma", "e_gamma"}, {"--format", "format"}, {"--out", "out"},
        {"--threads", "threads"}, {"--a", "a"}, {"--x", "x"}, {"--c", "c"}};
    const std::map<std::string, std::string> help = {
        {"family", "noise family: riesz | fractional | white"},
        {"d", "spatial dimension (Riesz)"},
        {"alpha", "Riesz order alpha"},
        {"H", "Hurst index for the fractional family, in (1/4, 1/2)"},
        {"eq", "wave | heat"},
        {"beta_l", "dispersion power of the fractional Laplacian, in (0, 2]"},
        {"n", "chaos order (largest order for the chaos table)"},
        {"t", "fixed time (chaos) or horizon (ml growth rate)"},
        {"samples", "Monte-Carlo sample count"},
        {"seed", "master seed"},
        {"grid_radius", "truncation radius of the eigenvalue grid"},
        {"grid_points", "grid points of the eigenvalue solver"},
        {"tol", "eigen-solver residual tolerance"},
        {"rho", "use this rho instead of solving for it"},
        {"e_gamma", "E(Gamma) for the fractional family"},
        {"format", "json | csv | table"},
        {"out", "write the report to this file"},
        {"threads", "worker threads (0 = all logical cores)"},
        {"a", "Mittag-Leffler order"},
        {"x", "Mittag-Leffler argument"},
        {"c", "growth constant for the Mittag-Leffler growth rate"}};
    std::vector<std::string> raw(keyed.size());
    std::vector<CLI::Option*> opts;
    for (std::size_t i = 0; i < keyed.size(); ++i)
        opts.push_back(app.add_option(keyed[i].first, raw[i], help.at(keyed[i].second)));
    std::string config_path, fault;
    app.add_option("--config", config_path, "key = value config file (overrides $ANDERSON_CONFIG)");
    bool with_brownian = false;
    app.add_flag("--brownian", with_brownian, "chaos: add the Brownian-path estimate of T_n");
    app.add_option("--inject-fault", fault)->group("");

    const char* names[] = {"lyapunov", "chaos", "rho", "verify", "ml"};
    const char* descriptions[] = {"closed-form second-order Lyapunov exponent report",
                                  "chaos terms J_n by Monte Carlo, with oracles",
                                  "variational constant rho by power iteration",
                                  "run the invariant suite", "Mittag-Leffler function E_a(x)"};
    std::vector<CLI::App*> subs;
    for (int i = 0; i < 5; ++i) subs.push_back(app.add_subcommand(names[i], descriptions[i]));

    std::vector<const char*> argv;
    argv.push_back("anderson");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitParameter;
    }

    try {
        RunConfig cfg;
        std::string path = config_path;
        if (path.empty())
            if (const char* env = std::getenv("ANDERSON_CONFIG"); env && *env) path = env;
        if (!path.empty()) cfg = apply_key_values(cfg, load_config_file(path));
        for (std::size_t i = 0; i < keyed.size(); ++i)
            if (opts[i]->count() > 0) flag_values[keyed[i].second] = raw[i];
        cfg = apply_key_values(cfg, flag_values);
        for (int i = 0; i < 5; ++i)
            if (subs[i]->parsed()) cfg.command = names[i];
        cfg.validate();
        if (cfg.threads > 0) omp_set_num_threads(cfg.threads);

        Rendered r;
        if (cfg.command == "lyapunov") r = cmd_lyapunov(cfg);
        else if (cfg.command == "chaos") r = cmd_chaos(cfg, with_brownian);
        else if (cfg.command == "rho") r = cmd_rho(cfg);
        else if (cfg.command == "verify") r = cmd_verify(cfg, fault);
        else r = cmd_ml(cfg);

        if (cfg.out) {
            std::ofstream f(*cfg.out, std::ios::binary);
            if (!f) throw ParameterError("cannot write '" + *cfg.out + "'");
            f << r.text;
        } else {
            out << r.text;
        }
        if (r.code == kExitVerification) err << "verification failed\n";
        return r.code;
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << " [residual " << format_double(e.residual(), 6) << "]\n";
        return kExitConvergence;
    } catch (const ParameterError& e) {
        err << "error: " << e.what() << '\n';
        return kExitParameter;
    } catch (const BracketingError& e) {
        err << "error: " << e.what() << '\n';
        return kExitParameter;
    } catch (const SingularityError& e) {
        err << "error: " << e.what() << '\n';
        return kExitParameter;
    }
}

}  // namespace anderson::cli
