#include "anderson/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "anderson/errors.hpp"
#include "anderson/json_io.hpp"

namespace anderson {

namespace {

const std::set<std::string> kCommands = {"lyapunov", "chaos", "rho", "verify", "ml"};
const std::set<std::string> kFormats = {"json", "csv", "table"};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
    return s;
}

std::string opt_text(const std::optional<double>& v) {
    return v ? json_io::format_double(*v) : std::string("none");
}

std::optional<double> parse_opt(const std::string& s) {
    if (s == "none" || s.empty()) return std::nullopt;
    return json_io::parse_double(s);
}

}  // namespace

spectral::KernelSpec RunConfig::kernel() const {
    switch (spectral::family_from_string(family)) {
        case spectral::Family::Riesz: return spectral::KernelSpec::riesz(d, alpha);
        case spectral::Family::FractionalH: return spectral::KernelSpec::fractional(hurst);
        case spectral::Family::WhiteNoise1D: return spectral::KernelSpec::white_noise();
    }
    throw ParameterError("unknown family");
}

propagators::EquationKind RunConfig::equation() const {
    const auto kind = propagators::equation_from_string(eq.c_str());
    return kind == propagators::Equation::Wave ? propagators::EquationKind::wave(beta_l)
                                               : propagators::EquationKind::heat(beta_l);
}

void RunConfig::validate() const {
    if (!kCommands.count(command)) throw ParameterError("unknown command '" + command + "'");
    if (!kFormats.count(format)) throw ParameterError("unknown format '" + format + "'");
    spectral::family_from_string(family);
    propagators::equation_from_string(eq.c_str());
    if (samples == 0) throw ParameterError("samples must be positive");
    if (n < 0) throw ParameterError("n must be nonnegative");
    if (t && !(*t >= 0.0)) throw ParameterError("t must be nonnegative");
    if (!(tol > 0.0)) throw ParameterError("tol must be positive");
    if (grid_points < 2) throw ParameterError("grid_points must be at least 2");
    if (!(grid_radius > 0.0)) throw ParameterError("grid_radius must be positive");
    if (threads < 0) throw ParameterError("threads must be nonnegative");
}

std::map<std::string, std::string> to_key_values(const RunConfig& c) {
    using json_io::format_double;
    return {
        {"command", c.command},
        {"family", c.family},
        {"d", std::to_string(c.d)},
        {"alpha", format_double(c.alpha)},
        {"H", format_double(c.hurst)},
        {"eq", c.eq},
        {"beta_l", format_double(c.beta_l)},
        {"n", std::to_string(c.n)},
        {"t", opt_text(c.t)},
        {"seed", std::to_string(c.seed)},
        {"samples", std::to_string(c.samples)},
        {"grid_radius", format_double(c.grid_radius)},
        {"grid_points", std::to_string(c.grid_points)},
        {"tol", format_double(c.tol)},
        {"rho", opt_text(c.rho)},
        {"e_gamma", opt_text(c.e_gamma)},
        {"a", format_double(c.ml_a)},
        {"x", format_double(c.ml_x)},
        {"c", opt_text(c.ml_c)},
        {"format", c.format},
        {"out", c.out ? *c.out : std::string("none")},
        {"threads", std::to_string(c.threads)},
    };
}

RunConfig apply_key_values(RunConfig c, const std::map<std::string, std::string>& kv) {
    using json_io::parse_double;
    using json_io::parse_int;
    using json_io::parse_uint64;
    for (const auto& [key, value] : kv) {
        if (key == "command") c.command = value;
        else if (key == "family") c.family = value;
        else if (key == "d") c.d = static_cast<int>(parse_int(value));
        else if (key == "alpha") c.alpha = parse_double(value);
        else if (key == "H") c.hurst = parse_double(value);
        else if (key == "eq") c.eq = value;
        else if (key == "beta_l") c.beta_l = parse_double(value);
        else if (key == "n") c.n = static_cast<int>(parse_int(value));
        else if (key == "t") c.t = parse_opt(value);
        else if (key == "seed") c.seed = parse_uint64(value);
        else if (key == "samples") c.samples = parse_uint64(value);
        else if (key == "grid_radius") c.grid_radius = parse_double(value);
        else if (key == "grid_points") c.grid_points = static_cast<int>(parse_int(value));
        else if (key == "tol") c.tol = parse_double(value);
        else if (key == "rho") c.rho = parse_opt(value);
        else if (key == "e_gamma") c.e_gamma = parse_opt(value);
        else if (key == "a") c.ml_a = parse_double(value);
        else if (key == "x") c.ml_x = parse_double(value);
        else if (key == "c") c.ml_c = parse_opt(value);
        else if (key == "format") c.format = value;
        else if (key == "out") c.out = value == "none" ? std::nullopt : std::optional<std::string>(value);
        else if (key == "threads") c.threads = static_cast<int>(parse_int(value));
        else throw ParameterError("unknown config key '" + key + "'");
    }
    return c;
}

std::string to_text(const RunConfig& c) {
    std::ostringstream os;
    for (const auto& [k, v] : to_key_values(c)) {
        const bool quote = v.find_first_of(" #=\"") != std::string::npos;
        os << k << " = " << (quote ? "\"" + v + "\"" : v) << '\n';
    }
    return os.str();
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        // Strip comments outside quotes.
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') quoted = !quoted;
            if (line[i] == '#' && !quoted) {
                line.resize(i);
                break;
            }
        }
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParameterError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty())
            throw ParameterError("config line " + std::to_string(lineno) + ": empty key");
        kv[key] = unquote(trim(line.substr(eq + 1)));
    }
    return kv;
}

std::map<std::string, std::string> load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace anderson
