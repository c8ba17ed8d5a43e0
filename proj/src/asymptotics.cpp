#include "anderson/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "anderson/errors.hpp"
#include "anderson/json_io.hpp"
#include "anderson/variational.hpp"

namespace anderson::asymptotics {

namespace {

constexpr int kMaxTerms = 10000;

void check_order(double a) {
    if (!(a > 0.0 && a < 4.0)) throw ParameterError("Mittag-Leffler order must lie in (0, 4)");
}

// 1/Gamma(1 - z) through the reflection formula; vanishes at the poles z = 1, 2, ...
double reciprocal_gamma_one_minus(double z) {
    if (z == std::floor(z) && z >= 1.0) return 0.0;
    return std::sin(std::numbers::pi * z) * std::tgamma(z) / std::numbers::pi;
}

// log of the series sum, terms in log space.
double log_series(double a, double x) {
    if (x == 0.0) return 0.0;
    const double lx = std::log(x);
    // Locate the largest term so the sum can be accumulated relative to it.
    std::vector<double> logs;
    logs.reserve(256);
    double peak = 0.0;
    for (int n = 0; n < kMaxTerms; ++n) {
        const double lt = n * lx - std::lgamma(a * n + 1.0);
        logs.push_back(lt);
        peak = std::max(peak, lt);
        if (n > 0 && lt < logs[n - 1] && lt < peak + std::log(1e-17)) break;
    }
    double sum = 0.0;
    for (double lt : logs) sum += std::exp(lt - peak);
    return peak + std::log(sum);
}

// log of (1/a) e^y - x^{-1}/Gamma(1-a), x = y^a.
double log_asymptotic_from_root(double a, double y) {
    const double lead = y - std::log(a);
    const double x = std::pow(y, a);
    const double corr = reciprocal_gamma_one_minus(a) / x;  // x^{-1} / Gamma(1-a)
    return lead + std::log1p(-corr * std::exp(-lead));
}

double log_ml_from_root(double a, double y) {
    if (y > kHandover) return log_asymptotic_from_root(a, y);
    return log_series(a, std::pow(y, a));
}

}  // namespace

double mittag_leffler_series(double a, double x) {
    check_order(a);
    if (x < 0.0) throw ParameterError("Mittag-Leffler argument must be nonnegative");
    return std::exp(log_series(a, x));
}

double mittag_leffler_asymptotic(double a, double x) {
    check_order(a);
    if (!(x > 0.0)) throw ParameterError("asymptotic branch needs x > 0");
    return std::exp(log_asymptotic_from_root(a, std::pow(x, 1.0 / a)));
}

double log_mittag_leffler(double a, double x) {
    check_order(a);
    if (x < 0.0) throw ParameterError("Mittag-Leffler argument must be nonnegative");
    if (x == 0.0) return 0.0;
    return log_ml_from_root(a, std::pow(x, 1.0 / a));
}

double mittag_leffler(double a, double x) { return std::exp(log_mittag_leffler(a, x)); }

double at_growth(double a, double c, double t) {
    check_order(a);
    if (!(c > 0.0)) throw ParameterError("growth rate c must be positive");
    if (!(t > 0.0)) throw ParameterError("time t must be positive");
    // E_a((ct)^a): the root variable is exactly c t.
    return log_ml_from_root(a, c * t) / t;
}

LambdaCase LambdaCase::riesz(double alpha, double e2) {
    if (!(alpha > 0.0 && alpha < 2.0)) throw ParameterError("lambda(beta) needs 0 < alpha < 2");
    if (!(e2 > 0.0)) throw ParameterError("functional value must be positive");
    return {Kind::Riesz, alpha, e2};
}

LambdaCase LambdaCase::fractional(double hurst, double e2_gamma) {
    if (!(hurst > 0.25 && hurst < 0.5)) throw ParameterError("H must lie in (1/4, 1/2)");
    if (!(e2_gamma > 0.0)) throw ParameterError("functional value must be positive");
    return {Kind::Fractional, hurst, e2_gamma};
}

double lambda_beta(const LambdaCase& c, double beta) {
    if (!(beta > 0.0)) throw ParameterError("beta must be positive");
    const double power = c.kind == LambdaCase::Kind::Riesz ? 2.0 / (2.0 - c.exponent) : 1.0 / c.exponent;
    return std::pow(2.0 * beta, -power) * c.e2;
}

double beta0_solve(const std::function<double(double)>& lambda, double lo, double hi) {
    if (!(lo > 0.0 && hi > lo)) throw BracketingError("bracket must satisfy 0 < lo < hi");
    auto f = [&](double b) { return 4.0 * lambda(b) - b * b; };
    const double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0)) {
        std::ostringstream os;
        os << "4 lambda(beta) - beta^2 does not change sign on [" << lo << ", " << hi << "]";
        throw BracketingError(os.str());
    }
    const auto [a, b] = boost::math::tools::bisect(f, lo, hi, boost::math::tools::eps_tolerance<double>(50));
    return 0.5 * (a + b);
}

std::pair<double, double> beta0_bracket(const std::function<double(double)>& lambda) {
    auto f = [&](double b) { return 4.0 * lambda(b) - b * b; };
    double lo = 1.0, hi = 1.0;
    if (f(1.0) > 0.0) {
        for (int i = 0; i < 2000 && f(hi) > 0.0; ++i) {
            lo = hi;
            hi *= 2.0;
        }
        if (f(hi) > 0.0) throw BracketingError("no upper bracket for 4 lambda(beta) = beta^2");
    } else {
        for (int i = 0; i < 2000 && f(lo) <= 0.0; ++i) {
            hi = lo;
            lo *= 0.5;
        }
        if (f(lo) <= 0.0) throw BracketingError("no lower bracket for 4 lambda(beta) = beta^2");
    }
    return {lo, hi};
}

PowerLawRoot beta0_power_law(double c, double p) {
    if (!(c > 0.0)) throw ParameterError("power-law coefficient must be positive");
    if (!(p >= 0.0)) throw ParameterError("power-law exponent must be nonnegative");
    auto lambda = [c, p](double b) { return c * std::pow(b, -p); };
    const auto [lo, hi] = beta0_bracket(lambda);
    PowerLawRoot r;
    r.bisection = beta0_solve(lambda, lo, hi);
    r.closed_form = std::pow(4.0 * c, 1.0 / (p + 2.0));
    if (std::abs(r.bisection - r.closed_form) > 1e-10 * r.closed_form) {
        std::ostringstream os;
        os << "bisection root " << r.bisection << " disagrees with closed form " << r.closed_form;
        throw ConvergenceError(os.str(), std::abs(r.bisection - r.closed_form));
    }
    return r;
}

namespace {

double max_relative_gap(const std::vector<double>& v) {
    double gap = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i + 1; j < v.size(); ++j)
            gap = std::max(gap, std::abs(v[i] - v[j]) / std::max(std::abs(v[i]), std::abs(v[j])));
    return gap;
}

// Upper exponent of the wave equation from E(f) (or E(Gamma)) under the
// dispersion power beta; alpha is the scaling exponent of mu.
double wave_variational_exponent_log(double alpha, double beta, double log_e) {
    const double denom = 3.0 * beta - 2.0 * alpha;
    const double two_power = (beta * (1.0 - alpha) + alpha * (beta - alpha) / (alpha - 2.0)) / denom;
    return std::exp(two_power * std::log(2.0) + (beta - alpha) / denom * log_e);
}

// Root of 4 lambda(beta) = beta^2 solved by bisection in x = log beta, given
// log lambda; the functional values of near-critical kernels leave the double
// range long before the root does.
double beta0_from_log_lambda(const std::function<double(double)>& log_lambda) {
    auto g = [&](double x) { return std::log(4.0) + log_lambda(std::exp(x)) - 2.0 * x; };
    double lo = 0.0, hi = 0.0, step = 1.0;
    if (g(0.0) > 0.0) {
        while (g(hi) > 0.0) {
            if (step > 1e3) throw BracketingError("no upper bracket for 4 lambda(beta) = beta^2");
            lo = hi;
            hi += step;
            step *= 2.0;
        }
    } else {
        while (g(lo) <= 0.0) {
            if (step > 1e3) throw BracketingError("no lower bracket for 4 lambda(beta) = beta^2");
            hi = lo;
            lo -= step;
            step *= 2.0;
        }
    }
    const auto [a, b] =
        boost::math::tools::bisect(g, lo, hi, boost::math::tools::eps_tolerance<double>(52));
    return std::exp(0.5 * (a + b));
}

void finish(LyapunovReport& r) {
    std::vector<double> present;
    for (const auto& v : {r.lambda2_thm2, r.lambda2_thm1, r.beta0_numeric})
        if (v) present.push_back(*v);
    if (present.size() >= 2) r.consistency_gap = max_relative_gap(present);
}

}  // namespace

LyapunovReport lambda2_closed_form(const propagators::EquationKind& eq,
                                   const spectral::KernelSpec& kernel, const FunctionalInput& in) {
    const double alpha = kernel.alpha_eff();
    const double beta = eq.beta_l;
    if (!(beta > 0.0 && beta <= 2.0)) throw ParameterError("beta_l must lie in (0, 2]");
    if (!spectral::dalang_check(alpha, beta)) {
        std::ostringstream os;
        os << "Dalang's condition fails: alpha_eff=" << alpha << " must be below beta_l=" << beta;
        throw ParameterError(os.str());
    }
    const bool wave = eq.kind == propagators::Equation::Wave;
    LyapunovReport r;
    r.eq = eq;
    r.kernel = kernel;
    r.a = wave ? 3.0 - 2.0 * alpha / beta : 1.0 - alpha / beta;

    if (kernel.family() == spectral::Family::FractionalH) {
        if (!in.e_gamma) throw ParameterError("the fractional-noise case needs --e-gamma (E(Gamma))");
        if (!(*in.e_gamma > 0.0)) throw ParameterError("E(Gamma) must be positive");
        const double h = kernel.hurst();
        const double e = *in.e_gamma;
        const double e2 = variational::e2_ratio_gamma(h) * e;
        r.e_gamma = e;
        r.extra["E2_gamma"] = e2;
        if (wave) {
            r.lambda2_thm1 = wave_variational_exponent_log(alpha, beta, std::log(e));
            if (beta == 2.0) {
                const double log_e2 = std::log(e2);
                r.beta0_numeric = beta0_from_log_lambda(
                    [&](double b) { return -std::log(2.0 * b) / h + log_e2; });
            }
            r.lambda2 = *r.lambda2_thm1;
            r.lambda2_source = "variational (upper exponent)";
        } else {
            if (beta != 2.0)
                throw ParameterError("heat equation with fractional noise needs beta_l = 2");
            r.lambda2_thm1 = lambda_beta(LambdaCase::fractional(h, e2), 0.5);
            r.lambda2 = *r.lambda2_thm1;
            r.lambda2_source = "variational E_2(Gamma)";
        }
        finish(r);
        return r;
    }

    double rho;
    if (in.rho) {
        rho = *in.rho;
    } else if (kernel.family() == spectral::Family::WhiteNoise1D && beta == 2.0) {
        rho = 0.5;
    } else {
        throw ParameterError("rho is required for this kernel (solve it or pass --rho)");
    }
    if (!(rho > 0.0)) throw ParameterError("rho must be positive");
    r.rho = rho;
    r.gamma = wave ? (1.0 - 2.0 * alpha / beta) * std::log(2.0) + std::log(rho) : std::log(rho);
    r.lambda2_thm2 = std::exp(*r.gamma / r.a);
    r.lambda2 = *r.lambda2_thm2;
    r.lambda2_source = "chaos series (exact limit)";

    if (beta == 2.0) {
        // Same algebra as functionals_from_rho, in logarithms.
        const double p = 2.0 / (2.0 - alpha);
        const double log_ea1 = p * std::log(rho);
        const double log_e = alpha / (2.0 - alpha) * std::log(2.0) + log_ea1;
        const double log_e2 = log_e - alpha / (2.0 - alpha) * std::log(2.0);
        r.extra["E_A1"] = std::exp(log_ea1);
        r.extra["E"] = std::exp(log_e);
        r.extra["E2"] = std::exp(log_e2);
        auto log_lambda = [&](double b) { return -p * std::log(2.0 * b) + log_e2; };
        if (wave) {
            r.lambda2_thm1 = wave_variational_exponent_log(alpha, 2.0, log_e);
            r.beta0_numeric = beta0_from_log_lambda(log_lambda);
        } else {
            r.lambda2_thm1 = std::exp(log_lambda(0.5));
        }
    }
    finish(r);
    return r;
}

nlohmann::json to_json(const LyapunovReport& r) {
    auto opt = [](const std::optional<double>& v) -> nlohmann::json {
        return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
    };
    nlohmann::json j;
    j["eq"] = propagators::to_string(r.eq.kind);
    j["beta_l"] = r.eq.beta_l;
    j["kernel"] = spectral::to_key_values(r.kernel);
    j["a"] = r.a;
    j["gamma"] = opt(r.gamma);
    j["rho"] = opt(r.rho);
    j["e_gamma"] = opt(r.e_gamma);
    j["lambda2"] = r.lambda2;
    j["lambda2_source"] = r.lambda2_source;
    j["lambda2_thm2"] = opt(r.lambda2_thm2);
    j["lambda2_thm1_upper"] = opt(r.lambda2_thm1);
    j["beta0_numeric"] = opt(r.beta0_numeric);
    j["consistency_gap"] = opt(r.consistency_gap);
    j["extra"] = r.extra;
    return j;
}

std::string render_table(const LyapunovReport& r) {
    std::vector<std::pair<std::string, std::string>> rows;
    auto num = [](double v) { return json_io::format_double(v, 12); };
    auto opt = [&](const std::optional<double>& v) { return v ? num(*v) : std::string("-"); };
    rows.emplace_back("equation", propagators::to_string(r.eq.kind));
    rows.emplace_back("beta_l", num(r.eq.beta_l));
    std::string kernel = spectral::to_string(r.kernel.family());
    if (r.kernel.family() == spectral::Family::Riesz)
        kernel += " d=" + std::to_string(r.kernel.dim()) + " alpha=" + num(r.kernel.alpha());
    if (r.kernel.family() == spectral::Family::FractionalH) kernel += " H=" + num(r.kernel.hurst());
    rows.emplace_back("kernel", kernel);
    rows.emplace_back("a", num(r.a));
    rows.emplace_back("gamma", opt(r.gamma));
    rows.emplace_back("rho", opt(r.rho));
    if (r.e_gamma) rows.emplace_back("E(Gamma)", num(*r.e_gamma));
    rows.emplace_back("lambda2", num(r.lambda2));
    rows.emplace_back("lambda2 (chaos limit)", opt(r.lambda2_thm2));
    rows.emplace_back("lambda2 (variational, upper)", opt(r.lambda2_thm1));
    rows.emplace_back("beta0 (bisection)", opt(r.beta0_numeric));
    rows.emplace_back("consistency gap", opt(r.consistency_gap));
    std::size_t width = 0;
    for (const auto& [k, v] : rows) width = std::max(width, k.size());
    std::ostringstream os;
    for (const auto& [k, v] : rows) os << k << std::string(width + 2 - k.size(), ' ') << v << '\n';
    return os.str();
}

}  // namespace anderson::asymptotics
