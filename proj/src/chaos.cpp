#include "anderson/chaos.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "anderson/errors.hpp"
#include "anderson/json_io.hpp"
#include "anderson/quadrature.hpp"
#include "anderson/rng.hpp"

namespace anderson::chaos {

namespace {

using propagators::Equation;

constexpr int kMaxDim = 8;
using Point = std::array<double, kMaxDim>;

// Radial law with density proportional to r^{alpha-1} / (1 + (r/scale)^beta)
// on (0, inf), lifted isotropically to R^d. (r/scale)^beta is then
// BetaPrime(k, 1-k) with k = alpha/beta, i.e. a ratio of two gamma variates.
class IncrementLaw {
public:
    IncrementLaw(int d, double alpha, double beta) : d_(d), alpha_(alpha), beta_(beta) {
        const double k = alpha / beta;
        shape_num_ = k;
        shape_den_ = 1.0 - k;
        // int_0^inf r^{alpha-1}/(1+r^beta) dr = pi / (beta sin(pi k))
        radial_norm_ = std::numbers::pi / (beta * std::sin(std::numbers::pi * k));
        mass_ = radial_norm_ * spectral::unit_sphere_area(d);
    }

    /// Z * |S^{d-1}|: the proposal density at unit scale is r^{alpha-d} / ((1+r^beta) * mass()).
    double mass() const { return mass_; }

    void draw(rng::Philox4x32& gen, double scale, Point& out) const {
        std::gamma_distribution<double> num(shape_num_), den(shape_den_);
        const double ratio = num(gen) / den(gen);
        const double r = scale * std::pow(ratio, 1.0 / beta_);
        direction(gen, out);
        for (int i = 0; i < d_; ++i) out[i] *= r;
    }

    /// s(xi)/q(xi) * scale^{-alpha} for the two-component mixture, given the
    /// increment radius rx and the new partial-sum radius re (both / scale).
    double spectral_ratio(double coef, double rx, double re) const {
        const double expo = alpha_ - d_;
        const double a = 0.5 / (1.0 + std::pow(rx, beta_));
        const double rel = expo == 0.0 ? 1.0 : std::pow(re / rx, expo);
        const double b = rel == 0.0 ? 0.0 : 0.5 * rel / (1.0 + std::pow(re, beta_));
        const double denom = a + b;
        if (!(denom > 0.0) || !std::isfinite(denom)) return 0.0;
        return coef * mass_ / denom;
    }

private:
    void direction(rng::Philox4x32& gen, Point& out) const {
        if (d_ == 1) {
            out[0] = gen.uniform() < 0.5 ? -1.0 : 1.0;
            return;
        }
        if (d_ == 2) {
            const double phi = 2.0 * std::numbers::pi * gen.uniform();
            out[0] = std::cos(phi);
            out[1] = std::sin(phi);
            return;
        }
        std::normal_distribution<double> normal;
        double norm2 = 0.0;
        do {
            norm2 = 0.0;
            for (int i = 0; i < d_; ++i) {
                out[i] = normal(gen);
                norm2 += out[i] * out[i];
            }
        } while (norm2 == 0.0);
        const double inv = 1.0 / std::sqrt(norm2);
        for (int i = 0; i < d_; ++i) out[i] *= inv;
    }

    int d_;
    double alpha_;
    double beta_;
    double shape_num_;
    double shape_den_;
    double radial_norm_;
    double mass_;
};

double norm(const Point& p, int d) {
    double s = 0.0;
    for (int i = 0; i < d; ++i) s += p[i] * p[i];
    return std::sqrt(s);
}

// One mixture step: moves eta to its next partial sum and returns the radii
// (increment, new eta) in absolute units.
std::pair<double, double> mixture_step(const IncrementLaw& law, rng::Philox4x32& gen, int d,
                                       double scale, Point& eta) {
    Point draw{};
    const bool from_previous = gen.uniform() < 0.5;
    law.draw(gen, scale, draw);
    Point next{};
    for (int i = 0; i < d; ++i) next[i] = from_previous ? eta[i] + draw[i] : draw[i];
    Point xi{};
    for (int i = 0; i < d; ++i) xi[i] = next[i] - eta[i];
    eta = next;
    return {norm(xi, d), norm(next, d)};
}

std::string kernel_label(const KernelSpec& k) {
    std::ostringstream os;
    os << spectral::to_string(k.family());
    switch (k.family()) {
        case spectral::Family::Riesz:
            os << "(d=" << k.dim() << ",alpha=" << json_io::format_double(k.alpha(), 6) << ")";
            break;
        case spectral::Family::FractionalH:
            os << "(H=" << json_io::format_double(k.hurst(), 6) << ")";
            break;
        case spectral::Family::WhiteNoise1D: break;
    }
    return os.str();
}

std::string eq_label(const EquationKind& eq) {
    std::string s = propagators::to_string(eq.kind);
    if (eq.beta_l != 2.0) s += "(beta_l=" + json_io::format_double(eq.beta_l, 6) + ")";
    return s;
}

nlohmann::json query_params(const ChaosQuery& q) {
    nlohmann::json p;
    p["eq"] = propagators::to_string(q.eq.kind);
    p["beta_l"] = q.eq.beta_l;
    p["kernel"] = spectral::to_key_values(q.kernel);
    p["n"] = q.n;
    if (q.t) p["t"] = *q.t;
    return p;
}

void flag_order(MCEstimate& e, int n) {
    if (n > kMaxConfidentOrder) e.flags.emplace_back("low-confidence");
}

}  // namespace

void validate(const ChaosQuery& q) {
    if (q.n < 0) throw ParameterError("chaos order n must be nonnegative");
    if (!spectral::dalang_check(q.kernel.alpha_eff(), q.eq.beta_l)) {
        std::ostringstream os;
        os << "Dalang's condition fails: alpha_eff=" << q.kernel.alpha_eff()
           << " must be below beta_l=" << q.eq.beta_l;
        throw ParameterError(os.str());
    }
    if (q.kernel.dim() > kMaxDim)
        throw ParameterError("Monte-Carlo sampling supports d <= 8");
}

double scaling_exponent(const EquationKind& eq, double alpha_eff) {
    const double ratio = alpha_eff / eq.beta_l;
    return eq.kind == Equation::Wave ? 3.0 - 2.0 * ratio : 1.0 - ratio;
}

MCEstimate jn_exp_time_mc(const ChaosQuery& q, std::uint64_t n_samples, std::uint64_t seed,
                          int threads) {
    validate(q);
    const std::string target =
        "E[J_" + std::to_string(q.n) + "(tau)]/" + eq_label(q.eq) + "/" + kernel_label(q.kernel);
    if (q.n == 0) return exact_estimate(target, 1.0, seed, query_params(q));
    if (n_samples == 0) throw ParameterError("n_samples must be positive");

    const int d = q.kernel.dim();
    const double alpha = q.kernel.alpha_eff();
    const double beta = q.eq.beta_l;
    const double coef = q.kernel.density_coefficient();
    const IncrementLaw law(d, alpha, beta);
    const bool wave = q.eq.kind == Equation::Wave;
    // Proposal scale matched to I_1: 1/(1 + r^beta) for heat and
    // (1/2)/(1/4 + r^beta) = 2/(1 + (r/s)^beta) with s = 4^{-1/beta} for wave.
    const double scale = wave ? std::pow(0.25, 1.0 / beta) : 1.0;
    const double scale_factor = std::pow(scale, alpha) * (wave ? 2.0 : 1.0);
    const int n = q.n;

    auto sample = [&](rng::Philox4x32& gen) {
        Point eta{};
        double w = 1.0;
        for (int i = 0; i < n; ++i) {
            const auto [rx, re] = mixture_step(law, gen, d, scale, eta);
            const double sx = rx / scale, se = re / scale;
            w *= law.spectral_ratio(coef, sx, se) * scale_factor / (1.0 + std::pow(se, beta));
        }
        return w;
    };
    const Moments m =
        sample_chunked(n_samples, rng::derive_seed(seed, target), threads, sample);
    MCEstimate e = make_estimate(target, m, seed, query_params(q));
    flag_order(e, n);
    return e;
}

MCEstimate jn_fixed_time(const ChaosQuery& q, std::uint64_t n_samples, std::uint64_t seed,
                         int threads) {
    validate(q);
    if (!q.t) throw ParameterError("jn_fixed_time needs a time t");
    const double t = *q.t;
    if (t < 0.0) throw ParameterError("time t must be nonnegative");
    std::ostringstream label;
    label << "J_" << q.n << "(t=" << json_io::format_double(t, 6) << ")/" << eq_label(q.eq) << "/"
          << kernel_label(q.kernel);
    const std::string target = label.str();
    if (q.n == 0) return exact_estimate(target, 1.0, seed, query_params(q));
    if (t == 0.0) return exact_estimate(target, 0.0, seed, query_params(q));
    if (n_samples == 0) throw ParameterError("n_samples must be positive");

    const int d = q.kernel.dim();
    const double alpha = q.kernel.alpha_eff();
    const double beta = q.eq.beta_l;
    const double coef = q.kernel.density_coefficient();
    const bool wave = q.eq.kind == Equation::Wave;
    const double a = scaling_exponent(q.eq, alpha);
    const IncrementLaw law(d, alpha, beta);
    const int n = q.n;
    // Normalizer of t * Dirichlet(1, a, ..., a) against prod u_i^{a-1}.
    const double prefactor =
        std::exp(n * a * std::log(t) + n * std::lgamma(a) - std::lgamma(1.0 + n * a));
    // Heat proposals scale like u^{-1/beta}, wave like u^{-2/beta}.
    const double scale_power = wave ? -2.0 / beta : -1.0 / beta;
    const double min_gap = 1e-15 * t;

    auto sample = [&](rng::Philox4x32& gen) {
        std::array<double, 64> gaps{};
        std::gamma_distribution<double> head(1.0), body(a);
        double total = head(gen);
        for (int i = 0; i < n; ++i) {
            gaps[i] = body(gen);
            total += gaps[i];
        }
        Point eta{};
        double w = prefactor;
        for (int i = 0; i < n; ++i) {
            const double u = std::max(t * gaps[i] / total, min_gap);
            const double scale = std::pow(u, scale_power);
            const auto [rx, re] = mixture_step(law, gen, d, scale, eta);
            const double sx = rx / scale, se = re / scale;
            double kernel_value;
            if (wave) {
                // sin^2(u k)/k^2 / u^2 with u k = se^{beta/2}
                const double x = std::pow(se, 0.5 * beta);
                const double s = x < 1e-4 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
                kernel_value = s * s;
            } else {
                kernel_value = std::exp(-std::pow(se, beta));
            }
            w *= law.spectral_ratio(coef, sx, se) * kernel_value;
        }
        return w;
    };
    if (n > 64) throw ParameterError("jn_fixed_time supports n <= 64");
    const Moments m =
        sample_chunked(n_samples, rng::derive_seed(seed, target), threads, sample);
    MCEstimate e = make_estimate(target, m, seed, query_params(q));
    flag_order(e, n);
    return e;
}

double j1_quadrature(const EquationKind& eq, const KernelSpec& kernel, double t) {
    validate(ChaosQuery{eq, kernel, 1, t});
    if (t < 0.0) throw ParameterError("time t must be nonnegative");
    if (t == 0.0) return 0.0;
    const double alpha = kernel.alpha_eff();
    const double beta = eq.beta_l;
    const double outer = spectral::unit_sphere_area(kernel.dim()) * kernel.density_coefficient();

    if (eq.kind == Equation::Heat) {
        // int_0^t du int_0^inf r^{alpha-1} exp(-u r^beta) dr
        auto inner = [&](double u) {
            return quadrature::half_line(
                [&](double r) { return std::pow(r, alpha - 1.0) * std::exp(-u * std::pow(r, beta)); },
                0.0, 1e-13);
        };
        return outer * quadrature::finite(inner, 0.0, t, 1e-12);
    }

    // Wave: integrate the time variable in closed form,
    //   Phi(k) = int_0^t sin^2(u k)/k^2 du = t/(2k^2) - sin(2tk)/(4k^3),
    // then integrate (2/beta) k^{mu-1} Phi(k) dk with k = r^{beta/2}, mu = 2 alpha/beta.
    const double mu = 2.0 * alpha / beta;
    auto phi = [t](double k) {
        const double x = t * k;
        if (x < 1e-2) {
            const double k2 = k * k, t2 = t * t;
            return t * t2 * (1.0 / 3.0 - k2 * t2 / 15.0 + 2.0 * k2 * k2 * t2 * t2 / 315.0);
        }
        return t / (2.0 * k * k) - std::sin(2.0 * x) / (4.0 * k * k * k);
    };
    const double head = quadrature::finite(
        [&](double k) { return std::pow(k, mu - 1.0) * phi(k); }, 0.0, 1.0, 1e-12);
    // On [1, inf): non-oscillatory part in closed form, oscillatory part by
    // Ooura rules after shifting k = 1 + x.
    const double smooth_tail = t / (2.0 * (2.0 - mu));
    auto envelope = [mu](double x) { return std::pow(1.0 + x, mu - 4.0); };
    const double osc = std::sin(2.0 * t) * quadrature::fourier_cos(envelope, 2.0 * t) +
                       std::cos(2.0 * t) * quadrature::fourier_sin(envelope, 2.0 * t);
    return outer * (2.0 / beta) * (head + smooth_tail - 0.25 * osc);
}

double j1_laplace_quadrature(const EquationKind& eq, const KernelSpec& kernel, double beta) {
    validate(ChaosQuery{eq, kernel, 1, std::nullopt});
    if (!(beta > 0.0)) throw ParameterError("Laplace parameter beta must be positive");
    const double alpha = kernel.alpha_eff();
    const double outer = spectral::unit_sphere_area(kernel.dim()) * kernel.density_coefficient();
    const double integral = quadrature::half_line(
        [&](double r) {
            return std::pow(r, alpha - 1.0) * propagators::laplace_green_sq(eq, beta, r);
        },
        0.0, 1e-13);
    return outer * integral / beta;
}

std::vector<LogRatePoint> log_rate_tn(const KernelSpec& kernel, int n_max,
                                      std::uint64_t samples_per_n, std::uint64_t seed,
                                      int threads) {
    if (n_max < 1) throw ParameterError("log_rate_tn needs n_max >= 1");
    if (n_max > kMaxConfidentOrder)
        throw ParameterError("log_rate_tn is limited to n_max <= 6 (weight variance budget)");
    std::vector<LogRatePoint> out;
    for (int n = 1; n <= n_max; ++n) {
        LogRatePoint p;
        p.n = n;
        p.tn = jn_exp_time_mc(ChaosQuery{EquationKind::heat(), kernel, n, std::nullopt},
                              samples_per_n, seed, threads);
        p.log_rate = std::log(p.tn.mean) / n;
        p.std_error = p.tn.std_error / (n * p.tn.mean);
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<LogRatePoint> log_rate_tn(int d, double alpha, int n_max,
                                      std::uint64_t samples_per_n, std::uint64_t seed,
                                      int threads) {
    return log_rate_tn(KernelSpec::riesz(d, alpha), n_max, samples_per_n, seed, threads);
}

MCEstimate second_moment_truncated(const EquationKind& eq, const KernelSpec& kernel, double t,
                                   int n_max, std::uint64_t n_samples, std::uint64_t seed,
                                   int threads) {
    if (!(t > 0.0)) throw ParameterError("second_moment_truncated needs t > 0");
    if (n_max < 0) throw ParameterError("n_max must be nonnegative");
    validate(ChaosQuery{eq, kernel, 0, t});
    nlohmann::json params;
    params["eq"] = propagators::to_string(eq.kind);
    params["beta_l"] = eq.beta_l;
    params["kernel"] = spectral::to_key_values(kernel);
    params["t"] = t;
    params["n_max"] = n_max;
    params["tail"] = "unbounded";
    std::ostringstream label;
    label << "E|u(t=" << json_io::format_double(t, 6) << ")|^2/n_max=" << n_max << "/"
          << eq_label(eq) << "/" << kernel_label(kernel);

    double mean = 1.0, var = 0.0;
    nlohmann::json terms = nlohmann::json::array();
    for (int n = 1; n <= n_max; ++n) {
        const MCEstimate jn = jn_fixed_time(ChaosQuery{eq, kernel, n, t}, n_samples, seed, threads);
        mean += jn.mean;
        var += jn.std_error * jn.std_error;
        terms.push_back({{"n", n}, {"mean", jn.mean}, {"std_error", jn.std_error}});
    }
    params["terms"] = terms;
    if (n_max == 0) return exact_estimate(label.str(), 1.0, seed, params);
    MCEstimate e;
    e.target = label.str();
    e.mean = mean;
    e.std_error = std::sqrt(var);
    e.n_samples = n_samples;
    e.seed = seed;
    e.params = std::move(params);
    flag_order(e, n_max);
    return e;
}

double growth_exponent_estimate(std::span<const std::pair<double, double>> samples) {
    if (samples.size() < 3) throw ParameterError("growth_exponent_estimate needs >= 3 samples");
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!(samples[i].second > 0.0))
            throw ParameterError("growth_exponent_estimate needs h(t) > 0");
        if (i > 0 && !(samples[i].first > samples[i - 1].first))
            throw ParameterError("growth_exponent_estimate needs strictly increasing t");
    }
    const std::size_t keep = (samples.size() + 1) / 2;
    const auto tail = samples.subspan(samples.size() - keep);
    double st = 0.0, sy = 0.0;
    for (const auto& [t, h] : tail) {
        st += t;
        sy += std::log(h);
    }
    const double k = static_cast<double>(keep);
    const double mt = st / k, my = sy / k;
    double sxy = 0.0, sxx = 0.0;
    for (const auto& [t, h] : tail) {
        sxy += (t - mt) * (std::log(h) - my);
        sxx += (t - mt) * (t - mt);
    }
    return sxy / sxx;
}

}  // namespace anderson::chaos
