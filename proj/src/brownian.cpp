#include "anderson/brownian.hpp"

#include <array>
#include <cmath>
#include <random>
#include <sstream>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/hypergeometric_1F1.hpp>

#include "anderson/errors.hpp"
#include "anderson/json_io.hpp"

namespace anderson::brownian {

namespace {

constexpr int kMaxDim = 8;
using Point = std::array<double, kMaxDim>;

// 1F1(a; b; -x) for large x: Gamma(b)/Gamma(b-a) x^{-a} sum_k (a)_k (a-b+1)_k / k! x^{-k};
// the exponentially small companion term is below double precision for x > 40.
double kummer_large(double a, double b, double x) {
    double term = 1.0, sum = 1.0;
    for (int k = 0; k < 40; ++k) {
        const double next = term * (a + k) * (a - b + 1 + k) / ((k + 1) * x);
        if (std::abs(next) > std::abs(term)) break;  // asymptotic series starts diverging
        term = next;
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return std::exp(std::lgamma(b) - std::lgamma(b - a) - a * std::log(x)) * sum;
}

struct Walker {
    int d;
    double alpha;
    int max_depth;
    double beta_shape;   // 1 - alpha/2
    double beta_norm;    // B(q, q)

    double leaf(rng::Philox4x32& gen, const Point& b0, const Point& b1, double len) const {
        std::gamma_distribution<double> g(beta_shape);
        const double x = g(gen), y = g(gen);
        const double u = x / (x + y);
        double m_sq = 0.0;
        for (int i = 0; i < d; ++i) {
            const double m = b0[i] + u * (b1[i] - b0[i]);
            m_sq += m * m;
        }
        const double s = std::sqrt(2.0 * len * u * (1.0 - u));
        const double weight = beta_norm * std::pow(u * (1.0 - u), 0.5 * alpha);
        return len * weight * gaussian_negative_moment(d, alpha, m_sq, s);
    }

    double step(rng::Philox4x32& gen, std::normal_distribution<double>& normal, const Point& b0,
                const Point& b1, double len, int depth) const {
        double r0 = 0.0, r1 = 0.0;
        for (int i = 0; i < d; ++i) {
            r0 += b0[i] * b0[i];
            r1 += b1[i] * b1[i];
        }
        // Refine while an endpoint sits within one bridge scale sqrt(len) of the origin.
        if (depth < max_depth && std::min(r0, r1) < len) {
            Point mid{};
            const double sd = std::sqrt(0.5 * len);
            for (int i = 0; i < d; ++i) mid[i] = 0.5 * (b0[i] + b1[i]) + sd * normal(gen);
            return step(gen, normal, b0, mid, 0.5 * len, depth + 1) +
                   step(gen, normal, mid, b1, 0.5 * len, depth + 1);
        }
        return leaf(gen, b0, b1, len);
    }
};

}  // namespace

double gaussian_negative_moment(int d, double alpha, double m_sq, double s) {
    if (s <= 0.0) return std::pow(m_sq, -0.5 * alpha);
    const double x = m_sq / (2.0 * s * s);
    const double a = 0.5 * alpha, b = 0.5 * d;
    const double central = std::exp(-a * std::log(2.0) + std::lgamma(0.5 * (d - alpha)) -
                                    std::lgamma(b) - alpha * std::log(s));
    if (x == 0.0) return central;
    const double f = x > 40.0 ? kummer_large(a, b, x) : boost::math::hypergeometric_1F1(a, b, -x);
    return central * f;
}

MCEstimate tn_bm_oracle(int d, double alpha, int n, std::uint64_t n_paths, double time_step,
                        std::uint64_t seed) {
    OracleOptions opts;
    opts.time_step = time_step;
    return tn_bm_oracle(d, alpha, n, n_paths, seed, opts);
}

MCEstimate tn_bm_oracle(int d, double alpha, int n, std::uint64_t n_paths, std::uint64_t seed,
                        const OracleOptions& opts) {
    if (d < 1 || d > kMaxDim) throw ParameterError("Brownian oracle supports 1 <= d <= 8");
    if (!(alpha > 0.0 && alpha < std::min<double>(d, 2.0)))
        throw ParameterError("Brownian oracle needs 0 < alpha < min(d, 2)");
    if (n < 1) throw ParameterError("Brownian oracle needs n >= 1");
    if (n_paths == 0) throw ParameterError("n_paths must be positive");
    if (!(opts.time_step > 0.0 && opts.time_step <= 0.1))
        throw ParameterError("time_step must lie in (0, 0.1] for the refinement rule");
    if (opts.max_refinements < 0 || opts.max_refinements > 30)
        throw ParameterError("max_refinements must lie in [0, 30]");

    const double q = 1.0 - 0.5 * alpha;
    const Walker walker{d, alpha, opts.max_refinements, q,
                        boost::math::beta(q, q)};
    const double dt = opts.time_step;
    const double log_nfact = std::lgamma(n + 1.0);

    std::ostringstream label;
    label << "T_" << n << "/brownian(d=" << d << ",alpha=" << json_io::format_double(alpha, 6)
          << ",dt=" << json_io::format_double(dt, 6) << ")";

    auto sample = [&](rng::Philox4x32& gen) {
        std::normal_distribution<double> normal;
        const double tau = -std::log(gen.uniform());
        Point b0{}, b1{};
        double zeta = 0.0, elapsed = 0.0;
        while (elapsed < tau) {
            const double len = std::min(dt, tau - elapsed);
            const double sd = std::sqrt(2.0 * len);
            for (int i = 0; i < d; ++i) b1[i] = b0[i] + sd * normal(gen);
            zeta += walker.step(gen, normal, b0, b1, len, 0);
            b0 = b1;
            elapsed += len;
        }
        return std::exp(n * std::log(zeta) - log_nfact);
    };

    nlohmann::json params;
    params["d"] = d;
    params["alpha"] = alpha;
    params["n"] = n;
    params["time_step"] = dt;
    params["max_refinements"] = opts.max_refinements;
    const Moments m = sample_chunked(n_paths, rng::derive_seed(seed, label.str()), opts.threads, sample);
    return make_estimate(label.str(), m, seed, params);
}

}  // namespace anderson::brownian
