#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>
#include <doctest.h>

#include "anderson/chaos.hpp"
#include "anderson/errors.hpp"
#include "oracles.hpp"

using namespace anderson;
using namespace anderson::chaos;
using propagators::EquationKind;
using spectral::KernelSpec;

namespace {

constexpr std::uint64_t kSeed = 20240601;

bool within_3sigma(const MCEstimate& e, double expected) {
    // Exact estimators report zero error; allow rounding there.
    const double sigma = std::max(e.std_error, 1e-12 * std::abs(expected));
    return std::abs(e.mean - expected) <= 3.0 * sigma;
}

ChaosQuery query(EquationKind eq, KernelSpec k, int n, std::optional<double> t = {}) {
    return ChaosQuery{eq, k, n, t};
}

}  // namespace

TEST_CASE("scaling exponent") {
    CHECK(scaling_exponent(EquationKind::wave(), 0.5) == 2.5);
    CHECK(scaling_exponent(EquationKind::heat(), 1.0) == 0.5);
    CHECK(scaling_exponent(EquationKind::wave(), 1.0) == 2.0);
    CHECK(scaling_exponent(EquationKind::heat(1.5), 0.75) == doctest::Approx(0.5));
    CHECK(scaling_exponent(EquationKind::wave(1.5), 0.75) == doctest::Approx(2.0));
}

TEST_CASE("exponential-time averages: white noise") {
    const auto white = KernelSpec::white_noise();
    const auto heat2 = jn_exp_time_mc(query(EquationKind::heat(), white, 2), 200000, kSeed);
    CHECK(within_3sigma(heat2, 0.25));
    CHECK(heat2.std_error > 0.0);
    const auto wave1 = jn_exp_time_mc(query(EquationKind::wave(), white, 1), 100000, kSeed);
    CHECK(within_3sigma(wave1, 0.5));
}

TEST_CASE("exponential-time averages: riesz d=1 alpha=1/2") {
    const auto k = KernelSpec::riesz(1, 0.5);
    const double t1 = oracle::t1_riesz_1d(0.5);
    CHECK(std::abs(t1 - std::sqrt(std::numbers::pi)) < 1e-10);
    const auto heat1 = jn_exp_time_mc(query(EquationKind::heat(), k, 1), 50000, kSeed);
    CHECK(within_3sigma(heat1, t1));
    CHECK(heat1.has_flag("zero-variance"));
    CHECK(heat1.target.find("heat") != std::string::npos);

    // wave/heat moment link 2^{n(1-alpha)}
    for (int n = 1; n <= 2; ++n) {
        const auto h = jn_exp_time_mc(query(EquationKind::heat(), k, n), 200000, kSeed + n);
        const auto w = jn_exp_time_mc(query(EquationKind::wave(), k, n), 200000, kSeed + 10 + n);
        const double factor = std::pow(2.0, n * 0.5);
        const double ratio = w.mean / h.mean;
        const double sr = ratio * std::hypot(w.std_error / w.mean, h.std_error / h.mean);
        CHECK(std::abs(ratio - factor) <= 3.0 * std::max(sr, 1e-12));
    }
}

TEST_CASE("exponential-time average in d=2 is finite") {
    const auto e = jn_exp_time_mc(query(EquationKind::heat(), KernelSpec::riesz(2, 1.0), 2), 50000,
                                  kSeed);
    CHECK(std::isfinite(e.mean));
    CHECK(e.mean > 0.0);
    CHECK(e.std_error > 0.0);
    CHECK(e.std_error < 0.05 * e.mean);
}

TEST_CASE("dalang violations are parameter errors") {
    CHECK_THROWS_AS(jn_exp_time_mc(query(EquationKind::heat(), KernelSpec::riesz(3, 2.5), 1), 10, 1),
                    ParameterError);
    CHECK_THROWS_AS(
        jn_exp_time_mc(query(EquationKind::wave(1.2), KernelSpec::riesz(2, 1.5), 1), 10, 1),
        ParameterError);
    CHECK_THROWS_AS(jn_fixed_time(query(EquationKind::heat(), KernelSpec::riesz(3, 2.0), 1, 1.0), 10,
                                  1),
                    ParameterError);
}

TEST_CASE("determinism and the low-confidence flag") {
    const auto q = query(EquationKind::heat(), KernelSpec::riesz(1, 0.5), 3);
    const auto a = jn_exp_time_mc(q, 30000, 5, 1);
    const auto b = jn_exp_time_mc(q, 30000, 5, 4);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);
    CHECK_FALSE(a.has_flag("low-confidence"));
    const auto c = jn_exp_time_mc(query(EquationKind::heat(), KernelSpec::white_noise(), 7), 20000, 5);
    CHECK(c.has_flag("low-confidence"));
}

TEST_CASE("fixed-time chaos terms") {
    const auto k = KernelSpec::riesz(1, 0.5);
    const auto zero = jn_fixed_time(query(EquationKind::heat(), k, 0, 3.0), 100, kSeed);
    CHECK(zero.mean == 1.0);
    CHECK(zero.std_error == 0.0);

    const double j1 = oracle::j1_heat_riesz_1d(0.5, 1.0);
    CHECK(j1 == doctest::Approx(1.9285).epsilon(1e-4));
    const auto e1 = jn_fixed_time(query(EquationKind::heat(), k, 1, 1.0), 200000, kSeed);
    CHECK(within_3sigma(e1, j1));
    const auto e2 = jn_fixed_time(query(EquationKind::heat(), k, 1, 2.0), 200000, kSeed + 1);
    CHECK(within_3sigma(e2, std::pow(2.0, 0.75) * j1));

    const auto w1 = jn_fixed_time(query(EquationKind::wave(), k, 1, 1.0), 200000, kSeed);
    CHECK(within_3sigma(w1, oracle::j1_wave_riesz_1d(0.5, 1.0)));

    // white noise: J_n(1) = 2^{-n} / Gamma(n/2 + 1)
    for (int n = 1; n <= 3; ++n) {
        const auto e = jn_fixed_time(query(EquationKind::heat(), KernelSpec::white_noise(), n, 1.0),
                                     200000, kSeed + 100 + n);
        CHECK(within_3sigma(e, std::pow(0.5, n) / std::tgamma(0.5 * n + 1.0)));
    }
    // wave, white noise, n = 1: J_1(t) = t^2 / 4
    const auto ww = jn_fixed_time(query(EquationKind::wave(), KernelSpec::white_noise(), 1, 1.0),
                                  100000, kSeed);
    CHECK(within_3sigma(ww, 0.25));

    CHECK_THROWS_AS(jn_fixed_time(query(EquationKind::heat(), k, 1, -1.0), 10, 1), ParameterError);
}

TEST_CASE("deterministic J_1: oracle, scaling law, laplace identity") {
    const auto k = KernelSpec::riesz(1, 0.5);
    CHECK(oracle::rel(j1_quadrature(EquationKind::heat(), k, 1.0), oracle::j1_heat_riesz_1d(0.5, 1.0)) <
          1e-9);
    CHECK(oracle::rel(j1_quadrature(EquationKind::wave(), k, 1.0), oracle::j1_wave_riesz_1d(0.5, 1.0)) <
          1e-8);
    for (auto eq : {EquationKind::heat(), EquationKind::wave()}) {
        const double a = scaling_exponent(eq, 0.5);
        const double at1 = j1_quadrature(eq, k, 1.0);
        for (double t : {0.5, 2.0, 4.0})
            CHECK(oracle::rel(j1_quadrature(eq, k, t), std::pow(t, a) * at1) < 1e-6);
        for (double beta : {0.5, 1.0, 2.0}) {
            const double lhs = std::tgamma(a + 1.0) * std::pow(beta, -(a + 1.0)) * at1;
            CHECK(oracle::rel(lhs, j1_laplace_quadrature(eq, k, beta)) < 1e-6);
        }
    }
}

TEST_CASE("log-rate sequence") {
    const auto white = log_rate_tn(KernelSpec::white_noise(), 3, 100000, kSeed);
    REQUIRE(white.size() == 3);
    for (const auto& p : white) {
        const double sigma = std::max(p.std_error, 1e-12);
        CHECK(std::abs(p.log_rate - std::log(0.5)) <= 3.0 * sigma);
    }
    const auto riesz = log_rate_tn(1, 0.5, 2, 20000, kSeed);
    const auto direct = jn_exp_time_mc(query(EquationKind::heat(), KernelSpec::riesz(1, 0.5), 1),
                                       20000, riesz[0].tn.seed);
    CHECK(riesz[0].log_rate == std::log(direct.mean));
    CHECK_THROWS_AS(log_rate_tn(1, 0.5, 7, 100, kSeed), ParameterError);
}

TEST_CASE("truncated second moment") {
    const auto white = KernelSpec::white_noise();
    const auto none = second_moment_truncated(EquationKind::heat(), white, 1.0, 0, 1000, kSeed);
    CHECK(none.mean == 1.0);
    const auto tiny = second_moment_truncated(EquationKind::heat(), white, 1e-8, 4, 20000, kSeed);
    CHECK(std::abs(tiny.mean - 1.0) < 1e-3);

    double expect = 1.0;
    for (int n = 1; n <= 4; ++n) expect += std::pow(0.5, n) / std::tgamma(0.5 * n + 1.0);
    const auto m = second_moment_truncated(EquationKind::heat(), white, 1.0, 4, 100000, kSeed);
    CHECK(within_3sigma(m, expect));
    CHECK(m.std_error > 0.0);
}

TEST_CASE("growth exponent estimator") {
    std::vector<std::pair<double, double>> exp3, poly, flat;
    for (int t = 1; t <= 10; ++t) exp3.emplace_back(t, std::exp(3.0 * t));
    for (int t = 1; t <= 50; ++t) poly.emplace_back(t, t * t * std::exp(3.0 * t));
    for (int t = 1; t <= 10; ++t) flat.emplace_back(t, 2.0);
    CHECK(std::abs(growth_exponent_estimate(exp3) - 3.0) < 1e-9);
    // The t^2 prefactor adds about 2/t to the slope over t in [26, 50].
    CHECK(std::abs(growth_exponent_estimate(poly) - 3.0) < 0.06);
    CHECK(std::abs(growth_exponent_estimate(flat)) < 1e-14);

    std::vector<std::pair<double, double>> bad{{1, 1.0}, {2, 0.0}, {3, 1.0}};
    CHECK_THROWS_AS(growth_exponent_estimate(bad), ParameterError);
    std::vector<std::pair<double, double>> short_{{1, 1.0}, {2, 2.0}};
    CHECK_THROWS_AS(growth_exponent_estimate(short_), ParameterError);
    std::vector<std::pair<double, double>> unordered{{1, 1.0}, {1, 2.0}, {3, 3.0}};
    CHECK_THROWS_AS(growth_exponent_estimate(unordered), ParameterError);
}
