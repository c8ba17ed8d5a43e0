#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "anderson/brownian.hpp"
#include "anderson/chaos.hpp"
#include "anderson/errors.hpp"
#include "oracles.hpp"

using namespace anderson;

namespace {

// E|m + s Z|^{-alpha} in d = 1 by quadrature, the singularity at y = 0 removed
// through y = u^{1/(1-alpha)}.
double negative_moment_1d(double alpha, double m, double s) {
    const double k = 1.0 / (1.0 - alpha);
    auto phi = [&](double y) {
        const double z = (y - m) / s;
        return std::exp(-0.5 * z * z) / (s * std::sqrt(2.0 * std::numbers::pi));
    };
    const double right = oracle::half_line_gk([&](double u) { return k * phi(std::pow(u, k)); });
    const double left = oracle::half_line_gk([&](double u) { return k * phi(-std::pow(u, k)); });
    return right + left;
}

}  // namespace

TEST_CASE("gaussian negative moments") {
    for (double alpha : {0.2, 0.5, 0.9})
        for (double m : {0.0, 0.3, 2.0, 9.0})
            for (double s : {0.1, 1.0, 3.0}) {
                const double lib = brownian::gaussian_negative_moment(1, alpha, m * m, s);
                CHECK(oracle::rel(lib, negative_moment_1d(alpha, m, s)) < 1e-8);
            }

    // d = 3 against plain sampling
    std::mt19937_64 gen(5);
    std::normal_distribution<double> z;
    const double alpha = 0.5, s = 0.7;
    const double m[3] = {0.4, -0.2, 0.3};
    double sum = 0.0, sum2 = 0.0;
    const int n = 400000;
    for (int i = 0; i < n; ++i) {
        double r2 = 0.0;
        for (double c : m) {
            const double x = c + s * z(gen);
            r2 += x * x;
        }
        const double v = std::pow(r2, -alpha / 2);
        sum += v;
        sum2 += v * v;
    }
    const double mean = sum / n, se = std::sqrt((sum2 / n - mean * mean) / n);
    const double lib = brownian::gaussian_negative_moment(3, alpha, 0.29, s);
    CHECK(std::abs(lib - mean) < 4.0 * se);
}

TEST_CASE("path oracle agrees with the Fourier side for T_1 and T_2") {
    const double t1 = oracle::t1_riesz_1d(0.5);
    const auto bm1 = brownian::tn_bm_oracle(1, 0.5, 1, 40000, 0.1, 20240601);
    const auto fourier1 = chaos::jn_exp_time_mc(
        {propagators::EquationKind::heat(), spectral::KernelSpec::riesz(1, 0.5), 1, {}}, 100000,
        20240601);
    CHECK(std::abs(oracle::z_score(bm1.mean, bm1.std_error, t1, 0.0)) < 3.0);
    CHECK(std::abs(oracle::z_score(bm1.mean, bm1.std_error, fourier1.mean, fourier1.std_error)) <
          3.0);

    const auto bm2 = brownian::tn_bm_oracle(1, 0.5, 2, 40000, 0.1, 7);
    const auto fourier2 = chaos::jn_exp_time_mc(
        {propagators::EquationKind::heat(), spectral::KernelSpec::riesz(1, 0.5), 2, {}}, 400000, 7);
    CHECK(std::abs(oracle::z_score(bm2.mean, bm2.std_error, fourier2.mean, fourier2.std_error)) <
          3.0);
}

TEST_CASE("path oracle in d = 2") {
    const auto bm = brownian::tn_bm_oracle(2, 1.0, 1, 20000, 0.1, 3);
    CHECK(std::isfinite(bm.mean));
    CHECK(bm.std_error > 0.0);
    const auto fourier = chaos::jn_exp_time_mc(
        {propagators::EquationKind::heat(), spectral::KernelSpec::riesz(2, 1.0), 1, {}}, 10000, 3);
    CHECK(std::abs(oracle::z_score(bm.mean, bm.std_error, fourier.mean, fourier.std_error)) < 3.0);
}

TEST_CASE("path oracle is reproducible across worker counts") {
    brownian::OracleOptions one{0.1, 8, 1}, three{0.1, 8, 3};
    const auto a = brownian::tn_bm_oracle(1, 0.5, 2, 9000, 11, one);
    const auto b = brownian::tn_bm_oracle(1, 0.5, 2, 9000, 11, three);
    CHECK(a.mean == b.mean);
}

TEST_CASE("path oracle parameter checks") {
    CHECK_THROWS_AS(brownian::tn_bm_oracle(1, 0.5, 1, 10, 0.0, 1), ParameterError);
    CHECK_THROWS_AS(brownian::tn_bm_oracle(1, 0.5, 1, 10, 0.2, 1), ParameterError);
    CHECK_THROWS_AS(brownian::tn_bm_oracle(1, 1.0, 1, 10, 0.1, 1), ParameterError);
    CHECK_THROWS_AS(brownian::tn_bm_oracle(3, 2.0, 1, 10, 0.1, 1), ParameterError);
    CHECK_THROWS_AS(brownian::tn_bm_oracle(1, 0.5, 0, 10, 0.1, 1), ParameterError);
}
