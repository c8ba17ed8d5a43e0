#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <doctest.h>

#include "anderson/errors.hpp"
#include "anderson/propagators.hpp"

using namespace anderson;
using namespace anderson::propagators;

namespace {

// Gauss-Kronrod on [0, T] split into unit panels (the wave integrand oscillates).
double laplace_by_quadrature(const EquationKind& eq, double beta, double r) {
    const double horizon = 40.0 / beta;
    double total = 0.0;
    const int panels = static_cast<int>(std::ceil(horizon * (1.0 + std::sqrt(r))));
    for (int k = 0; k < panels; ++k) {
        const double a = horizon * k / panels, b = horizon * (k + 1) / panels;
        total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            [&](double t) { return std::exp(-beta * t) * fourier_green_sq(eq, t, r); }, a, b, 5,
            1e-13);
    }
    return total;
}

}  // namespace

TEST_CASE("squared symbols at special points") {
    CHECK(fourier_green_sq(EquationKind::wave(), std::numbers::pi, 1.0) < 1e-30);
    CHECK(fourier_green_sq(EquationKind::heat(), 0.0, 12.0) == 1.0);
    CHECK(fourier_green_sq(EquationKind::wave(), 0.7, 0.0) == doctest::Approx(0.49).epsilon(1e-15));
    // continuity at the origin
    const double near = fourier_green_sq(EquationKind::wave(), 0.7, 1e-8);
    CHECK(std::abs(near - 0.49) / 0.49 < 1e-6);
    const double near_frac = fourier_green_sq(EquationKind::wave(1.3), 2.0, 1e-8);
    CHECK(std::abs(near_frac - 4.0) / 4.0 < 1e-6);
}

TEST_CASE("laplace closed forms") {
    CHECK(laplace_green_sq(EquationKind::heat(), 1.0, 1.0) == 0.5);
    CHECK(laplace_green_sq(EquationKind::wave(), 2.0, 0.0) == 0.25);
    CHECK(laplace_green_sq(EquationKind::wave(), 1.0, 1.0) == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(std::abs(laplace_by_quadrature(EquationKind::wave(), 1.0, 1.0) - 0.4) < 1e-10);
    CHECK_THROWS_AS(laplace_green_sq(EquationKind::heat(), 0.0, 1.0), ParameterError);
    CHECK_THROWS_AS(laplace_green_sq(EquationKind::wave(), -1.0, 1.0), ParameterError);
}

TEST_CASE("laplace transform matches quadrature at random points") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> b(0.3, 3.0), r(0.0, 4.0), bl(0.5, 2.0);
    for (int k = 0; k < 12; ++k) {
        const double beta = b(gen), rr = r(gen), beta_l = bl(gen);
        for (auto eq : {EquationKind::wave(beta_l), EquationKind::heat(beta_l)}) {
            const double closed = laplace_green_sq(eq, beta, rr);
            const double quad = laplace_by_quadrature(eq, beta, rr);
            CHECK(std::abs(quad - closed) / closed < 1e-6);
        }
    }
}

TEST_CASE("wave-heat link is exact") {
    CHECK(std::abs(wave_heat_link_residual(2.0, 1.0)) <= 1e-15);
    CHECK(std::abs(wave_heat_link_residual(0.5, 10.0)) <= 1e-15);
    CHECK(std::abs(wave_heat_link_residual(7.0, 0.0)) <= 1e-15);
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> b(0.05, 20.0), r(0.0, 50.0);
    for (int k = 0; k < 200; ++k) CHECK(std::abs(wave_heat_link_residual(b(gen), r(gen))) <= 1e-15);
}

TEST_CASE("dispersion power must lie in (0, 2]") {
    CHECK_THROWS_AS(EquationKind::wave(2.5), ParameterError);
    CHECK_THROWS_AS(EquationKind::heat(0.0), ParameterError);
    CHECK(std::string(to_string(Equation::Wave)) == "wave");
    CHECK(equation_from_string("heat") == Equation::Heat);
}
