#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <doctest.h>

#include "anderson/errors.hpp"
#include "anderson/variational.hpp"

using namespace anderson;
using namespace anderson::variational;
using std::numbers::pi;

TEST_CASE("flat kernel is rank one with eigenvalue 1/2") {
    RhoOptions opts;
    opts.grid_points = 200;
    const auto r = rho_flat(2.0, opts);
    CHECK(std::abs(r.value - 0.5) < 1e-6);
    CHECK(r.flat);
    CHECK(r.residual < opts.tol);
}

TEST_CASE("separable kernel matches its 2x2 reduction") {
    // K(x, y) = u(x) v(y) + v(x) u(y), u = (1+x^2)^{-1}, v = (1+x^2)^{-2}.
    // Top eigenvalue <u,v> + sqrt(<u,u><v,v>) = 3pi/8 + pi sqrt(5/32).
    const auto grid = MappedGrid::line(1e8, 400);
    const int m = static_cast<int>(grid.theta.size());
    Matrix a{m, std::vector<double>(static_cast<std::size_t>(m) * m)};
    auto u = [](double x) { return 1.0 / (1.0 + x * x); };
    auto v = [](double x) { return 1.0 / ((1.0 + x * x) * (1.0 + x * x)); };
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            const double xi = grid.node(i), xj = grid.node(j);
            a(i, j) = grid.h * std::sqrt(grid.jacobian(i) * grid.jacobian(j)) *
                      (u(xi) * v(xj) + v(xi) * u(xj));
        }
    const auto res = power_iteration(a, std::vector<double>(m, 1.0), 1e-12, 1000);
    CHECK(std::abs(res.value - (3.0 * pi / 8.0 + pi * std::sqrt(5.0 / 32.0))) < 1e-8);
}

TEST_CASE("power iteration reports non-convergence with its residual") {
    try {
        rho_eigen(1, 0.5, 2.0, 1e8, 200, 1e-30, 3);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
        CHECK(e.residual() > 0.0);
    }
}

TEST_CASE("parameter checks") {
    CHECK_THROWS_AS(rho_eigen(1, 1.0, 2.0, 1e8, 100, 1e-8, 100), ParameterError);
    CHECK_THROWS_AS(rho_eigen(2, 1.5, 1.2, 1e8, 100, 1e-8, 100), ParameterError);
    CHECK_THROWS_AS(rho_eigen(4, 1.0, 2.0, 1e8, 100, 1e-8, 100), ParameterError);
    CHECK_THROWS_AS(rho_eigen(1, 0.5, 2.0, -1.0, 100, 1e-8, 100), ParameterError);
}

TEST_CASE("d = 1, alpha = 1/2: resolution and radius stability") {
    const auto base = rho_eigen(1, 0.5, 2.0, 1e8, 500, 1e-10, 500);
    const auto fine = rho_eigen(1, 0.5, 2.0, 1e8, 1000, 1e-10, 500);
    const auto wide = rho_eigen(1, 0.5, 2.0, 2e8, 500, 1e-10, 500);
    CHECK(std::abs(fine.value - base.value) / fine.value < 0.01);
    CHECK(std::abs(wide.value - base.value) / base.value < 0.01);
    CHECK(fine.value == doctest::Approx(1.45814).epsilon(1e-4));
    const auto small_r = rho_eigen(1, 0.5, 2.0, 1e3, 500, 1e-10, 500);
    const auto small_2r = rho_eigen(1, 0.5, 2.0, 2e3, 500, 1e-10, 500);
    CHECK(std::abs(small_2r.value - small_r.value) / small_r.value < 0.01);
    CHECK(small_r.tail_mass > wide.tail_mass);
}

TEST_CASE("grid differences shrink under doubling") {
    for (double alpha : {0.3, 0.5, 0.8}) {
        std::vector<double> v;
        for (int m : {125, 250, 500, 1000, 2000}) v.push_back(rho_eigen(1, alpha, 2.0, 1e8, m, 1e-11, 800).value);
        for (std::size_t k = 0; k + 2 < v.size(); ++k)
            CHECK(std::abs(v[k + 2] - v[k + 1]) < std::abs(v[k + 1] - v[k]));
    }
}

TEST_CASE("symmetry of the operator and parity of the eigenvector") {
    const auto grid = MappedGrid::line(1e8, 300);
    const auto a = riesz_matrix(1, 0.5, 2.0, grid);
    CHECK(asymmetry(a) < 1e-15);
    const auto res = power_iteration(a, std::vector<double>(a.n, 1.0), 1e-12, 1000);
    for (int i = 0; i < a.n; ++i) CHECK(std::abs(res.vector[i] - res.vector[a.n - 1 - i]) < 1e-10);
    for (double x : res.vector) CHECK(x > 0.0);
    CHECK(asymmetry(riesz_matrix(3, 1.2, 2.0, MappedGrid::radial(1e8, 80))) < 1e-15);
    CHECK(asymmetry(riesz_matrix(2, 0.7, 2.0, MappedGrid::radial(1e8, 80))) < 1e-15);
}

// alpha = 1 is the Coulomb case: by Plancherel the quadratic form becomes a
// hydrogen-type ground-state problem, whose energy gives rho = 1/2 in d = 3
// and rho = 1 in d = 2.
TEST_CASE("coulomb cases in d = 2, 3 (radial reduction)") {
    const auto d3 = rho_eigen(3, 1.0, 2.0, 1e8, 400, 1e-10, 800);
    CHECK(std::abs(d3.value - 0.5) < 2e-5);
    const auto d2 = rho_eigen(2, 1.0, 2.0, 1e8, 400, 1e-10, 800);
    CHECK(std::abs(d2.value - 1.0) < 2e-5);
}

TEST_CASE("fractional dispersion lowers the weight decay") {
    const auto classical = rho_eigen(1, 0.5, 2.0, 1e8, 400, 1e-10, 800);
    const auto frac = rho_eigen(1, 0.5, 1.5, 1e8, 400, 1e-10, 800);
    CHECK(frac.value > classical.value);
    CHECK(frac.beta_l == 1.5);
}

TEST_CASE("json record carries discretization metadata") {
    RhoOptions opts;
    opts.grid_points = 200;
    opts.richardson = true;
    const auto r = rho_eigen(1, 0.5, 2.0, opts);
    REQUIRE(r.richardson_pair.has_value());
    const auto j = to_json(r);
    for (const char* key : {"value", "grid_radius", "grid_points", "power_iterations", "residual",
                            "richardson_pair", "tail_mass"})
        CHECK(j.contains(key));
}

TEST_CASE("functional algebra") {
    const auto f = functionals_from_rho(1.0, 0.5);
    CHECK(f.E_A1 == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(f.E == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(f.E2 == doctest::Approx(0.25).epsilon(1e-15));
    for (double a : {0.1, 0.7, 1.3, 1.9}) CHECK(functionals_from_rho(a, 1.0).E_A1 == 1.0);

    const double rho = rho_eigen(1, 0.5, 2.0, 1e8, 500, 1e-10, 500).value;
    const auto g = functionals_from_rho(0.5, rho);
    CHECK(std::abs(g.E - std::pow(2.0, -0.5 / (0.5 - 2.0)) * g.E_A1) < 1e-12 * g.E);
    CHECK(std::abs(g.E2 - e2_ratio(0.5) * g.E) < 1e-12 * g.E2);

    CHECK(functional_scaling(1.0, 4.0, Functional::E).factor == doctest::Approx(16.0));
    CHECK(functional_scaling(1.0, 0.5, Functional::EA).factor == doctest::Approx(2.0));
    CHECK(functional_scaling(1.0, 4.0, Functional::E2).factor == doctest::Approx(16.0));
    CHECK(functional_scaling_gamma(0.4, 2.0, Functional::E).factor ==
          doctest::Approx(std::pow(2.0, 2.5)));
    for (double a : {0.2, 1.0, 1.8}) {
        CHECK(functional_scaling(a, 1.0, Functional::E).factor == 1.0);
        CHECK(functional_scaling(a, 1.0, Functional::EA).factor == 1.0);
    }
    CHECK(functional_scaling_gamma(0.3, 1.0, Functional::E).factor == 1.0);
    CHECK(e2_ratio_gamma(0.4) == doctest::Approx(std::pow(2.0, -1.5)));
}

TEST_CASE("exponent identity") {
    CHECK(std::abs(exponent_identity_residual(1.0, 0.5)) < 1e-12);
    CHECK(std::abs(exponent_identity_residual(0.3, 2.7)) < 1e-12);
    CHECK(std::abs(exponent_identity_residual(1.9, 0.01)) < 1e-10);
    std::mt19937_64 gen(99);
    std::uniform_real_distribution<double> a(1e-6, 2.0 - 1e-6), lr(std::log(1e-3), std::log(1e3));
    for (int k = 0; k < 100; ++k) CHECK(std::abs(exponent_identity_residual(a(gen), std::exp(lr(gen)))) < 1e-10);
}
