/**
 * @file propagators.hpp
 * @brief Squared Fourier symbols of the wave and heat Green functions and
 *        their time-Laplace transforms.
 *
 * With dispersion power beta_l the Laplacian is replaced by -(-Delta)^{beta_l/2};
 * every formula uses r^{beta_l} where the classical case has |xi|^2.
 * The heat equation carries the factor 1/2 in front of the Laplacian, so
 * |F G^h(t)(xi)|^2 = exp(-t r^{beta_l}).
 */
#pragma once

namespace anderson::propagators {

enum class Equation { Wave, Heat };

struct EquationKind {
    Equation kind = Equation::Heat;
    double beta_l = 2.0;

    static EquationKind wave(double beta_l = 2.0);
    static EquationKind heat(double beta_l = 2.0);

    bool operator==(const EquationKind&) const = default;
};

const char* to_string(Equation e);
Equation equation_from_string(const char* s);

/// Wave: sin^2(t r^{beta_l/2}) / r^{beta_l}  (t^2 at r = 0).  Heat: exp(-t r^{beta_l}).
double fourier_green_sq(const EquationKind& eq, double t, double r);

/// Integral over t in (0, inf) of exp(-beta t) fourier_green_sq(eq, t, r).
/// Wave: 1/(2 beta) / (beta^2/4 + r^{beta_l}).  Heat: 1/(beta + r^{beta_l}).
double laplace_green_sq(const EquationKind& eq, double beta, double r);

/// I^w_beta(r) - (1/(2 beta)) I^h_{beta^2/4}(r); identically zero.
double wave_heat_link_residual(double beta, double r, double beta_l = 2.0);

}  // namespace anderson::propagators
