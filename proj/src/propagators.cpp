#include "anderson/propagators.hpp"

#include <cmath>
#include <cstring>
#include <string>

#include "anderson/errors.hpp"

namespace anderson::propagators {

namespace {

void check_beta_l(double beta_l) {
    if (!(beta_l > 0.0 && beta_l <= 2.0))
        throw ParameterError("dispersion power beta_l must lie in (0, 2], got " +
                             std::to_string(beta_l));
}

// sin(x)/x, with a Taylor branch below 1e-4 where the quotient loses digits.
double sinc(double x) {
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

}  // namespace

EquationKind EquationKind::wave(double beta_l) {
    check_beta_l(beta_l);
    return {Equation::Wave, beta_l};
}

EquationKind EquationKind::heat(double beta_l) {
    check_beta_l(beta_l);
    return {Equation::Heat, beta_l};
}

const char* to_string(Equation e) { return e == Equation::Wave ? "wave" : "heat"; }

Equation equation_from_string(const char* s) {
    if (std::strcmp(s, "wave") == 0) return Equation::Wave;
    if (std::strcmp(s, "heat") == 0) return Equation::Heat;
    throw ParameterError(std::string("unknown equation '") + s + "' (expected wave or heat)");
}

double fourier_green_sq(const EquationKind& eq, double t, double r) {
    if (t < 0.0 || r < 0.0) throw ParameterError("fourier_green_sq needs t >= 0 and r >= 0");
    if (eq.kind == Equation::Heat) return std::exp(-t * std::pow(r, eq.beta_l));
    // sin(t k)/k = t sinc(t k) with k = r^{beta_l/2}
    const double k = std::pow(r, 0.5 * eq.beta_l);
    const double s = t * sinc(t * k);
    return s * s;
}

double laplace_green_sq(const EquationKind& eq, double beta, double r) {
    if (!(beta > 0.0)) throw ParameterError("Laplace parameter beta must be positive");
    if (r < 0.0) throw ParameterError("laplace_green_sq needs r >= 0");
    const double rb = std::pow(r, eq.beta_l);
    if (eq.kind == Equation::Heat) return 1.0 / (beta + rb);
    // Same operation order as the link residual, so the identity holds bit-for-bit.
    return 1.0 / (0.25 * beta * beta + rb) / (2.0 * beta);
}

double wave_heat_link_residual(double beta, double r, double beta_l) {
    const double wave = laplace_green_sq(EquationKind::wave(beta_l), beta, r);
    const double heat = laplace_green_sq(EquationKind::heat(beta_l), 0.25 * beta * beta, r);
    return wave - heat / (2.0 * beta);
}

}  // namespace anderson::propagators
