/**
 * @file quadrature.hpp
 * @brief Deterministic 1-D quadrature used by the oracle paths and checks.
 *
 * Thin wrappers over Boost.Math so call sites state intent (finite interval
 * with endpoint singularities, half line, oscillatory half line) rather than
 * rule details.
 */
#pragma once

#include <functional>

namespace anderson::quadrature {

using Integrand = std::function<double(double)>;

/// Finite interval; tolerates integrable endpoint singularities (tanh-sinh).
double finite(const Integrand& f, double a, double b, double rel_tol = 1e-12);

/// Smooth finite interval, adaptive Gauss-Kronrod (61 points).
double smooth(const Integrand& f, double a, double b, double rel_tol = 1e-12,
              unsigned max_depth = 20);

/// [a, inf); f must decay (exp-sinh).
double half_line(const Integrand& f, double a = 0.0, double rel_tol = 1e-12);

/// Integral over (0, inf) of f(x) sin(omega x) and f(x) cos(omega x), f smooth
/// and slowly decaying (Ooura double-exponential Fourier rules).
double fourier_sin(const Integrand& f, double omega, double rel_tol = 1e-10);
double fourier_cos(const Integrand& f, double omega, double rel_tol = 1e-10);

}  // namespace anderson::quadrature
