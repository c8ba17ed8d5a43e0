/**
 * @file chaos.hpp
 * @brief Chaos-expansion terms J_n(t) of the second moment, their
 *        exponential-time averages, and the truncated second-moment series.
 *
 * J_n(t) is an n*d-dimensional spectral integral over the ordered time simplex
 * (see jn_fixed_time). Its average against an independent unit exponential
 * time tau has the product form
 *
 *     E[J_n(tau)] = int prod_i I_1(eta_i) mu(dxi_1)...mu(dxi_n),
 *     eta_i = xi_1 + ... + xi_i,
 *
 * with I_1 the Laplace transform of the squared propagator at 1. For the heat
 * equation this is T_n; for the wave equation it equals 2^{n(1 - alpha)} T_n.
 *
 * Sampling works in the partial-sum coordinates eta_i. Each eta_i is drawn
 * from an equal-weight mixture of (a) eta_{i-1} plus an increment with radial
 * density proportional to r^{alpha-1} / (1 + (r/s)^{beta_l}), and (b) the same
 * law centred at the origin. Component (a) matches the singularity of mu,
 * component (b) the decay of the propagator; together they keep every
 * per-step weight bounded.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "anderson/estimate.hpp"
#include "anderson/propagators.hpp"
#include "anderson/spectral.hpp"

namespace anderson::chaos {

using propagators::EquationKind;
using spectral::KernelSpec;

/// Above this order the weight variance grows quickly; estimates are flagged.
inline constexpr int kMaxConfidentOrder = 6;

struct ChaosQuery {
    EquationKind eq;
    KernelSpec kernel;
    int n = 1;
    std::optional<double> t;  ///< absent for exponential-time averages
};

/// Throws ParameterError unless Dalang's condition holds for (kernel, eq).
void validate(const ChaosQuery& q);

/// a = 3 - 2 alpha/beta_l (wave) or 1 - alpha/beta_l (heat); J_n(t) = t^{a n} J_n(1).
double scaling_exponent(const EquationKind& eq, double alpha_eff);

/// Monte-Carlo estimate of E[J_n(tau)], tau ~ Exp(1).
MCEstimate jn_exp_time_mc(const ChaosQuery& q, std::uint64_t n_samples, std::uint64_t seed,
                          int threads = 0);

/// Monte-Carlo estimate of J_n(t). J_0 = 1 exactly and J_n(0) = 0 for n >= 1.
///
/// Time gaps (t_2 - t_1, ..., t - t_n) are drawn from t * Dirichlet(1, a, ..., a)
/// and each increment's proposal is rescaled to the gap, which removes the
/// u^{a-1} singularity of the inner spectral integral at small gaps.
MCEstimate jn_fixed_time(const ChaosQuery& q, std::uint64_t n_samples, std::uint64_t seed,
                         int threads = 0);

/// Deterministic J_1(t) by nested quadrature.
double j1_quadrature(const EquationKind& eq, const KernelSpec& kernel, double t);

/// Deterministic int_0^inf e^{-beta t} J_1(t) dt = (1/beta) int I_beta dmu.
double j1_laplace_quadrature(const EquationKind& eq, const KernelSpec& kernel, double beta);

struct LogRatePoint {
    int n = 0;
    double log_rate = 0.0;  ///< (1/n) log T_n-hat
    double std_error = 0.0; ///< delta-method error of log_rate
    MCEstimate tn;
};

/// Empirical (1/n) log T_n for n = 1..n_max (heat, classical Laplacian).
std::vector<LogRatePoint> log_rate_tn(const KernelSpec& kernel, int n_max,
                                      std::uint64_t samples_per_n, std::uint64_t seed,
                                      int threads = 0);
std::vector<LogRatePoint> log_rate_tn(int d, double alpha, int n_max,
                                      std::uint64_t samples_per_n, std::uint64_t seed,
                                      int threads = 0);

/// 1 + sum_{n=1}^{n_max} J_n(t)-hat, independent streams per n, errors added
/// in quadrature. The tail beyond n_max is not bounded.
MCEstimate second_moment_truncated(const EquationKind& eq, const KernelSpec& kernel, double t,
                                   int n_max, std::uint64_t n_samples, std::uint64_t seed,
                                   int threads = 0);

/// Least-squares slope of log h against t over the largest-t half of the
/// samples; estimates limsup (1/t) log h(t) for non-decreasing h.
double growth_exponent_estimate(std::span<const std::pair<double, double>> samples);

}  // namespace anderson::chaos
