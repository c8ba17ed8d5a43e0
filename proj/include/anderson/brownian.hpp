/**
 * @file brownian.hpp
 * @brief Path-space oracle for T_n through the additive functional
 *        zeta(tau) = int_0^tau |B_s|^{-alpha} ds of a Brownian motion.
 *
 * The motion has generator Delta (coordinate variance 2 per unit time), the
 * normalization under which E[zeta(tau)^n] / n! equals the Fourier-side T_n
 * built from 1/(1 + |xi|^2).
 */
#pragma once

#include <cstdint>

#include "anderson/estimate.hpp"

namespace anderson::brownian {

struct OracleOptions {
    double time_step = 0.1;    ///< coarse step; must lie in (0, 0.1]
    int max_refinements = 8;   ///< halvings near the origin
    int threads = 0;
};

/// Estimate of E[zeta(tau)^n] / n! with tau ~ Exp(1) independent of B.
///
/// A step of length L whose endpoints come within sqrt(L) of the origin is
/// split at a Brownian-bridge midpoint, recursively up to max_refinements times.
/// On every leaf the bridge is integrated out: the leaf contributes
/// L * E[|B_U|^{-alpha} | endpoints] with U drawn from Beta(1 - alpha/2, 1 - alpha/2)
/// and reweighted, which keeps each leaf bounded. For n = 1 the estimator is
/// unbiased; for n >= 2 it carries an O(time_step) conditioning bias.
MCEstimate tn_bm_oracle(int d, double alpha, int n, std::uint64_t n_paths, double time_step,
                        std::uint64_t seed);
MCEstimate tn_bm_oracle(int d, double alpha, int n, std::uint64_t n_paths, std::uint64_t seed,
                        const OracleOptions& opts);

/// E|m + s Z|^{-alpha} for Z standard normal in R^d, as a function of |m|^2 and s.
double gaussian_negative_moment(int d, double alpha, double m_sq, double s);

}  // namespace anderson::brownian
