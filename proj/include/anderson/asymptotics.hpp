/**
 * @file asymptotics.hpp
 * @brief Mittag-Leffler growth, the perturbed-heat rate lambda(beta), the
 *        fixed point 4 lambda(beta) = beta^2, and closed-form second-order
 *        Lyapunov exponents.
 */
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>

#include <json.hpp>

#include "anderson/propagators.hpp"
#include "anderson/spectral.hpp"

namespace anderson::asymptotics {

/// Above this value of x^{1/a} the asymptotic expansion replaces the series.
inline constexpr double kHandover = 30.0;

/// E_a(x) = sum_n x^n / Gamma(a n + 1), 0 < a < 4, x >= 0.
double mittag_leffler(double a, double x);
/// log E_a(x); stays finite where E_a overflows.
double log_mittag_leffler(double a, double x);

/// Branch-forced evaluations, for checking the handover band.
double mittag_leffler_series(double a, double x);
double mittag_leffler_asymptotic(double a, double x);

/// (1/t) log E_a((c t)^a); tends to c as t grows.
double at_growth(double a, double c, double t);

/// lambda(beta) for the perturbed heat family.
struct LambdaCase {
    enum class Kind { Riesz, Fractional } kind = Kind::Riesz;
    double exponent = 1.0;  ///< alpha (Riesz) or H (Fractional)
    double e2 = 0.0;        ///< E_2(f) or E_2(Gamma)

    static LambdaCase riesz(double alpha, double e2);
    static LambdaCase fractional(double hurst, double e2_gamma);
};

/// (2 beta)^{-2/(2-alpha)} E_2(f)  or  (2 beta)^{-1/H} E_2(Gamma).
double lambda_beta(const LambdaCase& c, double beta);

/// Root of 4 lambda(beta) = beta^2 on [lo, hi] by bisection (relative 1e-12).
/// Throws BracketingError when 4 lambda - beta^2 has no sign change.
double beta0_solve(const std::function<double(double)>& lambda, double lo, double hi);

/// Starting from [1, 1], widen geometrically until 4 lambda - beta^2 changes sign.
std::pair<double, double> beta0_bracket(const std::function<double(double)>& lambda);

struct PowerLawRoot {
    double bisection = 0.0;
    double closed_form = 0.0;  ///< (4c)^{1/(p+2)}
};

/// lambda(beta) = c beta^{-p}: solves by bisection, compares with the closed
/// form and throws ConvergenceError if they differ by more than 1e-10 relative.
PowerLawRoot beta0_power_law(double c, double p);

/// Inputs that cannot be derived from the kernel alone.
struct FunctionalInput {
    std::optional<double> rho;      ///< required for Riesz, defaults to 1/2 for white noise
    std::optional<double> e_gamma;  ///< E(Gamma), required for the fractional case
};

struct LyapunovReport {
    propagators::EquationKind eq;
    spectral::KernelSpec kernel = spectral::KernelSpec::white_noise();
    double a = 0.0;
    std::optional<double> gamma;
    std::optional<double> rho;
    std::optional<double> lambda2_thm2;  ///< exp(gamma / a)
    std::optional<double> lambda2_thm1;  ///< variational (upper) exponent
    std::optional<double> beta0_numeric;
    std::optional<double> consistency_gap;
    std::optional<double> e_gamma;
    double lambda2 = 0.0;  ///< headline value
    std::string lambda2_source;
    nlohmann::json extra = nlohmann::json::object();  ///< e.g. the rho solver record
};

LyapunovReport lambda2_closed_form(const propagators::EquationKind& eq,
                                   const spectral::KernelSpec& kernel, const FunctionalInput& in);

nlohmann::json to_json(const LyapunovReport& r);
/// Two-column plain-text table.
std::string render_table(const LyapunovReport& r);

}  // namespace anderson::asymptotics
