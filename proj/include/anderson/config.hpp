/**
 * @file config.hpp
 * @brief Run configuration and its flat "key = value" text form.
 *
 * Precedence when the CLI assembles a config: command-line flags, then the
 * config file (--config or $ANDERSON_CONFIG), then the defaults below.
 */
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "anderson/propagators.hpp"
#include "anderson/spectral.hpp"

namespace anderson {

struct RunConfig {
    std::string command = "lyapunov";  ///< lyapunov | chaos | rho | verify | ml

    // Noise kernel (validated when kernel() is called).
    std::string family = "white";  ///< riesz | fractional | white
    int d = 1;
    double alpha = 0.5;
    double hurst = 0.375;

    std::string eq = "heat";  ///< wave | heat
    double beta_l = 2.0;

    int n = 4;                ///< chaos order (largest order for the chaos table)
    std::optional<double> t;  ///< fixed time; absent means exponential time
    std::uint64_t seed = 20240601;
    std::uint64_t samples = 200000;

    double grid_radius = 1e8;
    int grid_points = 1000;
    double tol = 1e-8;

    std::optional<double> rho;
    std::optional<double> e_gamma;

    // Mittag-Leffler command.
    double ml_a = 1.0;
    double ml_x = 1.0;
    std::optional<double> ml_c;

    std::string format = "table";  ///< json | csv | table
    std::optional<std::string> out;
    int threads = 0;               ///< 0 = all logical cores

    spectral::KernelSpec kernel() const;
    propagators::EquationKind equation() const;

    /// Throws ParameterError for unknown enum values or out-of-range numbers.
    void validate() const;

    bool operator==(const RunConfig&) const = default;
};

std::map<std::string, std::string> to_key_values(const RunConfig& c);
/// Applies the given keys on top of `base`; unknown keys are a ParameterError.
RunConfig apply_key_values(RunConfig base, const std::map<std::string, std::string>& kv);

/// "key = value" lines; '#' starts a comment; values may be double-quoted.
std::string to_text(const RunConfig& c);
std::map<std::string, std::string> parse_config_text(const std::string& text);
std::map<std::string, std::string> load_config_file(const std::string& path);

}  // namespace anderson
