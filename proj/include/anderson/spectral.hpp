/**
 * @file spectral.hpp
 * @brief Spatial covariance families of the noise and their spectral measures.
 *
 * Every supported family has a spectral density of the form
 *     coefficient * |xi|^(alpha_eff - d)
 * on R^d, which is the only shape the downstream modules rely on.
 */
#pragma once

#include <map>
#include <span>
#include <string>

namespace anderson::spectral {

enum class Family { Riesz, FractionalH, WhiteNoise1D };

std::string to_string(Family f);
Family family_from_string(const std::string& s);

/// Noise covariance family with its parameters. Build through the factories,
/// which enforce the parameter ranges.
class KernelSpec {
public:
    static KernelSpec riesz(int d, double alpha);
    static KernelSpec fractional(double hurst);
    static KernelSpec white_noise();

    Family family() const { return family_; }
    int dim() const { return d_; }
    /// Riesz order alpha; meaningful only for the Riesz family.
    double alpha() const { return alpha_; }
    /// Hurst index; meaningful only for FractionalH.
    double hurst() const { return hurst_; }

    /// Scaling exponent of the spectral measure: mu(cA) = c^alpha_eff mu(A).
    double alpha_eff() const;
    /// Prefactor of the spectral density.
    double density_coefficient() const;
    /// True when the density blows up at the origin (alpha_eff < d).
    bool singular_at_origin() const { return alpha_eff() < d_; }

    bool operator==(const KernelSpec&) const = default;

private:
    KernelSpec(Family f, int d, double alpha, double hurst)
        : family_(f), d_(d), alpha_(alpha), hurst_(hurst) {}

    Family family_;
    int d_;
    double alpha_;
    double hurst_;
};

/// pi^{-d/2} 2^{-alpha} Gamma((d-alpha)/2) / Gamma(alpha/2).
double riesz_constant(int d, double alpha);

/// Gamma(2H+1) sin(pi H) / (2 pi), for 1/4 < H < 1/2.
double c_hurst(double hurst);

/// Dalang's condition for a scaling measure with exponent alpha_eff under
/// the dispersion -(-Delta)^{beta_l/2}: true iff alpha_eff < beta_l.
bool dalang_check(double alpha_eff, double beta_l = 2.0);

/// Density of mu at xi (length must equal spec.dim()).
double spectral_density(const KernelSpec& spec, std::span<const double> xi);

/// Radial form of the density, |xi| = r.
double spectral_density_radial(const KernelSpec& spec, double r);

/// Surface area of the unit sphere in R^d.
double unit_sphere_area(int d);

/// Flat key-value form: family, d, alpha, H.
std::map<std::string, std::string> to_key_values(const KernelSpec& spec);
KernelSpec from_key_values(const std::map<std::string, std::string>& kv);

}  // namespace anderson::spectral
