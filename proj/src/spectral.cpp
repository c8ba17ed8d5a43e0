#include "anderson/spectral.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "anderson/errors.hpp"
#include "anderson/json_io.hpp"

namespace anderson::spectral {

namespace {

std::string require(const std::map<std::string, std::string>& kv, const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end())
        throw ParameterError("kernel config is missing key '" + key + "'");
    return it->second;
}

}  // namespace

std::string to_string(Family f) {
    switch (f) {
        case Family::Riesz: return "riesz";
        case Family::FractionalH: return "fractional";
        case Family::WhiteNoise1D: return "white";
    }
    return "unknown";
}

Family family_from_string(const std::string& s) {
    if (s == "riesz") return Family::Riesz;
    if (s == "fractional") return Family::FractionalH;
    if (s == "white") return Family::WhiteNoise1D;
    throw ParameterError("unknown kernel family '" + s + "' (expected riesz, fractional or white)");
}

KernelSpec KernelSpec::riesz(int d, double alpha) {
    if (d < 1)
        throw ParameterError("Riesz kernel needs a positive dimension");
    if (!(alpha > 0.0 && alpha < d)) {
        std::ostringstream os;
        os << "Riesz kernel needs 0 < alpha < d, got alpha=" << alpha << " d=" << d;
        throw ParameterError(os.str());
    }
    return KernelSpec(Family::Riesz, d, alpha, 0.0);
}

KernelSpec KernelSpec::fractional(double hurst) {
    if (!(hurst > 0.25 && hurst < 0.5)) {
        std::ostringstream os;
        os << "fractional noise needs 1/4 < H < 1/2, got H=" << hurst;
        throw ParameterError(os.str());
    }
    return KernelSpec(Family::FractionalH, 1, 2.0 - 2.0 * hurst, hurst);
}

KernelSpec KernelSpec::white_noise() { return KernelSpec(Family::WhiteNoise1D, 1, 1.0, 0.0); }

double KernelSpec::alpha_eff() const {
    switch (family_) {
        case Family::Riesz: return alpha_;
        case Family::FractionalH: return 2.0 - 2.0 * hurst_;
        case Family::WhiteNoise1D: return 1.0;
    }
    return 0.0;
}

double KernelSpec::density_coefficient() const {
    switch (family_) {
        case Family::Riesz: return riesz_constant(d_, alpha_);
        case Family::FractionalH: return c_hurst(hurst_);
        case Family::WhiteNoise1D: return 0.5 / std::numbers::pi;
    }
    return 0.0;
}

double riesz_constant(int d, double alpha) {
    if (d < 1 || !(alpha > 0.0 && alpha < d)) {
        std::ostringstream os;
        os << "riesz_constant needs 0 < alpha < d, got alpha=" << alpha << " d=" << d;
        throw ParameterError(os.str());
    }
    const double half_d = 0.5 * d;
    return std::pow(std::numbers::pi, -half_d) * std::exp2(-alpha) *
           std::tgamma(half_d - 0.5 * alpha) / std::tgamma(0.5 * alpha);
}

double c_hurst(double hurst) {
    if (!(hurst > 0.25 && hurst < 0.5)) {
        std::ostringstream os;
        os << "c_H needs 1/4 < H < 1/2, got H=" << hurst;
        throw ParameterError(os.str());
    }
    return std::tgamma(2.0 * hurst + 1.0) * std::sin(std::numbers::pi * hurst) /
           (2.0 * std::numbers::pi);
}

bool dalang_check(double alpha_eff, double beta_l) { return alpha_eff < beta_l; }

double spectral_density_radial(const KernelSpec& spec, double r) {
    const double expo = spec.alpha_eff() - spec.dim();
    if (r == 0.0 && expo < 0.0)
        throw SingularityError("spectral density is singular at xi = 0");
    if (expo == 0.0) return spec.density_coefficient();
    return spec.density_coefficient() * std::pow(r, expo);
}

double spectral_density(const KernelSpec& spec, std::span<const double> xi) {
    if (static_cast<int>(xi.size()) != spec.dim())
        throw ParameterError("spectral_density: point dimension does not match kernel dimension");
    double r2 = 0.0;
    for (double x : xi) r2 += x * x;
    return spectral_density_radial(spec, std::sqrt(r2));
}

double unit_sphere_area(int d) {
    if (d < 1) throw ParameterError("unit_sphere_area needs d >= 1");
    // 2 pi^{d/2} / Gamma(d/2)
    return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

std::map<std::string, std::string> to_key_values(const KernelSpec& spec) {
    std::map<std::string, std::string> kv;
    kv["family"] = to_string(spec.family());
    kv["d"] = std::to_string(spec.dim());
    switch (spec.family()) {
        case Family::Riesz: kv["alpha"] = json_io::format_double(spec.alpha()); break;
        case Family::FractionalH: kv["H"] = json_io::format_double(spec.hurst()); break;
        case Family::WhiteNoise1D: break;
    }
    return kv;
}

KernelSpec from_key_values(const std::map<std::string, std::string>& kv) {
    const Family fam = family_from_string(require(kv, "family"));
    switch (fam) {
        case Family::Riesz: {
            const int d = static_cast<int>(json_io::parse_int(require(kv, "d")));
            return KernelSpec::riesz(d, json_io::parse_double(require(kv, "alpha")));
        }
        case Family::FractionalH:
            return KernelSpec::fractional(json_io::parse_double(require(kv, "H")));
        case Family::WhiteNoise1D:
            return KernelSpec::white_noise();
    }
    throw ParameterError("unreachable kernel family");
}

}  // namespace anderson::spectral
