#include "anderson/variational.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <omp.h>

#include "anderson/errors.hpp"
#include "anderson/estimate.hpp"
#include "anderson/quadrature.hpp"
#include "anderson/spectral.hpp"

namespace anderson::variational {

namespace {

constexpr double kPi = std::numbers::pi;

int workers(int threads) { return threads > 0 ? threads : default_threads(); }

// Average of |u + v|^e over u, v uniform on two cells of width h whose
// centres are k*h apart: second difference of the double antiderivative.
// For large k the difference cancels badly, so use the moment expansion of
// the triangular offset distribution (variance h^2/6, fourth moment h^4/15).
double cell_pair_power(int k, double h, double e) {
    k = std::abs(k);
    if (k >= 32) {
        const double x = 1.0 / k;
        const double c2 = e * (e - 1.0) / 2.0 / 6.0;
        const double c4 = e * (e - 1.0) * (e - 2.0) * (e - 3.0) / 24.0 / 15.0;
        return std::pow(k * h, e) * (1.0 + c2 * x * x + c4 * x * x * x * x);
    }
    auto f = [e](double u) { return std::pow(std::abs(u), e + 2.0) / ((e + 1.0) * (e + 2.0)); };
    return (f((k + 1) * h) - 2.0 * f(k * h) + f((k - 1) * h)) / (h * h);
}

// Same cell-pair average for -log|u|.
double cell_pair_neglog(int k, double h) {
    k = std::abs(k);
    if (k >= 32) {
        const double x = 1.0 / k;
        return -(std::log(k * h) - x * x / 12.0 - x * x * x * x / 60.0);
    }
    auto f = [](double u) {
        return u == 0.0 ? 0.0 : 0.5 * u * u * std::log(std::abs(u)) - 0.75 * u * u;
    };
    return -(f((k + 1) * h) - 2.0 * f(k * h) + f((k - 1) * h)) / (h * h);
}

double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

// sec(theta) / sqrt(1 + tan(theta)^beta): the weight w together with the
// Jacobian factor, finite up to theta = pi/2 for beta = 2.
double weighted_sec(double theta, double beta) {
    const double c = std::cos(theta);
    const double t = std::abs(std::tan(theta));
    if (beta == 2.0) return 1.0 / std::sqrt(c * c + std::sin(theta) * std::sin(theta));
    return 1.0 / (c * std::sqrt(1.0 + std::pow(t, beta)));
}

double tail_mass(int d, double alpha, double beta, double coef, double radius) {
    if (!std::isfinite(radius)) return 0.0;
    // int_R^inf r^{alpha-1} / (1 + r^beta) dr <= R^{alpha-beta} / (beta - alpha)
    return coef * spectral::unit_sphere_area(d) * std::pow(radius, alpha - beta) / (beta - alpha);
}

// 2 int_0^pi ((r-s)^2 + 4 r s sin^2(psi/2))^{(alpha-2)/2} d psi: the angular
// integral of |x - y|^{alpha-2} in the plane for |x| = r, |y| = s.
double planar_angular(double alpha, double r, double s) {
    const double dd = (r - s) * (r - s);
    const double rs4 = 4.0 * r * s;
    auto f = [&](double psi) {
        const double sn = std::sin(0.5 * psi);
        return std::pow(dd + rs4 * sn * sn, 0.5 * (alpha - 2.0));
    };
    return 2.0 * quadrature::finite(f, 0.0, kPi, 1e-10);
}

// Coefficient of the leading singularity of sqrt(rs) * planar_angular near r = s,
// in units of sigma(u) = |u|^{alpha-1}/(1-alpha) (or -log|u| at alpha = 1).
double planar_singular_coefficient(double alpha) {
    if (alpha > 1.0) return 0.0;
    return 2.0 * std::sqrt(kPi) * std::tgamma(0.5 * (3.0 - alpha)) / std::tgamma(1.0 - 0.5 * alpha);
}

double sigma(double alpha, double u) {
    if (alpha == 1.0) return -std::log(std::abs(u));
    return std::pow(std::abs(u), alpha - 1.0) / (1.0 - alpha);
}

void check_grid(double radius, int m) {
    if (!(radius > 0.0)) throw ParameterError("grid radius must be positive");
    if (m < 2) throw ParameterError("grid needs at least 2 points");
    if (m > 20000) throw ParameterError("grid_points above 20000 is not supported (dense matrix)");
}

std::vector<double> start_vector(const MappedGrid& g, int d) {
    // g0(xi) = 1/(1+|xi|^2), carried to the theta variable (radially for d >= 2).
    std::vector<double> v(g.theta.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double th = g.theta[i];
        v[i] = std::pow(std::abs(std::tan(th)), 0.5 * (d - 1)) * std::cos(th);
    }
    return v;
}

}  // namespace

double asymmetry(const Matrix& m) {
    double worst = 0.0, scale = 0.0;
    for (int i = 0; i < m.n; ++i) {
        for (int j = 0; j < m.n; ++j) {
            scale = std::max(scale, std::abs(m(i, j)));
            if (j > i) worst = std::max(worst, std::abs(m(i, j) - m(j, i)));
        }
    }
    return scale > 0.0 ? worst / scale : 0.0;
}

MappedGrid MappedGrid::line(double radius, int m) {
    check_grid(radius, m);
    MappedGrid g;
    const double top = std::isfinite(radius) ? std::atan(radius) : 0.5 * kPi;
    g.h = 2.0 * top / m;
    g.theta.resize(m);
    for (int i = 0; i < m; ++i) g.theta[i] = -top + g.h * (i + 0.5);
    return g;
}

MappedGrid MappedGrid::radial(double radius, int m) {
    check_grid(radius, m);
    MappedGrid g;
    g.half_line = true;
    const double top = std::isfinite(radius) ? std::atan(radius) : 0.5 * kPi;
    g.h = top / m;
    g.theta.resize(m);
    for (int i = 0; i < m; ++i) g.theta[i] = g.h * (i + 0.5);
    return g;
}

double MappedGrid::node(int i) const { return std::tan(theta[i]); }

double MappedGrid::jacobian(int i) const {
    const double c = std::cos(theta[i]);
    return 1.0 / (c * c);
}

PowerResult power_iteration(const Matrix& m, std::vector<double> v, double tol, int max_iters) {
    if (static_cast<int>(v.size()) != m.n) throw ParameterError("start vector has wrong length");
    if (!(tol > 0.0)) throw ParameterError("tolerance must be positive");
    if (max_iters < 1) throw ParameterError("max_iters must be positive");
    auto normalize = [](std::vector<double>& x) {
        double s = 0.0;
        for (double xi : x) s += xi * xi;
        s = std::sqrt(s);
        if (!(s > 0.0)) throw ParameterError("power iteration hit a zero vector");
        for (double& xi : x) xi /= s;
    };
    normalize(v);
    std::vector<double> w(v.size());
    PowerResult out;
    double last = 0.0;
    for (int it = 1; it <= max_iters; ++it) {
        const int n = m.n;
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i) {
            const double* row = &m.a[static_cast<std::size_t>(i) * n];
            double s = 0.0;
            for (int j = 0; j < n; ++j) s += row[j] * v[j];
            w[i] = s;
        }
        double lambda = 0.0;
        for (int i = 0; i < n; ++i) lambda += v[i] * w[i];
        double res = 0.0;
        for (int i = 0; i < n; ++i) res += (w[i] - lambda * v[i]) * (w[i] - lambda * v[i]);
        res = std::sqrt(res);
        out.value = lambda;
        out.iterations = it;
        out.residual = res;
        if (res < tol) break;
        if (it == max_iters) {
            std::ostringstream os;
            os << "power iteration did not converge in " << max_iters
               << " iterations (residual " << res << ")";
            throw ConvergenceError(os.str(), res);
        }
        last = lambda;
        v.swap(w);
        normalize(v);
    }
    (void)last;
    // Orient the Perron vector positively.
    double sum = 0.0;
    for (double x : v) sum += x;
    if (sum < 0.0)
        for (double& x : v) x = -x;
    out.vector = std::move(v);
    return out;
}

Matrix riesz_matrix(int d, double alpha, double beta, const MappedGrid& g, int threads) {
    const int m = static_cast<int>(g.theta.size());
    const double coef = spectral::riesz_constant(d, alpha);
    const double h = g.h;
    std::vector<double> p(m), ws(m);
    for (int i = 0; i < m; ++i) {
        ws[i] = weighted_sec(g.theta[i], beta);
        p[i] = std::pow(std::cos(g.theta[i]), 1.0 - alpha) * ws[i];
    }
    Matrix a;
    a.n = m;
    a.a.assign(static_cast<std::size_t>(m) * m, 0.0);

    // Galerkin averages of the singular factor depend only on the index offset.
    const int span = 2 * m + 1;
    std::vector<double> avg(span);
    for (int k = 0; k < span; ++k)
        avg[k] = alpha == 1.0 ? cell_pair_neglog(k, h) : cell_pair_power(k, h, alpha - 1.0);
    auto singular = [&](int k, double gap) {
        // cell average of |sin(gap)|^{alpha-1} (or -log|sin(gap)|)
        if (alpha == 1.0) return avg[k] - std::log(std::abs(sinc(gap)));
        return avg[k] * std::pow(std::abs(sinc(gap)), alpha - 1.0);
    };

    if (d == 1) {
        if (g.half_line) throw ParameterError("d = 1 uses the full-line grid");
#pragma omp parallel for schedule(static) num_threads(workers(threads))
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                a(i, j) = coef * h * singular(std::abs(i - j), g.theta[i] - g.theta[j]) * p[i] * p[j];
        return a;
    }
    if (!g.half_line) throw ParameterError("d >= 2 uses the radial grid");

    if (d == 3) {
        // 2 pi C [sigma(r - s) - sigma(r + s)] after the angular integration.
        const double pre = 2.0 * kPi * coef / (alpha == 1.0 ? 1.0 : 1.0 - alpha);
#pragma omp parallel for schedule(static) num_threads(workers(threads))
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                const double minus = singular(std::abs(i - j), g.theta[i] - g.theta[j]);
                const double plus = singular(i + j + 1, g.theta[i] + g.theta[j]);
                a(i, j) = pre * h * (minus - plus) * p[i] * p[j];
            }
        return a;
    }

    if (d == 2) {
        const double lam = planar_singular_coefficient(alpha);
        const double pre = alpha == 1.0 ? lam : lam / (1.0 - alpha);
        std::vector<double> r(m);
        for (int i = 0; i < m; ++i) r[i] = g.node(i);
        auto remainder = [&](double x, double y) {
            const double full = std::sqrt(x * y) * planar_angular(alpha, x, y);
            return lam == 0.0 ? full : full - lam * sigma(alpha, x - y);
        };
#pragma omp parallel for schedule(dynamic, 4) num_threads(workers(threads))
        for (int i = 0; i < m; ++i)
            for (int j = i; j < m; ++j) {
                double value = 0.0;
                if (lam != 0.0) {
                    value += pre * singular(std::abs(i - j), g.theta[i] - g.theta[j]) * p[i] * p[j];
                    if (alpha == 1.0)  // -log|tan - tan| = -log|sin(.)| + log cos + log cos
                        value += lam * (std::log(std::cos(g.theta[i])) + std::log(std::cos(g.theta[j]))) *
                                 p[i] * p[j];
                }
                const double y = i == j ? r[i] * (1.0 + 1e-6) : r[j];
                value += remainder(r[i], y) * ws[i] * ws[j];
                a(i, j) = coef * h * value;
                a(j, i) = a(i, j);
            }
        return a;
    }
    throw ParameterError("rho_eigen supports d in {1, 2, 3}");
}

Matrix flat_matrix(double beta, const MappedGrid& g) {
    const int m = static_cast<int>(g.theta.size());
    std::vector<double> q(m);
    for (int i = 0; i < m; ++i) q[i] = weighted_sec(g.theta[i], beta);
    Matrix a;
    a.n = m;
    a.a.resize(static_cast<std::size_t>(m) * m);
    const double c = g.h / (2.0 * kPi);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) a(i, j) = c * q[i] * q[j];
    return a;
}

namespace {

RhoEstimate solve_once(int d, double alpha, double beta, const RhoOptions& o, int m, bool flat) {
    const MappedGrid g = d == 1 ? MappedGrid::line(o.grid_radius, m) : MappedGrid::radial(o.grid_radius, m);
    const Matrix a = flat ? flat_matrix(beta, g) : riesz_matrix(d, alpha, beta, g, o.threads);
    const PowerResult pr = power_iteration(a, start_vector(g, d), o.tol, o.max_iters);
    RhoEstimate r;
    r.value = pr.value;
    r.d = d;
    r.alpha = alpha;
    r.beta_l = beta;
    r.grid_radius = o.grid_radius;
    r.grid_points = m;
    r.power_iterations = pr.iterations;
    r.residual = pr.residual;
    r.tolerance = o.tol;
    r.flat = flat;
    const double coef = flat ? 1.0 / (2.0 * kPi) : spectral::riesz_constant(d, alpha);
    r.tail_mass = tail_mass(d, alpha, beta, coef, o.grid_radius);
    return r;
}

RhoEstimate solve(int d, double alpha, double beta, const RhoOptions& o, bool flat) {
    RhoEstimate r = solve_once(d, alpha, beta, o, o.grid_points, flat);
    if (o.richardson) {
        const RhoEstimate fine = solve_once(d, alpha, beta, o, 2 * o.grid_points, flat);
        r.richardson_pair = std::make_pair(r.value, fine.value);
    }
    return r;
}

}  // namespace

RhoEstimate rho_eigen(int d, double alpha, double beta, const RhoOptions& o) {
    if (d < 1 || d > 3) throw ParameterError("rho_eigen supports d in {1, 2, 3}");
    if (!(beta > 0.0 && beta <= 2.0)) throw ParameterError("beta_l must lie in (0, 2]");
    if (!(alpha > 0.0 && alpha < d))
        throw ParameterError("Riesz order must satisfy 0 < alpha < d");
    if (!spectral::dalang_check(alpha, beta)) {
        std::ostringstream os;
        os << "Dalang's condition fails: alpha=" << alpha << " must be below beta_l=" << beta;
        throw ParameterError(os.str());
    }
    return solve(d, alpha, beta, o, false);
}

RhoEstimate rho_eigen(int d, double alpha, double beta, double radius, int m, double tol,
                      int max_iters) {
    RhoOptions o;
    o.grid_radius = radius;
    o.grid_points = m;
    o.tol = tol;
    o.max_iters = max_iters;
    return rho_eigen(d, alpha, beta, o);
}

RhoEstimate rho_flat(double beta, const RhoOptions& o) {
    if (!(beta > 1.0 && beta <= 2.0))
        throw ParameterError("flat density needs beta_l in (1, 2] (Dalang with alpha_eff = 1)");
    return solve(1, 1.0, beta, o, true);
}

nlohmann::json to_json(const RhoEstimate& r) {
    nlohmann::json j;
    j["value"] = r.value;
    j["kernel"] = r.flat ? "flat" : "riesz";
    j["d"] = r.d;
    j["alpha"] = r.alpha;
    j["beta_l"] = r.beta_l;
    j["grid_radius"] = r.grid_radius;
    j["grid_points"] = r.grid_points;
    j["grid"] = "tan-mapped midpoint, Galerkin cell averages";
    j["power_iterations"] = r.power_iterations;
    j["residual"] = r.residual;
    j["tolerance"] = r.tolerance;
    j["tail_mass"] = r.tail_mass;
    if (r.richardson_pair)
        j["richardson_pair"] = {r.richardson_pair->first, r.richardson_pair->second};
    else
        j["richardson_pair"] = nullptr;
    return j;
}

FunctionalValues functionals_from_rho(double alpha, double rho) {
    if (!(alpha > 0.0 && alpha < 2.0)) throw ParameterError("functionals need 0 < alpha < 2");
    if (!(rho > 0.0)) throw ParameterError("rho must be positive");
    FunctionalValues f;
    f.alpha = alpha;
    f.E_A1 = std::pow(rho, 2.0 / (2.0 - alpha));
    f.E = std::pow(2.0, -alpha / (alpha - 2.0)) * f.E_A1;
    f.E2 = std::pow(2.0, -alpha / (2.0 - alpha)) * f.E;
    return f;
}

Scaling functional_scaling(double alpha, double theta, Functional which) {
    if (!(alpha > 0.0 && alpha < 2.0)) throw ParameterError("scaling needs 0 < alpha < 2");
    if (!(theta > 0.0)) throw ParameterError("scaling parameter must be positive");
    Scaling s;
    s.exponent = which == Functional::EA ? alpha / (alpha - 2.0) : 2.0 / (2.0 - alpha);
    s.factor = std::pow(theta, s.exponent);
    return s;
}

Scaling functional_scaling_gamma(double hurst, double theta, Functional which) {
    if (!(hurst > 0.25 && hurst < 0.5)) throw ParameterError("H must lie in (1/4, 1/2)");
    if (!(theta > 0.0)) throw ParameterError("scaling parameter must be positive");
    if (which == Functional::EA)
        throw ParameterError("the A-scaling is stated for Riesz kernels only");
    Scaling s;
    s.exponent = 1.0 / hurst;
    s.factor = std::pow(theta, s.exponent);
    return s;
}

double e2_ratio(double alpha) {
    if (!(alpha > 0.0 && alpha < 2.0)) throw ParameterError("ratio needs 0 < alpha < 2");
    return std::pow(2.0, -alpha / (2.0 - alpha));
}

double e2_ratio_gamma(double hurst) {
    if (!(hurst > 0.25 && hurst < 0.5)) throw ParameterError("H must lie in (1/4, 1/2)");
    return std::pow(2.0, -(1.0 - hurst) / hurst);
}

double exponent_identity_residual(double alpha, double rho) {
    if (!(alpha > 0.0 && alpha < 2.0)) throw ParameterError("identity needs 0 < alpha < 2");
    if (!(rho > 0.0)) throw ParameterError("rho must be positive");
    const double ln2 = std::log(2.0);
    const double lhs = ((1.0 - alpha) * ln2 + std::log(rho)) / (3.0 - alpha);
    // log E(R_alpha) = alpha/(2-alpha) log 2 + 2/(2-alpha) log rho
    const double log_e = alpha / (2.0 - alpha) * ln2 + 2.0 / (2.0 - alpha) * std::log(rho);
    const double rhs = (2.0 - 3.0 * alpha) / (6.0 - 2.0 * alpha) * ln2 +
                       (2.0 - alpha) / (6.0 - 2.0 * alpha) * log_e;
    return std::exp(lhs) - std::exp(rhs);
}

}  // namespace anderson::variational
