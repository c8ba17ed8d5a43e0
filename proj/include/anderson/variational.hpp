/**
 * @file variational.hpp
 * @brief The variational constant rho as the top eigenvalue of a weighted
 *        Riesz-kernel operator, and the exact power laws linking rho to the
 *        Schrodinger-type functionals E(R_alpha, A), E(R_alpha), E_2(R_alpha).
 *
 * rho is the largest eigenvalue of
 *     (K g)(xi) = int C |xi - eta|^{alpha - d} w(xi) w(eta) g(eta) d eta,
 *     w(xi) = (1 + |xi|^{beta_l})^{-1/2}.
 *
 * Discretization. The line is compactified by xi = tan(theta), which turns
 * the kernel into C |sin(theta - phi)|^{alpha-1} P(theta) P(phi) with
 * P = cos^{1-alpha} sec w. A uniform midpoint grid in theta then resolves both
 * the diagonal singularity and the algebraic tails. The singular factor is
 * integrated exactly over each pair of cells (Galerkin cell averages), with the
 * smooth ratio sin(u)/u evaluated at cell centres.
 *
 * For d = 2, 3 the problem is reduced to radial functions (the kernel is
 * rotation invariant and positivity improving, so the Perron eigenvector is
 * radial). In d = 3 the angular integral is elementary and the radial kernel
 * is the odd extension of a 1-D kernel; in d = 2 it is computed numerically
 * after subtracting its leading singularity.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <json.hpp>

namespace anderson::variational {

/// Dense symmetric matrix, row-major.
struct Matrix {
    int n = 0;
    std::vector<double> a;

    double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
    double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
};

/// Largest |x - y| among symmetric entries, relative to the largest entry.
double asymmetry(const Matrix& m);

/// Midpoint grid in theta for xi = tan(theta): theta in (-atan R, atan R)
/// for the line, (0, atan R) for the radial half line.
struct MappedGrid {
    std::vector<double> theta;
    double h = 0.0;
    bool half_line = false;

    static MappedGrid line(double radius, int m);
    static MappedGrid radial(double radius, int m);
    double node(int i) const;      ///< xi_i = tan(theta_i)
    double jacobian(int i) const;  ///< d xi / d theta at theta_i
};

struct PowerResult {
    double value = 0.0;
    std::vector<double> vector;  ///< unit 2-norm, positive orientation
    int iterations = 0;
    double residual = 0.0;       ///< ||A g - value g|| / ||g||
};

/// Power iteration for the top eigenpair of a symmetric matrix whose top
/// eigenvalue is simple and positive. Throws ConvergenceError on failure.
PowerResult power_iteration(const Matrix& m, std::vector<double> start, double tol,
                            int max_iters);

struct RhoEstimate {
    double value = 0.0;
    int d = 1;
    double alpha = 0.0;
    double beta_l = 2.0;
    double grid_radius = 0.0;
    int grid_points = 0;
    int power_iterations = 0;
    double residual = 0.0;
    double tolerance = 0.0;
    /// mu-mass beyond the grid radius weighted by 1/(1+|xi|^{beta_l}); a size
    /// indicator for the truncation, not a rigorous bound on the eigenvalue error.
    double tail_mass = 0.0;
    std::optional<std::pair<double, double>> richardson_pair;
    bool flat = false;
};

nlohmann::json to_json(const RhoEstimate& r);

struct RhoOptions {
    double grid_radius = 1e8;
    int grid_points = 1000;
    double tol = 1e-8;
    int max_iters = 500;
    bool richardson = false;  ///< also solve at 2m and report the pair
    int threads = 0;
};

/// Top eigenvalue for the Riesz kernel C_{d,alpha}|xi - eta|^{alpha-d}, d in {1,2,3}.
RhoEstimate rho_eigen(int d, double alpha, double beta_l, const RhoOptions& opts = {});
RhoEstimate rho_eigen(int d, double alpha, double beta_l, double radius, int m, double tol,
                      int max_iters);

/// Flat density (2 pi)^{-1} in d = 1 (white noise): a rank-one control case
/// whose eigenvalue is (2 pi)^{-1} int w^2 = 1/2 for beta_l = 2.
RhoEstimate rho_flat(double beta_l, const RhoOptions& opts = {});

/// The discretized operators themselves (exposed for symmetry and parity checks).
Matrix riesz_matrix(int d, double alpha, double beta_l, const MappedGrid& grid, int threads = 0);
Matrix flat_matrix(double beta_l, const MappedGrid& grid);

struct FunctionalValues {
    double alpha = 0.0;
    double E_A1 = 0.0;  ///< E(R_alpha, 1)
    double E = 0.0;     ///< E(R_alpha) = E(R_alpha, 1/2)
    double E2 = 0.0;    ///< E_2(R_alpha)
};

/// E_A1 = rho^{2/(2-alpha)}, E = 2^{alpha/(2-alpha)} E_A1, E2 = 2^{-alpha/(2-alpha)} E.
FunctionalValues functionals_from_rho(double alpha, double rho);

enum class Functional { E, E2, EA };

struct Scaling {
    double exponent = 0.0;
    double factor = 0.0;  ///< multiplier applied to the unscaled value
};

/// Riesz case: E(theta f) and E_2(theta f) scale by theta^{2/(2-alpha)};
/// E(f, A) = A^{alpha/(alpha-2)} E(f, 1).
Scaling functional_scaling(double alpha, double theta, Functional which);
/// Gamma case: E(theta Gamma) and E_2(theta Gamma) scale by theta^{1/H}.
Scaling functional_scaling_gamma(double hurst, double theta, Functional which);

/// E_2 / E = 2^{-alpha/(2-alpha)} (Riesz) and 2^{-(1-H)/H} (Gamma).
double e2_ratio(double alpha);
double e2_ratio_gamma(double hurst);

/// (2^{1-alpha} rho)^{1/(3-alpha)} - 2^{(2-3alpha)/(6-2alpha)} E(R_alpha)^{(2-alpha)/(6-2alpha)},
/// both sides evaluated in log space.
double exponent_identity_residual(double alpha, double rho);

}  // namespace anderson::variational
