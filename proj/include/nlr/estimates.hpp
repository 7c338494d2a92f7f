#pragma once

#include "nlr/parabolic.hpp"
#include "nlr/rng.hpp"

#include <vector>

namespace nlr {

// ---------------------------------------------------------------------------
// L^infty bootstrap machinery
// ---------------------------------------------------------------------------

/// sigma(r) = p (n+2) / (2 [r (2p - pn + n) + np]).
double moser_sigma(int n, double p, double r);
/// Contraction factor theta = 1 - c2 / (2 c2 + c3), c2 = 2p - pn + n, c3 = np.
double moser_theta(int n, double p);
/// beta = [2nr - (n-2)(2r-1)p] / [(n+2)(2r-1)p].
double moser_beta(int n, double p, double r);
/// rho(r) = [2nr - (n-2)(2r-1)p] / [2r(p(n+2)+n) - 2n(2r-1)p].
double moser_rho(int n, double p, double r);

struct MoserReport {
    int n = 0;
    double p = 0.0, q = 0.0;  // 1/p + 1/q = 1
    double h = 0.0;
    double theta = 0.0;
    std::vector<double> sigma_values;    // sigma(2^k h), k = 0..k_max
    std::vector<double> bound_sequence;  // U_{2^{k+1} h} per the recurrence
    double lambda1 = 0.0, lambda2 = 0.0;             // partial sums
    double lambda1_limit = 0.0, lambda2_limit = 0.0; // sigma(h)/(1-theta), sigma(2h)/(1-theta)^2
};

MoserReport moser_bounds(int n, double p, double h, std::size_t k_max, double C2, double f_norm,
                         double U_h);

// ---------------------------------------------------------------------------
// Domain constants
// ---------------------------------------------------------------------------

struct ConstantsTable {
    double C1 = 0.0;      // Poincare-Sobolev constant, 1/lambda
    double lambda = 0.0;  // principal Dirichlet eigenvalue
    double omega_n = 0.0;
};

ConstantsTable poincare_constants(const RadialMesh& mesh, double tol = 1e-12,
                                  std::size_t max_iter = 10000);

/// Principal eigenpair of the discrete radial Dirichlet Laplacian pencil
/// K_1 x = lambda M x by inverse power iteration. The eigenvector is
/// normalized to unit maximum.
std::pair<double, Field> principal_eigenpair(const MeshPtr& mesh, double tol = 1e-12,
                                             std::size_t max_iter = 10000);

// ---------------------------------------------------------------------------
// Absorbing set
// ---------------------------------------------------------------------------

struct AbsorbingSetReport {
    double a1 = 0.0, a2 = 0.0, a3 = 0.0;
    double t0 = 0.0;
    double rho0 = 0.0;
    double radius = 0.0;  // (a3/t0 + a2) exp(a1)
    double lambda = 0.0;
    double K = 0.0;  // gradient-transfer constant
};

/// a3 = t0 lambda |f|_2^2 / m^2 + rho0^2 / m, a2 = (t0/m) |f|_2^2,
/// a1 = (1/m) (K ||g||_{H1})^2 |a'|_inf^2 a3.
AbsorbingSetReport absorbing_radius(const ProblemSpec& problem, double rho0, double t0, double K);

/// Largest observed ratio |grad l_r(u)|_2 / (||g||_{H1} |grad u|_2) over
/// randomized smooth fields, inflated by 5%. Fit once, then fixed.
double fit_gradient_transfer_constant(const ProblemSpec& problem, std::size_t samples, Rng& rng);

/// Random smooth field vanishing at the boundary (low-order Fourier sine
/// modes); shared by the fitting and property tests.
Field random_smooth_field(const MeshPtr& mesh, Rng& rng, std::size_t modes = 4);

// ---------------------------------------------------------------------------
// Gronwall uniqueness factor
// ---------------------------------------------------------------------------

struct GronwallFactor {
    std::vector<double> p_hat;  // per series time
    double integral = 0.0;      // trapezoid over the series times
};

/// p(t) = (1/m) (gamma |Omega|^{1/(n v 3)} |g|_2 ||u1(t)||_V)^2 evaluated on
/// the energy trace of the series.
GronwallFactor gronwall_factor(const TimeSeries& series, const ProblemSpec& problem);

}  // namespace nlr
