#pragma once

#include "nlr/stationary.hpp"

namespace nlr {

struct StabilityReport {
    double min_rayleigh = 0.0;  // min of G_{u_r}(phi) / |grad phi|_2^2
    bool stable = false;        // min_rayleigh >= -1e-8 * M
    double lower_bound_analytic = 0.0;
    std::size_t iterations = 0;
    bool eig_converged = false;
};

/// Assembles the discrete quadratic form of
///   G(phi) = int a(l_r(u_r)) |grad phi|^2 - int a'(l_r(u_r)) l_r(phi) u_r' phi'
/// (symmetric part of the nonlocal term) and minimizes its Rayleigh quotient
/// against |grad phi|_2^2 by inverse power iteration on the generalized
/// eigenproblem. aprime_inf_interval extends the |a'| sup used by the
/// analytic lower bound; mu_hi <= 0 falls back to the coefficient's working
/// interval.
StabilityReport stability_margin(const StationarySolution& u_r, const ProblemSpec& problem,
                                 double tol = 1e-10, double mu_hi = 0.0);

/// Value of the discrete form G at a given test field (for the envelope
/// property checks).
double stability_form_value(const StationarySolution& u_r, const ProblemSpec& problem,
                            const Field& phi);

/// Discrete |grad phi|_2^2 in the same cell-midpoint quadrature the form uses.
double gradient_form_value(const Field& phi);

}  // namespace nlr
