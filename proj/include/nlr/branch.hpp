#pragma once

#include "nlr/estimates.hpp"
#include "nlr/stationary.hpp"

#include <vector>

namespace nlr {

struct UniquenessReport {
    double lhs = 0.0;  // C1 |g|_2 |f|_2 |a'|_{inf,[-eps, mu_d+eps]} / a(mu_d)^2
    bool holds = false;
    double C1 = 0.0;
    double epsilon = 0.0;
    double mu_d = 0.0;
    double aprime_inf = 0.0;
};

/// epsilon <= 0 selects the default 1e-3 * mu_d with floor 1e-6.
UniquenessReport uniqueness_condition(const ProblemSpec& problem, double mu_d,
                                      double epsilon = 0.0);

struct BranchEntry {
    double r = 0.0;
    StationarySolution solution;
    bool lr_within_mu_d = true;  // 0 <= l_r(u_r) <= mu_d nodewise (reported, not enforced)
};

struct SolutionBranch {
    std::vector<BranchEntry> entries;
    std::vector<bool> monotone_flags;   // entry j vs j+1 nodewise nondecrease
    double endpoint_r0_distance = 0.0;  // L2 distance to phi / a(0)
    double endpoint_rd_distance = 0.0;  // L2 distance to smallest-root u_d
    double mu_d = 0.0;                  // smallest root used for the endpoint and oli1 check
    bool all_converged = true;
};

struct BranchOptions {
    double tol = 1e-10;
    double damping = 0.5;
    std::size_t max_iter = 400;
    double monotone_slack = -1.0;  // < 0 selects 1e-8 * max |u_d|
    bool warm_start = true;        // false re-seeds every radius from phi / a(0)
};

/// Traces r -> u_r over the given increasing radii (first 0, last d), warm
/// starting from the previous solution; fills per-pair monotone flags and
/// the endpoint discrepancies against independent u_0 and u_d solves.
SolutionBranch trace_branch(const ProblemSpec& problem, const std::vector<double>& r_grid,
                            const BranchOptions& opts = {});

std::vector<double> uniform_r_grid(double d, std::size_t points = 33);

}  // namespace nlr
