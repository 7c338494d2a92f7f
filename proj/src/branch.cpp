#include "nlr/branch.hpp"

#include <algorithm>
#include <cmath>

namespace nlr {

UniquenessReport uniqueness_condition(const ProblemSpec& problem, double mu_d, double epsilon) {
    if (mu_d < 0.0) throw std::invalid_argument("uniqueness_condition: mu_d must be >= 0");
    UniquenessReport rep;
    rep.mu_d = mu_d;
    rep.epsilon = epsilon > 0.0 ? epsilon : std::max(1e-3 * mu_d, 1e-6);
    rep.C1 = poincare_constants(*problem.mesh).C1;
    rep.aprime_inf = problem.coeff.sup_abs_derivative(-rep.epsilon, mu_d + rep.epsilon);
    const double a_mu = problem.coeff.a(mu_d);
    rep.lhs = rep.C1 * problem.kernel.l2_norm * norm_l2(problem.f) * rep.aprime_inf / (a_mu * a_mu);
    rep.holds = rep.lhs < 1.0;
    return rep;
}

std::vector<double> uniform_r_grid(double d, std::size_t points) {
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i)
        grid[i] = d * static_cast<double>(i) / static_cast<double>(points - 1);
    grid.front() = 0.0;
    grid.back() = d;
    return grid;
}

SolutionBranch trace_branch(const ProblemSpec& problem, const std::vector<double>& r_grid,
                            const BranchOptions& opts) {
    if (r_grid.size() < 2 || r_grid.front() != 0.0 || r_grid.back() != problem.mesh->d)
        throw std::invalid_argument("trace_branch: r_grid must cover [0, d]");
    for (std::size_t i = 1; i < r_grid.size(); ++i)
        if (!(r_grid[i] > r_grid[i - 1]))
            throw std::invalid_argument("trace_branch: r_grid must increase");

    const Field phi = solve_laplace(problem.f);
    const Field u_r0 = scale(1.0 / problem.coeff.a(0.0), phi);

    // Independent r = d endpoint: smallest root of mu a(mu) = l_d(phi).
    ProblemSpec pd(problem.mesh, problem.f, problem.kernel, problem.coeff, problem.mesh->d,
                   problem.u0);
    const RdEnumeration rd = enumerate_rd_solutions(pd);

    SolutionBranch branch;
    Field seed = u_r0;
    for (double r : r_grid) {
        ProblemSpec pr(problem.mesh, problem.f, problem.kernel, problem.coeff, r, problem.u0);
        BranchEntry entry;
        entry.r = r;
        entry.solution =
            picard_stationary(pr, opts.warm_start ? seed : u_r0, opts.damping, opts.tol,
                              opts.max_iter);
        if (!entry.solution.converged) branch.all_converged = false;
        if (opts.warm_start) seed = entry.solution.u;
        branch.entries.push_back(std::move(entry));
    }

    if (!rd.roots.empty()) {
        branch.mu_d = rd.roots.front().mu;
        branch.endpoint_rd_distance =
            norm_l2(axpy(-1.0, rd.roots.front().u_d, branch.entries.back().solution.u));
        for (auto& entry : branch.entries) {
            const auto& lrv = entry.solution.lr_field.values;
            for (double v : lrv)
                if (v < -1e-10 || v > branch.mu_d + 1e-10) entry.lr_within_mu_d = false;
        }
    }
    branch.endpoint_r0_distance = norm_l2(axpy(-1.0, u_r0, branch.entries.front().solution.u));

    double slack = opts.monotone_slack;
    if (slack < 0.0) {
        const double ref =
            rd.roots.empty() ? max_abs(branch.entries.back().solution.u) : max_abs(rd.roots.front().u_d);
        slack = 1e-8 * ref;
    }
    for (std::size_t j = 0; j + 1 < branch.entries.size(); ++j) {
        const Field& lo = branch.entries[j].solution.u;
        const Field& hi = branch.entries[j + 1].solution.u;
        bool ok = true;
        for (std::size_t i = 0; i < lo.size(); ++i)
            if (hi[i] < lo[i] - slack) ok = false;
        branch.monotone_flags.push_back(ok);
    }
    return branch;
}

}  // namespace nlr
