#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "nlr/branch.hpp"
#include "nlr/coefficient.hpp"

#include <cmath>

using namespace nlr;

namespace {

ProblemSpec make_problem(const MeshPtr& mesh, CoefficientSpec coeff, double r = 0.0,
                         double f_val = 1.0) {
    return ProblemSpec(mesh, Field(mesh, f_val), KernelSpec(Field(mesh, 1.0)), std::move(coeff),
                       r, Field(mesh, 0.0));
}

}  // namespace

TEST_CASE("uniform_r_grid covers [0, d] with exact endpoints") {
    auto grid = uniform_r_grid(2.0, 9);
    REQUIRE(grid.size() == 9);
    CHECK(grid.front() == 0.0);
    CHECK(grid.back() == 2.0);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        CHECK(grid[i] > grid[i - 1]);
        CHECK(grid[i] - grid[i - 1] == doctest::Approx(0.25).epsilon(1e-14));
    }
}

TEST_CASE("constant coefficient: the branch is flat") {
    auto mesh = build_radial_mesh(3, 2.0, 64);
    auto problem = make_problem(mesh, constant_coefficient(2.0));
    auto branch = trace_branch(problem, uniform_r_grid(2.0, 9));
    REQUIRE(branch.entries.size() == 9);
    CHECK(branch.all_converged);
    CHECK(branch.endpoint_r0_distance < 1e-9);
    CHECK(branch.endpoint_rd_distance < 1e-9);
    const Field& first = branch.entries.front().solution.u;
    for (const auto& entry : branch.entries) {
        CHECK(max_abs_diff(entry.solution.u, first) < 1e-9);
        CHECK(entry.lr_within_mu_d);
    }
    for (bool flag : branch.monotone_flags) CHECK(flag);
}

TEST_CASE("nonincreasing coefficient: u_r grows with r") {
    auto mesh = build_radial_mesh(3, 2.0, 64);
    // a decreasing on the working range: larger r averages more mass,
    // smaller a, larger solution
    auto coeff = table_coefficient({0.0, 0.5, 1.0, 2.0}, {2.0, 1.5, 1.2, 1.0});
    auto problem = make_problem(mesh, coeff);
    BranchOptions opts;
    opts.tol = 1e-11;
    auto branch = trace_branch(problem, uniform_r_grid(2.0, 17), opts);
    CHECK(branch.all_converged);
    for (bool flag : branch.monotone_flags) CHECK(flag);
    // strictly larger at the center
    const double u0_center = branch.entries.front().solution.u[0];
    const double ud_center = branch.entries.back().solution.u[0];
    CHECK(ud_center > u0_center * 1.01);
    // endpoints match the independent closed-form / root solves
    CHECK(branch.endpoint_r0_distance < 1e-8);
    CHECK(branch.endpoint_rd_distance < 1e-8);
    CHECK(branch.mu_d > 0.0);
}

TEST_CASE("warm and cold starts agree when the solution is unique") {
    auto mesh = build_radial_mesh(3, 2.0, 48);
    auto coeff = polynomial_coefficient({1.0, 0.4}, 0.0, 10.0);
    auto problem = make_problem(mesh, coeff);
    BranchOptions warm, cold;
    warm.warm_start = true;
    cold.warm_start = false;
    auto grid = uniform_r_grid(2.0, 9);
    auto b1 = trace_branch(problem, grid, warm);
    auto b2 = trace_branch(problem, grid, cold);
    REQUIRE(b1.entries.size() == b2.entries.size());
    for (std::size_t j = 0; j < b1.entries.size(); ++j)
        CHECK(max_abs_diff(b1.entries[j].solution.u, b2.entries[j].solution.u) < 1e-8);
}

TEST_CASE("branch is continuous in r") {
    auto mesh = build_radial_mesh(3, 2.0, 64);
    auto coeff = polynomial_coefficient({1.5, 0.5}, 0.0, 10.0);
    auto problem = make_problem(mesh, coeff);
    auto branch = trace_branch(problem, uniform_r_grid(2.0, 33));
    REQUIRE(branch.all_converged);
    // successive solutions differ by O(delta r); a coarse Lipschitz-style cap
    double max_jump = 0.0;
    for (std::size_t j = 0; j + 1 < branch.entries.size(); ++j)
        max_jump = std::max(max_jump, max_abs_diff(branch.entries[j].solution.u,
                                                   branch.entries[j + 1].solution.u));
    const double scale = max_abs(branch.entries.back().solution.u);
    CHECK(max_jump < 0.1 * scale);
}

TEST_CASE("r grid validation") {
    auto mesh = build_radial_mesh(3, 2.0, 32);
    auto problem = make_problem(mesh, constant_coefficient(1.0));
    CHECK_THROWS(trace_branch(problem, {0.0}));
    CHECK_THROWS(trace_branch(problem, {0.0, 1.0}));          // must end at d
    CHECK_THROWS(trace_branch(problem, {0.5, 2.0}));          // must start at 0
    CHECK_THROWS(trace_branch(problem, {0.0, 1.0, 1.0, 2.0}));  // strictly increasing
}

TEST_CASE("uniqueness condition for mild and steep coefficients") {
    auto mesh = build_radial_mesh(3, 2.0, 64);

    // a' == 0: lhs vanishes, condition holds trivially
    auto flat = make_problem(mesh, constant_coefficient(1.0), 1.0);
    auto rep0 = uniqueness_condition(flat, 0.5);
    CHECK(rep0.lhs == 0.0);
    CHECK(rep0.holds);
    CHECK(rep0.aprime_inf == 0.0);

    // mild slope: still holds
    auto mild = make_problem(mesh, polynomial_coefficient({1.0, 0.05}, 0.0, 10.0), 1.0);
    auto rep1 = uniqueness_condition(mild, 0.5);
    CHECK(rep1.lhs > 0.0);
    CHECK(rep1.holds);
    CHECK(rep1.C1 > 0.0);
    CHECK(rep1.epsilon == doctest::Approx(std::max(1e-3 * 0.5, 1e-6)).epsilon(1e-14));

    // steep slope near a small a(mu_d): fails
    auto steep = make_problem(mesh, table_coefficient({0.0, 0.25, 0.5}, {2.0, 0.3, 0.05}), 1.0);
    auto rep2 = uniqueness_condition(steep, 0.5);
    CHECK(rep2.lhs > 1.0);
    CHECK_FALSE(rep2.holds);

    CHECK_THROWS(uniqueness_condition(flat, -1.0));
}

TEST_CASE("uniqueness condition predicts seed-independent convergence") {
    auto mesh = build_radial_mesh(3, 2.0, 48);
    auto coeff = polynomial_coefficient({1.0, 0.1}, 0.0, 10.0);
    auto problem = make_problem(mesh, coeff, 1.0);
    auto branch = trace_branch(problem, uniform_r_grid(2.0, 5));
    REQUIRE(branch.mu_d > 0.0);
    auto rep = uniqueness_condition(problem, branch.mu_d);
    CHECK(rep.holds);

    // five very different seeds all land on the same fixed point
    Field base = picard_stationary(problem, Field(mesh, 0.0), 0.6, 1e-11, 600).u;
    for (double s : {0.0, 0.3, 1.0, 3.0, 10.0}) {
        auto sol = picard_stationary(problem, Field(mesh, s), 0.6, 1e-11, 600);
        REQUIRE(sol.converged);
        CHECK(max_abs_diff(sol.u, base) < 1e-8);
    }
}

TEST_CASE("two-interval staircase: branch endpoints still consistent") {
    // the two-plateau staircase admits several stationary states at
    // intermediate radii; the traced branch stays converged and lands on
    // the smallest r = d root by construction of the warm start
    auto mesh = build_radial_mesh(3, 2.0, 64);
    auto probe = make_problem(mesh, constant_coefficient(1.0), 1.0);
    auto phi = solve_laplace(probe.f);
    auto lr = eval_lr(phi, probe.kernel, 1.0);
    double lo = lr[0], hi = lr[0];
    for (double v : lr.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    auto ex = paper_example_coefficient(4.0, lo, hi);
    auto problem = make_problem(mesh, ex.coeff, 1.0);
    auto branch = trace_branch(problem, uniform_r_grid(2.0, 17));
    CHECK(branch.all_converged);
    CHECK(branch.endpoint_r0_distance < 1e-8);
    for (const auto& entry : branch.entries) CHECK(entry.solution.residual < 1e-9);
}
