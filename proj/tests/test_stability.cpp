#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "nlr/coefficient.hpp"
#include "nlr/estimates.hpp"
#include "nlr/stability.hpp"

#include <cmath>

using namespace nlr;

namespace {

ProblemSpec make_problem(const MeshPtr& mesh, CoefficientSpec coeff, double r,
                         double f_val = 1.0) {
    return ProblemSpec(mesh, Field(mesh, f_val), KernelSpec(Field(mesh, 1.0)), std::move(coeff),
                       r, Field(mesh, 0.0));
}

StationarySolution solve_stationary(const ProblemSpec& problem) {
    auto sol = picard_stationary(problem, Field(problem.mesh, 0.0), 0.6, 1e-11, 600);
    REQUIRE(sol.converged);
    return sol;
}

}  // namespace

TEST_CASE("constant coefficient: the margin equals the coefficient value") {
    // a' == 0 removes the nonlocal term, so G(phi) = c |grad phi|^2 and the
    // Rayleigh quotient is identically c
    for (int n = 1; n <= 3; ++n) {
        auto mesh = build_radial_mesh(n, 2.0, 64);
        const double c = 1.4;
        auto problem = make_problem(mesh, constant_coefficient(c), 0.8);
        auto sol = solve_stationary(problem);
        auto rep = stability_margin(sol, problem);
        CHECK(rep.eig_converged);
        CHECK(rep.stable);
        CHECK(rep.min_rayleigh == doctest::Approx(c).epsilon(1e-8));
    }
}

TEST_CASE("the minimizer is a lower envelope over random test fields") {
    auto mesh = build_radial_mesh(3, 2.0, 64);
    auto coeff = polynomial_coefficient({1.0, 0.3}, 0.0, 10.0);
    auto problem = make_problem(mesh, coeff, 0.9);
    auto sol = solve_stationary(problem);
    auto rep = stability_margin(sol, problem);
    REQUIRE(rep.eig_converged);

    Rng rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        Field phi = random_smooth_field(mesh, rng);
        const double denom = gradient_form_value(phi);
        if (denom <= 0.0) continue;
        const double quotient = stability_form_value(sol, problem, phi) / denom;
        CHECK(quotient >= rep.min_rayleigh - 1e-8 * std::abs(rep.min_rayleigh) - 1e-12);
    }
}

TEST_CASE("form and gradient values scale quadratically") {
    auto mesh = build_radial_mesh(3, 2.0, 48);
    auto coeff = polynomial_coefficient({1.0, 0.2}, 0.0, 10.0);
    auto problem = make_problem(mesh, coeff, 0.7);
    auto sol = solve_stationary(problem);
    Rng rng(3);
    Field phi = random_smooth_field(mesh, rng);
    const double g1 = stability_form_value(sol, problem, phi);
    const double g3 = stability_form_value(sol, problem, scale(3.0, phi));
    CHECK(g3 == doctest::Approx(9.0 * g1).epsilon(1e-11));
    CHECK(gradient_form_value(scale(3.0, phi)) ==
          doctest::Approx(9.0 * gradient_form_value(phi)).epsilon(1e-12));
    // the Rayleigh quotient is scale invariant
    CHECK(g3 / gradient_form_value(scale(3.0, phi)) ==
          doctest::Approx(g1 / gradient_form_value(phi)).epsilon(1e-10));
}

TEST_CASE("gradient form value matches the V-norm") {
    auto mesh = build_radial_mesh(2, 2.0, 40);
    Rng rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        Field phi = random_smooth_field(mesh, rng);
        CHECK(gradient_form_value(phi) == doctest::Approx(norm_v_sq(phi)).epsilon(1e-12));
    }
}

TEST_CASE("mild slopes keep the solution stable") {
    auto mesh = build_radial_mesh(3, 2.0, 64);
    auto coeff = polynomial_coefficient({1.0, 0.05}, 0.0, 10.0);
    auto problem = make_problem(mesh, coeff, 0.8);
    auto sol = solve_stationary(problem);
    auto rep = stability_margin(sol, problem);
    CHECK(rep.eig_converged);
    CHECK(rep.stable);
    CHECK(rep.min_rayleigh > 0.9);  // close to a's range [1, ~1.1]
    // the analytic lower bound really is a lower bound for the margin
    CHECK(rep.min_rayleigh >= rep.lower_bound_analytic - 1e-10);
}

TEST_CASE("increasing a raises the margin along with the coefficient floor") {
    auto mesh = build_radial_mesh(3, 2.0, 48);
    auto lo = make_problem(mesh, constant_coefficient(0.5), 0.8);
    auto hi = make_problem(mesh, constant_coefficient(2.0), 0.8);
    auto rep_lo = stability_margin(solve_stationary(lo), lo);
    auto rep_hi = stability_margin(solve_stationary(hi), hi);
    CHECK(rep_hi.min_rayleigh > rep_lo.min_rayleigh);
    CHECK(rep_lo.min_rayleigh == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(rep_hi.min_rayleigh == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("the nonlocal term does not move the spectral floor") {
    // the Rayleigh minimizers oscillate where a is smallest, and l_r smooths
    // oscillations away, so the margin pins to inf a(l_r(u_r)) even for a
    // steep coefficient; the crude analytic bound can be far more pessimistic
    auto mesh = build_radial_mesh(3, 2.0, 64);
    auto steep = table_coefficient({0.0, 1.0, 10.0}, {2.0, 0.3, 0.25});
    auto problem = make_problem(mesh, steep, 1.2);
    auto sol = solve_stationary(problem);
    auto rep = stability_margin(sol, problem);
    REQUIRE(rep.eig_converged);
    double inf_a = 1e300;
    for (double v : sol.lr_field.values) inf_a = std::min(inf_a, problem.coeff.a(v));
    CHECK(rep.min_rayleigh == doctest::Approx(inf_a).epsilon(1e-5));
    CHECK(rep.min_rayleigh <= inf_a + 1e-10);
    CHECK(rep.min_rayleigh >= rep.lower_bound_analytic - 1e-10);
    CHECK(rep.lower_bound_analytic < inf_a);
}
