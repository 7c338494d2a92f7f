#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "nlr/coefficient.hpp"
#include "nlr/estimates.hpp"
#include "nlr/parabolic.hpp"
#include "nlr/rng.hpp"

#include <cmath>

using namespace nlr;

namespace {

ProblemSpec make_problem(const MeshPtr& mesh, CoefficientSpec coeff, double r, Field f, Field u0) {
    return ProblemSpec(mesh, std::move(f), KernelSpec(Field(mesh, 1.0)), std::move(coeff), r,
                       std::move(u0));
}

double mass_norm_sq(const Field& u) {
    auto m = lumped_mass(*u.mesh);
    auto x = to_free(u);
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += m[i] * x[i] * x[i];
    return s;
}

}  // namespace

TEST_CASE("backward Euler step is exact on the principal eigenfunction") {
    // with a == c and f == 0 the step reduces to division by 1 + dt c lambda
    for (int n = 1; n <= 3; ++n) {
        auto mesh = build_radial_mesh(n, 2.0, 96);
        auto [lambda, v] = principal_eigenpair(mesh);
        const double c = 1.7, dt = 0.05;
        auto problem = make_problem(mesh, constant_coefficient(c), 0.5, Field(mesh, 0.0), v);
        Field u1 = step_imex(v, dt, problem);
        const double factor = 1.0 / (1.0 + dt * c * lambda);
        for (std::size_t i = 0; i < u1.size(); ++i)
            CHECK(u1[i] == doctest::Approx(factor * v[i]).epsilon(1e-8).scale(1.0));
    }
}

TEST_CASE("zero source: the L2 energy decays monotonically") {
    auto mesh = build_radial_mesh(3, 2.0, 64);
    Field u0(mesh);
    for (std::size_t i = 0; i < u0.size(); ++i) {
        const double rho = mesh->nodes[i];
        u0[i] = (1.0 - rho * rho) * (1.2 + std::cos(3.0 * rho));
    }
    auto problem = make_problem(mesh, constant_coefficient(1.0), 0.5, Field(mesh, 0.0), u0);
    auto series = integrate(problem, 0.5, 1e-3);
    REQUIRE(series.energy_trace.size() > 100);
    for (std::size_t k = 1; k < series.energy_trace.size(); ++k)
        CHECK(series.energy_trace[k].l2_sq <= series.energy_trace[k - 1].l2_sq * (1.0 + 1e-13));
    // decays at least as fast as the principal mode of the slowest coefficient
    CHECK(series.energy_trace.back().l2_sq < series.energy_trace.front().l2_sq * 0.1);
}

TEST_CASE("energy monitor stays silent on the dissipative scheme") {
    auto mesh = build_radial_mesh(2, 2.0, 48);
    Field u0(mesh);
    for (std::size_t i = 0; i < u0.size(); ++i)
        u0[i] = 1.0 - std::pow(mesh->nodes[i], 2.0);
    auto problem = make_problem(mesh, constant_coefficient(1.0), 0.6, Field(mesh, 0.5), u0);
    IntegrateOptions opts;
    opts.monitors = {Monitor::energy};
    auto series = integrate(problem, 0.3, 5e-4, opts);
    CHECK(series.monitor_log.empty());
}

TEST_CASE("comparison monitor confirms the stationary sandwich") {
    auto mesh = build_radial_mesh(3, 2.0, 64);
    auto ex = paper_example_coefficient(4.0, 0.05, 0.4);
    Field f(mesh, 1.0);
    Field u0(mesh);
    for (std::size_t i = 0; i < u0.size(); ++i) {
        const double rho = mesh->nodes[i];
        u0[i] = 0.02 * (1.0 - rho * rho);
    }
    auto problem = make_problem(mesh, ex.coeff, 0.8, f, u0);

    // bounds: zero below, the a == m linear solution above
    Field upper = solve_linear_radial(Field(mesh, problem.coeff.m), f);
    IntegrateOptions opts;
    opts.monitors = {Monitor::comparison};
    opts.lower = Field(mesh, 0.0);
    opts.upper = upper;
    auto series = integrate(problem, 0.5, 1e-3, opts);
    CHECK(series.monitor_log.empty());
    // and the final state really is inside the sandwich
    const Field& last = series.states.back();
    for (std::size_t i = 0; i < last.size(); ++i) {
        CHECK(last[i] >= -1e-10);
        CHECK(last[i] <= upper[i] + 1e-8);
    }
}

TEST_CASE("long integration settles on the Picard stationary solution") {
    auto mesh = build_radial_mesh(3, 2.0, 48);
    auto coeff = polynomial_coefficient({1.0, 0.5}, 0.0, 10.0);  // a(x) = 1 + x/2
    Field f(mesh, 1.0);
    auto problem = make_problem(mesh, coeff, 0.7, f, Field(mesh, 0.0));
    auto stat = picard_stationary(problem, Field(mesh, 0.0), 0.7, 1e-12, 600);
    REQUIRE(stat.converged);

    IntegrateOptions opts;
    opts.steady_candidates = {stat.u};
    opts.monitors = {Monitor::steady};
    auto series = integrate(problem, 6.0, 2e-3, opts);
    auto match = steady_state_detect(series, {stat}, 1e-9);
    REQUIRE(match.has_value());
    CHECK(match->candidate_index == 0);
    // quadrature-formula and finite-element stationary limits differ by O(h^2)
    CHECK(match->distance < 1e-4);
    CHECK(max_abs_diff(series.states.back(), stat.u) < 5e-4);
}

TEST_CASE("steady_state_detect refuses an unconverged series") {
    auto mesh = build_radial_mesh(3, 2.0, 32);
    auto problem = make_problem(mesh, constant_coefficient(1.0), 0.5, Field(mesh, 1.0),
                                Field(mesh, 0.0));
    auto stat = picard_stationary(problem, Field(mesh, 0.0), 1.0, 1e-12, 50);
    auto series = integrate(problem, 0.01, 1e-3);  // ten steps, far from steady
    CHECK_FALSE(steady_state_detect(series, {stat}, 1e-12).has_value());
}

TEST_CASE("state storage stride") {
    auto mesh = build_radial_mesh(2, 2.0, 24);
    auto problem = make_problem(mesh, constant_coefficient(1.0), 0.5, Field(mesh, 1.0),
                                Field(mesh, 0.0));
    IntegrateOptions opts;
    opts.store_every = 7;
    auto series = integrate(problem, 0.05, 1e-3, opts);  // 50 steps
    // stored: step 0, 7, 14, ..., 49 plus the final step
    CHECK(series.energy_trace.size() == 51);
    CHECK(series.states.size() == 9);
    CHECK(series.times.size() == series.energy_trace.size());
    CHECK(series.times.back() == doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("integration is deterministic") {
    auto mesh = build_radial_mesh(3, 2.0, 40);
    auto ex = paper_example_coefficient(3.0, 0.1, 0.3);
    auto problem = make_problem(mesh, ex.coeff, 0.9, Field(mesh, 1.0), Field(mesh, 0.0));
    auto s1 = integrate(problem, 0.2, 1e-3);
    auto s2 = integrate(problem, 0.2, 1e-3);
    REQUIRE(s1.states.size() == s2.states.size());
    for (std::size_t k = 0; k < s1.states.size(); ++k)
        for (std::size_t i = 0; i < s1.states[k].size(); ++i)
            CHECK(s1.states[k][i] == s2.states[k][i]);
}

TEST_CASE("dual norm identity on the principal eigenfunction") {
    // K_1 phi = M v with K_1 v = lambda M v gives |v|_*^2 = (v, M v) / lambda
    for (int n : {1, 3}) {
        auto mesh = build_radial_mesh(n, 2.0, 80);
        auto [lambda, v] = principal_eigenpair(mesh);
        const double dn = dual_norm(v);
        CHECK(dn * dn == doctest::Approx(mass_norm_sq(v) / lambda).epsilon(1e-8));
    }
}

TEST_CASE("dual norm is controlled by the L2 norm via Poincare") {
    Rng rng(31);
    auto mesh = build_radial_mesh(3, 2.0, 64);
    auto constants = poincare_constants(*mesh);
    for (int trial = 0; trial < 10; ++trial) {
        Field f = random_smooth_field(mesh, rng);
        const double lhs = dual_norm(f);
        const double rhs = std::sqrt(constants.C1) * std::sqrt(mass_norm_sq(f));
        CHECK(lhs <= rhs * (1.0 + 1e-9));
    }
}
