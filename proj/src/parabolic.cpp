#include "nlr/parabolic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nlr {

namespace {

std::vector<double> coefficient_nodal(const ProblemSpec& problem, const Field& lr_field) {
    std::vector<double> A(lr_field.size());
    for (std::size_t i = 0; i < A.size(); ++i) A[i] = problem.coeff.a(lr_field[i]);
    return A;
}

Field backward_euler_step(const Field& state, double dt, const ProblemSpec& problem,
                          const LrOperator& lr, const std::vector<double>& mass) {
    const Field lr_field = lr.apply(state, problem.kernel);
    const auto A = coefficient_nodal(problem, lr_field);
    Tridiag sys = radial_stiffness(*problem.mesh, A);
    for (auto& v : sys.diag) v *= dt;
    for (auto& v : sys.off) v *= dt;
    for (std::size_t i = 0; i < sys.size(); ++i) sys.diag[i] += mass[i];

    std::vector<double> rhs(sys.size());
    for (std::size_t i = 0; i < sys.size(); ++i)
        rhs[i] = mass[i] * (state[i] + dt * problem.f[i]);
    return from_free(problem.mesh, sys.solve(rhs));
}

}  // namespace

double dual_norm(const Field& f) {
    const Tridiag K1 = radial_stiffness_unit(*f.mesh);
    const auto mass = lumped_mass(*f.mesh);
    std::vector<double> rhs(mass.size());
    for (std::size_t i = 0; i < mass.size(); ++i) rhs[i] = mass[i] * f[i];
    const auto phi = K1.solve(rhs);
    return std::sqrt(std::max(0.0, K1.quadratic_form(phi)));
}

Field step_imex(const Field& state, double dt, const ProblemSpec& problem) {
    if (!(dt > 0.0)) throw std::invalid_argument("step_imex: dt must be positive");
    require_same_mesh(state, problem.f, "step_imex");
    LrOperator lr(problem.mesh, problem.r);
    return backward_euler_step(state, dt, problem, lr, lumped_mass(*problem.mesh));
}

TimeSeries integrate(const ProblemSpec& problem, double t_end, double dt,
                     const IntegrateOptions& opts) {
    if (!(t_end > 0.0) || !(dt > 0.0))
        throw std::invalid_argument("integrate: t_end and dt must be positive");

    const auto mass = lumped_mass(*problem.mesh);
    const Tridiag K1 = radial_stiffness_unit(*problem.mesh);
    LrOperator lr(problem.mesh, problem.r);

    auto mass_norm_sq = [&](const Field& u) {
        double s = 0.0;
        for (std::size_t i = 0; i < mass.size(); ++i) s += mass[i] * u[i] * u[i];
        return s;
    };

    const bool want_energy = opts.monitors.count(Monitor::energy) > 0;
    const bool want_comparison = opts.monitors.count(Monitor::comparison) > 0;
    const bool want_steady = opts.monitors.count(Monitor::steady) > 0;

    double comparison_tol = opts.comparison_tol;
    if (want_comparison) {
        if (!opts.lower || !opts.upper)
            throw std::invalid_argument("integrate: comparison monitor needs both bounds");
        if (comparison_tol <= 0.0) comparison_tol = 1e-6 * max_abs(*opts.upper);
    }

    const double dual_f_sq = [&] {
        const double d = dual_norm(problem.f);
        return d * d;
    }();
    const double m = problem.coeff.m;

    TimeSeries series;
    const std::size_t steps = static_cast<std::size_t>(std::llround(t_end / dt));
    Field state = problem.u0;

    double dissipation_sum = 0.0;  // sum dt ||u^j||_V^2 over completed steps
    const double energy_budget0 = 0.5 * mass_norm_sq(state);

    auto record = [&](std::size_t step, const Field& u, bool force) {
        series.times.push_back(step * dt);
        EnergyRecord er;
        er.t = step * dt;
        er.l2_sq = mass_norm_sq(u);
        er.v_sq = K1.quadratic_form(to_free(u));
        er.dual_f_sq = dual_f_sq;
        series.energy_trace.push_back(er);
        if (force || step % opts.store_every == 0) series.states.push_back(u);
    };

    record(0, state, true);

    for (std::size_t k = 1; k <= steps; ++k) {
        state = backward_euler_step(state, dt, problem, lr, mass);
        const double v_sq = K1.quadratic_form(to_free(state));
        dissipation_sum += dt * v_sq;
        record(k, state, k == steps);

        if (want_energy) {
            const double lhs = 0.5 * mass_norm_sq(state) + 0.5 * m * dissipation_sum;
            const double rhs = energy_budget0 + (0.5 / m) * k * dt * dual_f_sq;
            if (lhs > rhs + opts.energy_tol)
                series.monitor_log.push_back({k, "energy", lhs - rhs});
        }
        if (want_comparison) {
            double worst = 0.0;
            for (std::size_t i = 0; i < state.size(); ++i) {
                worst = std::max(worst, (*opts.lower)[i] - state[i]);
                worst = std::max(worst, state[i] - (*opts.upper)[i]);
            }
            if (worst > comparison_tol)
                series.monitor_log.push_back({k, "comparison", worst});
        }
        if (want_steady) {
            std::vector<double> dists;
            dists.reserve(opts.steady_candidates.size());
            for (const Field& cand : opts.steady_candidates)
                dists.push_back(norm_l2(axpy(-1.0, cand, state)));
            series.steady_distances.push_back(std::move(dists));
        }
    }
    return series;
}

std::optional<SteadyMatch> steady_state_detect(const TimeSeries& series,
                                               const std::vector<StationarySolution>& candidates,
                                               double tol) {
    if (series.states.size() < 2 || candidates.empty()) return std::nullopt;
    const Field& last = series.states.back();
    const Field& prev = series.states[series.states.size() - 2];
    Field increment = axpy(-1.0, prev, last);
    const double inc = norm_l2(increment);
    if (inc > tol) return std::nullopt;

    SteadyMatch match;
    match.final_increment = inc;
    match.distance = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        Field diff = axpy(-1.0, candidates[c].u, last);
        const double dist = norm_l2(diff);
        if (dist < match.distance) {
            match.distance = dist;
            match.candidate_index = c;
        }
    }
    return match;
}

}  // namespace nlr
