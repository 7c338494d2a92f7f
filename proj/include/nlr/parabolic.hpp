#pragma once

#include "nlr/discrete.hpp"
#include "nlr/stationary.hpp"

#include <optional>
#include <set>
#include <string>

namespace nlr {

struct MonitorEvent {
    std::size_t step = 0;
    std::string monitor;
    double magnitude = 0.0;
};

struct EnergyRecord {
    double t = 0.0;
    double l2_sq = 0.0;       // |u^k|_2^2 in the scheme's mass norm
    double v_sq = 0.0;        // ||u^k||_V^2 in the stiffness form
    double dual_f_sq = 0.0;   // |f|_*^2
};

struct TimeSeries {
    std::vector<double> times;
    std::vector<Field> states;
    std::vector<EnergyRecord> energy_trace;
    std::vector<MonitorEvent> monitor_log;
    // Per-step distance to each steady candidate, filled by the steady monitor.
    std::vector<std::vector<double>> steady_distances;
};

enum class Monitor { energy, comparison, steady };

/// One backward-Euler step with the nonlocal coefficient lagged at the
/// current state: (M + dt K_{a(l_r(state))}) u_new = M (state + dt f).
Field step_imex(const Field& state, double dt, const ProblemSpec& problem);

struct IntegrateOptions {
    std::set<Monitor> monitors;
    // Comparison monitor bounds (stationary u_0 and u_d) and tolerance.
    std::optional<Field> lower;
    std::optional<Field> upper;
    double comparison_tol = 0.0;  // 0 selects 1e-6 * max upper
    double energy_tol = 1e-8;
    // Steady monitor candidates; per-step distances recorded in the trace.
    std::vector<Field> steady_candidates;
    std::size_t store_every = 1;  // state storage stride (times/energy always per step)
};

TimeSeries integrate(const ProblemSpec& problem, double t_end, double dt,
                     const IntegrateOptions& opts = {});

struct SteadyMatch {
    std::size_t candidate_index = 0;
    double distance = 0.0;
    double final_increment = 0.0;
};

/// Reports the nearest stationary candidate in discrete L^2 when the final
/// step-to-step increment of the series is at most tol; no value otherwise.
std::optional<SteadyMatch> steady_state_detect(const TimeSeries& series,
                                               const std::vector<StationarySolution>& candidates,
                                               double tol);

/// Discrete dual norm |f|_* = ||phi_f||_V with K_1 phi_f = M f.
double dual_norm(const Field& f);

}  // namespace nlr
