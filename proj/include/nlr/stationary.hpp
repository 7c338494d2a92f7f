#pragma once

#include "nlr/coefficient.hpp"
#include "nlr/nonlocal.hpp"

#include <optional>
#include <string>
#include <vector>

namespace nlr {

/// Full problem instance for (P_r): -div(a(l_r(u)) grad u) = f on the ball
/// of diameter d, homogeneous Dirichlet boundary.
struct ProblemSpec {
    MeshPtr mesh;
    Field f;
    KernelSpec kernel;
    CoefficientSpec coeff;
    double r = 0.0;
    Field u0;  // initial state for the parabolic problem

    ProblemSpec(MeshPtr mesh_, Field f_, KernelSpec kernel_, CoefficientSpec coeff_, double r_,
                Field u0_)
        : mesh(std::move(mesh_)),
          f(std::move(f_)),
          kernel(std::move(kernel_)),
          coeff(std::move(coeff_)),
          r(r_),
          u0(std::move(u0_)) {
        require_same_mesh(f, kernel.g, "ProblemSpec");
        require_same_mesh(f, u0, "ProblemSpec");
        if (r < 0.0 || r > mesh->d) throw std::invalid_argument("ProblemSpec: r outside [0, d]");
    }
};

/// Radial linear solve of -div(A grad u) = f via the explicit formula
/// u(rho) = int_rho^{d/2} t^{1-n} F(t) / A(t) dt, F(t) = int_0^t s^{n-1} f(s) ds,
/// both by trapezoid accumulation. u(d/2) = 0 exactly; the t -> 0 integrand
/// limit f(0) t / n is applied at the origin node.
Field solve_linear_radial(const Field& A, const Field& f);

/// solve_linear_radial with A identically 1.
Field solve_laplace(const Field& f);

/// Discrete realization of -div(B grad u) on a nodal field: inverts the
/// trapezoid accumulations of solve_linear_radial (exactly at interior
/// nodes for n >= 2), so applying it to a solve output recovers the source.
Field apply_operator(const Field& B, const Field& u);

struct StationarySolution {
    Field u;
    Field lr_field;
    std::size_t iterations = 0;
    double residual = 0.0;  // final fixed-point increment in discrete L^2
    bool converged = false;
};

/// Damped Picard iteration u <- (1-lambda) u + lambda solve(a(l_r(u)), f).
StationarySolution picard_stationary(const ProblemSpec& problem, const Field& u_init,
                                     double damping, double tol, std::size_t max_iter);

struct BifurcationRoot {
    double mu = 0.0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    Field u_d;
};

struct RdEnumeration {
    double c = 0.0;  // l_d(phi)
    double mu_max = 0.0;
    std::size_t grid_points = 0;
    std::vector<BifurcationRoot> roots;
    std::vector<double> scan_values;  // mu*a(mu) - c on the scan grid (trace for empty results)
};

/// All r = d solutions via the scalar equation mu a(mu) = l_d(phi):
/// sign-change scan on [0, mu_max] refined by bisection; roots closer than
/// one grid cell are merged. mu_max <= 0 selects the default 2 c / m.
RdEnumeration enumerate_rd_solutions(const ProblemSpec& problem, double mu_max = 0.0,
                                     std::size_t grid_points = 10000,
                                     double root_tol = 1e-12);

struct IntervalCheck {
    std::size_t pair_index = 0;  // i of [m_i, m_{i+1}]
    bool inclusion_holds = false;
    bool extremum_holds = false;
    std::string detail;
};

struct MultiSolutionResult {
    double i_lo = 0.0;  // inf l_r(phi)
    double i_hi = 0.0;  // sup l_r(phi)
    std::vector<IntervalCheck> checks;
    std::vector<StationarySolution> solutions;
    std::vector<bool> range_confirmed;  // m_i <= l_r(u) <= m_{i+1} nodewise
};

/// Interval-seeded multi-solution search over the threshold staircase
/// m_0 = 0 < m_1 < ... < m_{n1}. For each even pair whose conditions hold,
/// runs Picard seeded from the linear solve with coefficient a(m_i).
MultiSolutionResult multi_solution_search(const ProblemSpec& problem,
                                          const std::vector<double>& thresholds,
                                          double damping = 0.5, double tol = 1e-10,
                                          std::size_t max_iter = 400);

}  // namespace nlr
