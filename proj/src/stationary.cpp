#include "nlr/stationary.hpp"

#include <algorithm>
#include <cmath>

namespace nlr {

namespace {

std::vector<double> node_powers(const RadialMesh& mesh) {
    std::vector<double> p(mesh.node_count());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::pow(mesh.nodes[i], mesh.n - 1);
    return p;
}

std::vector<double> accumulate_flux(const RadialMesh& mesh, const std::vector<double>& p,
                                    const std::vector<double>& f) {
    const double h = mesh.cell_width;
    std::vector<double> F(mesh.node_count(), 0.0);
    for (std::size_t i = 1; i < F.size(); ++i)
        F[i] = F[i - 1] + 0.5 * h * (p[i - 1] * f[i - 1] + p[i] * f[i]);
    return F;
}

// Denominator powers for G = F / (A p~). Using the raw rho^{n-1} here
// amplifies the trapezoid bias of F near the origin into an h^2 log(1/h)
// error term; dividing instead by n * (trapezoid of int rho^{n-1}) / rho
// cancels that bias exactly (constant sources are then resolved exactly in
// every dimension) while agreeing with rho^{n-1} to O(h^2). For n = 1, 2
// the two coincide.
std::vector<double> denominator_powers(const RadialMesh& mesh, const std::vector<double>& p) {
    const double h = mesh.cell_width;
    std::vector<double> pt(mesh.node_count(), 0.0);
    double T = 0.0;  // trapezoid accumulation of int_0^t s^{n-1} ds
    for (std::size_t i = 1; i < pt.size(); ++i) {
        T += 0.5 * h * (p[i - 1] + p[i]);
        pt[i] = mesh.n * T / mesh.nodes[i];
    }
    return pt;
}

}  // namespace

Field solve_linear_radial(const Field& A, const Field& f) {
    require_same_mesh(A, f, "solve_linear_radial");
    const auto& mesh = *A.mesh;
    for (double v : A.values)
        if (!(v > 0.0))
            throw std::invalid_argument("solve_linear_radial: coefficient below positivity floor");

    const auto p = node_powers(mesh);
    const auto pt = denominator_powers(mesh, p);
    const auto F = accumulate_flux(mesh, p, f.values);
    const double h = mesh.cell_width;
    const std::size_t N = mesh.cell_count();

    // Integrand G(t) = F(t) t^{1-n} / A(t); at t = 0 the limit f(0) t / n
    // vanishes.
    std::vector<double> G(N + 1, 0.0);
    for (std::size_t i = 1; i <= N; ++i) G[i] = F[i] / (A[i] * pt[i]);

    Field u(A.mesh);
    u[N] = 0.0;
    for (std::size_t i = N; i-- > 0;) u[i] = u[i + 1] + 0.5 * h * (G[i] + G[i + 1]);
    return u;
}

Field solve_laplace(const Field& f) {
    Field one(f.mesh, 1.0);
    return solve_linear_radial(one, f);
}

Field apply_operator(const Field& B, const Field& u) {
    require_same_mesh(B, u, "apply_operator");
    const auto& mesh = *B.mesh;
    const double h = mesh.cell_width;
    const std::size_t N = mesh.cell_count();
    const auto p = node_powers(mesh);
    const auto pt = denominator_powers(mesh, p);

    // Invert the outer trapezoid: G_0 = 0, u_{i-1} - u_i = h/2 (G_{i-1} + G_i).
    std::vector<double> G(N + 1, 0.0);
    for (std::size_t i = 1; i <= N; ++i) G[i] = 2.0 * (u[i - 1] - u[i]) / h - G[i - 1];

    std::vector<double> F(N + 1, 0.0);
    for (std::size_t i = 1; i <= N; ++i) F[i] = B[i] * pt[i] * G[i];

    // Invert the inner trapezoid: F_i - F_{i-1} = h/2 (q_{i-1} + q_i) with
    // q = p * f. For n >= 2 the seed q_0 = 0 is exact; for n = 1 it comes
    // from a one-sided second-order difference of F.
    std::vector<double> q(N + 1, 0.0);
    if (mesh.n == 1) q[0] = (4.0 * F[1] - F[2]) / (2.0 * h);
    for (std::size_t i = 1; i <= N; ++i) q[i] = 2.0 * (F[i] - F[i - 1]) / h - q[i - 1];

    Field out(B.mesh);
    for (std::size_t i = 1; i <= N; ++i) out[i] = q[i] / p[i];
    out[0] = mesh.n == 1 ? q[0] : 2.0 * out[1] - out[2];
    return out;
}

StationarySolution picard_stationary(const ProblemSpec& problem, const Field& u_init,
                                     double damping, double tol, std::size_t max_iter) {
    if (!(tol > 0.0)) throw std::invalid_argument("picard_stationary: tol must be positive");
    if (!(damping > 0.0 && damping <= 1.0))
        throw std::invalid_argument("picard_stationary: damping outside (0, 1]");
    require_same_mesh(u_init, problem.f, "picard_stationary");

    LrOperator lr(problem.mesh, problem.r);
    StationarySolution sol;
    sol.u = u_init;
    for (std::size_t k = 0; k < max_iter; ++k) {
        Field lrf = lr.apply(sol.u, problem.kernel);
        Field A(problem.mesh);
        for (std::size_t i = 0; i < A.size(); ++i) A[i] = problem.coeff.a(lrf[i]);
        Field next = solve_linear_radial(A, problem.f);
        Field blended = axpy(damping, next, scale(1.0 - damping, sol.u));
        Field diff = axpy(-1.0, sol.u, blended);
        sol.residual = norm_l2(diff);
        sol.u = std::move(blended);
        sol.iterations = k + 1;
        if (sol.residual <= tol) {
            sol.converged = true;
            break;
        }
    }
    sol.lr_field = lr.apply(sol.u, problem.kernel);
    return sol;
}

RdEnumeration enumerate_rd_solutions(const ProblemSpec& problem, double mu_max,
                                     std::size_t grid_points, double root_tol) {
    const Field phi = solve_laplace(problem.f);
    const Field ld_phi = eval_lr(phi, problem.kernel, problem.mesh->d);
    RdEnumeration out;
    out.c = ld_phi[0];
    out.mu_max = mu_max > 0.0 ? mu_max : 2.0 * out.c / problem.coeff.m;
    out.grid_points = grid_points;

    const auto& a = problem.coeff.a;
    auto residual = [&](double mu) { return mu * a(mu) - out.c; };

    out.scan_values.resize(grid_points + 1);
    for (std::size_t i = 0; i <= grid_points; ++i)
        out.scan_values[i] = residual(out.mu_max * i / static_cast<double>(grid_points));

    const double cell = out.mu_max / static_cast<double>(grid_points);
    double last_root = -2.0 * cell;
    for (std::size_t i = 0; i < grid_points; ++i) {
        const double va = out.scan_values[i];
        const double vb = out.scan_values[i + 1];
        double lo = out.mu_max * i / static_cast<double>(grid_points);
        double hi = lo + cell;
        double root;
        if (va == 0.0) {
            root = lo;
        } else if (va * vb < 0.0) {
            double flo = va, a_lo = lo, a_hi = hi;
            while (a_hi - a_lo > root_tol) {
                const double mid = 0.5 * (a_lo + a_hi);
                const double fm = residual(mid);
                if (fm == 0.0) {
                    a_lo = a_hi = mid;
                    break;
                }
                if (flo * fm < 0.0)
                    a_hi = mid;
                else {
                    a_lo = mid;
                    flo = fm;
                }
            }
            root = 0.5 * (a_lo + a_hi);
            lo = a_lo;
            hi = a_hi;
        } else {
            continue;
        }
        if (root - last_root < cell) continue;  // merge near-duplicate roots
        last_root = root;
        BifurcationRoot br;
        br.mu = root;
        br.bracket_lo = lo;
        br.bracket_hi = hi;
        br.u_d = scale(1.0 / a(root), phi);
        out.roots.push_back(std::move(br));
    }
    return out;
}

MultiSolutionResult multi_solution_search(const ProblemSpec& problem,
                                          const std::vector<double>& thresholds, double damping,
                                          double tol, std::size_t max_iter) {
    if (thresholds.size() < 2 || thresholds.size() % 2 != 0)
        throw std::invalid_argument(
            "multi_solution_search: thresholds must be m_0..m_{n1} with n1 odd");
    if (thresholds.front() != 0.0)
        throw std::invalid_argument("multi_solution_search: m_0 must be 0");
    for (std::size_t i = 1; i < thresholds.size(); ++i)
        if (!(thresholds[i] > thresholds[i - 1]))
            throw std::invalid_argument("multi_solution_search: thresholds must increase");

    const Field phi = solve_laplace(problem.f);
    const Field lr_phi = eval_lr(phi, problem.kernel, problem.r);
    MultiSolutionResult out;
    out.i_lo = *std::min_element(lr_phi.values.begin(), lr_phi.values.end());
    out.i_hi = *std::max_element(lr_phi.values.begin(), lr_phi.values.end());

    const auto& a = problem.coeff.a;
    const double slack = 1e-12;
    for (std::size_t i = 0; i + 1 < thresholds.size(); i += 2) {
        const double mi = thresholds[i];
        const double mj = thresholds[i + 1];
        IntervalCheck chk;
        chk.pair_index = i;
        chk.inclusion_holds = out.i_lo >= mi * a(mi) - slack && out.i_hi <= mj * a(mj) + slack;
        double amax = -1e300, amin = 1e300;
        for (int k = 0; k <= 1000; ++k) {
            const double x = mi + (mj - mi) * k / 1000.0;
            const double v = a(x);
            amax = std::max(amax, v);
            amin = std::min(amin, v);
        }
        chk.extremum_holds = a(mi) >= amax - 1e-9 && a(mj) <= amin + 1e-9;
        if (!chk.inclusion_holds)
            chk.detail = "I_r not contained in [m_i a(m_i), m_{i+1} a(m_{i+1})]";
        else if (!chk.extremum_holds)
            chk.detail = "a(m_i)/a(m_{i+1}) are not the extrema of a on [m_i, m_{i+1}]";
        const bool admissible = chk.inclusion_holds && chk.extremum_holds;
        out.checks.push_back(std::move(chk));
        if (!admissible) continue;

        Field A_seed(problem.mesh, a(mi));
        Field seed = solve_linear_radial(A_seed, problem.f);
        StationarySolution sol = picard_stationary(problem, seed, damping, tol, max_iter);
        const auto& lrv = sol.lr_field.values;
        bool in_range = true;
        for (double v : lrv)
            if (v < mi - 1e-8 || v > mj + 1e-8) in_range = false;
        out.range_confirmed.push_back(in_range);
        out.solutions.push_back(std::move(sol));
    }
    return out;
}

}  // namespace nlr
