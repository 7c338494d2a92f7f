#include "nlr/stability.hpp"

#include "nlr/estimates.hpp"
#include "nlr/geometry.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nlr {

namespace {

struct FormMatrices {
    Eigen::MatrixXd form;  // symmetric part of the stability bilinear form
    Eigen::MatrixXd gram;  // gradient Gram |grad phi|_2^2
};

FormMatrices assemble(const StationarySolution& u_r, const ProblemSpec& problem) {
    const auto& mesh = *problem.mesh;
    const std::size_t nfree = mesh.cell_count();
    const double h = mesh.cell_width;
    const double omega = unit_sphere_measure(mesh.n);

    std::vector<double> A_nodal(mesh.node_count());
    for (std::size_t i = 0; i < A_nodal.size(); ++i)
        A_nodal[i] = problem.coeff.a(u_r.lr_field[i]);
    const Tridiag Ka = radial_stiffness(mesh, A_nodal);
    const Tridiag K1 = radial_stiffness_unit(mesh);

    Eigen::MatrixXd form = Eigen::MatrixXd::Zero(nfree, nfree);
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(nfree, nfree);
    for (std::size_t i = 0; i < nfree; ++i) {
        form(i, i) = Ka.diag[i];
        gram(i, i) = K1.diag[i];
        if (i + 1 < nfree) {
            form(i, i + 1) = form(i + 1, i) = Ka.off[i];
            gram(i, i + 1) = gram(i + 1, i) = K1.off[i];
        }
    }

    // Nonlocal term: - int a'(l_r(u_r)) l_r(phi) u_r' psi', assembled per
    // cell at midpoints; symmetrized below.
    Eigen::MatrixXd nonlocal = Eigen::MatrixXd::Zero(nfree, nfree);
    std::vector<double> row(mesh.node_count());
    for (std::size_t m = 0; m < mesh.cell_count(); ++m) {
        const double mid = 0.5 * (mesh.nodes[m] + mesh.nodes[m + 1]);
        const double mom = radial_moment(mesh.n, mesh.nodes[m], mesh.nodes[m + 1]);
        const double lr_mid = 0.5 * (u_r.lr_field[m] + u_r.lr_field[m + 1]);
        const double du = (u_r.u[m + 1] - u_r.u[m]) / h;
        const double c = omega * mom * problem.coeff.a_prime(lr_mid) * du / h;
        if (c == 0.0) continue;
        for (std::size_t j = 0; j < mesh.node_count(); ++j) {
            const double factor = (j == 0 || j + 1 == mesh.node_count()) ? 0.5 : 1.0;
            row[j] = factor * h *
                     shell_weight(mid, mesh.nodes[j], problem.r, mesh.n) * problem.kernel.g[j];
        }
        for (std::size_t j = 0; j < nfree; ++j) {
            const double v = c * row[j];
            if (v == 0.0) continue;
            nonlocal(m, j) -= v;
            if (m + 1 < nfree) nonlocal(m + 1, j) += v;
        }
    }
    form -= 0.5 * (nonlocal + nonlocal.transpose());
    return {std::move(form), std::move(gram)};
}

}  // namespace

double gradient_form_value(const Field& phi) { return norm_v_sq(phi); }

double stability_form_value(const StationarySolution& u_r, const ProblemSpec& problem,
                            const Field& phi) {
    const auto mats = assemble(u_r, problem);
    const auto x = to_free(phi);
    Eigen::Map<const Eigen::VectorXd> v(x.data(), x.size());
    return v.dot(mats.form * v);
}

StabilityReport stability_margin(const StationarySolution& u_r, const ProblemSpec& problem,
                                 double tol, double mu_hi) {
    if (!u_r.converged)
        throw std::invalid_argument("stability_margin: solution did not converge");
    const auto mats = assemble(u_r, problem);
    const std::size_t n = mats.form.rows();

    // Reduce to a standard symmetric problem with the Cholesky factor of
    // the gradient Gram and take the smallest eigenvalue directly; the
    // matrices are small and dense.
    (void)tol;
    Eigen::LLT<Eigen::MatrixXd> llt(mats.gram);
    Eigen::MatrixXd C = llt.matrixL().solve(mats.form);
    C = llt.matrixL().solve(C.transpose()).transpose();
    C = 0.5 * (C + C.transpose());

    StabilityReport rep;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(C, Eigen::EigenvaluesOnly);
    rep.eig_converged = llt.info() == Eigen::Success && eig.info() == Eigen::Success;
    rep.iterations = n;
    rep.min_rayleigh =
        rep.eig_converged ? eig.eigenvalues()(0) : std::numeric_limits<double>::quiet_NaN();
    rep.stable = rep.min_rayleigh >= -1e-8 * problem.coeff.M;

    double inf_a = std::numeric_limits<double>::infinity();
    for (double lrv : u_r.lr_field.values) inf_a = std::min(inf_a, problem.coeff.a(lrv));
    inf_a = std::max(inf_a, problem.coeff.m);
    const double hi = mu_hi > 0.0 ? mu_hi : problem.coeff.work_hi;
    const double aprime_inf = problem.coeff.sup_abs_derivative(-1e-6, hi + 1e-6);
    const double C1 = poincare_constants(*problem.mesh).C1;
    rep.lower_bound_analytic =
        inf_a - C1 * problem.kernel.l2_norm * aprime_inf * norm_l2(problem.f) / inf_a;
    return rep;
}

}  // namespace nlr
