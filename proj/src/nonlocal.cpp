#include "nlr/nonlocal.hpp"

#include "nlr/geometry.hpp"

#include <cmath>

namespace nlr {

KernelSpec::KernelSpec(Field kernel) : g(std::move(kernel)) {
    l2_norm = norm_l2(g);
    h1_norm = std::sqrt(l2_norm * l2_norm + norm_v_sq(g));
}

LrOperator::LrOperator(MeshPtr mesh, double r) : mesh_(std::move(mesh)), r_(r) {
    if (r_ < 0.0 || r_ > mesh_->d)
        throw std::invalid_argument("LrOperator: r outside [0, d]");
}

const std::vector<double>& LrOperator::weights() const {
    std::call_once(built_, [this] {
        const std::size_t N = mesh_->node_count();
        const double h = mesh_->cell_width;
        w_.assign(N * N, 0.0);
        for (std::size_t i = 0; i < N; ++i) {
            for (std::size_t j = 0; j < N; ++j) {
                const double factor = (j == 0 || j + 1 == N) ? 0.5 : 1.0;
                w_[i * N + j] =
                    factor * h * shell_weight(mesh_->nodes[i], mesh_->nodes[j], r_, mesh_->n);
            }
        }
    });
    return w_;
}

Field LrOperator::apply(const Field& u, const KernelSpec& kernel) const {
    require_same_mesh(u, kernel.g, "LrOperator::apply");
    if (!(u.mesh == mesh_ || *u.mesh == *mesh_))
        throw std::invalid_argument("LrOperator::apply: mesh mismatch");
    const auto& w = weights();
    const std::size_t N = mesh_->node_count();
    Field out(u.mesh);
    for (std::size_t i = 0; i < N; ++i) {
        double s = 0.0;
        const double* row = w.data() + i * N;
        for (std::size_t j = 0; j < N; ++j) s += row[j] * kernel.g[j] * u[j];
        out[i] = s;
    }
    return out;
}

double LrOperator::apply_at(double rho, const Field& u, const KernelSpec& kernel) const {
    const double h = mesh_->cell_width;
    const std::size_t N = mesh_->node_count();
    double s = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
        const double factor = (j == 0 || j + 1 == N) ? 0.5 : 1.0;
        s += factor * h * shell_weight(rho, mesh_->nodes[j], r_, mesh_->n) * kernel.g[j] * u[j];
    }
    return s;
}

Field eval_lr(const Field& u, const KernelSpec& kernel, double r) {
    LrOperator op(u.mesh, r);
    return op.apply(u, kernel);
}

LrBoundReport lr_bound_report(const Field& u, const KernelSpec& kernel, double r) {
    LrBoundReport rep;
    const Field lr = eval_lr(u, kernel, r);
    rep.max_abs_lr = max_abs(lr);
    rep.cauchy_schwarz = kernel.l2_norm * norm_l2(u);
    const int n = u.mesh->n;
    const double omega_measure = ball_volume(n, u.mesh->radius());
    rep.paper_form = std::pow(omega_measure, 1.0 / std::max(n, 3)) * rep.cauchy_schwarz;
    rep.ratio = rep.cauchy_schwarz > 0.0 ? rep.max_abs_lr / rep.cauchy_schwarz : 0.0;
    return rep;
}

}  // namespace nlr
