#pragma once

#include "nlr/mesh.hpp"

#include <mutex>
#include <vector>

namespace nlr {

/// Radial kernel g with its cached norms. The H^1 norm uses the discrete
/// gradient form of norm_v_sq on top of the L^2 part.
struct KernelSpec {
    Field g;
    double l2_norm = 0.0;
    double h1_norm = 0.0;

    explicit KernelSpec(Field kernel);
};

/// Nonlocal functional l_r(u)(x) = int_{Omega ∩ B(x,r)} g u on radial
/// fields. Caches the N x N shell-weight matrix for its (mesh, r); cache
/// population is idempotent and guarded for concurrent first use.
class LrOperator {
public:
    LrOperator(MeshPtr mesh, double r);

    double r() const { return r_; }
    const MeshPtr& mesh() const { return mesh_; }

    /// Result node i holds the trapezoid quadrature of
    /// shell_weight(rho_i, s, r, n) * g(s) * u(s) over [0, d/2].
    Field apply(const Field& u, const KernelSpec& kernel) const;

    /// Same integral evaluated at an arbitrary radius rho (used by the
    /// stability form at cell midpoints).
    double apply_at(double rho, const Field& u, const KernelSpec& kernel) const;

private:
    const std::vector<double>& weights() const;

    MeshPtr mesh_;
    double r_;
    mutable std::once_flag built_;
    mutable std::vector<double> w_;  // row-major (node i, node j), includes trapezoid factor
};

Field eval_lr(const Field& u, const KernelSpec& kernel, double r);

struct LrBoundReport {
    double max_abs_lr = 0.0;        // max over nodes of |l_r(u)|
    double cauchy_schwarz = 0.0;    // |g|_2 |u|_2
    double paper_form = 0.0;        // |Omega|^{1/(n v 3)} |g|_2 |u|_2, reported only
    double ratio = 0.0;             // max_abs_lr / cauchy_schwarz (0 when denominator is 0)
};

LrBoundReport lr_bound_report(const Field& u, const KernelSpec& kernel, double r);

}  // namespace nlr
