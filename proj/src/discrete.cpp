#include "nlr/discrete.hpp"

#include <cmath>

namespace nlr {

std::vector<double> Tridiag::apply(const std::vector<double>& x) const {
    std::vector<double> y(size(), 0.0);
    for (std::size_t i = 0; i < size(); ++i) {
        y[i] = diag[i] * x[i];
        if (i > 0) y[i] += off[i - 1] * x[i - 1];
        if (i + 1 < size()) y[i] += off[i] * x[i + 1];
    }
    return y;
}

std::vector<double> Tridiag::solve(std::vector<double> rhs) const {
    const std::size_t n = size();
    std::vector<double> d(diag);
    for (std::size_t i = 1; i < n; ++i) {
        const double w = off[i - 1] / d[i - 1];
        d[i] -= w * off[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    std::vector<double> x(n, 0.0);
    x[n - 1] = rhs[n - 1] / d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = (rhs[i] - off[i] * x[i + 1]) / d[i];
    return x;
}

double Tridiag::quadratic_form(const std::vector<double>& x) const {
    const auto y = apply(x);
    double s = 0.0;
    for (std::size_t i = 0; i < size(); ++i) s += x[i] * y[i];
    return s;
}

Tridiag radial_stiffness(const RadialMesh& mesh, const std::vector<double>& A_nodal) {
    const std::size_t nfree = mesh.cell_count();  // nodes 0..N-1
    const double omega = unit_sphere_measure(mesh.n);
    const double h = mesh.cell_width;
    Tridiag K;
    K.diag.assign(nfree, 0.0);
    K.off.assign(nfree > 0 ? nfree - 1 : 0, 0.0);
    for (std::size_t cell = 0; cell < mesh.cell_count(); ++cell) {
        const double mom = radial_moment(mesh.n, mesh.nodes[cell], mesh.nodes[cell + 1]);
        const double A_mid = 0.5 * (A_nodal[cell] + A_nodal[cell + 1]);
        const double k = omega * A_mid * mom / (h * h);
        K.diag[cell] += k;
        if (cell + 1 < nfree) {
            K.diag[cell + 1] += k;
            K.off[cell] -= k;
        }
        // cell touching the eliminated boundary node only adds to diag[cell]
    }
    return K;
}

Tridiag radial_stiffness_unit(const RadialMesh& mesh) {
    return radial_stiffness(mesh, std::vector<double>(mesh.node_count(), 1.0));
}

std::vector<double> lumped_mass(const RadialMesh& mesh) {
    const std::size_t nfree = mesh.cell_count();
    const double omega = unit_sphere_measure(mesh.n);
    const double h = mesh.cell_width;
    const int n = mesh.n;
    std::vector<double> w(nfree, 0.0);
    for (std::size_t cell = 0; cell < mesh.cell_count(); ++cell) {
        const double lo = mesh.nodes[cell], hi = mesh.nodes[cell + 1];
        const double mom = radial_moment(n, lo, hi);
        const double mom2 = (std::pow(hi, n + 1) - std::pow(lo, n + 1)) / (n + 1.0);
        w[cell] += omega * (hi * mom - mom2) / h;
        if (cell + 1 < nfree) w[cell + 1] += omega * (mom2 - lo * mom) / h;
    }
    return w;
}

std::vector<double> to_free(const Field& u) {
    return std::vector<double>(u.values.begin(), u.values.end() - 1);
}

Field from_free(const MeshPtr& mesh, const std::vector<double>& x) {
    Field u(mesh);
    for (std::size_t i = 0; i < x.size(); ++i) u[i] = x[i];
    u[u.size() - 1] = 0.0;
    return u;
}

}  // namespace nlr
