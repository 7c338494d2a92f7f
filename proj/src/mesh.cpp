#include "nlr/mesh.hpp"

#include <algorithm>
#include <numbers>

namespace nlr {

MeshPtr build_radial_mesh(int n, double d, std::size_t cell_count) {
    if (n < 1 || n > 3) throw std::invalid_argument("build_radial_mesh: unsupported dimension");
    if (!(d > 0.0)) throw std::invalid_argument("build_radial_mesh: diameter must be positive");
    if (cell_count < 4) throw std::invalid_argument("build_radial_mesh: need at least 4 cells");

    auto mesh = std::make_shared<RadialMesh>();
    mesh->n = n;
    mesh->d = d;
    const double R = 0.5 * d;
    mesh->cell_width = R / static_cast<double>(cell_count);
    mesh->nodes.resize(cell_count + 1);
    for (std::size_t i = 0; i <= cell_count; ++i)
        mesh->nodes[i] = R * static_cast<double>(i) / static_cast<double>(cell_count);
    mesh->nodes.front() = 0.0;
    mesh->nodes.back() = R;
    return mesh;
}

double unit_sphere_measure(int n) {
    switch (n) {
        case 1: return 2.0;
        case 2: return 2.0 * std::numbers::pi;
        case 3: return 4.0 * std::numbers::pi;
        default: throw std::invalid_argument("unit_sphere_measure: unsupported dimension");
    }
}

double ball_volume(int n, double R) {
    return unit_sphere_measure(n) * std::pow(R, n) / static_cast<double>(n);
}

bool same_mesh(const Field& a, const Field& b) {
    return a.mesh && b.mesh && (a.mesh == b.mesh || *a.mesh == *b.mesh);
}

void require_same_mesh(const Field& a, const Field& b, const char* where) {
    if (!same_mesh(a, b)) throw std::invalid_argument(std::string(where) + ": mesh mismatch");
}

std::vector<double> radial_trapezoid_weights(const RadialMesh& mesh) {
    const double omega = unit_sphere_measure(mesh.n);
    const double h = mesh.cell_width;
    std::vector<double> w(mesh.node_count());
    for (std::size_t i = 0; i < w.size(); ++i) {
        double factor = (i == 0 || i + 1 == w.size()) ? 0.5 : 1.0;
        w[i] = factor * omega * std::pow(mesh.nodes[i], mesh.n - 1) * h;
    }
    return w;
}

double inner_l2(const Field& a, const Field& b) {
    require_same_mesh(a, b, "inner_l2");
    const auto w = radial_trapezoid_weights(*a.mesh);
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * a[i] * b[i];
    return s;
}

double norm_l2(const Field& a) { return std::sqrt(std::max(0.0, inner_l2(a, a))); }

double radial_moment(int n, double lo, double hi) {
    return (std::pow(hi, n) - std::pow(lo, n)) / static_cast<double>(n);
}

double norm_v_sq(const Field& a) {
    const auto& mesh = *a.mesh;
    const double omega = unit_sphere_measure(mesh.n);
    const double h = mesh.cell_width;
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < mesh.node_count(); ++i) {
        const double mom = radial_moment(mesh.n, mesh.nodes[i], mesh.nodes[i + 1]);
        const double du = (a[i + 1] - a[i]) / h;
        s += omega * mom * du * du;
    }
    return s;
}

double norm_v(const Field& a) { return std::sqrt(std::max(0.0, norm_v_sq(a))); }

Field axpy(double alpha, const Field& x, const Field& y) {
    require_same_mesh(x, y, "axpy");
    Field out(x.mesh);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = alpha * x[i] + y[i];
    return out;
}

Field scale(double alpha, const Field& x) {
    Field out(x.mesh);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = alpha * x[i];
    return out;
}

double max_abs(const Field& x) {
    double m = 0.0;
    for (double v : x.values) m = std::max(m, std::abs(v));
    return m;
}

double max_abs_diff(const Field& a, const Field& b) {
    require_same_mesh(a, b, "max_abs_diff");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace nlr
