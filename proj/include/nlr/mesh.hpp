#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <vector>

namespace nlr {

/// Uniform nodal grid on [0, d/2] for radial functions on the ball of
/// diameter d in dimension n. Node 0 sits at the origin, the last node at
/// the boundary radius d/2.
struct RadialMesh {
    int n = 0;              // spatial dimension, 1..3
    double d = 0.0;         // domain diameter
    std::vector<double> nodes;
    double cell_width = 0.0;

    std::size_t node_count() const { return nodes.size(); }
    std::size_t cell_count() const { return nodes.size() - 1; }
    double radius() const { return 0.5 * d; }

    bool operator==(const RadialMesh& other) const {
        return n == other.n && d == other.d && nodes.size() == other.nodes.size();
    }
};

using MeshPtr = std::shared_ptr<const RadialMesh>;

MeshPtr build_radial_mesh(int n, double d, std::size_t cell_count);

/// Measure of the unit sphere: 2 points for n=1, 2*pi for n=2, 4*pi for n=3.
double unit_sphere_measure(int n);

/// Volume of the ball of radius R in dimension n.
double ball_volume(int n, double R);

/// Nodal values of a radial function on a mesh.
struct Field {
    MeshPtr mesh;
    std::vector<double> values;

    Field() = default;
    Field(MeshPtr m, double fill = 0.0)
        : mesh(std::move(m)), values(mesh->node_count(), fill) {}
    Field(MeshPtr m, std::vector<double> v) : mesh(std::move(m)), values(std::move(v)) {
        if (values.size() != mesh->node_count())
            throw std::invalid_argument("Field: value count does not match mesh");
    }

    std::size_t size() const { return values.size(); }
    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
};

bool same_mesh(const Field& a, const Field& b);
void require_same_mesh(const Field& a, const Field& b, const char* where);

/// Trapezoid quadrature weights with the radial measure omega_n rho^{n-1},
/// halved at both ends. Node 0 carries zero weight for n >= 2.
std::vector<double> radial_trapezoid_weights(const RadialMesh& mesh);

/// Discrete L^2(Omega) inner product and norm on radial fields.
double inner_l2(const Field& a, const Field& b);
double norm_l2(const Field& a);

/// Discrete H^1_0 seminorm squared: sum over cells of
/// omega_n * (exact cell moment of rho^{n-1}) * ((u_{i+1}-u_i)/h)^2.
/// This is the quadratic form of the stiffness matrix used by the
/// parabolic and eigenvalue machinery.
double norm_v_sq(const Field& a);
double norm_v(const Field& a);

/// Exact integral of rho^{n-1} over [lo, hi].
double radial_moment(int n, double lo, double hi);

/// Elementwise helpers.
Field axpy(double alpha, const Field& x, const Field& y);  // alpha*x + y
Field scale(double alpha, const Field& x);
double max_abs(const Field& x);
double max_abs_diff(const Field& a, const Field& b);

}  // namespace nlr
