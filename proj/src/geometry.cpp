#include "nlr/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace nlr {

double sphere_measure(int n, double s) {
    switch (n) {
        case 1: return 2.0;
        case 2: return 2.0 * std::numbers::pi * s;
        case 3: return 4.0 * std::numbers::pi * s * s;
        default: throw std::invalid_argument("sphere_measure: unsupported dimension");
    }
}

double shell_weight(double rho, double s, double r, int n) {
    if (rho < 0.0 || s < 0.0 || r < 0.0)
        throw std::invalid_argument("shell_weight: negative argument");
    if (n < 1 || n > 3) throw std::invalid_argument("shell_weight: unsupported dimension");

    // Contained and disjoint cases; these also cover rho = 0 and s = 0.
    if (rho + s <= r) return sphere_measure(n, s);
    if (std::abs(rho - s) >= r) return 0.0;

    switch (n) {
        case 1:
            // Only the +s point can remain: -s lies at distance rho + s > r here.
            return std::abs(rho - s) <= r ? 1.0 : 0.0;
        case 2: {
            const double t = std::clamp((rho * rho + s * s - r * r) / (2.0 * rho * s), -1.0, 1.0);
            return 2.0 * s * std::acos(t);
        }
        default: {
            const double diff = rho - s;
            return std::numbers::pi * s / rho * (r * r - diff * diff);
        }
    }
}

double ball_domain_measure(double rho, double r, const RadialMesh& mesh) {
    if (rho < 0.0 || rho > mesh.radius())
        throw std::invalid_argument("ball_domain_measure: rho outside domain");
    if (r < 0.0) throw std::invalid_argument("ball_domain_measure: negative radius");
    const double h = mesh.cell_width;
    double sum = 0.0;
    for (std::size_t i = 0; i < mesh.node_count(); ++i) {
        const double factor = (i == 0 || i + 1 == mesh.node_count()) ? 0.5 : 1.0;
        sum += factor * h * shell_weight(rho, mesh.nodes[i], r, mesh.n);
    }
    return sum;
}

}  // namespace nlr
