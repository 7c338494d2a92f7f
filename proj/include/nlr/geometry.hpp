#pragma once

#include "nlr/mesh.hpp"

namespace nlr {

/// Surface measure of the sphere of radius s (centered at the origin) that
/// lies inside the closed ball B(x, r) with |x| = rho.
///
/// n=1 uses the counting measure on the two-point "sphere" {-s, +s};
/// n=2 is the arc length 2*s*acos(.); n=3 the spherical-cap area
/// (pi*s/rho)*(r^2 - (rho-s)^2) in the lens regime. The contained and
/// disjoint cases reduce to the full sphere measure and 0, and rho = 0 is
/// handled by those limits directly.
double shell_weight(double rho, double s, double r, int n);

/// Full sphere measure of radius s in dimension n (2, 2*pi*s, 4*pi*s^2).
double sphere_measure(int n, double s);

/// |B(x, r) ∩ Omega| for |x| = rho, by composite trapezoid of shell_weight
/// over the mesh nodes.
double ball_domain_measure(double rho, double r, const RadialMesh& mesh);

}  // namespace nlr
