#pragma once

#include "nlr/mesh.hpp"

#include <vector>

namespace nlr {

/// Symmetric tridiagonal matrix over the free nodes 0..N-1 (the boundary
/// node at rho = d/2 is eliminated by the Dirichlet condition).
struct Tridiag {
    std::vector<double> diag;
    std::vector<double> off;  // off[i] couples free nodes i and i+1

    std::size_t size() const { return diag.size(); }
    std::vector<double> apply(const std::vector<double>& x) const;
    /// Thomas solve; the matrix is not modified.
    std::vector<double> solve(std::vector<double> rhs) const;
    double quadratic_form(const std::vector<double>& x) const;
};

/// Stiffness matrix of -div(A grad .) on radial P1 elements with measure
/// omega_n rho^{n-1} d rho; A is nodal and averaged to cell midpoints.
/// Dirichlet at the boundary node, natural (zero-flux) condition at rho=0.
Tridiag radial_stiffness(const RadialMesh& mesh, const std::vector<double>& A_nodal);
Tridiag radial_stiffness_unit(const RadialMesh& mesh);

/// Lumped mass weights (exact integrals of rho^{n-1} times the P1 hat
/// functions) over the free nodes.
std::vector<double> lumped_mass(const RadialMesh& mesh);

/// Restriction to free nodes / extension by the boundary zero.
std::vector<double> to_free(const Field& u);
Field from_free(const MeshPtr& mesh, const std::vector<double>& x);

}  // namespace nlr
