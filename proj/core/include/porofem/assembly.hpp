#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "porofem/fem.hpp"
#include "porofem/linalg.hpp"

namespace porofem {

/// Boundary traction g(x, t, n) with n the outward unit normal.
using TractionField = std::function<Vec2(const Point&, double, const Vec2&)>;

inline constexpr int kOperatorQuadrature = 4;
inline constexpr int kLoadQuadrature = 6;
inline constexpr int kFacetGaussPoints = 3;

/// Taylor-Hood spaces on one mesh: continuous P2 vectors and P1 scalars.
struct Spaces {
  explicit Spaces(const Mesh& m) : mesh(&m), p2v(m, ElementKind::P2, 2), p1(m, ElementKind::P1, 1) {}

  const Mesh* mesh;
  DofMap p2v;
  DofMap p1;
};

/// gamma (eps(u), eps(v)) on the P2 vector space.
SparseMatrix assemble_elasticity(const DofMap& p2v, double gamma);
/// (div u, div v) on the P2 vector space.
SparseMatrix assemble_div_div(const DofMap& p2v);
/// (grad u, grad v) + (u, v) componentwise on the P2 vector space.
SparseMatrix assemble_vector_h1(const DofMap& p2v);
/// (div u, phi): rows P1, columns P2 vector.
SparseMatrix assemble_div(const DofMap& p2v, const DofMap& p1);
/// (u, v) on a scalar space.
SparseMatrix assemble_mass(const DofMap& scalar);
/// (1/theta_f) (K grad u, grad v) on a scalar space.
SparseMatrix assemble_diffusion(const DofMap& scalar, const Mat2& K, double theta_f);
/// sum_T (1/theta_f) (K grad(div u)|_T, grad psi)_T: rows P1, columns P2 vector.
SparseMatrix assemble_broken_divgrad(const DofMap& p2v, const DofMap& p1, const Mat2& K, double theta_f);
/// Rows (u, r_k) for the rigid motions r = e1, e2, (-x2, x1); 3 x n.
SparseMatrix assemble_rigid_motions(const DofMap& p2v);

/// (F, v) on the P2 vector space at time t.
Vector assemble_load(const VectorField& F, const DofMap& p2v, double t);
/// (f, psi) on a scalar space at time t.
Vector assemble_load(const ScalarField& f, const DofMap& scalar, double t);

/// <g, v> over the given facets. free[i][c] says whether component c of
/// facet i receives the traction (components carrying Dirichlet data do not).
Vector assemble_boundary_traction(const TractionField& g, std::span<const BoundaryFacet> facets,
                                  const std::vector<std::array<bool, 2>>& free, const DofMap& p2v, double t);
/// <g, psi> over the given facets for a scalar space.
Vector assemble_boundary_flux(const ScalarField& g, std::span<const BoundaryFacet> facets, const DofMap& scalar,
                              double t);
/// (1/theta_f) (K rho_f g, grad psi).
Vector assemble_gravity_flux(const DofMap& p1, const Mat2& K, const Vec2& rho_f_g, double theta_f);

/// L2 projection coefficients of a broken P1 field onto continuous P1 using
/// the lumped mass matrix.
Vector lumped_projection(const BrokenP1& field, const DofMap& p1);

}  // namespace porofem
