#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "porofem/assembly.hpp"
#include "porofem/mesh.hpp"
#include "porofem/params.hpp"

namespace porofem {

/// Selects the part of a side a boundary clause applies to, by facet midpoint.
using FacetFilter = std::function<bool(const Point&)>;
using TensorField = std::function<Mat2(const Point&, double)>;

/// One displacement component prescribed on (part of) a side.
struct DisplacementDirichlet {
  BoundaryTag tag = BoundaryTag::Right;
  int component = 0;
  ScalarField value;
  FacetFilter where;  // empty: whole side
};

/// Traction on (part of) a side; applied only to components that carry no
/// displacement Dirichlet data on the same facet.
struct TractionBC {
  BoundaryTag tag = BoundaryTag::Right;
  TractionField value;
  FacetFilter where;
};

/// Pore pressure prescribed on a whole side. `varpi` optionally gives the
/// matching value of a0 p + b0 div tau when it is known in closed form.
struct PressureDirichlet {
  BoundaryTag tag = BoundaryTag::Right;
  ScalarField value;
  ScalarField varpi;
};

/// Fluid flux on a side without pressure data.
struct FluxBC {
  BoundaryTag tag = BoundaryTag::Right;
  ScalarField value;
};

struct BCSpec {
  std::vector<DisplacementDirichlet> displacement;
  std::vector<TractionBC> traction;
  std::vector<PressureDirichlet> pressure;
  std::vector<FluxBC> flux;
  /// Fix rigid motions by Lagrange multipliers (pure-traction problems).
  bool constrain_rigid_motions = false;
};

/// Closed-form solution of a manufactured case.
struct ExactSolution {
  VectorField tau;
  TensorField grad_tau;      // row c = gradient of component c
  ScalarField div_tau_t;     // time derivative of div tau
  ScalarField p;
  VectorField grad_p;

  double div_tau(const Point& x, double t) const { return grad_tau(x, t).trace(); }
  double varpi(const Material& m, const Point& x, double t) const {
    return m.params().a0 * p(x, t) + m.params().b0 * div_tau(x, t);
  }
  double delta(const Material& m, const Point& x, double t) const {
    return m.params().b0 * p(x, t) - m.lam() * div_tau(x, t) - m.params().lambda_star * div_tau_t(x, t);
  }
  /// lambda* q_t n + gamma eps(tau) n + lam q n - b0 p n.
  Vec2 traction(const Material& m, const Point& x, double t, const Vec2& n) const;
};

/// Everything a run needs apart from the mesh resolution and time grid.
struct ProblemCase {
  std::string name;
  Rect domain;
  PhysicalParams params;
  VectorField body_force;  // F
  ScalarField source;      // phi
  BCSpec bc;
  VectorField tau0;
  ScalarField p0;
  ScalarField delta0;  // optional; zero when empty
  std::optional<ExactSolution> exact;
  double T = 1.0;
  /// True when F, F1, phi and phi1 do not depend on time.
  bool steady_loads = false;
};

VectorField zero_vector_field();
ScalarField zero_scalar_field();

/// Boundary data of a case resolved against one mesh: the fixed sets of
/// constrained dofs and the per-facet traction masks.
class BoundaryProgram {
 public:
  BoundaryProgram(const ProblemCase& c, const Spaces& spaces);

  /// Constrained displacement dofs (sorted, unique).
  const std::vector<int>& tau_dofs() const { return tau_dofs_; }
  /// Values of the displacement constraints at time t, aligned with tau_dofs().
  std::vector<double> tau_values(double t) const;

  /// Constrained pressure-type nodes (P1 vertices, sorted, unique).
  const std::vector<int>& pressure_nodes() const { return pressure_nodes_; }
  /// p_D at the constrained nodes at time t.
  std::vector<double> pressure_values(double t) const;
  /// Closed-form varpi at the constrained nodes, if every clause has one.
  std::optional<std::vector<double>> varpi_values(double t) const;

  /// Traction functional <F1, v> at time t.
  Vector traction(double t) const;
  /// Flux functional <phi1, psi> at time t.
  Vector flux(double t) const;

  bool has_traction() const { return !traction_.empty(); }

 private:
  struct TractionPiece {
    TractionField value;
    std::vector<BoundaryFacet> facets;
    std::vector<std::array<bool, 2>> free;
  };
  struct FluxPiece {
    ScalarField value;
    std::vector<BoundaryFacet> facets;
  };
  struct NodeSource {
    int dof = -1;
    const ScalarField* value = nullptr;
    Point x;
  };

  const ProblemCase* case_;
  const Spaces* spaces_;
  std::vector<int> tau_dofs_;
  std::vector<NodeSource> tau_sources_;
  std::vector<int> pressure_nodes_;
  std::vector<NodeSource> pressure_sources_;
  std::vector<const ScalarField*> varpi_sources_;
  std::vector<TractionPiece> traction_;
  std::vector<FluxPiece> flux_;
};

}  // namespace porofem
