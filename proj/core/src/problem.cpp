#include "porofem/problem.hpp"

#include <algorithm>
#include <stdexcept>

namespace porofem {

Vec2 ExactSolution::traction(const Material& m, const Point& x, double t, const Vec2& n) const {
  const Mat2 g = grad_tau(x, t);
  const Mat2 eps = 0.5 * (g + g.transpose());
  const double q = g.trace();
  const double scalar = m.params().lambda_star * div_tau_t(x, t) + m.lam() * q - m.params().b0 * p(x, t);
  return m.gamma() * eps * n + scalar * n;
}

VectorField zero_vector_field() {
  return [](const Point&, double) { return Vec2::Zero().eval(); };
}

ScalarField zero_scalar_field() {
  return [](const Point&, double) { return 0.0; };
}

namespace {

Point facet_midpoint(const Mesh& mesh, const BoundaryFacet& f) { return mesh.edge_midpoint(f.edge); }

bool selected(const FacetFilter& where, const Point& mid) { return !where || where(mid); }

}  // namespace

BoundaryProgram::BoundaryProgram(const ProblemCase& c, const Spaces& spaces) : case_(&c), spaces_(&spaces) {
  const Mesh& mesh = *spaces.mesh;
  const DofMap& p2v = spaces.p2v;
  const DofMap& p1 = spaces.p1;

  for (const auto& d : c.bc.displacement) {
    if (d.component < 0 || d.component > 1) throw std::invalid_argument("displacement component must be 0 or 1");
    for (const auto& f : mesh.boundary_facets(d.tag)) {
      if (!selected(d.where, facet_midpoint(mesh, f))) continue;
      for (int node : p2v.facet_nodes(f)) {
        tau_sources_.push_back({p2v.dof(node, d.component), &d.value, p2v.node_coords(node)});
      }
    }
  }
  std::stable_sort(tau_sources_.begin(), tau_sources_.end(),
                   [](const NodeSource& a, const NodeSource& b) { return a.dof < b.dof; });
  for (const auto& s : tau_sources_) {
    if (tau_dofs_.empty() || tau_dofs_.back() != s.dof) tau_dofs_.push_back(s.dof);
  }

  for (const auto& tr : c.bc.traction) {
    TractionPiece piece;
    piece.value = tr.value;
    for (const auto& f : mesh.boundary_facets(tr.tag)) {
      const Point mid = facet_midpoint(mesh, f);
      if (!selected(tr.where, mid)) continue;
      std::array<bool, 2> free = {true, true};
      for (const auto& d : c.bc.displacement) {
        if (d.tag == tr.tag && selected(d.where, mid)) free[static_cast<std::size_t>(d.component)] = false;
      }
      piece.facets.push_back(f);
      piece.free.push_back(free);
    }
    traction_.push_back(std::move(piece));
  }

  bool all_varpi = !c.bc.pressure.empty();
  for (const auto& pd : c.bc.pressure) {
    if (!pd.varpi) all_varpi = false;
    for (int node : p1.boundary_nodes(pd.tag)) {
      pressure_sources_.push_back({node, &pd.value, p1.node_coords(node)});
      varpi_sources_.push_back(pd.varpi ? &pd.varpi : nullptr);
    }
  }
  // sort both source lists together by node
  std::vector<std::size_t> order(pressure_sources_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [this](std::size_t a, std::size_t b) {
    return pressure_sources_[a].dof < pressure_sources_[b].dof;
  });
  std::vector<NodeSource> ps;
  std::vector<const ScalarField*> vs;
  for (std::size_t i : order) {
    if (!ps.empty() && ps.back().dof == pressure_sources_[i].dof) continue;
    ps.push_back(pressure_sources_[i]);
    vs.push_back(varpi_sources_[i]);
  }
  pressure_sources_ = std::move(ps);
  varpi_sources_ = all_varpi ? std::move(vs) : std::vector<const ScalarField*>{};
  for (const auto& s : pressure_sources_) pressure_nodes_.push_back(s.dof);

  for (const auto& fl : c.bc.flux) {
    for (const auto& pd : c.bc.pressure) {
      if (pd.tag == fl.tag) throw std::invalid_argument("flux and pressure data on the same side " + to_string(fl.tag));
    }
    flux_.push_back({fl.value, mesh.boundary_facets(fl.tag)});
  }
}

std::vector<double> BoundaryProgram::tau_values(double t) const {
  std::vector<DirichletConstraint> all;
  all.reserve(tau_sources_.size());
  for (const auto& s : tau_sources_) all.push_back({s.dof, (*s.value)(s.x, t)});
  const auto merged = merge_constraints(std::move(all), 1e-10);
  std::vector<double> out;
  out.reserve(merged.size());
  for (const auto& m : merged) out.push_back(m.value);
  return out;
}

std::vector<double> BoundaryProgram::pressure_values(double t) const {
  std::vector<double> out;
  out.reserve(pressure_sources_.size());
  for (const auto& s : pressure_sources_) out.push_back((*s.value)(s.x, t));
  return out;
}

std::optional<std::vector<double>> BoundaryProgram::varpi_values(double t) const {
  if (varpi_sources_.empty()) return std::nullopt;
  std::vector<double> out;
  out.reserve(pressure_sources_.size());
  for (std::size_t i = 0; i < pressure_sources_.size(); ++i) {
    out.push_back((*varpi_sources_[i])(pressure_sources_[i].x, t));
  }
  return out;
}

Vector BoundaryProgram::traction(double t) const {
  Vector out = Vector::Zero(spaces_->p2v.num_dofs());
  for (const auto& piece : traction_) {
    out += assemble_boundary_traction(piece.value, piece.facets, piece.free, spaces_->p2v, t);
  }
  return out;
}

Vector BoundaryProgram::flux(double t) const {
  Vector out = Vector::Zero(spaces_->p1.num_dofs());
  for (const auto& piece : flux_) out += assemble_boundary_flux(piece.value, piece.facets, spaces_->p1, t);
  return out;
}

}  // namespace porofem
