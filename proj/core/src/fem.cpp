#include "porofem/fem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace porofem {

Vec2 ReferenceElement::node(int i) const {
  static const std::array<Vec2, 6> nodes = {Vec2(0.0, 0.0), Vec2(1.0, 0.0), Vec2(0.0, 1.0),
                                            Vec2(0.5, 0.0), Vec2(0.5, 0.5), Vec2(0.0, 0.5)};
  return nodes[static_cast<std::size_t>(i)];
}

BasisEval ReferenceElement::eval(const Vec2& xi) const {
  const std::array<double, 3> l = {1.0 - xi.x() - xi.y(), xi.x(), xi.y()};
  const std::array<Vec2, 3> dl = {Vec2(-1.0, -1.0), Vec2(1.0, 0.0), Vec2(0.0, 1.0)};

  BasisEval out;
  out.n = num_nodes();
  if (kind_ == ElementKind::P1) {
    for (std::size_t i = 0; i < 3; ++i) {
      out.values[i] = l[i];
      out.grads[i] = dl[i];
    }
    return out;
  }
  for (std::size_t i = 0; i < 3; ++i) {
    out.values[i] = l[i] * (2.0 * l[i] - 1.0);
    out.grads[i] = (4.0 * l[i] - 1.0) * dl[i];
  }
  for (std::size_t k = 0; k < 3; ++k) {
    const std::size_t a = k;
    const std::size_t b = (k + 1) % 3;
    out.values[3 + k] = 4.0 * l[a] * l[b];
    out.grads[3 + k] = 4.0 * (l[b] * dl[a] + l[a] * dl[b]);
  }
  return out;
}

std::array<Mat2, 6> ReferenceElement::hessians() const {
  std::array<Mat2, 6> h;
  for (auto& m : h) m.setZero();
  if (kind_ == ElementKind::P1) return h;
  const std::array<Vec2, 3> dl = {Vec2(-1.0, -1.0), Vec2(1.0, 0.0), Vec2(0.0, 1.0)};
  for (std::size_t i = 0; i < 3; ++i) {
    h[i] = 4.0 * dl[i] * dl[i].transpose();
  }
  for (std::size_t k = 0; k < 3; ++k) {
    const std::size_t a = k;
    const std::size_t b = (k + 1) % 3;
    h[3 + k] = 4.0 * (dl[a] * dl[b].transpose() + dl[b] * dl[a].transpose());
  }
  return h;
}

namespace {

// Orbits of the symmetric group acting on barycentric coordinates.
void add_centroid(QuadratureRule& r, double w) {
  r.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
  r.weights.push_back(0.5 * w);
}

void add_orbit3(QuadratureRule& r, double a, double w) {
  const double b = 1.0 - 2.0 * a;
  r.points.push_back({a, a, b});
  r.points.push_back({a, b, a});
  r.points.push_back({b, a, a});
  for (int i = 0; i < 3; ++i) r.weights.push_back(0.5 * w);
}

void add_orbit6(QuadratureRule& r, double a, double b, double w) {
  const double c = 1.0 - a - b;
  const std::array<std::array<double, 3>, 6> perms = {{{a, b, c}, {a, c, b}, {b, a, c},
                                                        {b, c, a}, {c, a, b}, {c, b, a}}};
  for (const auto& p : perms) {
    r.points.push_back(p);
    r.weights.push_back(0.5 * w);
  }
}

}  // namespace

QuadratureRule triangle_quadrature(int degree) {
  QuadratureRule r;
  switch (degree) {
    case 1:
      r.degree = 1;
      add_centroid(r, 1.0);
      break;
    case 2:
      r.degree = 2;
      add_orbit3(r, 1.0 / 6.0, 1.0 / 3.0);
      break;
    case 3:
    case 4:
      // Dunavant 6-point rule
      r.degree = 4;
      add_orbit3(r, 0.445948490915965, 0.223381589678011);
      add_orbit3(r, 0.091576213509771, 0.109951743655322);
      break;
    case 5:
      r.degree = 5;
      add_centroid(r, 0.225);
      add_orbit3(r, 0.470142064105115, 0.132394152788506);
      add_orbit3(r, 0.101286507323456, 0.125939180544827);
      break;
    case 6:
      // Dunavant 12-point rule
      r.degree = 6;
      add_orbit3(r, 0.249286745170910, 0.116786275726379);
      add_orbit3(r, 0.063089014491502, 0.050844906370207);
      add_orbit6(r, 0.053145049844817, 0.310352451033784, 0.082851075618374);
      break;
    default:
      throw std::invalid_argument("unsupported quadrature degree " + std::to_string(degree));
  }
  return r;
}

LineRule gauss_line(int npoints) {
  LineRule r;
  switch (npoints) {
    case 1:
      r.points = {0.5};
      r.weights = {1.0};
      break;
    case 2: {
      const double d = 0.5 / std::sqrt(3.0);
      r.points = {0.5 - d, 0.5 + d};
      r.weights = {0.5, 0.5};
      break;
    }
    case 3: {
      const double d = 0.5 * std::sqrt(3.0 / 5.0);
      r.points = {0.5 - d, 0.5, 0.5 + d};
      r.weights = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
      break;
    }
    default:
      throw std::invalid_argument("unsupported line rule size " + std::to_string(npoints));
  }
  return r;
}

TriangleGeometry triangle_geometry(const Mesh& mesh, int t) {
  const auto& tri = mesh.triangle(t);
  TriangleGeometry g;
  g.origin = mesh.vertex(tri[0]);
  g.J.col(0) = mesh.vertex(tri[1]) - g.origin;
  g.J.col(1) = mesh.vertex(tri[2]) - g.origin;
  g.det = g.J.determinant();
  g.inv_JT = g.J.inverse().transpose();
  return g;
}

DofMap::DofMap(const Mesh& mesh, ElementKind kind, int n_components)
    : mesh_(&mesh), element_(kind), n_components_(n_components) {
  if (n_components < 1) throw std::invalid_argument("n_components must be positive");
  num_nodes_ = static_cast<int>(mesh.num_vertices());
  if (kind == ElementKind::P2) num_nodes_ += static_cast<int>(mesh.num_edges());
}

std::array<int, 6> DofMap::cell_nodes(int t) const {
  const auto& tri = mesh_->triangle(t);
  std::array<int, 6> nodes = {tri[0], tri[1], tri[2], -1, -1, -1};
  if (kind() == ElementKind::P2) {
    const int nv = static_cast<int>(mesh_->num_vertices());
    const auto& te = mesh_->triangle_edges(t);
    for (std::size_t k = 0; k < 3; ++k) nodes[3 + k] = nv + te[k];
  }
  return nodes;
}

std::vector<int> DofMap::cell_dofs(int t) const {
  const auto nodes = cell_nodes(t);
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(dofs_per_cell()));
  for (int i = 0; i < nodes_per_cell(); ++i) {
    for (int c = 0; c < n_components_; ++c) out.push_back(dof(nodes[static_cast<std::size_t>(i)], c));
  }
  return out;
}

Point DofMap::node_coords(int node) const {
  const int nv = static_cast<int>(mesh_->num_vertices());
  if (node < nv) return mesh_->vertex(node);
  return mesh_->edge_midpoint(node - nv);
}

std::vector<int> DofMap::facet_nodes(const BoundaryFacet& facet) const {
  const auto& e = mesh_->edge(facet.edge);
  std::vector<int> out = {e[0], e[1]};
  if (kind() == ElementKind::P2) out.push_back(static_cast<int>(mesh_->num_vertices()) + facet.edge);
  return out;
}

std::vector<int> DofMap::boundary_nodes(std::span<const BoundaryFacet> facets) const {
  std::vector<int> out;
  for (const auto& f : facets) {
    const auto nodes = facet_nodes(f);
    out.insert(out.end(), nodes.begin(), nodes.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<int> DofMap::boundary_nodes(BoundaryTag tag) const {
  const auto facets = mesh_->boundary_facets(tag);
  return boundary_nodes(std::span<const BoundaryFacet>(facets));
}

Vector interpolate(const ScalarField& f, const DofMap& dofs, double t) {
  if (dofs.n_components() != 1) throw std::invalid_argument("scalar interpolation needs a scalar dof map");
  Vector out(dofs.num_dofs());
  for (int n = 0; n < dofs.num_nodes(); ++n) out(n) = f(dofs.node_coords(n), t);
  return out;
}

Vector interpolate(const VectorField& f, const DofMap& dofs, double t) {
  if (dofs.n_components() != 2) throw std::invalid_argument("vector interpolation needs a 2-component dof map");
  Vector out(dofs.num_dofs());
  for (int n = 0; n < dofs.num_nodes(); ++n) {
    const Vec2 v = f(dofs.node_coords(n), t);
    out(dofs.dof(n, 0)) = v.x();
    out(dofs.dof(n, 1)) = v.y();
  }
  return out;
}

FieldSample eval_field(const Vector& coeffs, const DofMap& dofs, int t, const Vec2& xi) {
  const TriangleGeometry geo = triangle_geometry(dofs.mesh(), t);
  const BasisEval basis = dofs.element().eval(xi);
  const auto nodes = dofs.cell_nodes(t);
  FieldSample s;
  const int nc = dofs.n_components();
  for (int i = 0; i < basis.n; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    const Vec2 g = geo.physical_grad(basis.grads[ii]);
    for (int c = 0; c < nc; ++c) {
      const double u = coeffs(dofs.dof(nodes[ii], c));
      s.value(c) += u * basis.values[ii];
      s.grad.row(c) += u * g.transpose();
    }
  }
  if (nc == 2) s.div = s.grad(0, 0) + s.grad(1, 1);
  return s;
}

BrokenP1 broken_divergence(const Vector& coeffs, const DofMap& dofs) {
  const Mesh& mesh = dofs.mesh();
  BrokenP1 out(mesh.num_triangles());
  const ReferenceElement& el = dofs.element();
  for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t) {
    for (int k = 0; k < 3; ++k) {
      out.at(t, k) = eval_field(coeffs, dofs, t, el.node(k)).div;
    }
  }
  return out;
}

BrokenP1 to_broken(const Vector& p1_coeffs, const DofMap& p1) {
  const Mesh& mesh = p1.mesh();
  BrokenP1 out(mesh.num_triangles());
  for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t) {
    const auto& tri = mesh.triangle(t);
    for (int k = 0; k < 3; ++k) out.at(t, k) = p1_coeffs(tri[static_cast<std::size_t>(k)]);
  }
  return out;
}

}  // namespace porofem
