#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/LU>

#include "porofem/mesh.hpp"
#include "porofem/params.hpp"

namespace porofem {

using Vector = Eigen::VectorXd;

/// Space-time data: f(x, t).
using ScalarField = std::function<double(const Point&, double)>;
using VectorField = std::function<Vec2(const Point&, double)>;

enum class ElementKind { P1, P2 };

/// Values and reference gradients of all local basis functions at one point.
struct BasisEval {
  std::array<double, 6> values{};
  std::array<Vec2, 6> grads{};
  int n = 0;
};

/// Lagrange element on the reference triangle (0,0), (1,0), (0,1).
/// P2 local nodes 3, 4, 5 are the midpoints of edges (0,1), (1,2), (2,0).
class ReferenceElement {
 public:
  explicit ReferenceElement(ElementKind kind) : kind_(kind) {}

  ElementKind kind() const { return kind_; }
  int num_nodes() const { return kind_ == ElementKind::P1 ? 3 : 6; }
  /// Reference coordinates of local node i.
  Vec2 node(int i) const;

  BasisEval eval(const Vec2& xi) const;
  /// Reference Hessians; constant on the element (zero for P1).
  std::array<Mat2, 6> hessians() const;

 private:
  ElementKind kind_;
};

/// Triangle rule in barycentric coordinates; weights sum to 1/2.
struct QuadratureRule {
  int degree = 0;
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
  /// Reference coordinates (xi, eta) of point q.
  Vec2 ref_point(std::size_t q) const { return {points[q][1], points[q][2]}; }
};

/// Symmetric Gauss rule exact for polynomials of the requested degree
/// (1 <= degree <= 6). Degree 3 returns the degree-4 rule.
QuadratureRule triangle_quadrature(int degree);

/// Gauss-Legendre rule on [0, 1]; weights sum to 1.
struct LineRule {
  std::vector<double> points;
  std::vector<double> weights;
};
LineRule gauss_line(int npoints);

/// Affine map of a mesh triangle: x = origin + J * xi.
struct TriangleGeometry {
  Point origin;
  Mat2 J;
  Mat2 inv_JT;  // maps reference gradients to physical ones
  double det = 0.0;

  Point map(const Vec2& xi) const { return origin + J * xi; }
  Vec2 physical_grad(const Vec2& ref_grad) const { return inv_JT * ref_grad; }
  Mat2 physical_hessian(const Mat2& ref_hess) const { return inv_JT * ref_hess * inv_JT.transpose(); }
  double area() const { return 0.5 * det; }
};

TriangleGeometry triangle_geometry(const Mesh& mesh, int t);

/// Continuous Lagrange degree-of-freedom layout. P1 nodes are the vertices;
/// P2 nodes are vertices followed by edges. Vector fields are node-major,
/// component-minor: dof = node * n_components + component.
class DofMap {
 public:
  DofMap(const Mesh& mesh, ElementKind kind, int n_components);

  const Mesh& mesh() const { return *mesh_; }
  ElementKind kind() const { return element_.kind(); }
  const ReferenceElement& element() const { return element_; }
  int n_components() const { return n_components_; }
  int num_nodes() const { return num_nodes_; }
  int num_dofs() const { return num_nodes_ * n_components_; }
  int nodes_per_cell() const { return element_.num_nodes(); }
  int dofs_per_cell() const { return element_.num_nodes() * n_components_; }

  /// Global node ids of triangle t in local order.
  std::array<int, 6> cell_nodes(int t) const;
  /// Global dofs of triangle t, local dof = local_node * n_components + c.
  std::vector<int> cell_dofs(int t) const;
  int dof(int node, int component) const { return node * n_components_ + component; }

  Point node_coords(int node) const;
  /// Nodes lying on the given boundary facets (vertices and, for P2, edge
  /// midpoints), sorted and unique.
  std::vector<int> boundary_nodes(std::span<const BoundaryFacet> facets) const;
  std::vector<int> boundary_nodes(BoundaryTag tag) const;
  /// Nodes of one facet: its two vertices plus the midpoint node for P2.
  std::vector<int> facet_nodes(const BoundaryFacet& facet) const;

 private:
  const Mesh* mesh_;
  ReferenceElement element_;
  int n_components_;
  int num_nodes_;
};

/// Nodal interpolant of a scalar field at time t.
Vector interpolate(const ScalarField& f, const DofMap& dofs, double t);
/// Nodal interpolant of a vector field at time t (dofs must have 2 components).
Vector interpolate(const VectorField& f, const DofMap& dofs, double t);

/// Field value and physical derivatives at a reference point of a triangle.
struct FieldSample {
  Vec2 value = Vec2::Zero();  // component 1 unused for scalar fields
  Mat2 grad = Mat2::Zero();   // row c = gradient of component c
  double div = 0.0;           // trace of grad for vector fields
};

FieldSample eval_field(const Vector& coeffs, const DofMap& dofs, int t, const Vec2& xi);

/// Discontinuous piecewise-linear field stored by its three vertex values
/// on every triangle (index 3 * t + k). Used for quantities built from the
/// divergence of a P2 field, which is linear per triangle but not continuous.
class BrokenP1 {
 public:
  BrokenP1() = default;
  explicit BrokenP1(std::size_t num_triangles) : values_(Vector::Zero(static_cast<Eigen::Index>(3 * num_triangles))) {}

  std::size_t num_triangles() const { return static_cast<std::size_t>(values_.size() / 3); }
  double& at(int t, int k) { return values_(3 * t + k); }
  double at(int t, int k) const { return values_(3 * t + k); }
  const Vector& values() const { return values_; }
  Vector& values() { return values_; }

  double eval(int t, const std::array<double, 3>& bary) const {
    return bary[0] * at(t, 0) + bary[1] * at(t, 1) + bary[2] * at(t, 2);
  }
  /// Constant physical gradient on triangle t.
  Vec2 grad(const TriangleGeometry& geo, int t) const {
    return geo.physical_grad(Vec2(at(t, 1) - at(t, 0), at(t, 2) - at(t, 0)));
  }
  double cell_average(int t) const { return (at(t, 0) + at(t, 1) + at(t, 2)) / 3.0; }

 private:
  Vector values_;
};

/// Elementwise divergence of a P2 vector field as a broken P1 field.
BrokenP1 broken_divergence(const Vector& coeffs, const DofMap& dofs);
/// Restriction of a continuous P1 field to a broken one.
BrokenP1 to_broken(const Vector& p1_coeffs, const DofMap& p1);

}  // namespace porofem
