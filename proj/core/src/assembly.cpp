#include "porofem/assembly.hpp"

#include <stdexcept>

namespace porofem {

namespace {

int num_cells(const DofMap& d) { return static_cast<int>(d.mesh().num_triangles()); }

struct PhysicalBasis {
  std::array<double, 6> values{};
  std::array<Vec2, 6> grads{};
  int n = 0;
};

PhysicalBasis physical_basis(const ReferenceElement& el, const TriangleGeometry& geo, const Vec2& xi) {
  const BasisEval b = el.eval(xi);
  PhysicalBasis out;
  out.n = b.n;
  for (int i = 0; i < b.n; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    out.values[ii] = b.values[ii];
    out.grads[ii] = geo.physical_grad(b.grads[ii]);
  }
  return out;
}

void require_vector(const DofMap& d) {
  if (d.n_components() != 2 || d.kind() != ElementKind::P2) throw std::invalid_argument("expected a P2 vector space");
}

void require_scalar(const DofMap& d) {
  if (d.n_components() != 1) throw std::invalid_argument("expected a scalar space");
}

// Element loop for bilinear forms on the vector space. kernel(b, w, local)
// adds the contribution of one quadrature point with weight w.
template <typename Kernel>
SparseMatrix vector_form(const DofMap& p2v, Kernel kernel) {
  require_vector(p2v);
  const QuadratureRule rule = triangle_quadrature(kOperatorQuadrature);
  const int nd = p2v.dofs_per_cell();
  TripletAssembler tri(p2v.num_dofs(), p2v.num_dofs());
  tri.reserve(static_cast<std::size_t>(num_cells(p2v) * nd * nd));
  DenseMatrix local(nd, nd);
  for (int t = 0; t < num_cells(p2v); ++t) {
    const TriangleGeometry geo = triangle_geometry(p2v.mesh(), t);
    local.setZero();
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const PhysicalBasis b = physical_basis(p2v.element(), geo, rule.ref_point(q));
      kernel(b, rule.weights[q] * geo.det, geo.map(rule.ref_point(q)), local);
    }
    const auto dofs = p2v.cell_dofs(t);
    tri.add_local(dofs, dofs, local);
  }
  return tri.finalize();
}

}  // namespace

SparseMatrix assemble_elasticity(const DofMap& p2v, double gamma) {
  return vector_form(p2v, [gamma](const PhysicalBasis& b, double w, const Point&, DenseMatrix& local) {
    // eps(phi_i e_a) = sym(e_a grad_i^T)
    for (int i = 0; i < b.n; ++i) {
      for (int a = 0; a < 2; ++a) {
        Mat2 ei = Mat2::Zero();
        ei.row(a) = b.grads[static_cast<std::size_t>(i)].transpose();
        ei = 0.5 * (ei + ei.transpose()).eval();
        for (int j = 0; j < b.n; ++j) {
          for (int c = 0; c < 2; ++c) {
            Mat2 ej = Mat2::Zero();
            ej.row(c) = b.grads[static_cast<std::size_t>(j)].transpose();
            ej = 0.5 * (ej + ej.transpose()).eval();
            local(2 * i + a, 2 * j + c) += w * gamma * (ei.array() * ej.array()).sum();
          }
        }
      }
    }
  });
}

SparseMatrix assemble_div_div(const DofMap& p2v) {
  return vector_form(p2v, [](const PhysicalBasis& b, double w, const Point&, DenseMatrix& local) {
    for (int i = 0; i < b.n; ++i) {
      for (int a = 0; a < 2; ++a) {
        const double di = b.grads[static_cast<std::size_t>(i)](a);
        for (int j = 0; j < b.n; ++j) {
          for (int c = 0; c < 2; ++c) {
            local(2 * i + a, 2 * j + c) += w * di * b.grads[static_cast<std::size_t>(j)](c);
          }
        }
      }
    }
  });
}

SparseMatrix assemble_vector_h1(const DofMap& p2v) {
  return vector_form(p2v, [](const PhysicalBasis& b, double w, const Point&, DenseMatrix& local) {
    for (int i = 0; i < b.n; ++i) {
      const auto ii = static_cast<std::size_t>(i);
      for (int j = 0; j < b.n; ++j) {
        const auto jj = static_cast<std::size_t>(j);
        const double v = w * (b.grads[ii].dot(b.grads[jj]) + b.values[ii] * b.values[jj]);
        local(2 * i, 2 * j) += v;
        local(2 * i + 1, 2 * j + 1) += v;
      }
    }
  });
}

SparseMatrix assemble_div(const DofMap& p2v, const DofMap& p1) {
  require_vector(p2v);
  require_scalar(p1);
  const QuadratureRule rule = triangle_quadrature(kOperatorQuadrature);
  TripletAssembler tri(p1.num_dofs(), p2v.num_dofs());
  DenseMatrix local(p1.dofs_per_cell(), p2v.dofs_per_cell());
  for (int t = 0; t < num_cells(p2v); ++t) {
    const TriangleGeometry geo = triangle_geometry(p2v.mesh(), t);
    local.setZero();
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vec2 xi = rule.ref_point(q);
      const double w = rule.weights[q] * geo.det;
      const PhysicalBasis u = physical_basis(p2v.element(), geo, xi);
      const PhysicalBasis s = physical_basis(p1.element(), geo, xi);
      for (int i = 0; i < s.n; ++i) {
        for (int j = 0; j < u.n; ++j) {
          for (int c = 0; c < 2; ++c) {
            local(i, 2 * j + c) +=
                w * s.values[static_cast<std::size_t>(i)] * u.grads[static_cast<std::size_t>(j)](c);
          }
        }
      }
    }
    tri.add_local(p1.cell_dofs(t), p2v.cell_dofs(t), local);
  }
  return tri.finalize();
}

SparseMatrix assemble_mass(const DofMap& scalar) {
  require_scalar(scalar);
  const QuadratureRule rule = triangle_quadrature(kOperatorQuadrature);
  const int nd = scalar.dofs_per_cell();
  TripletAssembler tri(scalar.num_dofs(), scalar.num_dofs());
  DenseMatrix local(nd, nd);
  for (int t = 0; t < num_cells(scalar); ++t) {
    const TriangleGeometry geo = triangle_geometry(scalar.mesh(), t);
    local.setZero();
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const PhysicalBasis b = physical_basis(scalar.element(), geo, rule.ref_point(q));
      const double w = rule.weights[q] * geo.det;
      for (int i = 0; i < nd; ++i) {
        for (int j = 0; j < nd; ++j) {
          local(i, j) += w * b.values[static_cast<std::size_t>(i)] * b.values[static_cast<std::size_t>(j)];
        }
      }
    }
    const auto dofs = scalar.cell_dofs(t);
    tri.add_local(dofs, dofs, local);
  }
  return tri.finalize();
}

SparseMatrix assemble_diffusion(const DofMap& scalar, const Mat2& K, double theta_f) {
  require_scalar(scalar);
  const QuadratureRule rule = triangle_quadrature(kOperatorQuadrature);
  const int nd = scalar.dofs_per_cell();
  const Mat2 Kf = K / theta_f;
  TripletAssembler tri(scalar.num_dofs(), scalar.num_dofs());
  DenseMatrix local(nd, nd);
  for (int t = 0; t < num_cells(scalar); ++t) {
    const TriangleGeometry geo = triangle_geometry(scalar.mesh(), t);
    local.setZero();
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const PhysicalBasis b = physical_basis(scalar.element(), geo, rule.ref_point(q));
      const double w = rule.weights[q] * geo.det;
      for (int i = 0; i < nd; ++i) {
        for (int j = 0; j < nd; ++j) {
          local(i, j) += w * b.grads[static_cast<std::size_t>(i)].dot(Kf * b.grads[static_cast<std::size_t>(j)]);
        }
      }
    }
    const auto dofs = scalar.cell_dofs(t);
    tri.add_local(dofs, dofs, local);
  }
  return tri.finalize();
}

SparseMatrix assemble_broken_divgrad(const DofMap& p2v, const DofMap& p1, const Mat2& K, double theta_f) {
  require_vector(p2v);
  require_scalar(p1);
  if (p1.kind() != ElementKind::P1) throw std::invalid_argument("expected a P1 test space");
  const Mat2 Kf = K / theta_f;
  const auto ref_hess = p2v.element().hessians();
  TripletAssembler tri(p1.num_dofs(), p2v.num_dofs());
  DenseMatrix local(3, p2v.dofs_per_cell());
  for (int t = 0; t < num_cells(p2v); ++t) {
    const TriangleGeometry geo = triangle_geometry(p2v.mesh(), t);
    const PhysicalBasis s = physical_basis(p1.element(), geo, Vec2(1.0 / 3.0, 1.0 / 3.0));
    local.setZero();
    for (int j = 0; j < 6; ++j) {
      const Mat2 H = geo.physical_hessian(ref_hess[static_cast<std::size_t>(j)]);
      for (int c = 0; c < 2; ++c) {
        // grad of d(phi_j)/dx_c
        const Vec2 g = H.col(c);
        for (int i = 0; i < 3; ++i) {
          local(i, 2 * j + c) = geo.area() * s.grads[static_cast<std::size_t>(i)].dot(Kf * g);
        }
      }
    }
    tri.add_local(p1.cell_dofs(t), p2v.cell_dofs(t), local);
  }
  return tri.finalize();
}

SparseMatrix assemble_rigid_motions(const DofMap& p2v) {
  require_vector(p2v);
  const QuadratureRule rule = triangle_quadrature(kOperatorQuadrature);
  Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(3, p2v.num_dofs());
  for (int t = 0; t < num_cells(p2v); ++t) {
    const TriangleGeometry geo = triangle_geometry(p2v.mesh(), t);
    const auto dofs = p2v.cell_dofs(t);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vec2 xi = rule.ref_point(q);
      const Point x = geo.map(xi);
      const double w = rule.weights[q] * geo.det;
      const PhysicalBasis b = physical_basis(p2v.element(), geo, xi);
      for (int j = 0; j < b.n; ++j) {
        const double v = w * b.values[static_cast<std::size_t>(j)];
        const int d0 = dofs[static_cast<std::size_t>(2 * j)];
        const int d1 = dofs[static_cast<std::size_t>(2 * j + 1)];
        rows(0, d0) += v;
        rows(1, d1) += v;
        rows(2, d0) += -x.y() * v;
        rows(2, d1) += x.x() * v;
      }
    }
  }
  return rows.sparseView();
}

Vector assemble_load(const VectorField& F, const DofMap& p2v, double t) {
  require_vector(p2v);
  const QuadratureRule rule = triangle_quadrature(kLoadQuadrature);
  Vector out = Vector::Zero(p2v.num_dofs());
  for (int c = 0; c < num_cells(p2v); ++c) {
    const TriangleGeometry geo = triangle_geometry(p2v.mesh(), c);
    const auto dofs = p2v.cell_dofs(c);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vec2 xi = rule.ref_point(q);
      const Vec2 f = F(geo.map(xi), t);
      const double w = rule.weights[q] * geo.det;
      const BasisEval b = p2v.element().eval(xi);
      for (int j = 0; j < b.n; ++j) {
        const double v = w * b.values[static_cast<std::size_t>(j)];
        out(dofs[static_cast<std::size_t>(2 * j)]) += v * f.x();
        out(dofs[static_cast<std::size_t>(2 * j + 1)]) += v * f.y();
      }
    }
  }
  return out;
}

Vector assemble_load(const ScalarField& f, const DofMap& scalar, double t) {
  require_scalar(scalar);
  const QuadratureRule rule = triangle_quadrature(kLoadQuadrature);
  Vector out = Vector::Zero(scalar.num_dofs());
  for (int c = 0; c < num_cells(scalar); ++c) {
    const TriangleGeometry geo = triangle_geometry(scalar.mesh(), c);
    const auto dofs = scalar.cell_dofs(c);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vec2 xi = rule.ref_point(q);
      const double w = rule.weights[q] * geo.det * f(geo.map(xi), t);
      const BasisEval b = scalar.element().eval(xi);
      for (int j = 0; j < b.n; ++j) out(dofs[static_cast<std::size_t>(j)]) += w * b.values[static_cast<std::size_t>(j)];
    }
  }
  return out;
}

namespace {

// Values of the facet's nodal basis functions at parameter s in [0, 1]
// along the edge from its first to its second vertex. Order matches
// DofMap::facet_nodes.
std::vector<double> facet_basis(ElementKind kind, double s) {
  if (kind == ElementKind::P1) return {1.0 - s, s};
  return {(1.0 - s) * (1.0 - 2.0 * s), s * (2.0 * s - 1.0), 4.0 * s * (1.0 - s)};
}

}  // namespace

Vector assemble_boundary_traction(const TractionField& g, std::span<const BoundaryFacet> facets,
                                  const std::vector<std::array<bool, 2>>& free, const DofMap& p2v, double t) {
  require_vector(p2v);
  if (free.size() != facets.size()) throw std::invalid_argument("traction mask size mismatch");
  const LineRule rule = gauss_line(kFacetGaussPoints);
  const Mesh& mesh = p2v.mesh();
  Vector out = Vector::Zero(p2v.num_dofs());
  for (std::size_t f = 0; f < facets.size(); ++f) {
    if (!free[f][0] && !free[f][1]) continue;
    const auto& e = mesh.edge(facets[f].edge);
    const Point a = mesh.vertex(e[0]);
    const Point b = mesh.vertex(e[1]);
    const double len = (b - a).norm();
    const auto nodes = p2v.facet_nodes(facets[f]);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const double s = rule.points[q];
      const Vec2 val = g(a + s * (b - a), t, facets[f].normal);
      const auto phi = facet_basis(p2v.kind(), s);
      for (std::size_t k = 0; k < nodes.size(); ++k) {
        const double w = rule.weights[q] * len * phi[k];
        for (int c = 0; c < 2; ++c) {
          if (free[f][static_cast<std::size_t>(c)]) out(p2v.dof(nodes[k], c)) += w * val(c);
        }
      }
    }
  }
  return out;
}

Vector assemble_boundary_flux(const ScalarField& g, std::span<const BoundaryFacet> facets, const DofMap& scalar,
                              double t) {
  require_scalar(scalar);
  const LineRule rule = gauss_line(kFacetGaussPoints);
  const Mesh& mesh = scalar.mesh();
  Vector out = Vector::Zero(scalar.num_dofs());
  for (const auto& facet : facets) {
    const auto& e = mesh.edge(facet.edge);
    const Point a = mesh.vertex(e[0]);
    const Point b = mesh.vertex(e[1]);
    const double len = (b - a).norm();
    const auto nodes = scalar.facet_nodes(facet);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const double s = rule.points[q];
      const double val = g(a + s * (b - a), t);
      const auto phi = facet_basis(scalar.kind(), s);
      for (std::size_t k = 0; k < nodes.size(); ++k) out(nodes[k]) += rule.weights[q] * len * phi[k] * val;
    }
  }
  return out;
}

Vector assemble_gravity_flux(const DofMap& p1, const Mat2& K, const Vec2& rho_f_g, double theta_f) {
  require_scalar(p1);
  Vector out = Vector::Zero(p1.num_dofs());
  if (rho_f_g.isZero(0.0)) return out;
  const Vec2 flux = K * rho_f_g / theta_f;
  for (int t = 0; t < num_cells(p1); ++t) {
    const TriangleGeometry geo = triangle_geometry(p1.mesh(), t);
    const PhysicalBasis b = physical_basis(p1.element(), geo, Vec2(1.0 / 3.0, 1.0 / 3.0));
    const auto dofs = p1.cell_dofs(t);
    // gradients are constant on P1, so a one-point rule is exact
    for (int i = 0; i < b.n; ++i) {
      out(dofs[static_cast<std::size_t>(i)]) += geo.area() * flux.dot(b.grads[static_cast<std::size_t>(i)]);
    }
  }
  return out;
}

Vector lumped_projection(const BrokenP1& field, const DofMap& p1) {
  require_scalar(p1);
  const Mesh& mesh = p1.mesh();
  Vector num = Vector::Zero(p1.num_dofs());
  Vector den = Vector::Zero(p1.num_dofs());
  for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t) {
    const double a = mesh.area(t);
    const auto& tri = mesh.triangle(t);
    for (int k = 0; k < 3; ++k) {
      // row sum of the element mass matrix against the linear field
      const double integral = a / 12.0 * (field.at(t, 0) + field.at(t, 1) + field.at(t, 2) + field.at(t, k));
      num(tri[static_cast<std::size_t>(k)]) += integral;
      den(tri[static_cast<std::size_t>(k)]) += a / 3.0;
    }
  }
  return num.cwiseQuotient(den);
}

}  // namespace porofem
