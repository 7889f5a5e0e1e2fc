#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "porofem/fem.hpp"

using namespace porofem;

namespace {

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

// integral of x^a y^b over the reference triangle
double monomial_integral(int a, int b) { return factorial(a) * factorial(b) / factorial(a + b + 2); }

Vec2 quadratic_field(const Point& x, double) {
  return {1.0 + 2.0 * x.x() - x.y() + 0.5 * x.x() * x.x() - 3.0 * x.x() * x.y(),
          -0.25 + x.y() * x.y() + 4.0 * x.x() * x.y() - x.x()};
}

Mat2 quadratic_grad(const Point& x) {
  Mat2 g;
  g << 2.0 + x.x() - 3.0 * x.y(), -1.0 - 3.0 * x.x(), 4.0 * x.y() - 1.0, 2.0 * x.y() + 4.0 * x.x();
  return g;
}

}  // namespace

class TriangleRule : public ::testing::TestWithParam<int> {};

TEST_P(TriangleRule, IntegratesMonomialsExactly) {
  const QuadratureRule r = triangle_quadrature(GetParam());
  double wsum = 0.0;
  for (double w : r.weights) wsum += w;
  EXPECT_NEAR(wsum, 0.5, 1e-14);
  for (int a = 0; a <= r.degree; ++a) {
    for (int b = 0; a + b <= r.degree; ++b) {
      double s = 0.0;
      for (std::size_t q = 0; q < r.size(); ++q) {
        const Vec2 xi = r.ref_point(q);
        s += r.weights[q] * std::pow(xi.x(), a) * std::pow(xi.y(), b);
      }
      EXPECT_NEAR(s, monomial_integral(a, b), 1e-13) << "x^" << a << " y^" << b;
    }
  }
  for (const auto& p : r.points) EXPECT_NEAR(p[0] + p[1] + p[2], 1.0, 1e-14);
}

INSTANTIATE_TEST_SUITE_P(Degrees, TriangleRule, ::testing::Range(1, 7));

TEST(Quadrature, RejectsUnsupportedDegree) {
  EXPECT_THROW(triangle_quadrature(0), std::invalid_argument);
  EXPECT_THROW(triangle_quadrature(7), std::invalid_argument);
  EXPECT_THROW(gauss_line(4), std::invalid_argument);
}

TEST(Quadrature, GaussLineExactness) {
  for (int n = 1; n <= 3; ++n) {
    const LineRule r = gauss_line(n);
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double s = 0.0;
      for (std::size_t q = 0; q < r.points.size(); ++q) s += r.weights[q] * std::pow(r.points[q], k);
      EXPECT_NEAR(s, 1.0 / (k + 1), 1e-15);
    }
  }
}

class Basis : public ::testing::TestWithParam<ElementKind> {};

TEST_P(Basis, KroneckerAndPartitionOfUnity) {
  const ReferenceElement el(GetParam());
  for (int i = 0; i < el.num_nodes(); ++i) {
    const BasisEval e = el.eval(el.node(i));
    for (int j = 0; j < el.num_nodes(); ++j) {
      EXPECT_NEAR(e.values[static_cast<std::size_t>(j)], i == j ? 1.0 : 0.0, 1e-15);
    }
  }
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    double a = u(rng), b = u(rng);
    if (a + b > 1.0) a = 1.0 - a, b = 1.0 - b;
    const BasisEval e = el.eval({a, b});
    double s = 0.0;
    Vec2 g = Vec2::Zero();
    Vec2 xsum = Vec2::Zero();
    for (int j = 0; j < e.n; ++j) {
      s += e.values[static_cast<std::size_t>(j)];
      g += e.grads[static_cast<std::size_t>(j)];
      xsum += e.values[static_cast<std::size_t>(j)] * el.node(j);
    }
    EXPECT_NEAR(s, 1.0, 1e-14);
    EXPECT_NEAR(g.norm(), 0.0, 1e-13);
    EXPECT_NEAR((xsum - Vec2(a, b)).norm(), 0.0, 1e-14);
  }
}

TEST_P(Basis, GradientsAndHessiansMatchFiniteDifferences) {
  const ReferenceElement el(GetParam());
  const Vec2 xi(0.23, 0.41);
  const double eps = 1e-6;
  const auto H = el.hessians();
  const BasisEval e0 = el.eval(xi);
  for (int d = 0; d < 2; ++d) {
    Vec2 dx = Vec2::Zero();
    dx(d) = eps;
    const BasisEval ep = el.eval(xi + dx);
    const BasisEval em = el.eval(xi - dx);
    for (int j = 0; j < el.num_nodes(); ++j) {
      const auto sj = static_cast<std::size_t>(j);
      EXPECT_NEAR((ep.values[sj] - em.values[sj]) / (2 * eps), e0.grads[sj](d), 1e-8);
      const Vec2 hcol = (ep.grads[sj] - em.grads[sj]) / (2 * eps);
      EXPECT_NEAR((hcol - H[sj].col(d)).norm(), 0.0, 1e-8);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Kinds, Basis, ::testing::Values(ElementKind::P1, ElementKind::P2));

TEST(DofMap, Counts) {
  const Mesh m = Mesh::build_rect({0.0, 1.0, 0.0, 1.0}, 3, 2);
  const DofMap p1(m, ElementKind::P1, 1);
  const DofMap p2(m, ElementKind::P2, 2);
  EXPECT_EQ(p1.num_dofs(), static_cast<int>(m.num_vertices()));
  EXPECT_EQ(p2.num_nodes(), static_cast<int>(m.num_vertices() + m.num_edges()));
  EXPECT_EQ(p2.num_dofs(), 2 * p2.num_nodes());
  EXPECT_EQ(p2.dofs_per_cell(), 12);
  EXPECT_EQ(p2.boundary_nodes(BoundaryTag::Bottom).size(), 7u);
  EXPECT_EQ(p1.boundary_nodes(std::span<const BoundaryFacet>(m.boundary_facets())).size(), 10u);
}

TEST(DofMap, MidpointNodesSitOnEdgeMidpoints) {
  const Mesh m = Mesh::build_rect({-1.0, 2.0, 0.0, 1.0}, 3, 4);
  const DofMap p2(m, ElementKind::P2, 1);
  for (int t = 0; t < static_cast<int>(m.num_triangles()); ++t) {
    const auto nodes = p2.cell_nodes(t);
    const TriangleGeometry geo = triangle_geometry(m, t);
    for (int i = 0; i < 6; ++i) {
      const Point expected = geo.map(p2.element().node(i));
      EXPECT_NEAR((p2.node_coords(nodes[static_cast<std::size_t>(i)]) - expected).norm(), 0.0, 1e-14);
    }
  }
}

TEST(Interpolation, P2ReproducesQuadraticsWithDerivatives) {
  const Mesh m = Mesh::build_rect({0.0, 1.0, -0.5, 0.5}, 3, 3, Diagonal::Rising);
  const DofMap p2(m, ElementKind::P2, 2);
  const Vector c = interpolate(VectorField(quadratic_field), p2, 0.0);
  const BrokenP1 div = broken_divergence(c, p2);
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < static_cast<int>(m.num_triangles()); ++t) {
    const TriangleGeometry geo = triangle_geometry(m, t);
    double a = u(rng), b = u(rng);
    if (a + b > 1.0) a = 1.0 - a, b = 1.0 - b;
    const Point x = geo.map({a, b});
    const FieldSample s = eval_field(c, p2, t, {a, b});
    EXPECT_NEAR((s.value - quadratic_field(x, 0.0)).norm(), 0.0, 1e-13);
    EXPECT_NEAR((s.grad - quadratic_grad(x)).norm(), 0.0, 1e-12);
    EXPECT_NEAR(s.div, quadratic_grad(x).trace(), 1e-12);
    EXPECT_NEAR(div.eval(t, {1.0 - a - b, a, b}), quadratic_grad(x).trace(), 1e-12);
  }
}

TEST(Interpolation, P1ReproducesLinearsAndRestrictsToBroken) {
  const Mesh m = Mesh::build_rect({0.0, 2.0, 0.0, 1.0}, 4, 2);
  const DofMap p1(m, ElementKind::P1, 1);
  const ScalarField f = [](const Point& x, double t) { return 3.0 - x.x() + 2.0 * x.y() + t; };
  const Vector c = interpolate(f, p1, 0.5);
  const BrokenP1 b = to_broken(c, p1);
  for (int t = 0; t < static_cast<int>(m.num_triangles()); ++t) {
    const TriangleGeometry geo = triangle_geometry(m, t);
    const Point x = geo.map({0.2, 0.3});
    EXPECT_NEAR(eval_field(c, p1, t, {0.2, 0.3}).value(0), f(x, 0.5), 1e-14);
    EXPECT_NEAR(b.eval(t, {0.5, 0.2, 0.3}), f(x, 0.5), 1e-14);
    EXPECT_NEAR((b.grad(geo, t) - Vec2(-1.0, 2.0)).norm(), 0.0, 1e-13);
    EXPECT_NEAR(b.cell_average(t), f(m.centroid(t), 0.5), 1e-14);
  }
}

TEST(Geometry, AffineMapAndArea) {
  const Mesh m = Mesh::build_rect({0.0, 3.0, 0.0, 2.0}, 3, 2);
  for (int t = 0; t < static_cast<int>(m.num_triangles()); ++t) {
    const TriangleGeometry g = triangle_geometry(m, t);
    EXPECT_NEAR(g.area(), m.area(t), 1e-14);
    const auto& tri = m.triangle(t);
    EXPECT_NEAR((g.map({0, 0}) - m.vertex(tri[0])).norm(), 0.0, 1e-14);
    EXPECT_NEAR((g.map({1, 0}) - m.vertex(tri[1])).norm(), 0.0, 1e-14);
    EXPECT_NEAR((g.map({0, 1}) - m.vertex(tri[2])).norm(), 0.0, 1e-14);
    EXPECT_NEAR((g.inv_JT * g.J.transpose() - Mat2::Identity()).norm(), 0.0, 1e-14);
  }
}
