#include <random>

#include <gtest/gtest.h>

#include "porofem/mesh.hpp"

using namespace porofem;

class MeshBothDiagonals : public ::testing::TestWithParam<Diagonal> {};

TEST_P(MeshBothDiagonals, CountsAndAreas) {
  const Mesh m = Mesh::build_rect({0.0, 2.0, -1.0, 0.5}, 5, 3, GetParam());
  EXPECT_EQ(m.num_vertices(), 6u * 4u);
  EXPECT_EQ(m.num_triangles(), 2u * 5u * 3u);
  EXPECT_EQ(m.num_edges(), 5u * 4u + 6u * 3u + 15u);
  double total = 0.0;
  for (int t = 0; t < static_cast<int>(m.num_triangles()); ++t) {
    EXPECT_GT(m.area(t), 0.0);
    total += m.area(t);
  }
  EXPECT_NEAR(total, 3.0, 1e-14);
  EXPECT_DOUBLE_EQ(m.cell_size(), 0.5);
  EXPECT_NEAR(m.h_max(), std::hypot(0.4, 0.5), 1e-14);
}

TEST_P(MeshBothDiagonals, BoundaryFacetsPerSide) {
  const Mesh m = Mesh::build_rect({0.0, 1.0, 0.0, 1.0}, 4, 3, GetParam());
  EXPECT_EQ(m.boundary_facets().size(), 14u);
  EXPECT_EQ(m.boundary_facets(BoundaryTag::Bottom).size(), 4u);
  EXPECT_EQ(m.boundary_facets(BoundaryTag::Top).size(), 4u);
  EXPECT_EQ(m.boundary_facets(BoundaryTag::Left).size(), 3u);
  EXPECT_EQ(m.boundary_facets(BoundaryTag::Right).size(), 3u);
  double length = 0.0;
  for (const auto& f : m.boundary_facets()) {
    length += m.edge_length(f.edge);
    EXPECT_EQ(m.edge_triangles(f.edge)[1], -1);
    // outward normal points away from the owning triangle
    const Point c = m.centroid(m.edge_triangles(f.edge)[0]);
    EXPECT_GT((m.edge_midpoint(f.edge) - c).dot(f.normal), 0.0);
  }
  EXPECT_NEAR(length, 4.0, 1e-14);
  const auto top = m.boundary_facets(BoundaryTag::Top);
  for (std::size_t i = 1; i < top.size(); ++i) {
    EXPECT_LT(m.edge_midpoint(top[i - 1].edge).x(), m.edge_midpoint(top[i].edge).x());
  }
}

TEST_P(MeshBothDiagonals, LocateRoundTrip) {
  const Mesh m = Mesh::build_rect({-50.0, 50.0, 0.0, 100.0}, 8, 8, GetParam());
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const Point p(-50.0 + 100.0 * u(rng), 100.0 * u(rng));
    const Location loc = m.locate(p);
    const auto& tri = m.triangle(loc.triangle);
    Point back = Point::Zero();
    for (int k = 0; k < 3; ++k) back += loc.bary[static_cast<std::size_t>(k)] * m.vertex(tri[static_cast<std::size_t>(k)]);
    EXPECT_NEAR((back - p).norm(), 0.0, 1e-10);
    for (double b : loc.bary) EXPECT_GE(b, 0.0);
  }
  EXPECT_NO_THROW(m.locate(Point(50.0, 100.0)));
  EXPECT_THROW(m.locate(Point(51.0, 0.0)), MeshError);
}

INSTANTIATE_TEST_SUITE_P(Diagonals, MeshBothDiagonals, ::testing::Values(Diagonal::Falling, Diagonal::Rising));

TEST(Mesh, DiagonalOrientation) {
  const Mesh f = Mesh::build_rect({0.0, 1.0, 0.0, 1.0}, 1, 1, Diagonal::Falling);
  const Mesh r = Mesh::build_rect({0.0, 1.0, 0.0, 1.0}, 1, 1, Diagonal::Rising);
  auto has_edge = [](const Mesh& m, Point a, Point b) {
    for (int e = 0; e < static_cast<int>(m.num_edges()); ++e) {
      const Point p = m.vertex(m.edge(e)[0]);
      const Point q = m.vertex(m.edge(e)[1]);
      if (((p - a).norm() < 1e-14 && (q - b).norm() < 1e-14) || ((p - b).norm() < 1e-14 && (q - a).norm() < 1e-14)) {
        return true;
      }
    }
    return false;
  };
  EXPECT_TRUE(has_edge(f, Point(1, 0), Point(0, 1)));
  EXPECT_FALSE(has_edge(f, Point(0, 0), Point(1, 1)));
  EXPECT_TRUE(has_edge(r, Point(0, 0), Point(1, 1)));
}

TEST(Mesh, RejectsBadInput) {
  EXPECT_THROW(Mesh::build_rect({0.0, 1.0, 0.0, 1.0}, 0, 2), MeshError);
  EXPECT_THROW(Mesh::build_rect({0.0, 0.0, 0.0, 1.0}, 2, 2), MeshError);
}

TEST(Mesh, EdgeAdjacencyIsConsistent) {
  const Mesh m = Mesh::build_rect({0.0, 1.0, 0.0, 1.0}, 6, 6);
  std::vector<int> uses(m.num_edges(), 0);
  for (int t = 0; t < static_cast<int>(m.num_triangles()); ++t) {
    for (int e : m.triangle_edges(t)) ++uses[static_cast<std::size_t>(e)];
  }
  for (int e = 0; e < static_cast<int>(m.num_edges()); ++e) {
    const int expected = m.edge_triangles(e)[1] < 0 ? 1 : 2;
    EXPECT_EQ(uses[static_cast<std::size_t>(e)], expected);
  }
}
