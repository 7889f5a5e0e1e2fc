#include <gtest/gtest.h>

#include "porofem/assembly.hpp"

using namespace porofem;

namespace {

Mesh unit_mesh(int n, Diagonal d = Diagonal::Falling) { return Mesh::build_rect({0.0, 2.0, -1.0, 0.0}, n, n, d); }

double asymmetry(const SparseMatrix& A) { return (DenseMatrix(A) - DenseMatrix(A).transpose()).cwiseAbs().maxCoeff(); }

}  // namespace

class AssemblyOnBothDiagonals : public ::testing::TestWithParam<Diagonal> {};

TEST_P(AssemblyOnBothDiagonals, ElasticityIsSymmetricWithRigidKernel) {
  const Mesh m = unit_mesh(4, GetParam());
  const Spaces s(m);
  const SparseMatrix A = assemble_elasticity(s.p2v, 3.0);
  EXPECT_LE(asymmetry(A), 1e-13);
  const VectorField rigid[] = {[](const Point&, double) { return Vec2(1.0, 0.0); },
                               [](const Point&, double) { return Vec2(0.0, 1.0); },
                               [](const Point& x, double) { return Vec2(-x.y(), x.x()); }};
  for (const auto& r : rigid) {
    const Vector u = interpolate(r, s.p2v, 0.0);
    EXPECT_LE((A * u).cwiseAbs().maxCoeff(), 1e-12);
  }
  // gamma (eps(u), eps(u)) for u = (x, 0) equals gamma |Omega|
  const Vector u = interpolate(VectorField([](const Point& x, double) { return Vec2(x.x(), 0.0); }), s.p2v, 0.0);
  EXPECT_NEAR(u.dot(A * u), 3.0 * 2.0, 1e-12);
}

TEST_P(AssemblyOnBothDiagonals, DivDivAndDivCoupling) {
  const Mesh m = unit_mesh(3, GetParam());
  const Spaces s(m);
  const SparseMatrix D = assemble_div_div(s.p2v);
  EXPECT_LE(asymmetry(D), 1e-13);
  const Vector rot = interpolate(VectorField([](const Point& x, double) { return Vec2(x.y() * x.y(), x.x()); }), s.p2v, 0.0);
  EXPECT_LE((D * rot).cwiseAbs().maxCoeff(), 1e-12);
  const Vector u = interpolate(VectorField([](const Point& x, double) { return Vec2(x.x() * x.x(), x.y()); }), s.p2v, 0.0);
  // integral of (2x + 1)^2 over [0,2]x[-1,0]
  EXPECT_NEAR(u.dot(D * u), 4.0 * 8.0 / 3.0 + 4.0 * 2.0 + 2.0, 1e-12);

  const SparseMatrix B = assemble_div(s.p2v, s.p1);
  EXPECT_EQ(B.rows(), s.p1.num_dofs());
  EXPECT_EQ(B.cols(), s.p2v.num_dofs());
  const Vector one = Vector::Ones(s.p1.num_dofs());
  EXPECT_NEAR(one.dot(B * u), 4.0 + 2.0, 1e-12);
  EXPECT_NEAR(one.dot(B * rot), 0.0, 1e-12);
}

TEST_P(AssemblyOnBothDiagonals, ScalarMassAndDiffusion) {
  const Mesh m = unit_mesh(5, GetParam());
  const Spaces s(m);
  const SparseMatrix M = assemble_mass(s.p1);
  EXPECT_LE(asymmetry(M), 1e-15);
  EXPECT_NEAR(M.sum(), 2.0, 1e-13);
  const Vector x = interpolate(ScalarField([](const Point& p, double) { return p.x(); }), s.p1, 0.0);
  EXPECT_NEAR(x.dot(M * x), 8.0 / 3.0, 1e-13);

  Mat2 K;
  K << 2.0, 0.5, 0.5, 1.0;
  const SparseMatrix A = assemble_diffusion(s.p1, K, 4.0);
  EXPECT_LE(asymmetry(A), 1e-13);
  EXPECT_LE((A * Vector::Ones(s.p1.num_dofs())).cwiseAbs().maxCoeff(), 1e-13);
  const Vector y = interpolate(ScalarField([](const Point& p, double) { return p.y(); }), s.p1, 0.0);
  EXPECT_NEAR(x.dot(A * y), 0.5 / 4.0 * 2.0, 1e-13);
  EXPECT_NEAR(x.dot(A * x), 2.0 / 4.0 * 2.0, 1e-13);

  const SparseMatrix V = assemble_mass(DofMap(m, ElementKind::P2, 1));
  EXPECT_NEAR(V.sum(), 2.0, 1e-13);
}

TEST_P(AssemblyOnBothDiagonals, BrokenDivGrad) {
  const Mesh m = unit_mesh(3, GetParam());
  const Spaces s(m);
  const SparseMatrix G = assemble_broken_divgrad(s.p2v, s.p1, Mat2::Identity(), 2.0);
  EXPECT_EQ(G.rows(), s.p1.num_dofs());
  const Vector u = interpolate(VectorField([](const Point& x, double) { return Vec2(x.x() * x.x(), 0.0); }), s.p2v, 0.0);
  const Vector one = Vector::Ones(s.p1.num_dofs());
  EXPECT_NEAR(one.dot(G * u), 0.0, 1e-12);
  const Vector x = interpolate(ScalarField([](const Point& p, double) { return p.x(); }), s.p1, 0.0);
  // (1/2) (grad 2x, grad x) over the domain
  EXPECT_NEAR(x.dot(G * u), 0.5 * 2.0 * 2.0, 1e-12);
}

INSTANTIATE_TEST_SUITE_P(Diagonals, AssemblyOnBothDiagonals, ::testing::Values(Diagonal::Falling, Diagonal::Rising));

TEST(Assembly, RigidMotionRows) {
  const Mesh m = unit_mesh(2);
  const Spaces s(m);
  const SparseMatrix R = assemble_rigid_motions(s.p2v);
  ASSERT_EQ(R.rows(), 3);
  const Vector e1 = interpolate(VectorField([](const Point&, double) { return Vec2(1.0, 0.0); }), s.p2v, 0.0);
  const Vector r = R * e1;
  EXPECT_NEAR(r(0), 2.0, 1e-13);
  EXPECT_NEAR(r(1), 0.0, 1e-13);
  EXPECT_NEAR(r(2), 1.0, 1e-13);  // integral of -y
}

TEST(Assembly, LoadsIntegrateData) {
  const Mesh m = unit_mesh(4);
  const Spaces s(m);
  const Vector f = assemble_load(VectorField([](const Point& x, double t) { return Vec2(t, x.x()); }), s.p2v, 3.0);
  const Vector ex = interpolate(VectorField([](const Point&, double) { return Vec2(1.0, 0.0); }), s.p2v, 0.0);
  const Vector ey = interpolate(VectorField([](const Point&, double) { return Vec2(0.0, 1.0); }), s.p2v, 0.0);
  EXPECT_NEAR(f.dot(ex), 6.0, 1e-12);
  EXPECT_NEAR(f.dot(ey), 2.0, 1e-12);
  const Vector g = assemble_load(ScalarField([](const Point& x, double) { return x.y() * x.y(); }), s.p1, 0.0);
  EXPECT_NEAR(g.sum(), 2.0 / 3.0, 1e-12);
}

TEST(Assembly, BoundaryTermsIntegrateOverFacets) {
  const Mesh m = unit_mesh(4);
  const Spaces s(m);
  const auto right = m.boundary_facets(BoundaryTag::Right);
  const std::vector<std::array<bool, 2>> both(right.size(), {true, true});
  const TractionField g = [](const Point& x, double, const Vec2& n) { return Vec2(n.x(), x.y()); };
  const Vector tr = assemble_boundary_traction(g, right, both, s.p2v, 0.0);
  const Vector ex = interpolate(VectorField([](const Point&, double) { return Vec2(1.0, 0.0); }), s.p2v, 0.0);
  const Vector ey = interpolate(VectorField([](const Point&, double) { return Vec2(0.0, 1.0); }), s.p2v, 0.0);
  EXPECT_NEAR(tr.dot(ex), 1.0, 1e-13);
  EXPECT_NEAR(tr.dot(ey), -0.5, 1e-13);
  const std::vector<std::array<bool, 2>> only_x(right.size(), {true, false});
  EXPECT_NEAR(assemble_boundary_traction(g, right, only_x, s.p2v, 0.0).dot(ey), 0.0, 0.0);

  const auto bottom = m.boundary_facets(BoundaryTag::Bottom);
  const Vector q = assemble_boundary_flux([](const Point& x, double) { return x.x(); }, bottom, s.p1, 0.0);
  EXPECT_NEAR(q.sum(), 2.0, 1e-13);
}

TEST(Assembly, GravityFluxAndLumpedProjection) {
  const Mesh m = unit_mesh(3);
  const Spaces s(m);
  Mat2 K;
  K << 2.0, 0.0, 0.0, 3.0;
  const Vector gflux = assemble_gravity_flux(s.p1, K, Vec2(1.0, -1.0), 0.5);
  const Vector x = interpolate(ScalarField([](const Point& p, double) { return p.x(); }), s.p1, 0.0);
  const Vector y = interpolate(ScalarField([](const Point& p, double) { return p.y(); }), s.p1, 0.0);
  EXPECT_NEAR(gflux.dot(x), 4.0 * 2.0, 1e-12);
  EXPECT_NEAR(gflux.dot(y), -6.0 * 2.0, 1e-12);
  EXPECT_EQ(assemble_gravity_flux(s.p1, K, Vec2::Zero(), 1.0), Vector::Zero(s.p1.num_dofs()));

  BrokenP1 c(m.num_triangles());
  c.values().setConstant(2.5);
  EXPECT_NEAR((lumped_projection(c, s.p1) - Vector::Constant(s.p1.num_dofs(), 2.5)).norm(), 0.0, 1e-13);
}
