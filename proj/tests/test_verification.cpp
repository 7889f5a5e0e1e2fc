#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <gtest/gtest.h>

#include "porofem/criteria.hpp"
#include "porofem/manufactured.hpp"
#include "porofem/verification.hpp"

using namespace porofem;

namespace {

const std::vector<double> kSpatialChain = {1.0 / 4, 1.0 / 8, 1.0 / 16, 1.0 / 32};

SchemeConfig scheme(int theta, double dt = 0.01, double T = 1.0) {
  SchemeConfig c;
  c.theta = theta;
  c.dt = dt;
  c.T = T;
  return c;
}

void expect_rates(const ConvergenceReport& r) {
  const ErrorNorms& k = r.rows.back().rates;
  EXPECT_NEAR(k.tau_l2, 3.0, 0.2);
  EXPECT_NEAR(k.tau_h1, 2.0, 0.2);
  EXPECT_NEAR(k.p_l2, 2.0, 0.2);
  EXPECT_NEAR(k.p_h1, 1.0, 0.2);
  for (std::size_t i = 1; i < r.rows.size(); ++i) {
    EXPECT_LT(r.rows[i].errors.tau_l2, r.rows[i - 1].errors.tau_l2);
    EXPECT_LT(r.rows[i].errors.p_h1, r.rows[i - 1].errors.p_h1);
  }
}

// Dense reference for the inf-sup constant with an orthonormal mean-zero basis.
double dense_infsup(const Mesh& mesh, bool clamp) {
  const Spaces sp(mesh);
  const DenseMatrix H = DenseMatrix(assemble_vector_h1(sp.p2v));
  const DenseMatrix B = DenseMatrix(assemble_div(sp.p2v, sp.p1));
  const DenseMatrix M = DenseMatrix(assemble_mass(sp.p1));
  std::vector<char> fixed(static_cast<std::size_t>(H.rows()), 0);
  if (clamp) {
    for (int node : sp.p2v.boundary_nodes(std::span<const BoundaryFacet>(mesh.boundary_facets()))) {
      fixed[static_cast<std::size_t>(sp.p2v.dof(node, 0))] = 1;
      fixed[static_cast<std::size_t>(sp.p2v.dof(node, 1))] = 1;
    }
  }
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < H.rows(); ++i) {
    if (!fixed[static_cast<std::size_t>(i)]) keep.push_back(i);
  }
  const DenseMatrix Hf = H(keep, keep);
  const DenseMatrix Bf = B(Eigen::all, keep);
  const DenseMatrix S = Bf * Hf.llt().solve(Bf.transpose());
  const Vector m = M * Vector::Ones(M.rows());
  const Eigen::HouseholderQR<DenseMatrix> qr(m);
  const DenseMatrix Q = qr.householderQ();
  const DenseMatrix Z = Q.rightCols(M.rows() - 1);
  Eigen::GeneralizedSelfAdjointEigenSolver<DenseMatrix> es(Z.transpose() * S * Z, Z.transpose() * M * Z);
  return std::sqrt(es.eigenvalues().minCoeff());
}

}  // namespace

TEST(ObservedRate, Basics) {
  EXPECT_DOUBLE_EQ(observed_rate(4.0, 1.0), 2.0);
  EXPECT_DOUBLE_EQ(observed_rate(1.0, 1.0), 0.0);
  EXPECT_TRUE(std::isnan(observed_rate(0.0, 1.0)));
  EXPECT_TRUE(std::isnan(observed_rate(1.0, -1.0)));
}

TEST(SpatialConvergence, FirstCaseCoupled) {
  const ConvergenceReport r = spatial_convergence(test1_case(), kSpatialChain, scheme(1));
  ASSERT_EQ(r.rows.size(), 4u);
  EXPECT_TRUE(std::isnan(r.rows.front().rates.tau_l2));
  expect_rates(r);
}

TEST(SpatialConvergence, SecondCaseCoupled) {
  expect_rates(spatial_convergence(test2_case(), kSpatialChain, scheme(1)));
}

TEST(SpatialConvergence, FirstCaseDecoupled) {
  expect_rates(spatial_convergence(test1_case(), kSpatialChain, scheme(0)));
}

TEST(SpatialConvergence, OriginalFormulationCoupled) {
  SchemeConfig c = scheme(1);
  c.formulation = Formulation::Original;
  expect_rates(spatial_convergence(test1_case(), kSpatialChain, c));
}

TEST(TemporalRatio, SecondCaseHalvesErrorWithStep) {
  const auto rows = temporal_ratio(test2_case(), 10, {0.1, 0.05, 0.025, 0.0125, 0.00625}, scheme(1));
  ASSERT_EQ(rows.size(), 4u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_GE(rows[i].p_ratio, 1.9);
    EXPECT_LE(rows[i].p_ratio, 2.1);
    EXPECT_GE(rows[i].tau_ratio, 1.9);
    EXPECT_LE(rows[i].tau_ratio, 2.1);
    EXPECT_FALSE(rows[i].p_exact);
  }
  EXPECT_THROW(temporal_ratio(test2_case(), 4, {0.1}, scheme(1)), std::invalid_argument);
}

TEST(TemporalRatio, LinearInTimeDisplacementIsFlaggedExact) {
  const auto rows = temporal_ratio(test1_case(), 8, {0.1, 0.05, 0.025}, scheme(1));
  for (const auto& r : rows) EXPECT_TRUE(r.tau_exact) << "dt " << r.dt << " diff " << r.tau_diff;
  EXPECT_TRUE(check_temporal(rows, true).pass);
}

class EnergyAndMass : public ::testing::TestWithParam<int> {};

TEST_P(EnergyAndMass, LedgerAndBalance) {
  const int theta = GetParam();
  const ProblemCase c = neumann_case();
  const Mesh mesh = mesh_for(c, 1.0 / 8);
  const Stepper st(c, mesh, scheme(theta, 0.01, 0.1));
  ASSERT_TRUE(theta0_guard_warning(st.material(), mesh.cell_size(), 0.01).empty());
  const auto traj = st.trajectory(st.consistent_initial_state());
  ASSERT_EQ(traj.size(), 11u);
  const EnergyLedger L = energy_ledger(st, traj);
  ASSERT_EQ(L.J.size(), 11u);
  EXPECT_EQ(L.S.front(), 0.0);
  EXPECT_GT(L.J.front(), 0.0);
  if (theta == 1) {
    EXPECT_LE(L.max_abs_residual, 1e-8 * L.scale);
  } else {
    EXPECT_LE(L.max_inequality, 1e-8);
  }
  const auto mass = mass_balance(st, st.trajectory(st.initial_state()));
  for (std::size_t k = 0; k < mass.size(); ++k) EXPECT_LE(std::abs(mass[k]), 1e-10 * (1.0 + 0.01 * k));
}

INSTANTIATE_TEST_SUITE_P(Theta, EnergyAndMass, ::testing::Values(0, 1));

TEST(EnergyLedger, RejectsOriginalFormulation) {
  const ProblemCase c = neumann_case();
  const Mesh mesh = mesh_for(c, 0.25);
  SchemeConfig cfg = scheme(1, 0.01, 0.02);
  cfg.formulation = Formulation::Original;
  const Stepper st(c, mesh, cfg);
  EXPECT_THROW(energy_ledger(st, st.trajectory(st.initial_state())), std::invalid_argument);
}

TEST(InfSup, MatchesDenseReference) {
  const ProblemCase c = test1_case();
  for (bool clamp : {true, false}) {
    const Mesh mesh = mesh_for(c, 0.25);
    InfSupOptions o;
    o.clamp_boundary = clamp;
    o.rel_tol = 1e-13;
    const double b = infsup_estimate(mesh, o);
    EXPECT_NEAR(b, dense_infsup(mesh, clamp), 1e-6) << "clamp " << clamp;
  }
}

TEST(InfSup, BoundedAwayFromZeroUnderRefinement) {
  const ProblemCase c = test1_case();
  InfSupOptions o;
  o.clamp_boundary = true;
  std::vector<double> betas;
  for (double h : {0.25, 0.125, 0.0625}) betas.push_back(infsup_estimate(mesh_for(c, h), o));
  EXPECT_TRUE(check_infsup(betas).pass);
  o.clamp_boundary = false;
  EXPECT_GT(infsup_estimate(mesh_for(c, 0.25), o), betas.front());
}

TEST(Oscillation, IndexOfSimpleProfiles) {
  EXPECT_DOUBLE_EQ(oscillation_metric({0.0, 1.0, 2.0, 5.0}).index, 1.0);
  const OscillationMetric zig = oscillation_metric({0.0, 1.0, 0.0, 1.0, 0.0});
  EXPECT_DOUBLE_EQ(zig.total_variation, 4.0);
  EXPECT_DOUBLE_EQ(zig.range, 1.0);
  EXPECT_DOUBLE_EQ(zig.index, 4.0);
  EXPECT_DOUBLE_EQ(oscillation_metric({3.0, 3.0}).index, 0.0);
}

TEST(Oscillation, PropertyIndexAtLeastOne) {
  std::mt19937 rng(12);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    std::vector<double> v(20);
    for (double& x : v) x = u(rng);
    const OscillationMetric m = oscillation_metric(v);
    EXPECT_GE(m.index, 1.0 - 1e-14);
    std::sort(v.begin(), v.end());
    EXPECT_NEAR(oscillation_metric(v).index, 1.0, 1e-14);
  }
}

TEST(SampleLine, ReproducesLinearField) {
  const Mesh mesh = Mesh::build_rect({0.0, 1.0, 0.0, 1.0}, 5, 5);
  const DofMap p1(mesh, ElementKind::P1, 1);
  const BrokenP1 f =
      to_broken(interpolate(ScalarField([](const Point& x, double) { return 2.0 * x.x() - x.y(); }), p1, 0.0), p1);
  const auto s = sample_line(f, mesh, Point(0.0, 0.5), Point(1.0, 0.5), 11);
  ASSERT_EQ(s.size(), 11u);
  for (int i = 0; i < 11; ++i) EXPECT_NEAR(s[static_cast<std::size_t>(i)], 0.2 * i - 0.5, 1e-13);
  EXPECT_THROW(sample_line(f, mesh, Point(0, 0), Point(1, 1), 1), std::invalid_argument);
}

TEST(MeshFor, RoundsToStructuredCounts) {
  ProblemCase c = test1_case();
  const Mesh m = mesh_for(c, 1.0 / 10);
  EXPECT_EQ(m.nx(), 10);
  EXPECT_EQ(m.ny(), 10);
  c.domain = {-50.0, 50.0, 0.0, 100.0};
  EXPECT_EQ(mesh_for(c, 2.5).nx(), 40);
  EXPECT_THROW(mesh_for(c, 0.0), std::invalid_argument);
}

TEST(ErrorNorms, InterpolantErrorConvergesAtOptimalRate) {
  const ProblemCase c = test2_case();
  double prev_tau = 0.0;
  for (int n : {4, 8, 16}) {
    const Mesh mesh = Mesh::build_rect(c.domain, n, n);
    const Stepper st(c, mesh, scheme(1, 0.1, 0.1));
    State s = st.initial_state();
    const ErrorNorms e = error_norms(st, s, *c.exact, 0.0);
    if (prev_tau > 0.0) {
      EXPECT_NEAR(observed_rate(prev_tau, e.tau_l2), 3.0, 0.15);
    }
    prev_tau = e.tau_l2;
  }
}
