#pragma once

#include <optional>
#include <string>
#include <vector>

#include "porofem/stepper.hpp"

namespace porofem {

struct ErrorNorms {
  double tau_l2 = 0.0;
  double tau_h1 = 0.0;  // full H1 norm
  double p_l2 = 0.0;
  double p_h1 = 0.0;    // full broken H1 norm
  double delta_l2 = 0.0;
  double varpi_l2 = 0.0;
};

/// Errors of a state against the exact solution at time t (degree-6 rule).
/// delta and varpi errors are zero for the original formulation.
ErrorNorms error_norms(const Stepper& stepper, const State& s, const ExactSolution& exact, double t);

/// L2 norm of a P2 vector field given by coefficients.
double l2_norm_vector(const Vector& coeffs, const DofMap& p2v);
/// L2 norm of a broken P1 field.
double l2_norm(const BrokenP1& f, const Mesh& mesh);

/// log2(coarse / fine); NaN when either value is not positive.
double observed_rate(double coarse, double fine);

struct ConvergenceRow {
  double h = 0.0;  // or dt for temporal studies
  ErrorNorms errors;
  ErrorNorms rates;  // NaN in the first row
};

struct ConvergenceReport {
  std::string case_name;
  int theta = 1;
  double dt = 0.0;
  std::vector<ConvergenceRow> rows;
};

/// Runs the case on nx = ny = round(width / h) meshes and tabulates errors
/// at T with rates between consecutive entries.
ConvergenceReport spatial_convergence(const ProblemCase& c, const std::vector<double>& h_list,
                                      const SchemeConfig& cfg);

struct TemporalRow {
  double dt = 0.0;
  double tau_diff = 0.0;  // ||v^{dt} - v^{dt/2}||_L2 at T
  double p_diff = 0.0;
  double tau_ratio = 0.0;  // NaN in the first row
  double p_ratio = 0.0;
  bool tau_exact = false;  // difference below solver_tol * ||v_h||: temporally exact
  bool p_exact = false;
};

/// Successive-solution differences for dt, dt/2, ... on one mesh with
/// nx = ny = n. dt_list holds every dt to run (halving chain); rows are
/// reported for all but the last entry.
std::vector<TemporalRow> temporal_ratio(const ProblemCase& c, int n, const std::vector<double>& dt_list,
                                        const SchemeConfig& cfg);

struct EnergyLedger {
  std::vector<double> J;          // J^k for k = 0..N
  std::vector<double> S;          // S^k (S^0 = 0)
  std::vector<double> S_hat;      // theta = 0 only, else empty
  std::vector<double> residual;   // J^k + S^k - J^0
  std::vector<double> inequality; // J^k + S_hat^k - J^0 (theta = 0)
  double max_abs_residual = 0.0;
  double max_inequality = 0.0;
  double scale = 0.0;             // max(1, |J^0|)
};

/// Discrete energy bookkeeping of the reformulated scheme over a trajectory
/// produced with steady loads, starting from consistent_initial_state().
EnergyLedger energy_ledger(const Stepper& stepper, const std::vector<State>& trajectory);

/// r_n = (varpi^n, 1) - (varpi^0, 1) - dt sum_k [(phi(t_k), 1) + <phi1(t_k), 1>].
std::vector<double> mass_balance(const Stepper& stepper, const std::vector<State>& trajectory);

struct InfSupOptions {
  bool clamp_boundary = false;  // restrict velocities to zero boundary values
  double rel_tol = 1e-10;
};

/// Discrete inf-sup constant of the P2-P1 pair on the mesh:
/// sqrt of the smallest eigenvalue of B A^{-1} B^T against the P1 mass
/// matrix on mean-zero pressures, A the H1 inner product.
double infsup_estimate(const Mesh& mesh, const InfSupOptions& opts = {});

struct OscillationMetric {
  double total_variation = 0.0;
  double range = 0.0;
  double index = 0.0;
  std::vector<double> samples;
};

OscillationMetric oscillation_metric(const std::vector<double>& profile);
/// Samples a broken field along the segment a-b at `samples` equispaced points.
std::vector<double> sample_line(const BrokenP1& f, const Mesh& mesh, const Point& a, const Point& b, int samples);
OscillationMetric oscillation_metric(const BrokenP1& f, const Mesh& mesh, const Point& a, const Point& b,
                                     int samples);

/// Structured mesh of the case domain with nx = round(width / h),
/// ny = round(height / h).
Mesh mesh_for(const ProblemCase& c, double h);

}  // namespace porofem
