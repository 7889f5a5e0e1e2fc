#pragma once

#include <string>
#include <vector>

#include "porofem/bench.hpp"
#include "porofem/verification.hpp"

namespace porofem {

/// Outcome of one threshold check with a one-line explanation.
struct Verdict {
  bool pass = false;
  std::string detail;
};

/// Rates of the finest row within +-tol of tau (3, 2) and p (2, 1).
Verdict check_spatial_rates(const ConvergenceReport& r, double tol = 0.2);

/// Reference error magnitudes for one mesh of a spatial study.
struct ReferenceErrors {
  double h = 0.0;
  double tau_l2 = 0.0;
  double tau_h1 = 0.0;
  double p_l2 = 0.0;
  double p_h1 = 0.0;
};

/// Every error of every matching row within `factor` of the reference.
Verdict check_error_magnitudes(const ConvergenceReport& r, const std::vector<ReferenceErrors>& ref,
                               double factor = 2.0);

/// p ratios (rows after the first) in [lo, hi]; tau ratios in the band or,
/// when allow_exact_tau, flagged temporally exact.
Verdict check_temporal(const std::vector<TemporalRow>& rows, bool allow_exact_tau, double lo = 1.9,
                       double hi = 2.1);

/// theta = 1: |J + S - J0| <= tol max(1, |J0|) at every level.
/// theta = 0: J + S_hat - J0 <= tol at every level.
Verdict check_energy(const EnergyLedger& ledger, int theta, double tol = 1e-8);

/// |r_n| <= tol (1 + t_n) at every level.
Verdict check_mass(const std::vector<double>& residuals, double dt, double tol = 1e-10);

/// Every beta > floor and (max - min) / max < variation.
Verdict check_infsup(const std::vector<double>& betas, double floor = 0.1, double variation = 0.2);

/// Reformulated index <= max_index and original index >= ratio * reformulated.
Verdict check_locking(const Comparison& c, double max_index = 1.5, double ratio = 5.0);

/// Downward settlement and reformulated index <= max_index.
Verdict check_footing(const Comparison& c, double settlement, double max_index = 1.5);

}  // namespace porofem
