#include "porofem/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace porofem {

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

bool near(double v, double target, double tol) { return std::isfinite(v) && std::abs(v - target) <= tol; }

}  // namespace

Verdict check_spatial_rates(const ConvergenceReport& r, double tol) {
  if (r.rows.size() < 2) return {false, "need at least two meshes"};
  const ErrorNorms& k = r.rows.back().rates;
  Verdict v;
  v.pass = near(k.tau_l2, 3.0, tol) && near(k.tau_h1, 2.0, tol) && near(k.p_l2, 2.0, tol) && near(k.p_h1, 1.0, tol);
  v.detail = "finest rates tau L2 " + sci(k.tau_l2) + " H1 " + sci(k.tau_h1) + ", p L2 " + sci(k.p_l2) + " H1 " +
             sci(k.p_h1);
  return v;
}

Verdict check_error_magnitudes(const ConvergenceReport& r, const std::vector<ReferenceErrors>& ref, double factor) {
  Verdict v{true, ""};
  double worst = 1.0;
  int matched = 0;
  for (const auto& e : ref) {
    for (const auto& row : r.rows) {
      if (std::abs(row.h - e.h) > 1e-12 * e.h) continue;
      ++matched;
      const std::pair<double, double> pairs[] = {{row.errors.tau_l2, e.tau_l2},
                                                 {row.errors.tau_h1, e.tau_h1},
                                                 {row.errors.p_l2, e.p_l2},
                                                 {row.errors.p_h1, e.p_h1}};
      for (const auto& [got, want] : pairs) {
        if (want <= 0.0) continue;
        const double q = got > 0.0 ? std::max(got / want, want / got) : INFINITY;
        worst = std::max(worst, q);
        if (!(q <= factor)) v.pass = false;
      }
    }
  }
  if (matched == 0) v.pass = false;
  v.detail = std::to_string(matched) + " meshes compared, worst factor " + sci(worst);
  return v;
}

Verdict check_temporal(const std::vector<TemporalRow>& rows, bool allow_exact_tau, double lo, double hi) {
  if (rows.size() < 2) return {false, "need at least two rows"};
  Verdict v{true, ""};
  std::ostringstream os;
  os << "p ratios";
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double rp = rows[i].p_ratio;
    os << ' ' << sci(rp);
    if (!(rp >= lo && rp <= hi)) v.pass = false;
  }
  os << "; tau ratios";
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double rt = rows[i].tau_ratio;
    const bool exact = rows[i].tau_exact && rows[i - 1].tau_exact;
    os << ' ' << sci(rt) << (exact ? "(exact)" : "");
    if (!(rt >= lo && rt <= hi) && !(allow_exact_tau && exact)) v.pass = false;
  }
  v.detail = os.str();
  return v;
}

Verdict check_energy(const EnergyLedger& ledger, int theta, double tol) {
  if (theta == 1) {
    const double bound = tol * ledger.scale;
    return {ledger.max_abs_residual <= bound,
            "max |J+S-J0| " + sci(ledger.max_abs_residual) + " vs bound " + sci(bound)};
  }
  return {ledger.max_inequality <= tol, "max J+S_hat-J0 " + sci(ledger.max_inequality) + " vs bound " + sci(tol)};
}

Verdict check_mass(const std::vector<double>& residuals, double dt, double tol) {
  Verdict v{true, ""};
  double worst = 0.0;
  for (std::size_t k = 0; k < residuals.size(); ++k) {
    const double t = static_cast<double>(k) * dt;
    const double q = std::abs(residuals[k]) / (tol * (1.0 + t));
    worst = std::max(worst, q);
    if (!(q <= 1.0)) v.pass = false;
  }
  v.detail = std::to_string(residuals.size()) + " levels, worst residual/bound " + sci(worst);
  return v;
}

Verdict check_infsup(const std::vector<double>& betas, double floor, double variation) {
  if (betas.empty()) return {false, "no meshes"};
  const auto [mn, mx] = std::minmax_element(betas.begin(), betas.end());
  const double var = (*mx - *mn) / *mx;
  std::ostringstream os;
  os << "beta";
  for (double b : betas) os << ' ' << sci(b);
  os << ", variation " << sci(var);
  return {*mn > floor && var < variation, os.str()};
}

Verdict check_locking(const Comparison& c, double max_index, double ratio) {
  const double r = c.reformulated.metric.index;
  const double o = c.original.metric.index;
  return {r <= max_index && o >= ratio * r, "index reformulated " + sci(r) + ", original " + sci(o)};
}

Verdict check_footing(const Comparison& c, double settlement, double max_index) {
  const double r = c.reformulated.metric.index;
  return {settlement < 0.0 && r <= max_index,
          "centre settlement " + sci(settlement) + ", index reformulated " + sci(r) + ", original " +
              sci(c.original.metric.index)};
}

}  // namespace porofem
