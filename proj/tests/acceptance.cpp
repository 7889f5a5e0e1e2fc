// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <string>

#include "invariants.hpp"
#include "oracle.hpp"
#include "porofem/bench.hpp"
#include "porofem/criteria.hpp"
#include "porofem/manufactured.hpp"
#include "porofem/verification.hpp"

using namespace porofem;

namespace {

const std::vector<double> kSpatialChain = {1.0 / 4, 1.0 / 8, 1.0 / 16, 1.0 / 32};
const std::vector<double> kTemporalChain = {1.0 / 10, 1.0 / 20, 1.0 / 40, 1.0 / 80, 1.0 / 160};

// Reference errors of the two manufactured cases at T = 1, dt = 1/100.
const std::vector<ReferenceErrors> kTest1Reference = {
    {1.0 / 4, 2.6318e-3, 7.9301e-2, 2.6672e-2, 7.3216e-1},
    {1.0 / 8, 3.1932e-4, 1.8635e-2, 5.6605e-3, 3.5970e-1},
    {1.0 / 16, 3.9427e-5, 4.5654e-3, 1.3277e-3, 1.7857e-1},
    {1.0 / 32, 4.9094e-6, 1.1336e-3, 3.2584e-4, 8.9098e-2},
};
const std::vector<ReferenceErrors> kTest2Reference = {
    {1.0 / 4, 2.6708e-4, 7.8215e-3, 3.5800e-2, 9.0720e-1},
    {1.0 / 8, 3.3136e-5, 1.9334e-3, 7.8029e-3, 4.4210e-1},
    {1.0 / 16, 4.1402e-6, 4.8037e-4, 1.8634e-3, 2.1887e-1},
    {1.0 / 32, 5.1792e-7, 1.1971e-4, 4.6956e-4, 1.0910e-1},
};

SchemeConfig scheme(int theta, double dt, double T) {
  SchemeConfig c;
  c.theta = theta;
  c.dt = dt;
  c.T = T;
  return c;
}

Verdict both(const Verdict& a, const Verdict& b) { return {a.pass && b.pass, a.detail + "; " + b.detail}; }

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

Verdict spatial(const ProblemCase& c, const std::vector<ReferenceErrors>& ref) {
  const ConvergenceReport r = spatial_convergence(c, kSpatialChain, scheme(1, 0.01, 1.0));
  return both(check_spatial_rates(r), check_error_magnitudes(r, ref));
}

Verdict temporal() {
  const auto r1 = temporal_ratio(test1_case(), 8, kTemporalChain, scheme(1, 0.1, 1.0));
  const auto r2 = temporal_ratio(test2_case(), 10, kTemporalChain, scheme(1, 0.1, 1.0));
  Verdict a = check_temporal(r1, true);
  Verdict b = check_temporal(r2, true);
  a.detail = "test1 " + a.detail;
  b.detail = "test2 " + b.detail;
  return both(a, b);
}

Verdict energy() {
  const ProblemCase c = neumann_case();
  const Mesh mesh = mesh_for(c, 1.0 / 8);
  const Stepper s1(c, mesh, scheme(1, 0.01, 0.1));
  Verdict a = check_energy(energy_ledger(s1, s1.trajectory(s1.consistent_initial_state())), 1);
  const double dt0 = std::min(0.01, theta0_dt_bound(Material::validate(c.params), mesh.cell_size(), 0.5));
  const Stepper s0(c, mesh, scheme(0, dt0, 10 * dt0));
  Verdict b = check_energy(energy_ledger(s0, s0.trajectory(s0.consistent_initial_state())), 0);
  a.detail = "theta=1 " + a.detail;
  b.detail = "theta=0 dt=" + sci(dt0) + " " + b.detail;
  return both(a, b);
}

Verdict mass() {
  const ProblemCase c = neumann_case();
  const Mesh mesh = mesh_for(c, 1.0 / 8);
  Verdict v{true, ""};
  for (int theta : {1, 0}) {
    const Stepper st(c, mesh, scheme(theta, 0.01, 0.1));
    Verdict r = check_mass(mass_balance(st, st.trajectory(st.initial_state())), 0.01);
    r.detail = "theta=" + std::to_string(theta) + " " + r.detail;
    v = v.detail.empty() ? r : both(v, r);
  }
  return v;
}

Verdict infsup() {
  InfSupOptions o;
  o.clamp_boundary = true;
  std::vector<double> betas;
  for (double h : {1.0 / 4, 1.0 / 8, 1.0 / 16}) betas.push_back(infsup_estimate(mesh_for(test1_case(), h), o));
  return check_infsup(betas);
}

Verdict locking() { return check_locking(compare_formulations(build_locking_case(), 1)); }

Verdict footing() {
  const BenchmarkCase bc = build_footing_case();
  const Comparison cmp = compare_formulations(bc, 1);
  const Mesh mesh = mesh_for(bc.problem, bc.h);
  const Stepper st(bc.problem, mesh, scheme(1, bc.dt, bc.problem.T));
  return check_footing(cmp, footing_center_settlement(st, cmp.reformulated.final_state));
}

Verdict source_oracle() {
  std::mt19937 rng(20240917);
  const double w1 = oracle::worst_source_mismatch(test1_case(), oracle::Test1Fields{}, rng);
  const double w2 = oracle::worst_source_mismatch(test2_case(), oracle::Test2Fields{}, rng);
  return {w1 <= 1e-10 && w2 <= 1e-10, "worst relative mismatch test1 " + sci(w1) + ", test2 " + sci(w2)};
}

Verdict stepper_invariants() {
  double zero = 0.0;
  for (Formulation f : {Formulation::Reformulated, Formulation::Original}) {
    for (int theta : {0, 1}) {
      for (bool closed : {true, false}) {
        const ProblemCase c = invariants::zero_data_case(closed);
        const Mesh mesh = Mesh::build_rect(c.domain, 4, 4);
        SchemeConfig cfg = scheme(theta, 0.01, 0.2);
        cfg.formulation = f;
        const Stepper st(c, mesh, cfg);
        st.run(st.initial_state(), [&](const State& s) { zero = std::max(zero, invariants::state_magnitude(s)); });
      }
    }
  }
  double recon = 0.0;
  for (int theta : {0, 1}) {
    const ProblemCase c = test1_case();
    const Mesh mesh = Mesh::build_rect(c.domain, 4, 4);
    const Stepper st(c, mesh, scheme(theta, 0.05, 0.5));
    st.run(st.initial_state(), [&](const State& s) {
      recon = std::max(recon, invariants::reconstruction_residual(st, s).worst());
    });
  }
  return {zero <= 1e-12 && recon <= 1e-11,
          "zero-data max " + sci(zero) + " (bound 1e-12), reconstruction max " + sci(recon) + " (bound 1e-11)"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"spatial convergence, first manufactured case", [] { return spatial(test1_case(), kTest1Reference); }},
      {"spatial convergence, second manufactured case", [] { return spatial(test2_case(), kTest2Reference); }},
      {"temporal ratios", temporal},
      {"discrete energy law", energy},
      {"mass balance", mass},
      {"inf-sup stability", infsup},
      {"locking comparison", locking},
      {"footing benchmark", footing},
      {"manufactured source oracle", source_oracle},
      {"stepper invariants", stepper_invariants},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    if (!v.pass) ++failures;
    std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << " (" << criteria[i].first << "): " << v.detail
              << std::endl;
  }
  std::cout << criteria.size() - static_cast<std::size_t>(failures) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failures == 0 ? 0 : 1;
}
