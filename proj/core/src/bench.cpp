#include "porofem/bench.hpp"

#include <cmath>

namespace porofem {

PhysicalParams strip_load_params() {
  PhysicalParams p;
  p.lambda_star = 1e-5;
  p.E = 20909.091;
  p.nu = 0.045;
  p.b0 = 1e-5;
  p.a0 = 2e-10;
  p.set_isotropic_permeability(1e-7);
  p.theta_f = 1.0;
  return p;
}

PhysicalParams footing_params() {
  PhysicalParams p;
  p.lambda_star = 1e-2;
  p.E = 3e4;
  p.nu = 0.2;
  p.b0 = 1.0;
  p.a0 = 2e-8;
  p.set_isotropic_permeability(1e-15);
  p.theta_f = 1e-3;
  return p;
}

namespace {

void drained_everywhere(ProblemCase& c) {
  for (BoundaryTag tag : {BoundaryTag::Right, BoundaryTag::Bottom, BoundaryTag::Left, BoundaryTag::Top}) {
    c.bc.pressure.push_back({tag, zero_scalar_field(), {}});
  }
}

}  // namespace

BenchmarkCase build_locking_case() {
  BenchmarkCase b;
  ProblemCase& c = b.problem;
  c.name = "locking";
  c.domain = Rect{0.0, 1.0, 0.0, 1.0};
  c.params = strip_load_params();
  c.body_force = zero_vector_field();
  c.source = zero_scalar_field();
  const double b0 = c.params.b0;
  auto in_strip = [](const Point& x) { return x(0) >= 0.2 && x(0) < 0.8; };
  c.bc.displacement.push_back({BoundaryTag::Right, 0, zero_scalar_field(), {}});
  c.bc.displacement.push_back({BoundaryTag::Left, 0, zero_scalar_field(), {}});
  c.bc.displacement.push_back({BoundaryTag::Bottom, 1, zero_scalar_field(), {}});
  c.bc.displacement.push_back({BoundaryTag::Top, 1, zero_scalar_field(), [in_strip](const Point& x) { return !in_strip(x); }});
  c.bc.traction.push_back({BoundaryTag::Top,
                           [b0](const Point&, double t, const Vec2&) { return Vec2(0.0, b0 * std::sin(t)); },
                           in_strip});
  drained_everywhere(c);
  c.tau0 = zero_vector_field();
  c.p0 = zero_scalar_field();
  c.T = 1.0;
  b.h = 1.0 / 40.0;
  b.dt = 1.0 / 100.0;
  b.line_a = Point(0.5, 0.5);
  b.line_b = Point(1.0, 0.5);
  return b;
}

BenchmarkCase build_footing_case() {
  BenchmarkCase b;
  ProblemCase& c = b.problem;
  c.name = "footing";
  c.domain = Rect{-50.0, 50.0, 0.0, 100.0};
  c.params = footing_params();
  c.body_force = zero_vector_field();
  c.source = zero_scalar_field();
  for (BoundaryTag tag : {BoundaryTag::Right, BoundaryTag::Bottom, BoundaryTag::Left}) {
    c.bc.displacement.push_back({tag, 0, zero_scalar_field(), {}});
    c.bc.displacement.push_back({tag, 1, zero_scalar_field(), {}});
  }
  const double sigma0 = 1e4;
  c.bc.traction.push_back({BoundaryTag::Top,
                           [sigma0](const Point&, double, const Vec2&) { return Vec2(0.0, -sigma0); },
                           [](const Point& x) { return std::abs(x(0)) <= 20.0; }});
  drained_everywhere(c);
  c.tau0 = zero_vector_field();
  c.p0 = zero_scalar_field();
  c.T = 0.01;
  c.steady_loads = true;
  b.h = 2.5;
  b.dt = c.T / 20.0;
  b.line_a = Point(0.0, 50.0);
  b.line_b = Point(50.0, 50.0);
  return b;
}

Comparison compare_formulations(const BenchmarkCase& bc, int theta) {
  const Mesh mesh = mesh_for(bc.problem, bc.h);
  SchemeConfig cfg;
  cfg.theta = theta;
  cfg.dt = bc.dt;
  cfg.T = bc.problem.T;
  Comparison out;
  {
    const Stepper s(bc.problem, mesh, cfg);
    out.reformulated.final_state = s.run(s.initial_state());
  }
  cfg.formulation = Formulation::Original;
  {
    const Stepper s(bc.problem, mesh, cfg);
    out.original.final_state = s.run(s.initial_state());
  }
  out.reformulated.metric = oscillation_metric(out.reformulated.final_state.p, mesh, bc.line_a, bc.line_b, bc.samples);
  out.original.metric = oscillation_metric(out.original.final_state.p, mesh, bc.line_a, bc.line_b, bc.samples);
  return out;
}

double footing_center_settlement(const Stepper& stepper, const State& s) {
  const DofMap& p2v = stepper.spaces().p2v;
  const Rect& d = stepper.problem().domain;
  const Point top(0.5 * (d.x0 + d.x1), d.y1);
  for (int n = 0; n < p2v.num_nodes(); ++n) {
    if ((p2v.node_coords(n) - top).norm() < 1e-9 * d.width()) return s.tau(p2v.dof(n, 1));
  }
  const Location loc = stepper.spaces().mesh->locate(top);
  Vec2 xi = Vec2(loc.bary[1], loc.bary[2]);
  return eval_field(s.tau, p2v, loc.triangle, xi).value(1);
}

}  // namespace porofem
