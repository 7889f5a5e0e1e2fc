#include "porofem/manufactured.hpp"

#include <cmath>
#include <numbers>

namespace porofem {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

PhysicalParams manufactured_params() {
  PhysicalParams p;
  p.lambda_star = 1e-5;
  p.E = 25.0;
  p.nu = 0.25;
  p.b0 = 1e-5;
  p.a0 = 0.2;
  p.set_isotropic_permeability(1e-3);
  p.theta_f = 1.0;
  return p;
}

ProblemCase manufactured_case(std::string name, const PhysicalParams& params, ExactSolution exact,
                              VectorField body_force, ScalarField source) {
  ProblemCase c;
  c.name = std::move(name);
  c.domain = Rect{0.0, 1.0, 0.0, 1.0};
  c.params = params;
  c.body_force = std::move(body_force);
  c.source = std::move(source);
  c.T = 1.0;

  const Material m = Material::validate(params);
  const auto tau = exact.tau;
  auto component = [tau](int k) { return ScalarField([tau, k](const Point& x, double t) { return tau(x, t)(k); }); };
  c.bc.displacement.push_back({BoundaryTag::Right, 0, component(0), {}});
  c.bc.displacement.push_back({BoundaryTag::Left, 0, component(0), {}});
  c.bc.displacement.push_back({BoundaryTag::Bottom, 1, component(1), {}});
  c.bc.displacement.push_back({BoundaryTag::Top, 1, component(1), {}});

  const ExactSolution ex = exact;
  const TractionField traction = [ex, m](const Point& x, double t, const Vec2& n) { return ex.traction(m, x, t, n); };
  const ScalarField pressure = exact.p;
  const ScalarField varpi = [ex, m](const Point& x, double t) { return ex.varpi(m, x, t); };
  for (BoundaryTag tag : {BoundaryTag::Right, BoundaryTag::Bottom, BoundaryTag::Left, BoundaryTag::Top}) {
    c.bc.traction.push_back({tag, traction, {}});
    c.bc.pressure.push_back({tag, pressure, varpi});
  }
  c.tau0 = [tau](const Point& x, double) { return tau(x, 0.0); };
  const ScalarField p = exact.p;
  c.p0 = [p](const Point& x, double) { return p(x, 0.0); };
  c.delta0 = [ex, m](const Point& x, double) { return ex.delta(m, x, 0.0); };
  c.exact = std::move(exact);
  return c;
}

ProblemCase test1_case() {
  const PhysicalParams prm = manufactured_params();
  const Material m = Material::validate(prm);
  const double lam = m.lam(), gamma = m.gamma(), ls = prm.lambda_star, b0 = prm.b0, a0 = prm.a0;
  const double k = prm.K(0, 0) / prm.theta_f;

  ExactSolution ex;
  ex.tau = [](const Point& x, double t) { return Vec2(t * std::sin(kPi * x(0)), t * std::sin(kPi * x(1))); };
  ex.grad_tau = [](const Point& x, double t) {
    Mat2 g = Mat2::Zero();
    g(0, 0) = t * kPi * std::cos(kPi * x(0));
    g(1, 1) = t * kPi * std::cos(kPi * x(1));
    return g;
  };
  ex.div_tau_t = [](const Point& x, double) { return kPi * (std::cos(kPi * x(0)) + std::cos(kPi * x(1))); };
  ex.p = [](const Point& x, double t) { return t * std::sin(kPi * x(0) + kPi * x(1)); };
  ex.grad_p = [](const Point& x, double t) {
    const double g = t * kPi * std::cos(kPi * x(0) + kPi * x(1));
    return Vec2(g, g);
  };

  VectorField F = [=](const Point& x, double t) {
    const Vec2 s(std::sin(kPi * x(0)), std::sin(kPi * x(1)));
    const double c = b0 * t * kPi * std::cos(kPi * x(0) + kPi * x(1));
    return Vec2(ls * kPi * kPi * s + (lam + gamma) * kPi * kPi * t * s + Vec2(c, c));
  };
  ScalarField phi = [=](const Point& x, double t) {
    const double s = std::sin(kPi * x(0) + kPi * x(1));
    return a0 * s + 2.0 * k * t * kPi * kPi * s + b0 * kPi * (std::cos(kPi * x(0)) + std::cos(kPi * x(1)));
  };
  return manufactured_case("test1", prm, std::move(ex), std::move(F), std::move(phi));
}

ProblemCase test2_case() {
  const PhysicalParams prm = manufactured_params();
  const Material m = Material::validate(prm);
  const double lam = m.lam(), gamma = m.gamma(), ls = prm.lambda_star, b0 = prm.b0, a0 = prm.a0;
  const double k = prm.K(0, 0) / prm.theta_f;

  ExactSolution ex;
  ex.tau = [](const Point& x, double t) { return Vec2(std::exp(t) * std::sin(x(0)), std::exp(t) * std::sin(x(1))); };
  ex.grad_tau = [](const Point& x, double t) {
    Mat2 g = Mat2::Zero();
    g(0, 0) = std::exp(t) * std::cos(x(0));
    g(1, 1) = std::exp(t) * std::cos(x(1));
    return g;
  };
  ex.div_tau_t = [](const Point& x, double t) { return std::exp(t) * (std::cos(x(0)) + std::cos(x(1))); };
  ex.p = [](const Point& x, double t) { return t * std::sin(kPi * x(0)) * std::sin(kPi * x(1)); };
  ex.grad_p = [](const Point& x, double t) {
    return Vec2(t * kPi * std::cos(kPi * x(0)) * std::sin(kPi * x(1)),
                t * kPi * std::sin(kPi * x(0)) * std::cos(kPi * x(1)));
  };

  VectorField F = [=](const Point& x, double t) {
    const Vec2 s(std::sin(x(0)), std::sin(x(1)));
    const Vec2 gp(std::cos(kPi * x(0)) * std::sin(kPi * x(1)), std::sin(kPi * x(0)) * std::cos(kPi * x(1)));
    return Vec2((ls + lam + gamma) * std::exp(t) * s + b0 * t * kPi * gp);
  };
  ScalarField phi = [=](const Point& x, double t) {
    const double s = std::sin(kPi * x(0)) * std::sin(kPi * x(1));
    return a0 * s + 2.0 * k * kPi * kPi * t * s + b0 * std::exp(t) * (std::cos(x(0)) + std::cos(x(1)));
  };
  return manufactured_case("test2", prm, std::move(ex), std::move(F), std::move(phi));
}

ProblemCase neumann_case() {
  ProblemCase c;
  c.name = "neumann";
  c.domain = Rect{0.0, 1.0, 0.0, 1.0};
  c.params = manufactured_params();
  c.body_force = [](const Point& x, double) { return Vec2(std::sin(kPi * x(1)), std::cos(kPi * x(0))); };
  c.source = [](const Point& x, double) { return 1.0 + x(0) * x(1); };
  c.bc.traction.push_back({BoundaryTag::Top, [](const Point& x, double, const Vec2&) { return Vec2(0.2 * x(0), -0.5); }, {}});
  c.bc.flux.push_back({BoundaryTag::Right, [](const Point&, double) { return 0.3; }});
  c.bc.constrain_rigid_motions = true;
  c.tau0 = zero_vector_field();
  c.p0 = [](const Point& x, double) { return std::cos(kPi * x(0)) * std::cos(kPi * x(1)); };
  c.T = 0.1;
  c.steady_loads = true;
  return c;
}

}  // namespace porofem
