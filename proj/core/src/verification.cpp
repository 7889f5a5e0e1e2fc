#include "porofem/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace porofem {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int num_cells(const Mesh& m) { return static_cast<int>(m.num_triangles()); }

std::array<double, 3> bary_of(const QuadratureRule& rule, std::size_t q) { return rule.points[q]; }

// Exact integral of the product of two broken P1 fields over the mesh.
double broken_inner(const BrokenP1& a, const BrokenP1& b, const Mesh& mesh) {
  double sum = 0.0;
  for (int t = 0; t < num_cells(mesh); ++t) {
    double diag = 0.0;
    double sa = 0.0;
    double sb = 0.0;
    for (int k = 0; k < 3; ++k) {
      diag += a.at(t, k) * b.at(t, k);
      sa += a.at(t, k);
      sb += b.at(t, k);
    }
    sum += mesh.area(t) / 12.0 * (diag + sa * sb);
  }
  return sum;
}

double broken_sq(const BrokenP1& a, const Mesh& mesh) { return broken_inner(a, a, mesh); }

// sum_T (Kf grad a, grad b)_T for broken P1 fields.
double broken_flux_inner(const BrokenP1& a, const BrokenP1& b, const Mesh& mesh, const Mat2& Kf) {
  double sum = 0.0;
  for (int t = 0; t < num_cells(mesh); ++t) {
    const TriangleGeometry geo = triangle_geometry(mesh, t);
    sum += geo.area() * a.grad(geo, t).dot(Kf * b.grad(geo, t));
  }
  return sum;
}

// sum_T (v, grad b)_T for a constant vector v.
double broken_flux_against(const Vec2& v, const BrokenP1& b, const Mesh& mesh) {
  double sum = 0.0;
  for (int t = 0; t < num_cells(mesh); ++t) {
    const TriangleGeometry geo = triangle_geometry(mesh, t);
    sum += geo.area() * v.dot(b.grad(geo, t));
  }
  return sum;
}

BrokenP1 combine(double a, const BrokenP1& x, double b, const BrokenP1& y) {
  BrokenP1 out(x.num_triangles());
  out.values() = a * x.values() + b * y.values();
  return out;
}

double quad_form(const SparseMatrix& A, const Vector& v) { return v.dot(A * v); }

// (f, p) for a broken field p at time t.
double source_against(const ScalarField& f, const BrokenP1& p, const Mesh& mesh, double t) {
  const QuadratureRule rule = triangle_quadrature(kLoadQuadrature);
  double sum = 0.0;
  for (int c = 0; c < num_cells(mesh); ++c) {
    const TriangleGeometry geo = triangle_geometry(mesh, c);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      sum += rule.weights[q] * geo.det * f(geo.map(rule.ref_point(q)), t) * p.eval(c, bary_of(rule, q));
    }
  }
  return sum;
}

// <g, p> over the flux sides of the case for a broken field p.
double flux_against(const ProblemCase& pc, const BrokenP1& p, const Mesh& mesh, double t) {
  const LineRule rule = gauss_line(kFacetGaussPoints);
  double sum = 0.0;
  for (const auto& fl : pc.bc.flux) {
    for (const auto& facet : mesh.boundary_facets(fl.tag)) {
      const auto& e = mesh.edge(facet.edge);
      const int tri = mesh.edge_triangles(facet.edge)[0];
      const Point a = mesh.vertex(e[0]);
      const Point b = mesh.vertex(e[1]);
      const double len = (b - a).norm();
      for (std::size_t q = 0; q < rule.points.size(); ++q) {
        const Point x = a + rule.points[q] * (b - a);
        sum += rule.weights[q] * len * fl.value(x, t) * p.eval(tri, barycentric(mesh, tri, x));
      }
    }
  }
  return sum;
}

}  // namespace

Mesh mesh_for(const ProblemCase& c, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("h must be positive");
  const int nx = static_cast<int>(std::lround(c.domain.width() / h));
  const int ny = static_cast<int>(std::lround(c.domain.height() / h));
  return Mesh::build_rect(c.domain, std::max(nx, 1), std::max(ny, 1));
}

double observed_rate(double coarse, double fine) {
  if (!(coarse > 0.0) || !(fine > 0.0)) return kNaN;
  return std::log2(coarse / fine);
}

double l2_norm_vector(const Vector& coeffs, const DofMap& p2v) {
  const QuadratureRule rule = triangle_quadrature(kLoadQuadrature);
  double sum = 0.0;
  for (int t = 0; t < num_cells(p2v.mesh()); ++t) {
    const double det = triangle_geometry(p2v.mesh(), t).det;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      sum += rule.weights[q] * det * eval_field(coeffs, p2v, t, rule.ref_point(q)).value.squaredNorm();
    }
  }
  return std::sqrt(sum);
}

double l2_norm(const BrokenP1& f, const Mesh& mesh) { return std::sqrt(std::max(0.0, broken_sq(f, mesh))); }

ErrorNorms error_norms(const Stepper& stepper, const State& s, const ExactSolution& exact, double t) {
  const Spaces& sp = stepper.spaces();
  const Mesh& mesh = *sp.mesh;
  const Material& m = stepper.material();
  const bool reformulated = stepper.config().formulation == Formulation::Reformulated;
  const QuadratureRule rule = triangle_quadrature(kLoadQuadrature);
  double tl2 = 0.0, th1 = 0.0, pl2 = 0.0, ph1 = 0.0, dl2 = 0.0, wl2 = 0.0;
  for (int c = 0; c < num_cells(mesh); ++c) {
    const TriangleGeometry geo = triangle_geometry(mesh, c);
    const Vec2 gp = s.p.grad(geo, c);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vec2 xi = rule.ref_point(q);
      const Point x = geo.map(xi);
      const double w = rule.weights[q] * geo.det;
      const FieldSample tau = eval_field(s.tau, sp.p2v, c, xi);
      tl2 += w * (tau.value - exact.tau(x, t)).squaredNorm();
      th1 += w * (tau.grad - exact.grad_tau(x, t)).squaredNorm();
      pl2 += w * std::pow(s.p.eval(c, bary_of(rule, q)) - exact.p(x, t), 2);
      ph1 += w * (gp - exact.grad_p(x, t)).squaredNorm();
      if (reformulated) {
        dl2 += w * std::pow(eval_field(s.delta, sp.p1, c, xi).value(0) - exact.delta(m, x, t), 2);
        wl2 += w * std::pow(eval_field(s.varpi, sp.p1, c, xi).value(0) - exact.varpi(m, x, t), 2);
      }
    }
  }
  ErrorNorms e;
  e.tau_l2 = std::sqrt(tl2);
  e.tau_h1 = std::sqrt(tl2 + th1);
  e.p_l2 = std::sqrt(pl2);
  e.p_h1 = std::sqrt(pl2 + ph1);
  e.delta_l2 = std::sqrt(dl2);
  e.varpi_l2 = std::sqrt(wl2);
  return e;
}

ConvergenceReport spatial_convergence(const ProblemCase& c, const std::vector<double>& h_list,
                                      const SchemeConfig& cfg) {
  if (!c.exact) throw std::invalid_argument("spatial convergence needs an exact solution");
  ConvergenceReport rep;
  rep.case_name = c.name;
  rep.theta = cfg.theta;
  rep.dt = cfg.dt;
  for (double h : h_list) {
    const Mesh mesh = mesh_for(c, h);
    const Stepper stepper(c, mesh, cfg);
    const State end = stepper.run(stepper.initial_state());
    ConvergenceRow row;
    row.h = h;
    row.errors = error_norms(stepper, end, *c.exact, end.t);
    row.rates = {kNaN, kNaN, kNaN, kNaN, kNaN, kNaN};
    if (!rep.rows.empty()) {
      const ErrorNorms& prev = rep.rows.back().errors;
      const ErrorNorms& cur = row.errors;
      row.rates = {observed_rate(prev.tau_l2, cur.tau_l2), observed_rate(prev.tau_h1, cur.tau_h1),
                   observed_rate(prev.p_l2, cur.p_l2),     observed_rate(prev.p_h1, cur.p_h1),
                   observed_rate(prev.delta_l2, cur.delta_l2), observed_rate(prev.varpi_l2, cur.varpi_l2)};
    }
    rep.rows.push_back(row);
  }
  return rep;
}

std::vector<TemporalRow> temporal_ratio(const ProblemCase& c, int n, const std::vector<double>& dt_list,
                                        const SchemeConfig& cfg) {
  if (dt_list.size() < 2) throw std::invalid_argument("temporal study needs at least two step sizes");
  const Mesh mesh = Mesh::build_rect(c.domain, n, n);
  std::vector<State> finals;
  std::unique_ptr<Stepper> last;
  for (double dt : dt_list) {
    SchemeConfig sc = cfg;
    sc.dt = dt;
    last = std::make_unique<Stepper>(c, mesh, sc);
    finals.push_back(last->run(last->initial_state()));
  }
  const DofMap& p2v = last->spaces().p2v;
  std::vector<TemporalRow> rows;
  for (std::size_t i = 0; i + 1 < finals.size(); ++i) {
    TemporalRow r;
    r.dt = dt_list[i];
    r.tau_diff = l2_norm_vector(finals[i].tau - finals[i + 1].tau, p2v);
    r.p_diff = l2_norm(combine(1.0, finals[i].p, -1.0, finals[i + 1].p), mesh);
    // differences the linear solves cannot resolve count as temporally exact
    r.tau_exact = r.tau_diff <= cfg.solver_tol * l2_norm_vector(finals[i + 1].tau, p2v);
    r.p_exact = r.p_diff <= cfg.solver_tol * l2_norm(finals[i + 1].p, mesh);
    r.tau_ratio = kNaN;
    r.p_ratio = kNaN;
    if (!rows.empty()) {
      const TemporalRow& prev = rows.back();
      if (r.tau_diff > 0.0) r.tau_ratio = prev.tau_diff / r.tau_diff;
      if (r.p_diff > 0.0) r.p_ratio = prev.p_diff / r.p_diff;
    }
    rows.push_back(r);
  }
  return rows;
}

EnergyLedger energy_ledger(const Stepper& stepper, const std::vector<State>& traj) {
  if (traj.empty()) throw std::invalid_argument("empty trajectory");
  if (stepper.config().formulation != Formulation::Reformulated) {
    throw std::invalid_argument("energy ledger is defined for the reformulated scheme");
  }
  const Spaces& sp = stepper.spaces();
  const Mesh& mesh = *sp.mesh;
  const ProblemCase& pc = stepper.problem();
  const Material& m = stepper.material();
  const auto& prm = m.params();
  const int theta = stepper.config().theta;
  const double dt = stepper.config().dt;
  const double gamma = m.gamma();
  const double ls = prm.lambda_star;
  const double chi1 = m.chi1(), chi2 = m.chi2(), chi3 = m.chi3();
  const Mat2 Kf = prm.K / prm.theta_f;
  const Vec2 grav = Kf * prm.rho_f_g;
  const SparseMatrix& A = stepper.elasticity();
  const SparseMatrix& M = stepper.mass();

  auto eps_sq = [&](const Vector& v) { return gamma > 0.0 ? quad_form(A, v) / gamma : 0.0; };
  auto W = [&](std::size_t k) -> const Vector& { return theta == 1 ? traj[k].varpi : traj[k].varpi_prev; };

  auto J = [&](std::size_t k) {
    const State& s = traj[k];
    const Vector load = assemble_load(pc.body_force, sp.p2v, s.t) + stepper.boundary().traction(s.t);
    const BrokenP1 mix = combine(ls, s.div_rate, 1.0, to_broken(s.delta, sp.p1));
    const Vector dtau = (s.tau - s.tau_prev) / dt;
    return 0.5 * (gamma * eps_sq(s.tau) + chi2 * quad_form(M, W(k)) + chi3 * broken_sq(mix, mesh) +
                  gamma * ls * chi3 * dt * eps_sq(dtau) - 2.0 * load.dot(s.tau));
  };

  EnergyLedger out;
  out.J.push_back(J(0));
  out.S.push_back(0.0);
  if (theta == 0) out.S_hat.push_back(0.0);
  for (std::size_t k = 1; k < traj.size(); ++k) {
    const State& s = traj[k];
    const State& prev = traj[k - 1];
    const Vector dtau = (s.tau - s.tau_prev) / dt;
    const Vector d2tau = (s.tau - 2.0 * s.tau_prev + prev.tau_prev) / (dt * dt);
    const Vector dw = (W(k) - W(k - 1)) / dt;
    const Vector ddelta = (s.delta - prev.delta) / dt;
    const BrokenP1 drate = combine(1.0 / dt, s.div_rate, -1.0 / dt, prev.div_rate);

    const double rate_sq = broken_sq(s.div_rate, mesh);
    const double flux = broken_flux_inner(s.p, s.p, mesh, Kf) - broken_flux_against(grav, s.p, mesh);
    const double sources = source_against(pc.source, s.p, mesh, s.t) + flux_against(pc, s.p, mesh, s.t);
    const double e_dt = eps_sq(dtau);
    const double e_d2 = eps_sq(d2tau);
    const double w_dt = quad_form(M, dw);
    const double d_dt = quad_form(M, ddelta);
    const double r_dt = ls * ls * broken_sq(drate, mesh);

    double inc = ls * rate_sq + 0.5 * gamma * dt * e_dt + flux + 0.5 * chi2 * dt * w_dt + 0.5 * chi3 * dt * d_dt +
                 0.5 * chi3 * dt * r_dt + 0.5 * gamma * ls * chi3 * dt * dt * e_d2 - sources;
    if (theta == 0) {
      const BrokenP1 ddelta_b = to_broken(ddelta, sp.p1);
      const double cross = chi1 * dt * broken_flux_inner(ddelta_b, s.p, mesh, Kf) +
                           chi1 * ls * dt * broken_flux_inner(drate, s.p, mesh, Kf);
      const double inc_hat = ls * rate_sq + 0.25 * gamma * dt * e_dt + flux + 0.5 * chi2 * dt * w_dt +
                             0.5 * chi3 * dt * d_dt + 0.25 * chi3 * dt * r_dt +
                             0.5 * gamma * ls * chi3 * dt * dt * e_d2 - sources;
      inc -= cross;
      out.S_hat.push_back(out.S_hat.back() + dt * inc_hat);
    }
    out.S.push_back(out.S.back() + dt * inc);
    out.J.push_back(J(k));
  }
  out.scale = std::max(1.0, std::abs(out.J.front()));
  for (std::size_t k = 0; k < out.J.size(); ++k) {
    out.residual.push_back(out.J[k] + out.S[k] - out.J.front());
    out.max_abs_residual = std::max(out.max_abs_residual, std::abs(out.residual.back()));
    if (theta == 0) {
      out.inequality.push_back(out.J[k] + out.S_hat[k] - out.J.front());
      out.max_inequality = std::max(out.max_inequality, out.inequality.back());
    }
  }
  return out;
}

std::vector<double> mass_balance(const Stepper& stepper, const std::vector<State>& traj) {
  if (traj.empty()) return {};
  const Spaces& sp = stepper.spaces();
  const ProblemCase& pc = stepper.problem();
  const Vector ones = Vector::Ones(sp.p1.num_dofs());
  const Vector m1 = stepper.mass() * ones;
  const double dt = stepper.config().dt;
  const double base = m1.dot(traj.front().varpi);
  std::vector<double> out = {0.0};
  double supplied = 0.0;
  for (std::size_t k = 1; k < traj.size(); ++k) {
    const double t = traj[k].t;
    supplied += dt * (assemble_load(pc.source, sp.p1, t).sum() + stepper.boundary().flux(t).sum());
    out.push_back(m1.dot(traj[k].varpi) - base - supplied);
  }
  return out;
}

double infsup_estimate(const Mesh& mesh, const InfSupOptions& opts) {
  const Spaces sp(mesh);
  const SparseMatrix H = assemble_vector_h1(sp.p2v);
  SparseMatrix Bt = SparseMatrix(assemble_div(sp.p2v, sp.p1).transpose());
  const SparseMatrix M = assemble_mass(sp.p1);

  std::vector<int> fixed;
  if (opts.clamp_boundary) {
    for (int node : sp.p2v.boundary_nodes(std::span<const BoundaryFacet>(mesh.boundary_facets()))) {
      fixed.push_back(sp.p2v.dof(node, 0));
      fixed.push_back(sp.p2v.dof(node, 1));
    }
    std::vector<char> mask(static_cast<std::size_t>(Bt.rows()), 0);
    for (int d : fixed) mask[static_cast<std::size_t>(d)] = 1;
    Bt.prune([&mask](Eigen::Index r, Eigen::Index, double) { return !mask[static_cast<std::size_t>(r)]; });
  }
  const ConstrainedOperator op(H, fixed);
  const DirectSolver solver(op.matrix());

  const Eigen::Index np = Bt.cols();
  const DenseMatrix BtD = DenseMatrix(Bt);
  DenseMatrix X(Bt.rows(), np);
  for (Eigen::Index j = 0; j < np; ++j) X.col(j) = solver.solve(BtD.col(j));
  const DenseMatrix S = BtD.transpose() * X;

  // mean-zero basis z_i = e_i - (m_i / m_last) e_last
  const Vector mvec = M * Vector::Ones(np);
  DenseMatrix Z = DenseMatrix::Zero(np, np - 1);
  for (Eigen::Index i = 0; i < np - 1; ++i) {
    Z(i, i) = 1.0;
    Z(np - 1, i) = -mvec(i) / mvec(np - 1);
  }
  const DenseMatrix SZ = Z.transpose() * S * Z;
  const DenseMatrix MZ = Z.transpose() * DenseMatrix(M) * Z;
  EigenOptions eo;
  eo.rel_tol = opts.rel_tol;
  const double lmin = smallest_generalized_eig(SZ.sparseView(), MZ.sparseView(), eo);
  return std::sqrt(std::max(0.0, lmin));
}

OscillationMetric oscillation_metric(const std::vector<double>& profile) {
  OscillationMetric out;
  out.samples = profile;
  if (profile.empty()) return out;
  for (std::size_t i = 0; i + 1 < profile.size(); ++i) out.total_variation += std::abs(profile[i + 1] - profile[i]);
  const auto [lo, hi] = std::minmax_element(profile.begin(), profile.end());
  out.range = *hi - *lo;
  out.index = out.range < 1e-14 ? 0.0 : out.total_variation / out.range;
  return out;
}

std::vector<double> sample_line(const BrokenP1& f, const Mesh& mesh, const Point& a, const Point& b, int samples) {
  if (samples < 2) throw std::invalid_argument("need at least two samples");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    const double s = static_cast<double>(i) / (samples - 1);
    const Location loc = mesh.locate(a + s * (b - a));
    out.push_back(f.eval(loc.triangle, loc.bary));
  }
  return out;
}

OscillationMetric oscillation_metric(const BrokenP1& f, const Mesh& mesh, const Point& a, const Point& b,
                                     int samples) {
  return oscillation_metric(sample_line(f, mesh, a, b, samples));
}

}  // namespace porofem
