#include "porofem/stepper.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <sstream>
#include <stdexcept>

namespace porofem {

namespace {

struct ConstrainedSolve {
  ConstrainedSolve(const SparseMatrix& A, std::vector<int> dofs, double tol)
      : op(A, std::move(dofs)), solver(op.matrix(), tol) {}

  Vector solve(const Vector& b, const std::vector<double>& values) const { return solver.solve(op.rhs(b, values)); }

  ConstrainedOperator op;
  DirectSolver solver;
};

std::vector<int> shifted(const std::vector<int>& v, Eigen::Index offset) {
  std::vector<int> out;
  out.reserve(v.size());
  for (int i : v) out.push_back(i + static_cast<int>(offset));
  return out;
}

std::vector<int> concat(std::vector<int> a, const std::vector<int>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::vector<double> concat(std::vector<double> a, const std::vector<double>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

// Area-weighted average of a broken field at every vertex.
Vector vertex_average(const BrokenP1& f, const Mesh& mesh) {
  Vector num = Vector::Zero(static_cast<Eigen::Index>(mesh.num_vertices()));
  Vector den = Vector::Zero(num.size());
  for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t) {
    const double a = mesh.area(t);
    const auto& tri = mesh.triangle(t);
    for (int k = 0; k < 3; ++k) {
      num(tri[static_cast<std::size_t>(k)]) += a * f.at(t, k);
      den(tri[static_cast<std::size_t>(k)]) += a;
    }
  }
  return num.cwiseQuotient(den);
}

// Rows map P2 vector coefficients to the area-weighted vertex average of
// their broken divergence; the matrix form of vertex_average(div tau).
SparseMatrix vertex_divergence(const DofMap& p2v) {
  const Mesh& mesh = p2v.mesh();
  const ReferenceElement& ref = p2v.element();
  Vector star = Vector::Zero(static_cast<Eigen::Index>(mesh.num_vertices()));
  for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t) {
    for (int v : mesh.triangle(t)) star(v) += mesh.area(t);
  }
  TripletAssembler out(static_cast<Eigen::Index>(mesh.num_vertices()), p2v.num_dofs());
  for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t) {
    const TriangleGeometry geo = triangle_geometry(mesh, t);
    const std::vector<int> dofs = p2v.cell_dofs(t);
    const auto& tri = mesh.triangle(t);
    for (int k = 0; k < 3; ++k) {
      const int v = tri[static_cast<std::size_t>(k)];
      const double w = mesh.area(t) / star(v);
      const BasisEval be = ref.eval(ref.node(k));
      for (int j = 0; j < be.n; ++j) {
        const Vec2 g = geo.physical_grad(be.grads[static_cast<std::size_t>(j)]);
        out.add(v, dofs[static_cast<std::size_t>(2 * j)], w * g(0));
        out.add(v, dofs[static_cast<std::size_t>(2 * j + 1)], w * g(1));
      }
    }
  }
  return out.finalize();
}

// Copy of A with the listed rows removed; the caller adds replacements.
std::vector<Eigen::Triplet<double>> triplets_without_rows(const SparseMatrix& A, const std::vector<int>& rows) {
  std::vector<char> drop(static_cast<std::size_t>(A.rows()), 0);
  for (int r : rows) drop[static_cast<std::size_t>(r)] = 1;
  std::vector<Eigen::Triplet<double>> out;
  out.reserve(static_cast<std::size_t>(A.nonZeros()));
  for (Eigen::Index c = 0; c < A.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(A, c); it; ++it) {
      if (!drop[static_cast<std::size_t>(it.row())]) out.emplace_back(it.row(), it.col(), it.value());
    }
  }
  return out;
}

}  // namespace

struct Stepper::Impl {
  BlockSystem layout;
  std::unique_ptr<ConstrainedSolve> main;       // theta = 1, Stokes block for theta = 0, or original model
  std::unique_ptr<ConstrainedSolve> diffusion;  // theta = 0 only
  // theta = 1 without closed-form varpi data: p = p_D is imposed in the
  // coupled system through the varpi rows of the pressure nodes
  bool implicit_pressure = false;
  SparseMatrix vertex_div;
};

Stepper::Stepper(const ProblemCase& c, const Mesh& mesh, const SchemeConfig& cfg)
    : case_(&c), material_(Material::validate(c.params)), cfg_(cfg), impl_(std::make_unique<Impl>()) {
  if (cfg.theta != 0 && cfg.theta != 1) throw std::invalid_argument("theta must be 0 or 1");
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (cfg.T < 0.0) throw std::invalid_argument("T must be non-negative");
  const double steps = cfg.T / cfg.dt;
  num_steps_ = static_cast<int>(std::lround(steps));
  if (std::abs(steps - num_steps_) > 1e-9 * std::max(1.0, steps)) {
    throw std::invalid_argument("T must be an integer multiple of dt");
  }

  spaces_ = std::make_unique<Spaces>(mesh);
  boundary_ = std::make_unique<BoundaryProgram>(c, *spaces_);
  const auto& p = material_.params();
  const DofMap& p2v = spaces_->p2v;
  const DofMap& p1 = spaces_->p1;
  const double dt = cfg.dt;
  const double ls = p.lambda_star;

  A_ = assemble_elasticity(p2v, material_.gamma());
  B_ = assemble_div(p2v, p1);
  M_ = assemble_mass(p1);
  D_ = assemble_diffusion(p1, p.K, p.theta_f);
  gravity_ = assemble_gravity_flux(p1, p.K, p.rho_f_g, p.theta_f);
  if (c.bc.constrain_rigid_motions) R_ = assemble_rigid_motions(p2v);

  const bool rm = c.bc.constrain_rigid_motions;
  BlockSystem& L = impl_->layout;
  const SparseMatrix Bt = B_.transpose();
  const auto& tau_dofs = boundary_->tau_dofs();
  const auto& p_nodes = boundary_->pressure_nodes();

  if (cfg.formulation == Formulation::Original) {
    C_ = assemble_div_div(p2v);
    L.add_field("tau", p2v.num_dofs());
    L.add_field("p", p1.num_dofs());
    if (rm) L.add_field("mu", 3);
    L.add_block("tau", "tau", A_);
    L.add_block("tau", "tau", C_, ls / dt + material_.lam());
    L.add_block("tau", "p", Bt, -p.b0);
    L.add_block("p", "tau", B_, p.b0 / dt);
    L.add_block("p", "p", M_, p.a0 / dt);
    L.add_block("p", "p", D_);
    if (rm) {
      L.add_block("tau", "mu", SparseMatrix(R_.transpose()));
      L.add_block("mu", "tau", R_);
    }
    impl_->main = std::make_unique<ConstrainedSolve>(L.assemble(), concat(tau_dofs, shifted(p_nodes, L.offset("p"))),
                                                    cfg.solver_tol);
    return;
  }

  const double c_div = 1.0 + ls * material_.chi3() / dt;
  if (cfg.theta == 1) {
    G_ = assemble_broken_divgrad(p2v, p1, p.K, p.theta_f);
    L.add_field("tau", p2v.num_dofs());
    L.add_field("delta", p1.num_dofs());
    L.add_field("varpi", p1.num_dofs());
    if (rm) L.add_field("mu", 3);
    L.add_block("tau", "tau", A_);
    L.add_block("tau", "delta", Bt, -1.0);
    L.add_block("delta", "tau", B_, c_div);
    L.add_block("delta", "delta", M_, material_.chi3());
    L.add_block("delta", "varpi", M_, -material_.chi1());
    L.add_block("varpi", "tau", G_, ls * material_.chi1() / dt);
    L.add_block("varpi", "delta", D_, material_.chi1());
    L.add_block("varpi", "varpi", M_, 1.0 / dt);
    L.add_block("varpi", "varpi", D_, material_.chi2());
    if (rm) {
      L.add_block("tau", "mu", SparseMatrix(R_.transpose()));
      L.add_block("mu", "tau", R_);
    }
    impl_->implicit_pressure = !p_nodes.empty() && !boundary_->varpi_values(0.0).has_value();
    if (!impl_->implicit_pressure) {
      impl_->main = std::make_unique<ConstrainedSolve>(
          L.assemble(), concat(tau_dofs, shifted(p_nodes, L.offset("varpi"))), cfg.solver_tol);
      return;
    }
    if (material_.chi2() == 0.0) throw SolverError("pressure data cannot be carried by varpi when chi2 = 0");
    // chi2 varpi_i + chi1 delta_i + lambda* chi1 Q_i = p_D at every pressure node,
    // Q_i the vertex average of d_t div tau
    impl_->vertex_div = vertex_divergence(p2v);
    const SparseMatrix K = L.assemble();
    const Eigen::Index ov = L.offset("varpi");
    const Eigen::Index od = L.offset("delta");
    const double rate = ls * material_.chi1() / dt;
    std::vector<int> rows = shifted(p_nodes, ov);
    auto trip = triplets_without_rows(K, rows);
    std::vector<char> is_node(static_cast<std::size_t>(p1.num_dofs()), 0);
    for (int n : p_nodes) is_node[static_cast<std::size_t>(n)] = 1;
    for (int n : p_nodes) {
      trip.emplace_back(ov + n, ov + n, material_.chi2());
      trip.emplace_back(ov + n, od + n, material_.chi1());
    }
    if (rate != 0.0) {
      for (Eigen::Index c = 0; c < impl_->vertex_div.outerSize(); ++c) {
        for (SparseMatrix::InnerIterator it(impl_->vertex_div, c); it; ++it) {
          if (is_node[static_cast<std::size_t>(it.row())]) trip.emplace_back(ov + it.row(), it.col(), rate * it.value());
        }
      }
    }
    SparseMatrix Kp(K.rows(), K.cols());
    Kp.setFromTriplets(trip.begin(), trip.end());
    impl_->main = std::make_unique<ConstrainedSolve>(Kp, tau_dofs, cfg.solver_tol);
    return;
  }

  G_ = assemble_broken_divgrad(p2v, p1, p.K, p.theta_f);
  L.add_field("tau", p2v.num_dofs());
  L.add_field("delta", p1.num_dofs());
  if (rm) L.add_field("mu", 3);
  L.add_block("tau", "tau", A_);
  L.add_block("tau", "delta", Bt, -1.0);
  L.add_block("delta", "tau", B_, c_div);
  L.add_block("delta", "delta", M_, material_.chi3());
  if (rm) {
    L.add_block("tau", "mu", SparseMatrix(R_.transpose()));
    L.add_block("mu", "tau", R_);
  }
  impl_->main = std::make_unique<ConstrainedSolve>(L.assemble(), tau_dofs, cfg.solver_tol);
  SparseMatrix Hdiff = M_ / dt + material_.chi2() * D_;
  impl_->diffusion = std::make_unique<ConstrainedSolve>(Hdiff, p_nodes, cfg.solver_tol);
}

Stepper::~Stepper() = default;
Stepper::Stepper(Stepper&&) noexcept = default;

Vector Stepper::stokes_load(double t) const {
  Vector f = assemble_load(case_->body_force, spaces_->p2v, t);
  if (boundary_->has_traction()) f += boundary_->traction(t);
  return f;
}

Vector Stepper::diffusion_load(double t) const {
  return assemble_load(case_->source, spaces_->p1, t) + boundary_->flux(t) + gravity_;
}

State Stepper::initial_state() const {
  const DofMap& p2v = spaces_->p2v;
  const DofMap& p1 = spaces_->p1;
  const auto& prm = material_.params();
  State s;
  s.step = 0;
  s.t = 0.0;
  s.tau = interpolate(case_->tau0, p2v, 0.0);
  s.tau_prev = s.tau;
  const Vector p0 = interpolate(case_->p0, p1, 0.0);
  if (cfg_.formulation == Formulation::Original) {
    s.pressure = p0;
    update_pq(s);
    return s;
  }
  if (case_->exact) {
    const ExactSolution& ex = *case_->exact;
    const Material& m = material_;
    s.varpi = interpolate(ScalarField([&](const Point& x, double) {
                            return prm.a0 * case_->p0(x, 0.0) + prm.b0 * ex.div_tau(x, 0.0);
                          }),
                          p1, 0.0);
    s.delta = interpolate(ScalarField([&](const Point& x, double) { return ex.delta(m, x, 0.0); }), p1, 0.0);
  } else {
    s.varpi = prm.a0 * p0 + prm.b0 * lumped_projection(broken_divergence(s.tau, p2v), p1);
    s.delta = case_->delta0 ? interpolate(case_->delta0, p1, 0.0) : Vector::Zero(p1.num_dofs());
  }
  s.varpi_prev = s.varpi;
  update_pq(s);
  return s;
}

State Stepper::consistent_initial_state() const {
  if (cfg_.formulation == Formulation::Original) throw std::logic_error("consistent start is for the reformulated scheme");
  State s = initial_state();
  const DofMap& p2v = spaces_->p2v;
  const DofMap& p1 = spaces_->p1;
  const bool rm = case_->bc.constrain_rigid_motions;
  const double chi1 = material_.chi1();
  const double dt = cfg_.dt;

  BlockSystem L;
  L.add_field("tau", p2v.num_dofs());
  L.add_field("delta", p1.num_dofs());
  const bool with_prev = cfg_.theta == 0;
  if (with_prev) L.add_field("varpi_prev", p1.num_dofs());
  if (rm) L.add_field("mu", 3);
  L.add_block("tau", "tau", A_);
  L.add_block("tau", "delta", SparseMatrix(B_.transpose()), -1.0);
  L.add_block("delta", "tau", B_);
  L.add_block("delta", "delta", M_, material_.chi3());
  if (rm) {
    L.add_block("tau", "mu", SparseMatrix(R_.transpose()));
    L.add_block("mu", "tau", R_);
  }
  Vector b = Vector::Zero(L.size());
  L.insert(b, "tau", stokes_load(0.0));
  if (with_prev) {
    // delta relation at level 0 uses varpi^{-1}; the diffusion relation at
    // level 0 ties varpi^{-1} to (delta^0, varpi^0)
    L.add_block("delta", "varpi_prev", M_, -chi1);
    L.add_block("varpi_prev", "varpi_prev", M_);
    L.add_block("varpi_prev", "delta", D_, -dt * chi1);
    L.insert(b, "varpi_prev",
             M_ * s.varpi + dt * material_.chi2() * (D_ * s.varpi) - dt * diffusion_load(0.0));
  } else {
    L.insert(b, "delta", chi1 * (M_ * s.varpi));
  }
  const auto& tau_dofs = boundary_->tau_dofs();
  std::vector<int> dofs = tau_dofs;
  std::vector<double> values = boundary_->tau_values(0.0);
  if (with_prev && !boundary_->pressure_nodes().empty()) {
    throw std::logic_error("consistent start with theta = 0 needs a varpi problem without Dirichlet data");
  }
  ConstrainedSolve solve(L.assemble(), dofs, cfg_.solver_tol);
  const Vector x = solve.solve(b, values);
  s.tau = L.extract(x, "tau");
  s.tau_prev = s.tau;
  s.delta = L.extract(x, "delta");
  s.varpi_prev = with_prev ? L.extract(x, "varpi_prev") : s.varpi;
  update_pq(s);
  return s;
}

std::vector<double> Stepper::varpi_constraints(double t_next, const Vector& delta_star,
                                               const BrokenP1& rate_star) const {
  const auto& nodes = boundary_->pressure_nodes();
  if (nodes.empty()) return {};
  if (auto exact = boundary_->varpi_values(t_next)) return *exact;
  const double chi2 = material_.chi2();
  if (chi2 == 0.0) throw SolverError("pressure data cannot be carried by varpi when chi2 = 0");
  const double chi1 = material_.chi1();
  const double ls = material_.params().lambda_star;
  const auto pd = boundary_->pressure_values(t_next);
  const Vector rate = vertex_average(rate_star, *spaces_->mesh);
  std::vector<double> out(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const int n = nodes[i];
    out[i] = (pd[i] - chi1 * delta_star(n) - ls * chi1 * rate(n)) / chi2;
  }
  return out;
}

void Stepper::update_pq(State& s) const {
  const DofMap& p2v = spaces_->p2v;
  const DofMap& p1 = spaces_->p1;
  const Mesh& mesh = *spaces_->mesh;
  const BrokenP1 div_now = broken_divergence(s.tau, p2v);
  const BrokenP1 div_prev = broken_divergence(s.tau_prev, p2v);
  s.div_rate = BrokenP1(mesh.num_triangles());
  s.div_rate.values() = (div_now.values() - div_prev.values()) / cfg_.dt;
  if (cfg_.formulation == Formulation::Original) {
    s.p = to_broken(s.pressure, p1);
    s.q = div_now;
    return;
  }
  const double chi1 = material_.chi1();
  const double chi2 = material_.chi2();
  const double chi3 = material_.chi3();
  const double ls = material_.params().lambda_star;
  const Vector& w = cfg_.theta == 1 ? s.varpi : s.varpi_prev;
  const Vector d = to_broken(s.delta, p1).values();
  const Vector wb = to_broken(w, p1).values();
  s.p = BrokenP1(mesh.num_triangles());
  s.q = BrokenP1(mesh.num_triangles());
  s.p.values() = chi1 * d + chi2 * wb + ls * chi1 * s.div_rate.values();
  s.q.values() = chi1 * wb - chi3 * d - ls * chi3 * s.div_rate.values();
}

void Stepper::advance(State& s) const {
  if (cfg_.formulation == Formulation::Original) {
    advance_original(s);
  } else if (cfg_.theta == 1) {
    advance_theta1(s);
  } else {
    advance_theta0(s);
  }
}

void Stepper::advance_theta1(State& s) const {
  const BlockSystem& L = impl_->layout;
  const double dt = cfg_.dt;
  const double t1 = (s.step + 1) * dt;
  const double ls = material_.params().lambda_star;
  Vector b = Vector::Zero(L.size());
  L.insert(b, "tau", stokes_load(t1));
  L.insert(b, "delta", (ls * material_.chi3() / dt) * (B_ * s.tau));
  L.insert(b, "varpi", M_ * s.varpi / dt + diffusion_load(t1) + (ls * material_.chi1() / dt) * (G_ * s.tau));
  std::vector<double> values = boundary_->tau_values(t1);
  if (impl_->implicit_pressure) {
    const Eigen::Index ov = L.offset("varpi");
    const auto pd = boundary_->pressure_values(t1);
    const Vector old_div = impl_->vertex_div * s.tau;
    const auto& nodes = boundary_->pressure_nodes();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      b(ov + nodes[i]) = pd[i] + (ls * material_.chi1() / dt) * old_div(nodes[i]);
    }
  } else {
    values = concat(values, varpi_constraints(t1, s.delta, s.div_rate));
  }
  const Vector x = impl_->main->solve(b, values);

  s.tau_prev = s.tau;
  s.varpi_prev = s.varpi;
  s.tau = L.extract(x, "tau");
  s.delta = L.extract(x, "delta");
  s.varpi = L.extract(x, "varpi");
  s.t = t1;
  ++s.step;
  update_pq(s);
}

void Stepper::advance_theta0(State& s) const {
  const BlockSystem& L = impl_->layout;
  const double dt = cfg_.dt;
  const double t1 = (s.step + 1) * dt;
  const double ls = material_.params().lambda_star;
  const double chi1 = material_.chi1();
  Vector b = Vector::Zero(L.size());
  L.insert(b, "tau", stokes_load(t1));
  L.insert(b, "delta", chi1 * (M_ * s.varpi) + (ls * material_.chi3() / dt) * (B_ * s.tau));
  const Vector x = impl_->main->solve(b, boundary_->tau_values(t1));
  const Vector tau_new = L.extract(x, "tau");
  const Vector delta_new = L.extract(x, "delta");

  s.tau_prev = s.tau;
  s.tau = tau_new;
  s.delta = delta_new;
  // stage value of d_t div tau^{n+1}, needed for the varpi constraints
  update_pq(s);

  const Vector rhs = M_ * s.varpi / dt + diffusion_load(t1) - chi1 * (D_ * s.delta) -
                     (ls * chi1 / dt) * (G_ * (s.tau - s.tau_prev));
  const Vector w = impl_->diffusion->solve(rhs, varpi_constraints(t1, s.delta, s.div_rate));
  s.varpi_prev = s.varpi;
  s.varpi = w;
  s.t = t1;
  ++s.step;
  update_pq(s);
}

void Stepper::advance_original(State& s) const {
  const BlockSystem& L = impl_->layout;
  const auto& prm = material_.params();
  const double dt = cfg_.dt;
  const double t1 = (s.step + 1) * dt;
  Vector b = Vector::Zero(L.size());
  Vector f = stokes_load(t1);
  if (prm.lambda_star != 0.0) f += (prm.lambda_star / dt) * (C_ * s.tau);
  L.insert(b, "tau", f);
  L.insert(b, "p", diffusion_load(t1) + (prm.a0 / dt) * (M_ * s.pressure) + (prm.b0 / dt) * (B_ * s.tau));
  const auto values = concat(boundary_->tau_values(t1), boundary_->pressure_values(t1));
  const Vector x = impl_->main->solve(b, values);
  s.tau_prev = s.tau;
  s.tau = L.extract(x, "tau");
  s.pressure = L.extract(x, "p");
  s.t = t1;
  ++s.step;
  update_pq(s);
}

State Stepper::run(State s, const std::function<void(const State&)>& observe) const {
  for (int n = s.step; n < num_steps_; ++n) {
    advance(s);
    if (observe) observe(s);
  }
  return s;
}

std::vector<State> Stepper::trajectory(State s) const {
  std::vector<State> out;
  out.reserve(static_cast<std::size_t>(num_steps_ + 1));
  out.push_back(s);
  run(std::move(s), [&out](const State& st) { out.push_back(st); });
  return out;
}

double theta0_dt_bound(const Material& m, double h, double beta1) {
  const auto& d = m.derived();
  const double tf = m.params().theta_f;
  const double chi1sq = m.chi1() * m.chi1();
  if (chi1sq == 0.0) return std::numeric_limits<double>::infinity();
  const double base = d.K_min * tf * h * h / (4.0 * chi1sq * d.K_max * d.K_max);
  return std::min(base * beta1 * beta1 / m.gamma(), base * m.chi3());
}

std::string theta0_guard_warning(const Material& m, double h, double dt, double beta1) {
  const double bound = theta0_dt_bound(m, h, beta1);
  if (dt <= bound) return {};
  std::ostringstream os;
  os << "theta = 0 with dt = " << dt << " exceeds the stability guard dt <= " << bound << " at h = " << h;
  return os.str();
}

}  // namespace porofem
