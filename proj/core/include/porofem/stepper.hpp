#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "porofem/assembly.hpp"
#include "porofem/linalg.hpp"
#include "porofem/problem.hpp"

namespace porofem {

enum class Formulation {
  Reformulated,  // P2-P1-P1 in (tau, delta, varpi)
  Original       // P2-P1 in (tau, p)
};

struct SchemeConfig {
  Formulation formulation = Formulation::Reformulated;
  int theta = 1;
  double dt = 0.01;
  double T = 1.0;
  double solver_tol = 1e-10;  // relative residual bound of every linear solve
};

/// Solution at one time level t_n.
///
/// For the reformulated scheme, tau/delta/varpi hold the coefficients at
/// level n and varpi_prev the level n-1 coefficients (p and q use
/// varpi^{n-1+theta}). div_rate is d_t div tau_h^n. For the original scheme
/// `pressure` holds the P1 pressure and delta/varpi are empty.
struct State {
  int step = 0;
  double t = 0.0;
  Vector tau;
  Vector tau_prev;
  Vector delta;
  Vector varpi;
  Vector varpi_prev;
  Vector pressure;
  BrokenP1 div_rate;
  BrokenP1 p;
  BrokenP1 q;
};

/// Steps one case on one mesh. All matrices are assembled and factorized
/// once in the constructor; each step only rebuilds right-hand sides.
class Stepper {
 public:
  Stepper(const ProblemCase& c, const Mesh& mesh, const SchemeConfig& cfg);
  ~Stepper();
  Stepper(Stepper&&) noexcept;
  Stepper& operator=(Stepper&&) = delete;

  const ProblemCase& problem() const { return *case_; }
  const Material& material() const { return material_; }
  const Spaces& spaces() const { return *spaces_; }
  const SchemeConfig& config() const { return cfg_; }
  const BoundaryProgram& boundary() const { return *boundary_; }
  int num_steps() const { return num_steps_; }

  /// Interpolated initial data (MFEA step (i)).
  State initial_state() const;
  /// Initial data whose (tau, delta) already satisfy the discrete Stokes
  /// relations at t = 0 for the given varpi^0; for theta = 0 also fills
  /// varpi^{-1} from the diffusion relation at level 0. Requires steady loads.
  State consistent_initial_state() const;

  /// Advances one step in place.
  void advance(State& s) const;

  /// Runs from s to T, calling observe(state) after every step.
  State run(State s, const std::function<void(const State&)>& observe = {}) const;
  /// Full trajectory including the initial state (num_steps() + 1 entries).
  std::vector<State> trajectory(State s) const;

  /// Dirichlet values for varpi at level n+1 derived from pressure data.
  std::vector<double> varpi_constraints(double t_next, const Vector& delta_star, const BrokenP1& rate_star) const;

  /// Fills div_rate, p and q from the coefficient vectors.
  void update_pq(State& s) const;

  // operator access for diagnostics and the energy ledger
  const SparseMatrix& elasticity() const { return A_; }
  const SparseMatrix& divergence() const { return B_; }
  const SparseMatrix& mass() const { return M_; }
  const SparseMatrix& diffusion() const { return D_; }
  const SparseMatrix& divgrad() const { return G_; }

 private:
  struct Impl;

  Vector stokes_load(double t) const;
  Vector diffusion_load(double t) const;

  void advance_theta1(State& s) const;
  void advance_theta0(State& s) const;
  void advance_original(State& s) const;

  const ProblemCase* case_;
  Material material_;
  SchemeConfig cfg_;
  std::unique_ptr<Spaces> spaces_;
  std::unique_ptr<BoundaryProgram> boundary_;
  int num_steps_ = 0;
  SparseMatrix A_, B_, M_, D_, G_, C_, R_;
  Vector gravity_;
  std::unique_ptr<Impl> impl_;
};

/// Warning text when theta = 0 violates dt <= c h^2 with the spectral
/// bound of the stability estimate; empty when the guard holds or theta = 1.
std::string theta0_guard_warning(const Material& m, double h, double dt, double beta1 = 0.5);

/// Largest dt admitted by the theta = 0 stability guard.
double theta0_dt_bound(const Material& m, double h, double beta1);

}  // namespace porofem
