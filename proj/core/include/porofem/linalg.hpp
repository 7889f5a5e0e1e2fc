#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Sparse>

namespace porofem {

using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;
using DenseMatrix = Eigen::MatrixXd;

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Triplet buffer for element-by-element assembly. Duplicates are summed on
/// finalize(); the returned matrix is compressed.
class TripletAssembler {
 public:
  TripletAssembler(Eigen::Index rows, Eigen::Index cols) : rows_(rows), cols_(cols) {}

  void reserve(std::size_t n) { triplets_.reserve(n); }
  void add(Eigen::Index i, Eigen::Index j, double v) { triplets_.emplace_back(i, j, v); }
  /// Adds a dense local block at the given global rows/cols.
  void add_local(const std::vector<int>& rows, const std::vector<int>& cols, const DenseMatrix& local);

  SparseMatrix finalize() const;

 private:
  Eigen::Index rows_;
  Eigen::Index cols_;
  std::vector<Eigen::Triplet<double>> triplets_;
};

/// Monolithic matrix built from named field blocks. Fields are laid out in
/// registration order so the offsets partition [0, size()).
class BlockSystem {
 public:
  void add_field(const std::string& name, Eigen::Index size);
  /// Adds scale * block at (row field, column field). Blocks accumulate.
  void add_block(const std::string& row_field, const std::string& col_field, const SparseMatrix& block,
                 double scale = 1.0);

  Eigen::Index offset(const std::string& field) const;
  Eigen::Index field_size(const std::string& field) const;
  Eigen::Index size() const { return total_; }
  const std::vector<std::string>& fields() const { return order_; }

  SparseMatrix assemble() const;

  /// Copies a field's segment into / out of a monolithic vector.
  Vector extract(const Vector& full, const std::string& field) const;
  void insert(Vector& full, const std::string& field, const Vector& part) const;

 private:
  std::vector<std::string> order_;
  std::map<std::string, std::pair<Eigen::Index, Eigen::Index>> layout_;  // offset, size
  std::vector<Eigen::Triplet<double>> triplets_;
  Eigen::Index total_ = 0;
};

/// Sparse LU factorization (partial pivoting, COLAMD ordering). Factor once,
/// solve many right-hand sides. Solves are checked against
///   ||A x - b|| <= tol * (||A|| ||x|| + ||b||)
/// with a few steps of iterative refinement before giving up.
class DirectSolver {
 public:
  explicit DirectSolver(const SparseMatrix& A, double residual_tol = 1e-10);
  ~DirectSolver();
  DirectSolver(DirectSolver&&) noexcept;
  DirectSolver& operator=(DirectSolver&&) noexcept;

  Vector solve(const Vector& b) const;
  Eigen::Index size() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

Vector solve_direct(const SparseMatrix& A, const Vector& b);

struct DirichletConstraint {
  int dof = -1;
  double value = 0.0;
};

/// Merges duplicate constraints; throws SolverError when two entries for the
/// same dof disagree by more than tol (relative to the larger magnitude).
std::vector<DirichletConstraint> merge_constraints(std::vector<DirichletConstraint> constraints,
                                                   double tol = 1e-12);

/// Symmetric elimination of a fixed set of constrained dofs. The modified
/// matrix has zero rows and columns for constrained dofs and a unit diagonal;
/// rhs() moves the column contributions of the prescribed values to the
/// right-hand side. The dof set is fixed, the values may change per solve.
class ConstrainedOperator {
 public:
  ConstrainedOperator(const SparseMatrix& A, std::vector<int> constrained_dofs);

  const SparseMatrix& matrix() const { return modified_; }
  const std::vector<int>& dofs() const { return dofs_; }
  /// values[i] belongs to dofs()[i].
  Vector rhs(const Vector& b, const std::vector<double>& values) const;

 private:
  SparseMatrix modified_;
  SparseMatrix coupling_;  // original columns of the constrained dofs, free rows only
  std::vector<int> dofs_;
};

struct LinearSystem {
  SparseMatrix A;
  Vector b;
};

/// One-shot symmetric elimination of the given constraints.
LinearSystem apply_dirichlet(const SparseMatrix& A, const Vector& b,
                             std::vector<DirichletConstraint> constraints);

struct EigenOptions {
  double rel_tol = 1e-8;
  int max_iterations = 20000;
};

/// Smallest eigenvalue of S x = lambda M x for symmetric S and SPD M via
/// inverse power iteration with Rayleigh quotients. Throws SolverError if
/// the relative change does not drop below rel_tol within the cap.
double smallest_generalized_eig(const SparseMatrix& S, const SparseMatrix& M, const EigenOptions& opts = {});

/// MatrixMarket coordinate dump (general, real).
void write_matrix_market(const SparseMatrix& A, const std::string& path);

double max_abs(const SparseMatrix& A);

}  // namespace porofem
