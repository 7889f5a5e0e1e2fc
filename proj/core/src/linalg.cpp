#include "porofem/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <Eigen/SparseLU>

namespace porofem {

void TripletAssembler::add_local(const std::vector<int>& rows, const std::vector<int>& cols,
                                 const DenseMatrix& local) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      const double v = local(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (v != 0.0) triplets_.emplace_back(rows[i], cols[j], v);
    }
  }
}

SparseMatrix TripletAssembler::finalize() const {
  SparseMatrix A(rows_, cols_);
  A.setFromTriplets(triplets_.begin(), triplets_.end());
  A.makeCompressed();
  return A;
}

void BlockSystem::add_field(const std::string& name, Eigen::Index size) {
  if (layout_.count(name)) throw std::invalid_argument("duplicate field " + name);
  layout_[name] = {total_, size};
  order_.push_back(name);
  total_ += size;
}

Eigen::Index BlockSystem::offset(const std::string& field) const {
  const auto it = layout_.find(field);
  if (it == layout_.end()) throw std::invalid_argument("unknown field " + field);
  return it->second.first;
}

Eigen::Index BlockSystem::field_size(const std::string& field) const {
  const auto it = layout_.find(field);
  if (it == layout_.end()) throw std::invalid_argument("unknown field " + field);
  return it->second.second;
}

void BlockSystem::add_block(const std::string& row_field, const std::string& col_field,
                            const SparseMatrix& block, double scale) {
  const Eigen::Index r0 = offset(row_field);
  const Eigen::Index c0 = offset(col_field);
  if (block.rows() != field_size(row_field) || block.cols() != field_size(col_field)) {
    throw std::invalid_argument("block (" + row_field + ", " + col_field + ") has wrong shape");
  }
  for (int k = 0; k < block.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(block, k); it; ++it) {
      triplets_.emplace_back(r0 + it.row(), c0 + it.col(), scale * it.value());
    }
  }
}

SparseMatrix BlockSystem::assemble() const {
  SparseMatrix A(total_, total_);
  A.setFromTriplets(triplets_.begin(), triplets_.end());
  A.makeCompressed();
  return A;
}

Vector BlockSystem::extract(const Vector& full, const std::string& field) const {
  return full.segment(offset(field), field_size(field));
}

void BlockSystem::insert(Vector& full, const std::string& field, const Vector& part) const {
  full.segment(offset(field), field_size(field)) = part;
}

double max_abs(const SparseMatrix& A) {
  double m = 0.0;
  for (int k = 0; k < A.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(A, k); it; ++it) m = std::max(m, std::abs(it.value()));
  }
  return m;
}

namespace {

double inf_norm(const SparseMatrix& A) {
  Vector rows = Vector::Zero(A.rows());
  for (int k = 0; k < A.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(A, k); it; ++it) rows(it.row()) += std::abs(it.value());
  }
  return rows.size() ? rows.maxCoeff() : 0.0;
}

double one_norm(const SparseMatrix& A) {
  double best = 0.0;
  for (int k = 0; k < A.outerSize(); ++k) {
    double col = 0.0;
    for (SparseMatrix::InnerIterator it(A, k); it; ++it) col += std::abs(it.value());
    best = std::max(best, col);
  }
  return best;
}

}  // namespace

struct DirectSolver::Impl {
  SparseMatrix A;
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  double norm_A = 0.0;
  double tol = 1e-10;
};

DirectSolver::DirectSolver(const SparseMatrix& A, double residual_tol) : impl_(std::make_unique<Impl>()) {
  if (A.rows() != A.cols()) throw SolverError("direct solve needs a square matrix");
  impl_->A = A;
  impl_->A.makeCompressed();
  impl_->norm_A = std::sqrt(one_norm(impl_->A) * inf_norm(impl_->A));  // bounds ||A||_2
  impl_->tol = residual_tol;
  impl_->lu.analyzePattern(impl_->A);
  impl_->lu.factorize(impl_->A);
  if (impl_->lu.info() != Eigen::Success) {
    throw SolverError("sparse LU factorization failed: " + impl_->lu.lastErrorMessage());
  }
}

DirectSolver::~DirectSolver() = default;
DirectSolver::DirectSolver(DirectSolver&&) noexcept = default;
DirectSolver& DirectSolver::operator=(DirectSolver&&) noexcept = default;

Eigen::Index DirectSolver::size() const { return impl_->A.rows(); }

Vector DirectSolver::solve(const Vector& b) const {
  if (b.size() != impl_->A.rows()) throw SolverError("right-hand side has wrong size");
  Vector x = impl_->lu.solve(b);
  if (impl_->lu.info() != Eigen::Success || !x.allFinite()) {
    throw SolverError("sparse LU solve failed");
  }
  const double bnorm = b.norm();
  for (int refine = 0;; ++refine) {
    const Vector r = b - impl_->A * x;
    const double bound = impl_->tol * (impl_->norm_A * x.norm() + bnorm);
    const double rnorm = r.norm();
    if (rnorm <= bound || rnorm == 0.0) break;
    if (refine == 3) {
      std::ostringstream os;
      os << "direct solve residual " << rnorm << " exceeds bound " << bound;
      throw SolverError(os.str());
    }
    x += impl_->lu.solve(r);
  }
  return x;
}

Vector solve_direct(const SparseMatrix& A, const Vector& b) { return DirectSolver(A).solve(b); }

std::vector<DirichletConstraint> merge_constraints(std::vector<DirichletConstraint> constraints, double tol) {
  std::stable_sort(constraints.begin(), constraints.end(),
                   [](const DirichletConstraint& a, const DirichletConstraint& b) { return a.dof < b.dof; });
  std::vector<DirichletConstraint> out;
  for (const auto& c : constraints) {
    if (!out.empty() && out.back().dof == c.dof) {
      const double scale = std::max({1.0, std::abs(c.value), std::abs(out.back().value)});
      if (std::abs(out.back().value - c.value) > tol * scale) {
        std::ostringstream os;
        os << "conflicting Dirichlet values for dof " << c.dof << ": " << out.back().value << " vs " << c.value;
        throw SolverError(os.str());
      }
      continue;
    }
    out.push_back(c);
  }
  return out;
}

ConstrainedOperator::ConstrainedOperator(const SparseMatrix& A, std::vector<int> constrained_dofs)
    : dofs_(std::move(constrained_dofs)) {
  std::sort(dofs_.begin(), dofs_.end());
  if (std::adjacent_find(dofs_.begin(), dofs_.end()) != dofs_.end()) {
    throw SolverError("duplicate constrained dof");
  }
  const Eigen::Index n = A.rows();
  std::vector<int> slot(static_cast<std::size_t>(n), -1);
  for (std::size_t i = 0; i < dofs_.size(); ++i) {
    if (dofs_[i] < 0 || dofs_[i] >= n) throw SolverError("constrained dof out of range");
    slot[static_cast<std::size_t>(dofs_[i])] = static_cast<int>(i);
  }

  std::vector<Eigen::Triplet<double>> kept;
  std::vector<Eigen::Triplet<double>> coupled;
  kept.reserve(static_cast<std::size_t>(A.nonZeros()));
  for (int k = 0; k < A.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(A, k); it; ++it) {
      const int r = static_cast<int>(it.row());
      const int c = static_cast<int>(it.col());
      const int rs = slot[static_cast<std::size_t>(r)];
      const int cs = slot[static_cast<std::size_t>(c)];
      if (rs < 0 && cs < 0) {
        kept.emplace_back(r, c, it.value());
      } else if (rs < 0 && cs >= 0) {
        coupled.emplace_back(r, cs, it.value());
      }
    }
  }
  for (int d : dofs_) kept.emplace_back(d, d, 1.0);

  modified_.resize(n, n);
  modified_.setFromTriplets(kept.begin(), kept.end());
  modified_.makeCompressed();
  coupling_.resize(n, static_cast<Eigen::Index>(dofs_.size()));
  coupling_.setFromTriplets(coupled.begin(), coupled.end());
  coupling_.makeCompressed();
}

Vector ConstrainedOperator::rhs(const Vector& b, const std::vector<double>& values) const {
  if (values.size() != dofs_.size()) throw SolverError("constraint value count mismatch");
  Vector g = Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
  Vector out = b - coupling_ * g;
  for (std::size_t i = 0; i < dofs_.size(); ++i) out(dofs_[i]) = values[i];
  return out;
}

LinearSystem apply_dirichlet(const SparseMatrix& A, const Vector& b, std::vector<DirichletConstraint> constraints) {
  const auto merged = merge_constraints(std::move(constraints));
  std::vector<int> dofs;
  std::vector<double> values;
  for (const auto& c : merged) {
    dofs.push_back(c.dof);
    values.push_back(c.value);
  }
  ConstrainedOperator op(A, dofs);
  return {op.matrix(), op.rhs(b, values)};
}

double smallest_generalized_eig(const SparseMatrix& S, const SparseMatrix& M, const EigenOptions& opts) {
  if (S.rows() != S.cols() || M.rows() != M.cols() || S.rows() != M.rows()) {
    throw SolverError("eigenproblem needs square matrices of equal size");
  }
  const Eigen::Index n = S.rows();
  if (n == 0) throw SolverError("empty eigenproblem");
  DirectSolver solver(S);

  // deterministic start vector that is not orthogonal to any smooth mode
  Vector x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = 1.0 + 0.1 * std::sin(1.3 * static_cast<double>(i) + 0.7);
  x /= std::sqrt(x.dot(M * x));

  double lambda = x.dot(S * x);
  for (int it = 0; it < opts.max_iterations; ++it) {
    Vector y = solver.solve(M * x);
    const double norm = std::sqrt(y.dot(M * y));
    if (!(norm > 0.0) || !std::isfinite(norm)) throw SolverError("inverse iteration broke down");
    x = y / norm;
    const double next = x.dot(S * x);
    if (std::abs(next - lambda) <= opts.rel_tol * std::abs(next)) return next;
    lambda = next;
  }
  throw SolverError("inverse iteration did not converge");
}

void write_matrix_market(const SparseMatrix& A, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << A.rows() << ' ' << A.cols() << ' ' << A.nonZeros() << '\n';
  out << std::setprecision(17);
  for (int k = 0; k < A.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(A, k); it; ++it) {
      out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
    }
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace porofem
