#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace porofem {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Raised when material data violates an admissibility condition.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raw material data of the consolidation model.
///
/// `lambda_star` scales the secondary-consolidation term, `K` is the
/// permeability tensor and `rho_f_g` the fluid gravity body force
/// (zero unless a configuration sets it).
struct PhysicalParams {
  double lambda_star = 0.0;
  double E = 1.0;
  double nu = 0.0;
  double b0 = 1.0;
  double a0 = 1.0;
  Mat2 K = Mat2::Identity();
  double theta_f = 1.0;
  Vec2 rho_f_g = Vec2::Zero();

  /// Expands the scalar shorthand `k` to `k * I`.
  void set_isotropic_permeability(double k) { K = k * Mat2::Identity(); }
};

struct LameConstants {
  double lam = 0.0;
  double gamma = 0.0;
};

struct ChiConstants {
  double chi1 = 0.0;
  double chi2 = 0.0;
  double chi3 = 0.0;
};

/// Constants derived from PhysicalParams. `lam` doubles as the second Lame
/// coefficient multiplying tr(eps) in the stress.
struct DerivedConstants {
  double lam = 0.0;
  double gamma = 0.0;
  double chi1 = 0.0;
  double chi2 = 0.0;
  double chi3 = 0.0;
  double K_min = 0.0;  // smallest eigenvalue of K
  double K_max = 0.0;  // largest eigenvalue of K
};

/// lam = E nu / ((1 + nu)(1 - 2 nu)), gamma = E / (2 (1 + nu)).
LameConstants derive_lame(double E, double nu);

/// Bulk modulus lam + 2 gamma / 3.
double bulk_modulus(const LameConstants& lame);

/// Reformulation constants chi1 = b0 / s, chi2 = lam / s, chi3 = a0 / s
/// with s = b0^2 + lam a0.
ChiConstants derive_chi(const PhysicalParams& p, double lam);

/// Validated parameter bundle; immutable once built.
class Material {
 public:
  /// Checks every admissibility condition and derives the constants.
  /// Throws ParameterError naming the violated condition.
  static Material validate(const PhysicalParams& p);

  const PhysicalParams& params() const { return params_; }
  const DerivedConstants& derived() const { return derived_; }

  double lam() const { return derived_.lam; }
  double gamma() const { return derived_.gamma; }
  double chi1() const { return derived_.chi1; }
  double chi2() const { return derived_.chi2; }
  double chi3() const { return derived_.chi3; }

 private:
  Material(PhysicalParams p, DerivedConstants d) : params_(std::move(p)), derived_(d) {}

  PhysicalParams params_;
  DerivedConstants derived_;
};

}  // namespace porofem
