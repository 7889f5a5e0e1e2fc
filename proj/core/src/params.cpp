#include "porofem/params.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace porofem {

LameConstants derive_lame(double E, double nu) {
  if (!(E > 0.0)) {
    throw ParameterError("Young's modulus must be positive (E > 0)");
  }
  if (!(nu >= 0.0) || !(nu < 0.5)) {
    throw ParameterError("Poisson ratio must satisfy 0 <= nu < 0.5");
  }
  LameConstants out;
  out.lam = E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
  out.gamma = E / (2.0 * (1.0 + nu));
  return out;
}

double bulk_modulus(const LameConstants& lame) {
  return lame.lam + 2.0 * lame.gamma / 3.0;
}

ChiConstants derive_chi(const PhysicalParams& p, double lam) {
  const double s = p.b0 * p.b0 + lam * p.a0;
  if (s == 0.0 || !std::isfinite(s)) {
    throw ParameterError("b0^2 + lam * a0 must be nonzero");
  }
  return {p.b0 / s, lam / s, p.a0 / s};
}

Material Material::validate(const PhysicalParams& p) {
  auto fail = [](const std::string& what) { throw ParameterError(what); };

  if (!(p.a0 > 0.0)) fail("storage coefficient must be positive (a0 > 0)");
  if (!(p.theta_f > 0.0)) fail("fluid viscosity must be positive (theta_f > 0)");
  if (!(p.lambda_star >= 0.0)) fail("secondary consolidation coefficient must be >= 0");
  if (!std::isfinite(p.b0)) fail("Biot-Willis constant must be finite");
  if (!p.rho_f_g.allFinite()) fail("gravity vector must be finite");

  if (!p.K.allFinite()) fail("permeability must be finite");
  if (std::abs(p.K(0, 1) - p.K(1, 0)) > 1e-14 * p.K.cwiseAbs().maxCoeff()) {
    fail("permeability tensor must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Mat2> eig(p.K);
  const double k_min = eig.eigenvalues()(0);
  const double k_max = eig.eigenvalues()(1);
  if (!(k_min > 0.0)) {
    std::ostringstream os;
    os << "permeability tensor must be positive definite (eigenvalues " << k_min << ", "
       << k_max << ")";
    fail(os.str());
  }

  const LameConstants lame = derive_lame(p.E, p.nu);
  const ChiConstants chi = derive_chi(p, lame.lam);

  DerivedConstants d;
  d.lam = lame.lam;
  d.gamma = lame.gamma;
  d.chi1 = chi.chi1;
  d.chi2 = chi.chi2;
  d.chi3 = chi.chi3;
  d.K_min = k_min;
  d.K_max = k_max;
  return Material(p, d);
}

}  // namespace porofem
