// Independent oracle for the manufactured data: every derivative is taken by
// forward-mode automatic differentiation of the closed-form fields.

#pragma once

#include <algorithm>
#include <cmath>
#include <random>

#include "porofem/mesh.hpp"
#include "porofem/params.hpp"

namespace oracle {

using porofem::Point;
using porofem::Vec2;

template <class T>
struct Dual {
  T v{};
  T d{};
  Dual() = default;
  Dual(double x) : v(x), d(0.0) {}  // NOLINT(google-explicit-constructor)
  Dual(T value, T deriv) : v(value), d(deriv) {}
};

template <class T> Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) { return {a.v + b.v, a.d + b.d}; }
template <class T> Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) { return {a.v - b.v, a.d - b.d}; }
template <class T> Dual<T> operator-(const Dual<T>& a) { return {-a.v, -a.d}; }
template <class T> Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) { return {a.v * b.v, a.v * b.d + a.d * b.v}; }
template <class T> Dual<T> operator*(double s, const Dual<T>& a) { return {s * a.v, s * a.d}; }
template <class T> Dual<T> sin(const Dual<T>& a) {
  using std::cos;
  using std::sin;
  return {sin(a.v), cos(a.v) * a.d};
}
template <class T> Dual<T> cos(const Dual<T>& a) {
  using std::cos;
  using std::sin;
  return {cos(a.v), -1.0 * (sin(a.v) * a.d)};
}
template <class T> Dual<T> exp(const Dual<T>& a) {
  using std::exp;
  const T e = exp(a.v);
  return {e, e * a.d};
}

using H = Dual<Dual<Dual<double>>>;

// Coordinates x1, x2, t; each may be seeded in any of the three layers.
enum Var { X1 = 0, X2 = 1, Time = 2, None = 3 };

inline H seeded(double value, int var, int l1, int l2, int l3) {
  H h(value);
  if (var == l1) h.d.v.v = 1.0;
  if (var == l2) h.v.d.v = 1.0;
  if (var == l3) h.v.v.d = 1.0;
  return h;
}

struct Fields {
  // tau components and p as generic expressions
  virtual ~Fields() = default;
  virtual H tau(int k, const H& x1, const H& x2, const H& t) const = 0;
  virtual H p(const H& x1, const H& x2, const H& t) const = 0;
};

struct Test1Fields : Fields {
  H tau(int k, const H& x1, const H& x2, const H& t) const override {
    return t * sin(M_PI * (k == 0 ? x1 : x2));
  }
  H p(const H& x1, const H& x2, const H& t) const override { return t * sin(M_PI * x1 + M_PI * x2); }
};

struct Test2Fields : Fields {
  H tau(int k, const H& x1, const H& x2, const H& t) const override { return exp(t) * sin(k == 0 ? x1 : x2); }
  H p(const H& x1, const H& x2, const H& t) const override { return t * sin(M_PI * x1) * sin(M_PI * x2); }
};

// Coefficient of eps_a eps_b eps_c for the layers that are seeded.
inline double coefficient(const H& h, bool l1, bool l2, bool l3) {
  const auto& a = l1 ? h.d : h.v;
  const auto& b = l2 ? a.d : a.v;
  return l3 ? b.d : b.v;
}

// Mixed partial of tau_k (comp >= 0) or p (comp = -1) in the listed variables.
inline double partial(const Fields& f, int comp, Point x, double t, int a = None, int b = None, int c = None) {
  const H x1 = seeded(x(0), X1, a, b, c);
  const H x2 = seeded(x(1), X2, a, b, c);
  const H tt = seeded(t, Time, a, b, c);
  const H v = comp >= 0 ? f.tau(comp, x1, x2, tt) : f.p(x1, x2, tt);
  return coefficient(v, a != None, b != None, c != None);
}

struct Material1 {
  double gamma = 10.0, lam = 10.0, lambda_star = 1e-5, b0 = 1e-5, a0 = 0.2, K = 1e-3, theta_f = 1.0;
};

inline double div_tau(const Fields& f, const Point& x, double t, int a = None, int b = None) {
  return partial(f, 0, x, t, X1, a, b) + partial(f, 1, x, t, X2, a, b);
}

inline Vec2 body_force(const Fields& f, const Material1& m, const Point& x, double t) {
  Vec2 F;
  for (int k = 0; k < 2; ++k) {
    double div_sigma = 0.0;
    for (int j = 0; j < 2; ++j) {
      // d_j eps_kj with eps_kj = (d_j tau_k + d_k tau_j) / 2
      div_sigma += m.gamma * 0.5 * (partial(f, k, x, t, j, j) + partial(f, j, x, t, k, j));
    }
    div_sigma += m.lam * div_tau(f, x, t, k);
    F(k) = -m.lambda_star * div_tau(f, x, t, k, Time) - div_sigma + m.b0 * partial(f, -1, x, t, k);
  }
  return F;
}

inline double source(const Fields& f, const Material1& m, const Point& x, double t) {
  const double lap = partial(f, -1, x, t, X1, X1) + partial(f, -1, x, t, X2, X2);
  return m.a0 * partial(f, -1, x, t, Time) + m.b0 * div_tau(f, x, t, Time) - m.K / m.theta_f * lap;
}

// Worst relative mismatch of F and phi against the oracle over random points.
template <class Case, class Rng>
double worst_source_mismatch(const Case& c, const Fields& f, Rng& rng, int points = 100) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Material1 m;
  double worst = 0.0;
  for (int i = 0; i < points; ++i) {
    const Point x(u(rng), u(rng));
    const double t = u(rng);
    const Vec2 F = body_force(f, m, x, t);
    const double phi = source(f, m, x, t);
    worst = std::max(worst, (c.body_force(x, t) - F).cwiseAbs().maxCoeff() / (1.0 + F.cwiseAbs().maxCoeff()));
    worst = std::max(worst, std::abs(c.source(x, t) - phi) / (1.0 + std::abs(phi)));
  }
  return worst;
}

}  // namespace oracle
