#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "besovns/field.hpp"

namespace besovns {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline void require_exponent(double p, const char* name = "p") {
  if (!(p >= 1.0)) throw std::invalid_argument(std::string("exponent ") + name + " must be >= 1 or infinity");
}

/// Riemann-sum L^p norm: (h^3 sum |f_j|^p)^(1/p), or max |f_j| for p = infinity.
inline double lp_norm(const RealField& f, double p) {
  require_exponent(p);
  const auto v = f.values();
  if (std::isinf(p)) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  }
  const double h3 = f.grid().cell_volume();
  double s = 0.0;
  if (p == 2.0) {
    for (double x : v) s += x * x;
    return std::sqrt(h3 * s);
  }
  if (p == 1.0) {
    for (double x : v) s += std::abs(x);
    return h3 * s;
  }
  // Scale by the max first so large p does not overflow.
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  if (m == 0.0) return 0.0;
  for (double x : v) s += std::pow(std::abs(x) / m, p);
  return m * std::pow(h3 * s, 1.0 / p);
}

/// Pointwise Euclidean magnitude |v(x)|.
inline RealField magnitude(const RealVectorField& v) {
  RealField out(v.grid());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::hypot(v[0][i], v[1][i], v[2][i]);
  return out;
}

/// Pointwise product f*g.
inline RealField product(const RealField& f, const RealField& g) {
  if (!(f.grid() == g.grid())) throw GridMismatchError("pointwise product of fields on different grids");
  RealField out(f.grid());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f[i] * g[i];
  return out;
}

/// Pointwise Frobenius norm of a 3x3 tensor field given as three vector rows.
inline RealField frobenius(const RealVectorField& r1, const RealVectorField& r2, const RealVectorField& r3) {
  RealField out(r1.grid());
  for (std::size_t i = 0; i < out.size(); ++i) {
    double s = 0.0;
    for (const auto* r : {&r1, &r2, &r3}) {
      for (int c = 0; c < 3; ++c) s += (*r)[c][i] * (*r)[c][i];
    }
    out[i] = std::sqrt(s);
  }
  return out;
}

/// L^p norm of |v|.
inline double lp_norm(const RealVectorField& v, double p) { return lp_norm(magnitude(v), p); }

}  // namespace besovns
