#pragma once

#include <array>
#include <stdexcept>
#include <utility>

#include "besovns/field.hpp"

namespace besovns {

/// d/dx_axis, axis in {1,2,3}: multiplies c_k by i*k_axis, zero on the axis's Nyquist plane.
inline SpectralField partial_derivative(const SpectralField& F, int axis) {
  if (axis < 1 || axis > 3) throw std::invalid_argument("axis must be 1, 2 or 3");
  const Grid& g = F.grid();
  const int n = g.n();
  SpectralField out(F);
  auto v = out.values();
  const std::size_t nn = static_cast<std::size_t>(n);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::size_t idx = axis == 1 ? i / (nn * nn) : (axis == 2 ? (i / nn) % nn : i % nn);
    const double kk = derivative_wavenumber(g, g.wavenumber(static_cast<int>(idx)));
    v[i] = Complex{-kk * v[i].imag(), kk * v[i].real()};
  }
  return out;
}

inline SpectralVectorField gradient(const SpectralField& F) {
  return {partial_derivative(F, 1), partial_derivative(F, 2), partial_derivative(F, 3)};
}

/// (d1 f, d2 f).
inline std::pair<SpectralField, SpectralField> horizontal_gradient(const SpectralField& F) {
  return {partial_derivative(F, 1), partial_derivative(F, 2)};
}

/// Multiplier -|k|^2. Even-order, so the Nyquist modes are kept.
inline SpectralField laplacian(const SpectralField& F) {
  return F.multiplied([](const Wavevector& k) { return -static_cast<double>(k.norm_sq()); });
}

/// Multiplier -(k1^2 + k2^2).
inline SpectralField horizontal_laplacian(const SpectralField& F) {
  return F.multiplied([](const Wavevector& k) { return -static_cast<double>(k.k1 * k.k1 + k.k2 * k.k2); });
}

inline SpectralVectorField laplacian(const SpectralVectorField& v) {
  return {laplacian(v[0]), laplacian(v[1]), laplacian(v[2])};
}

inline SpectralField divergence(const SpectralVectorField& v) {
  return partial_derivative(v[0], 1) + partial_derivative(v[1], 2) + partial_derivative(v[2], 3);
}

/// (d2 v3 - d3 v2, d3 v1 - d1 v3, d1 v2 - d2 v1).
inline SpectralVectorField curl(const SpectralVectorField& v) {
  return {partial_derivative(v[2], 2) - partial_derivative(v[1], 3),
          partial_derivative(v[0], 3) - partial_derivative(v[2], 1),
          partial_derivative(v[1], 1) - partial_derivative(v[0], 2)};
}

/// All nine derivatives: result[i][j] = d_{j+1} v_{i+1}.
inline std::array<SpectralVectorField, 3> velocity_gradient(const SpectralVectorField& v) {
  return {gradient(v[0]), gradient(v[1]), gradient(v[2])};
}

/// Orthogonal projection onto divergence-free fields:
///   v(k) <- v(k) - k (k.v(k)) / |k|^2  for k != 0,
/// using the same Nyquist-zeroed wavenumbers as the derivative operators, so the
/// output has divergence() == 0 to round-off. The k = 0 mode is left alone.
inline SpectralVectorField leray_project(const SpectralVectorField& v) {
  const Grid& g = v.grid();
  SpectralVectorField out(g);
  g.for_each_mode([&](std::size_t i, const Wavevector& k) {
    const double q1 = derivative_wavenumber(g, k.k1);
    const double q2 = derivative_wavenumber(g, k.k2);
    const double q3 = derivative_wavenumber(g, k.k3);
    const double qq = q1 * q1 + q2 * q2 + q3 * q3;
    if (qq == 0.0) {
      out[0][i] = v[0][i];
      out[1][i] = v[1][i];
      out[2][i] = v[2][i];
      return;
    }
    const Complex dot = (q1 * v[0][i] + q2 * v[1][i] + q3 * v[2][i]) / qq;
    out[0][i] = v[0][i] - q1 * dot;
    out[1][i] = v[1][i] - q2 * dot;
    out[2][i] = v[2][i] - q3 * dot;
  });
  return out;
}

/// Zero every mode with some |k_i| > n/3 (2/3 rule).
inline SpectralField dealias(const SpectralField& F) {
  const Grid& g = F.grid();
  return F.multiplied([&g](const Wavevector& k) { return within_dealias_band(g, k) ? 1.0 : 0.0; });
}

inline SpectralVectorField dealias(const SpectralVectorField& v) { return {dealias(v[0]), dealias(v[1]), dealias(v[2])}; }

/// Zero the k = 0 coefficient.
inline SpectralField remove_mean(SpectralField F) {
  F[0] = Complex{0.0, 0.0};
  return F;
}

/// L2 inner product (2 pi)^3 sum_k Re(conj(a_k) b_k) of two real fields.
inline double inner_product(const SpectralField& a, const SpectralField& b) {
  if (!(a.grid() == b.grid())) throw GridMismatchError("inner product of fields on different grids");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (std::conj(a[i]) * b[i]).real();
  return Grid::volume() * s;
}

inline double inner_product(const SpectralVectorField& a, const SpectralVectorField& b) {
  return inner_product(a[0], b[0]) + inner_product(a[1], b[1]) + inner_product(a[2], b[2]);
}

/// Squared L2 norm from coefficients (Plancherel).
inline double l2_norm_sq(const SpectralField& F) { return inner_product(F, F); }
inline double l2_norm_sq(const SpectralVectorField& v) { return inner_product(v, v); }

/// sum_k |k|^(2m) |v_k|^2 (2pi)^3, the squared L2 norm of m-th order derivatives.
/// Odd orders use the Nyquist-zeroed wavenumber for the last factor.
inline double derivative_norm_sq(const SpectralVectorField& v, int order) {
  const Grid& g = v.grid();
  double s = 0.0;
  g.for_each_mode([&](std::size_t i, const Wavevector& k) {
    double w = 1.0;
    for (int o = 1; o < order; ++o) w *= static_cast<double>(k.norm_sq());
    if (order % 2 == 1) {
      const double q1 = derivative_wavenumber(g, k.k1), q2 = derivative_wavenumber(g, k.k2),
                   q3 = derivative_wavenumber(g, k.k3);
      w *= q1 * q1 + q2 * q2 + q3 * q3;
    } else if (order > 0) {
      w *= static_cast<double>(k.norm_sq());
    }
    s += w * (std::norm(v[0][i]) + std::norm(v[1][i]) + std::norm(v[2][i]));
  });
  return Grid::volume() * s;
}

}  // namespace besovns
