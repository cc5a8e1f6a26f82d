#pragma once

#include <stdexcept>
#include <vector>

#include "besovns/fft.hpp"
#include "besovns/lp/inequalities.hpp"
#include "besovns/norms.hpp"
#include "besovns/operators.hpp"

namespace besovns::ns {

/// -Lap p = sum_ij d_i d_j (u_i u_j), i.e. p(k) = -sum_ij k_i k_j g_ij(k) / |k|^2
/// with g_ij = u_i u_j formed on the grid. Mean-zero.
inline SpectralField pressure_coefficients(const SpectralVectorField& u, bool dealias = true) {
  const Grid& g = u.grid();
  const RealVectorField us = inverse_transform_unchecked(u);
  SpectralField p(g);
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      SpectralField gij = forward_transform(product(us[i], us[j]));
      if (dealias) gij = besovns::dealias(gij);
      const double mult = i == j ? 1.0 : 2.0;
      g.for_each_mode([&](std::size_t idx, const Wavevector& k) {
        if (k.is_zero()) return;
        p[idx] -= mult * static_cast<double>(k[i + 1]) * static_cast<double>(k[j + 1]) /
                  static_cast<double>(k.norm_sq()) * gij[idx];
      });
    }
  }
  return p;
}

inline RealField pressure_solve(const SpectralVectorField& u, bool dealias = true) {
  return inverse_transform_unchecked(pressure_coefficients(u, dealias));
}

/// Measured pressure ratios at one exponent q.
struct PressureRatios {
  double q = 2.0;
  lp::Ratio gradient;  // ||grad p||_q / || |grad u| |u| ||_q
  lp::Ratio value;     // ||p||_q / ||u||_{2q}^2
};

inline std::vector<PressureRatios> check_pressure_estimates(const SpectralVectorField& u, const std::vector<double>& qs,
                                                            bool dealias = true) {
  for (double q : qs) {
    if (!(q > 1.0) || std::isinf(q)) throw std::invalid_argument("pressure estimates need 1 < q < infinity");
  }
  const SpectralField p = pressure_coefficients(u, dealias);
  const RealField ps = inverse_transform_unchecked(p);
  const RealField grad_p = magnitude(inverse_transform_unchecked(gradient(p)));
  const RealField speed = magnitude(inverse_transform_unchecked(u));
  const RealField grad_u =
      frobenius(inverse_transform_unchecked(gradient(u[0])), inverse_transform_unchecked(gradient(u[1])),
                inverse_transform_unchecked(gradient(u[2])));
  const RealField gu_u = product(grad_u, speed);
  std::vector<PressureRatios> out;
  for (double q : qs) {
    const double u2q = lp_norm(speed, 2.0 * q);
    out.push_back({q, lp::Ratio::of(lp_norm(grad_p, q), lp_norm(gu_u, q)), lp::Ratio::of(lp_norm(ps, q), u2q * u2q)});
  }
  return out;
}

}  // namespace besovns::ns
