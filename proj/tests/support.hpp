#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <tuple>
#include <utility>
#include <vector>

#include "besovns/fft.hpp"
#include "besovns/field.hpp"

namespace besovns::testing {

inline double max_abs(const SpectralField& F) {
  double m = 0.0;
  for (const auto& c : F.values()) m = std::max(m, std::abs(c));
  return m;
}

inline double max_abs(const SpectralVectorField& v) {
  return std::max({max_abs(v[0]), max_abs(v[1]), max_abs(v[2])});
}

inline double max_abs(const RealField& f) {
  double m = 0.0;
  for (double x : f.values()) m = std::max(m, std::abs(x));
  return m;
}

inline double max_diff(const SpectralField& a, const SpectralField& b) { return max_abs(a - b); }
inline double max_diff(const SpectralVectorField& a, const SpectralVectorField& b) { return max_abs(a - b); }

inline double max_diff(const RealField& a, const RealField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double rel_diff(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

// Direct convolution sum of (u.grad)u over all pairs of nonzero modes, then
// the 2/3 mask and the projection written out independently.
inline SpectralVectorField convolution_oracle(const SpectralVectorField& u) {
  const Grid& g = u.grid();
  std::vector<std::pair<Wavevector, std::array<Complex, 3>>> modes;
  g.for_each_mode([&](std::size_t i, const Wavevector& k) {
    std::array<Complex, 3> c{u[0][i], u[1][i], u[2][i]};
    if (std::abs(c[0]) + std::abs(c[1]) + std::abs(c[2]) > 0.0) modes.push_back({k, c});
  });
  std::map<std::tuple<int, int, int>, std::array<Complex, 3>> acc;
  for (const auto& [p, up] : modes) {
    for (const auto& [q, uq] : modes) {
      const Complex qdotu = up[0] * double(q.k1) + up[1] * double(q.k2) + up[2] * double(q.k3);
      auto& slot = acc[{p.k1 + q.k1, p.k2 + q.k2, p.k3 + q.k3}];
      for (int i = 0; i < 3; ++i) slot[static_cast<std::size_t>(i)] += Complex{0.0, 1.0} * qdotu * uq[static_cast<std::size_t>(i)];
    }
  }
  SpectralVectorField out(g);
  const int lim = g.n() / 3;
  for (const auto& [key, v] : acc) {
    const auto [a, b, c] = key;
    if (std::abs(a) > lim || std::abs(b) > lim || std::abs(c) > lim) continue;
    const double kk = double(a * a + b * b + c * c);
    const Complex dot = kk > 0 ? (double(a) * v[0] + double(b) * v[1] + double(c) * v[2]) / kk : Complex{};
    const Wavevector k{a, b, c};
    out[0].at(k) = v[0] - double(a) * dot;
    out[1].at(k) = v[1] - double(b) * dot;
    out[2].at(k) = v[2] - double(c) * dot;
  }
  return out;
}

}  // namespace besovns::testing
