#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "besovns/grid.hpp"

namespace besovns::lp {

/// Radial cutoffs of the dyadic decomposition.
///
/// chi(r) = 1 on [0, 1], 0 on [4/3, inf), and on (1, 4/3) it is
/// g((4/3 - r) / (1/3)) with g(t) = psi(t) / (psi(t) + psi(1 - t)),
/// psi(t) = exp(-1/t). phi(r) = chi(r/2) - chi(r), so phi lives on [1, 8/3],
/// equals 1 on [4/3, 2], and sum_j phi(2^-j r) telescopes to 1.
class DyadicProfile {
 public:
  static constexpr double kBallRadius = 4.0 / 3.0;
  static constexpr double kAnnulusInner = 3.0 / 4.0;
  static constexpr double kAnnulusOuter = 8.0 / 3.0;
  // Where this particular phi is actually nonzero.
  static constexpr double kPhiSupportLow = 1.0;
  static constexpr double kPhiSupportHigh = 8.0 / 3.0;

  double chi(double r) const {
    if (r <= 1.0) return 1.0;
    if (r >= kBallRadius) return 0.0;
    return transition((kBallRadius - r) * 3.0);
  }

  double phi(double r) const { return chi(0.5 * r) - chi(r); }

  /// phi(2^-j r), using an exact power-of-two scaling.
  double phi_j(double r, int j) const { return phi(std::ldexp(r, -j)); }
  double chi_j(double r, int j) const { return chi(std::ldexp(r, -j)); }

 private:
  static double psi(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }
  static double transition(double t) {
    const double a = psi(t);
    const double b = psi(1.0 - t);
    return a / (a + b);
  }
};

inline DyadicProfile build_profile() { return {}; }

/// Dyadic indices that can carry energy on a grid.
struct BlockRange {
  int j_min = 0;
  int j_max = -1;

  bool empty() const { return j_max < j_min; }
  int count() const { return empty() ? 0 : j_max - j_min + 1; }
  bool contains(int j) const { return j >= j_min && j <= j_max; }
  std::string to_string() const { return "[" + std::to_string(j_min) + "," + std::to_string(j_max) + "]"; }
  friend bool operator==(const BlockRange&, const BlockRange&) = default;
};

/// j_min: smallest j whose annulus [3/4 2^j, 8/3 2^j] holds a nonzero lattice
/// point (|k| >= 1). j_max: largest j whose annulus meets the cube |k|_inf <= n/2.
inline BlockRange block_range(const Grid& g) {
  int jmin = 0;
  while (DyadicProfile::kAnnulusOuter * std::ldexp(1.0, jmin - 1) >= 1.0) --jmin;
  const double corner = (g.n() / 2) * std::sqrt(3.0);
  int jmax = jmin;
  while (DyadicProfile::kAnnulusInner * std::ldexp(1.0, jmax + 1) <= corner) ++jmax;
  return {jmin, jmax};
}

/// True when block j reaches past the largest ball fully resolved on the grid
/// (|k| <= n/2), so its content is cut by the grid.
inline bool block_truncated(const Grid& g, int j) {
  return DyadicProfile::kPhiSupportHigh * std::ldexp(1.0, j) > g.n() / 2;
}

}  // namespace besovns::lp
