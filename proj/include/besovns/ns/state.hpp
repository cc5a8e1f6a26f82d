#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "besovns/fft.hpp"
#include "besovns/operators.hpp"
#include "besovns/random.hpp"

namespace besovns::ns {

enum class InitialCondition { TaylorGreen, Random };

inline std::string to_string(InitialCondition ic) { return ic == InitialCondition::TaylorGreen ? "taylor-green" : "random"; }

inline InitialCondition initial_condition_from_string(const std::string& s) {
  if (s == "taylor-green") return InitialCondition::TaylorGreen;
  if (s == "random") return InitialCondition::Random;
  throw std::invalid_argument("unknown initial condition '" + s + "' (expected taylor-green or random)");
}

struct SolverConfig {
  int n = 32;
  double nu = 0.1;
  double dt = 1e-3;
  double T = 1.0;
  bool dealias = true;
  InitialCondition init = InitialCondition::TaylorGreen;
  double slope = -2.0;
  double amplitude = 0.5;
  double band = 5.0;
  std::uint64_t seed = 0;
  int stride = 10;

  void validate() const {
    Grid check(n);
    (void)check;
    if (!(nu > 0.0)) throw std::invalid_argument("viscosity must be positive");
    if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
    if (!(T >= 0.0)) throw std::invalid_argument("end time must be nonnegative");
    if (stride < 1) throw std::invalid_argument("sample stride must be >= 1");
    if (!(amplitude >= 0.0)) throw std::invalid_argument("amplitude must be nonnegative");
    if (!(band >= 1.0)) throw std::invalid_argument("band must be >= 1");
  }

  friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

/// Velocity in coefficient space at time t. Divergence-free, mean-zero.
struct FlowState {
  double t = 0.0;
  SpectralVectorField u;
};

/// u = (sin x1 cos x2 cos x3, -cos x1 sin x2 cos x3, 0), built from its eight
/// exact coefficients per component.
inline FlowState taylor_green_init(const Grid& g) {
  SpectralVectorField u(g);
  for (int s1 : {-1, 1}) {
    for (int s2 : {-1, 1}) {
      for (int s3 : {-1, 1}) {
        // sin a = (e^{ia} - e^{-ia}) / 2i, cos a = (e^{ia} + e^{-ia}) / 2
        u[0].at({s1, s2, s3}) = Complex{0.0, -0.125 * s1};
        u[1].at({s1, s2, s3}) = Complex{0.0, 0.125 * s2};
      }
    }
  }
  return {0.0, std::move(u)};
}

/// Mean square of |u| over the box, from coefficients.
inline double mean_square(const SpectralVectorField& u) { return l2_norm_sq(u) / Grid::volume(); }

/// Gaussian coefficients ~ |k|^slope up to |k| <= band, Leray-projected and
/// scaled so that the box average of |u|^2 equals amplitude^2.
inline FlowState random_divfree_init(const Grid& g, std::uint64_t seed, double slope, double amplitude,
                                     double band = 5.0) {
  const double limit = std::min(band, static_cast<double>(g.dealias_limit()));
  SpectralVectorField u = leray_project(random_spectral_vector(g, seed, {slope, limit}));
  for (auto& c : u) c[0] = 0.0;
  const double ms = mean_square(u);
  if (ms > 0.0) u = (amplitude / std::sqrt(ms)) * u;
  return {0.0, std::move(u)};
}

inline FlowState initial_state(const SolverConfig& c) {
  const Grid g(c.n);
  if (c.init == InitialCondition::TaylorGreen) return taylor_green_init(g);
  return random_divfree_init(g, c.seed, c.slope, c.amplitude, c.band);
}

}  // namespace besovns::ns
