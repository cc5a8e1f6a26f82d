#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "besovns/error.hpp"
#include "besovns/fft.hpp"
#include "besovns/norms.hpp"
#include "besovns/ns/pressure.hpp"
#include "besovns/ns/state.hpp"
#include "besovns/operators.hpp"

namespace besovns::ns {

/// Raised when a step produces NaN/Inf or runaway energy.
class BlowUpError : public Error {
 public:
  BlowUpError(const std::string& what, double t, Wavevector worst) : Error(what), t_(t), worst_(worst) {}
  double time() const noexcept { return t_; }
  const Wavevector& worst_mode() const noexcept { return worst_; }

 private:
  double t_;
  Wavevector worst_;
};

/// (u.grad) u evaluated pseudo-spectrally, without mask or projection.
inline SpectralVectorField convection(const SpectralVectorField& u) {
  const Grid& g = u.grid();
  const RealVectorField us = inverse_transform_unchecked(u);
  SpectralVectorField out(g);
  for (int i = 0; i < 3; ++i) {
    RealField acc(g);
    for (int j = 0; j < 3; ++j) {
      const RealField d = inverse_transform_unchecked(partial_derivative(u[i], j + 1));
      const auto& uj = us[j];
      for (std::size_t x = 0; x < acc.size(); ++x) acc[x] += uj[x] * d[x];
    }
    out[i] = forward_transform(acc);
  }
  return out;
}

/// P[D((u.grad) u)], where D is the 2/3-rule mask (skipped when dealias is off)
/// and P the Leray projection. The momentum equation reads du/dt = nu Lap u - N(u).
inline SpectralVectorField nonlinear_term(const SpectralVectorField& u, bool dealias = true) {
  SpectralVectorField c = convection(u);
  if (dealias) c = besovns::dealias(c);
  // (u.grad)u = div(u u) has zero mean; drop the round-off left in k = 0.
  for (auto& comp : c) comp[0] = 0.0;
  return leray_project(c);
}

inline SpectralVectorField nonlinear_term(const FlowState& s, bool dealias = true) { return nonlinear_term(s.u, dealias); }

namespace detail {

/// exp(-nu |k|^2 h) for every mode.
inline std::vector<double> decay_factors(const Grid& g, double nu, double h) {
  std::vector<double> e(g.size());
  g.for_each_mode([&](std::size_t i, const Wavevector& k) { e[i] = std::exp(-nu * k.norm_sq() * h); });
  return e;
}

/// v <- E v
inline SpectralVectorField decay(const SpectralVectorField& v, const std::vector<double>& e) {
  SpectralVectorField out = v;
  for (auto& c : out) {
    auto vals = c.values();
    for (std::size_t i = 0; i < vals.size(); ++i) vals[i] *= e[i];
  }
  return out;
}

inline void axpy(SpectralVectorField& y, double a, const SpectralVectorField& x) {
  for (int c = 0; c < 3; ++c) {
    auto yv = y[c].values();
    const auto xv = x[c].values();
    for (std::size_t i = 0; i < yv.size(); ++i) yv[i] += a * xv[i];
  }
}

inline std::optional<std::size_t> first_non_finite(const SpectralVectorField& u) {
  for (int c = 0; c < 3; ++c) {
    const auto v = u[c].values();
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag())) return i;
    }
  }
  return std::nullopt;
}

inline std::size_t largest_mode(const SpectralVectorField& u) {
  std::size_t best = 0;
  double m = -1.0;
  for (std::size_t i = 0; i < u.grid().size(); ++i) {
    const double a = std::norm(u[0][i]) + std::norm(u[1][i]) + std::norm(u[2][i]);
    if (a > m) {
      m = a;
      best = i;
    }
  }
  return best;
}

}  // namespace detail

/// One integrating-factor RK4 step of size h. With E(h) = exp(-nu |k|^2 h)
/// and F(v) = -N(v):
///   k1 = F(u)
///   k2 = F(E(h/2)(u + h/2 k1))
///   k3 = F(E(h/2) u + h/2 k2)
///   k4 = F(E(h) u + h E(h/2) k3)
///   u+ = E(h) u + h/6 (E(h) k1 + 2 E(h/2)(k2 + k3) + k4)
/// Throws BlowUpError if the result is not finite.
inline FlowState step(const FlowState& s, double h, double nu, bool dealias = true) {
  const auto F = [&](const SpectralVectorField& v) { return -1.0 * nonlinear_term(v, dealias); };
  const SpectralVectorField& u = s.u;
  const auto half = detail::decay_factors(u.grid(), nu, 0.5 * h);
  const auto full = detail::decay_factors(u.grid(), nu, h);

  const SpectralVectorField k1 = F(u);
  SpectralVectorField a = u;
  detail::axpy(a, 0.5 * h, k1);
  const SpectralVectorField k2 = F(detail::decay(a, half));

  SpectralVectorField b = detail::decay(u, half);
  detail::axpy(b, 0.5 * h, k2);
  const SpectralVectorField k3 = F(b);

  SpectralVectorField c = detail::decay(u, full);
  detail::axpy(c, h, detail::decay(k3, half));
  const SpectralVectorField k4 = F(c);

  SpectralVectorField incr = detail::decay(k1, full);
  detail::axpy(incr, 2.0, detail::decay(k2 + k3, half));
  detail::axpy(incr, 1.0, k4);
  SpectralVectorField next = detail::decay(u, full);
  detail::axpy(next, h / 6.0, incr);

  const double t = s.t + h;
  if (auto bad = detail::first_non_finite(next)) {
    const Wavevector k = next.grid().wavevector(*bad);
    std::ostringstream os;
    os << "non-finite velocity at t=" << t << ", mode k=(" << k.k1 << "," << k.k2 << "," << k.k3 << ")";
    throw BlowUpError(os.str(), t, k);
  }
  return {t, std::move(next)};
}

/// Scalar diagnostics of one state.
struct Diagnostics {
  double energy = 0.0;         // ||u||_2^2
  double grad_sq = 0.0;        // ||grad u||_2^2
  double omega_l2 = 0.0;       // ||omega||_2
  double lap_sq = 0.0;         // ||Lap u||_2^2 (= ||grad omega||_2^2)
  double grad_sq_rate = 0.0;   // d/dt ||grad u||_2^2 of the discrete system
  double max_speed = 0.0;      // max |u| on the grid
  double divergence = 0.0;     // ||div u||_2 / ||grad u||_2
};

/// d/dt ||grad u||^2 = -2 nu ||Lap u||^2 + 2 <Lap u, N(u)>.
inline double grad_sq_rate(const SpectralVectorField& u, const SpectralVectorField& N, double nu) {
  const SpectralVectorField lap = laplacian(u);
  return -2.0 * nu * l2_norm_sq(lap) + 2.0 * inner_product(lap, N);
}

inline Diagnostics diagnose(const FlowState& s, double nu, bool dealias = true) {
  Diagnostics d;
  d.energy = l2_norm_sq(s.u);
  d.grad_sq = derivative_norm_sq(s.u, 1);
  d.omega_l2 = std::sqrt(l2_norm_sq(curl(s.u)));
  d.lap_sq = l2_norm_sq(laplacian(s.u));
  d.grad_sq_rate = grad_sq_rate(s.u, nonlinear_term(s.u, dealias), nu);
  d.max_speed = lp_norm(magnitude(inverse_transform_unchecked(s.u)), kInf);
  const double g = std::sqrt(d.grad_sq);
  d.divergence = g > 0.0 ? std::sqrt(l2_norm_sq(divergence(s.u))) / g : 0.0;
  return d;
}

/// Advective limit: dt <= 0.5 h / max|u|. The viscous factor is integrated exactly.
inline double stable_dt(const Grid& g, double max_speed) {
  return max_speed > 0.0 ? 0.5 * g.spacing() / max_speed : std::numeric_limits<double>::infinity();
}

/// K1, running 2 nu int ||grad u||^2 (trapezoid over every step), and the defect.
struct EnergyBudget {
  double K1 = 0.0;
  double dissipation = 0.0;
  double energy = 0.0;

  double defect() const { return energy + dissipation - K1; }
  double relative_defect() const { return K1 > 0.0 ? std::abs(defect()) / K1 : std::abs(defect()); }
};

struct TrajectorySample {
  int step = 0;
  FlowState state;
  Diagnostics diag;
  double dissipation = 0.0;
  std::optional<RealField> pressure;
  double t() const { return state.t; }
};

struct Trajectory {
  SolverConfig config;
  std::vector<TrajectorySample> samples;
  EnergyBudget budget;
  bool aborted = false;
  std::string abort_reason;
  std::vector<std::string> warnings;
};

/// Advance `initial` to config.T, keeping every config.stride-th step plus the last.
/// A blow-up (NaN or energy above 10 K1) ends the run early with aborted set.
inline Trajectory run_from(const FlowState& initial, const SolverConfig& config) {
  config.validate();
  Trajectory tr;
  tr.config = config;
  const Grid& g = initial.u.grid();
  const double nu = config.nu;
  const double t0 = initial.t;
  const double t_end = t0 + config.T;
  // Whole steps of dt; a shorter final step only when T is not a multiple of dt.
  const double ratio = config.T / config.dt;
  const bool whole = std::abs(ratio - std::round(ratio)) < 1e-9 * std::max(1.0, ratio);
  const long nsteps = config.T == 0.0 ? 0 : (whole ? std::lround(ratio) : static_cast<long>(std::ceil(ratio)));

  bool warned = false;
  auto check_dt = [&](const Diagnostics& d, double t, double h) {
    const double lim = stable_dt(g, d.max_speed);
    if (!warned && h > lim) {
      std::ostringstream os;
      os.precision(6);
      os << "dt=" << h << " exceeds the advective stability bound " << lim << " at t=" << t;
      tr.warnings.push_back(os.str());
      warned = true;
    }
  };

  FlowState s = initial;
  Diagnostics d = diagnose(s, nu, config.dealias);
  tr.budget.K1 = d.energy;
  tr.budget.energy = d.energy;
  check_dt(d, s.t, config.dt);
  tr.samples.push_back({0, s, d, 0.0, pressure_solve(s.u, config.dealias)});

  double prev_grad_sq = d.grad_sq;
  for (long i = 1; i <= nsteps; ++i) {
    const double target = i == nsteps ? t_end : t0 + static_cast<double>(i) * config.dt;
    const double h = (i == nsteps && !whole) ? t_end - s.t : config.dt;
    try {
      s = step(s, h, nu, config.dealias);
    } catch (const BlowUpError& e) {
      tr.aborted = true;
      tr.abort_reason = e.what();
      break;
    }
    s.t = target;
    const bool keep = i % config.stride == 0 || i == nsteps;
    const double gs = derivative_norm_sq(s.u, 1);
    tr.budget.dissipation += nu * h * (prev_grad_sq + gs);
    prev_grad_sq = gs;
    const double e = l2_norm_sq(s.u);
    tr.budget.energy = e;
    if (e > 10.0 * tr.budget.K1) {
      const Wavevector k = g.wavevector(detail::largest_mode(s.u));
      std::ostringstream os;
      os << "energy " << e << " exceeds 10 K1 at t=" << s.t << ", largest mode k=(" << k.k1 << "," << k.k2 << ","
         << k.k3 << ")";
      tr.aborted = true;
      tr.abort_reason = os.str();
      break;
    }
    if (keep) {
      d = diagnose(s, nu, config.dealias);
      check_dt(d, s.t, config.dt);
      tr.samples.push_back({static_cast<int>(i), s, d, tr.budget.dissipation, pressure_solve(s.u, config.dealias)});
    }
  }
  return tr;
}

inline Trajectory run(const SolverConfig& config) {
  config.validate();
  return run_from(initial_state(config), config);
}

}  // namespace besovns::ns
