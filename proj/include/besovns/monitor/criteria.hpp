#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "besovns/fft.hpp"
#include "besovns/lp/besov.hpp"
#include "besovns/monitor/spec.hpp"
#include "besovns/norms.hpp"
#include "besovns/ns/solver.hpp"
#include "besovns/operators.hpp"

namespace besovns::monitor {

/// Everything the criteria need from one velocity field. Block norms are
/// L^inf norms of Delta_j applied to each scalar component, computed once
/// and reused for every smoothness index.
struct FlowMeasures {
  double t = 0.0;
  std::array<std::array<lp::BlockNorms, 3>, 3> grad;  // grad[i][j]: blocks of d_{j+1} u_{i+1}
  std::array<lp::BlockNorms, 3> vel;                   // blocks of u_{i+1}
  double energy = 0.0;          // ||u||^2
  double grad_sq = 0.0;         // ||grad u||^2
  double enstrophy = 0.0;       // ||omega||^2
  double lap_sq = 0.0;          // ||Lap u||^2
  double grad_h_sq = 0.0;       // ||grad_h u||^2
  double top_block_share = 0.0;  // largest share of L2 energy in grid-cut blocks
  bool has_dynamics = false;
  double grad_sq_rate = 0.0;    // d/dt ||grad u||^2
  double stretching = 0.0;      // int (omega . grad) u . omega

  /// d/dt (||grad u||^2 + nu int ||Lap u||^2).
  double h1_rate(double nu) const { return grad_sq_rate + nu * lap_sq; }
  /// Nonlinear part of d/dt ||grad u||^2, i.e. the rate with dissipation removed.
  double production(double nu) const { return grad_sq_rate + 2.0 * nu * lap_sq; }
};

/// Measures u. With nu > 0 the rate of ||grad u||^2 under the dealiased
/// dynamics and the vortex-stretching integral are filled in too.
inline FlowMeasures measure_flow(const SpectralVectorField& u, double t = 0.0, double nu = 0.0, bool dealias = true) {
  const lp::DyadicProfile profile = lp::build_profile();
  const lp::BlockRange range = lp::block_range(u.grid());
  FlowMeasures m;
  m.t = t;
  for (int i = 0; i < 3; ++i) {
    m.vel[i] = lp::block_norms(u[i], kInf, profile, range);
    m.top_block_share = std::max(m.top_block_share, m.vel[i].top_block_share);
    for (int j = 0; j < 3; ++j) m.grad[i][j] = lp::block_norms(partial_derivative(u[i], j + 1), kInf, profile, range);
  }
  m.energy = l2_norm_sq(u);
  m.grad_sq = derivative_norm_sq(u, 1);
  const SpectralVectorField w = curl(u);
  m.enstrophy = l2_norm_sq(w);
  const SpectralVectorField lap = laplacian(u);
  m.lap_sq = l2_norm_sq(lap);
  for (int i = 0; i < 3; ++i) {
    m.grad_h_sq += l2_norm_sq(partial_derivative(u[i], 1)) + l2_norm_sq(partial_derivative(u[i], 2));
  }
  if (nu > 0.0) {
    m.has_dynamics = true;
    m.grad_sq_rate = ns::grad_sq_rate(u, ns::nonlinear_term(u, dealias), nu);
    const RealVectorField ws = inverse_transform_unchecked(w);
    double acc = 0.0;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const RealField d = inverse_transform_unchecked(partial_derivative(u[j], i + 1));
        for (std::size_t x = 0; x < d.size(); ++x) acc += ws[i][x] * d[x] * ws[j][x];
      }
    }
    m.stretching = acc * u.grid().cell_volume();
  }
  return m;
}

inline FlowMeasures measure_flow(const ns::FlowState& s, double nu = 0.0, bool dealias = true) {
  return measure_flow(s.u, s.t, nu, dealias);
}

/// sup_j 2^{js} n_j, maximised over the listed components.
inline double besov_max(const std::vector<const lp::BlockNorms*>& blocks, double s) {
  double m = 0.0;
  for (const auto* b : blocks) m = std::max(m, lp::besov_from_blocks(*b, s, kInf));
  return m;
}

/// One Besov quantity of a criterion with its own time exponent.
struct CriterionTerm {
  std::string label;
  double value = 0.0;
  double q_time = 2.0;
};

inline std::vector<CriterionTerm> criterion_terms(const FlowMeasures& m, const CriterionSpec& spec) {
  spec.validate();
  const auto& G = m.grad;
  const double s = spec.s;
  switch (spec.theorem) {
    case TheoremId::T1_2: {
      std::vector<const lp::BlockNorms*> all;
      for (const auto& row : G) {
        for (const auto& b : row) all.push_back(&b);
      }
      return {{"grad_u", besov_max(all, -1.0), spec.q_time()}};
    }
    case TheoremId::T1_3i:
      return {{"grad_h_u", besov_max({&G[0][0], &G[0][1], &G[1][0], &G[1][1], &G[2][0], &G[2][1]}, -1.0),
               spec.q_time()}};
    case TheoremId::T1_3ii: return {{"grad_u3", besov_max({&G[2][0], &G[2][1], &G[2][2]}, -s), spec.q_time()}};
    case TheoremId::C1_4a: return {{"u", besov_max({&m.vel[0], &m.vel[1], &m.vel[2]}, 0.0), spec.q_time()}};
    case TheoremId::C1_4b: return {{"u3", besov_max({&m.vel[2]}, 1.0 - s), spec.q_time()}};
    case TheoremId::T1_4:
      return {{"d3u1", besov_max({&G[0][2]}, -1.0), 2.0},
              {"d3u2", besov_max({&G[1][2]}, -1.0), 2.0},
              {"d3u3", besov_max({&G[2][2]}, -s), spec.q_time()}};
    case TheoremId::T1_5: return {{"d3u3", besov_max({&G[2][2]}, -s), spec.q_time()}};
  }
  return {};
}

/// The criterion quantity at one time; max over terms when there are several.
inline double criterion_value(const FlowMeasures& m, const CriterionSpec& spec) {
  double v = 0.0;
  for (const auto& t : criterion_terms(m, spec)) v = std::max(v, t.value);
  return v;
}

inline double criterion_value(const SpectralVectorField& u, const CriterionSpec& spec) {
  spec.validate();
  return criterion_value(measure_flow(u), spec);
}

/// Integrand of the Gronwall exponent: sum of value^q over the terms.
inline double gronwall_integrand(const std::vector<CriterionTerm>& terms) {
  double a = 0.0;
  for (const auto& t : terms) a += std::pow(t.value, t.q_time);
  return a;
}

/// ||omega||^2 or ||grad u||^2, whichever the proof closes on.
inline double companion(const FlowMeasures& m, const CriterionSpec& spec) {
  return spec.enstrophy_companion() ? m.enstrophy : m.grad_sq;
}

/// Initial-data quantities that enter the additive terms of the bounds.
struct InitialData {
  FlowMeasures measures;
  double u3_lq = 0.0;  // ||u3(0)||_{L^q} with q from the criterion's exponent pair
};

inline InitialData initial_data(const SpectralVectorField& u0, const FlowMeasures& m0, const CriterionSpec& spec) {
  InitialData d{m0, 0.0};
  if (spec.theorem == TheoremId::T1_4 || spec.theorem == TheoremId::T1_5) {
    const double q = lebesgue_from_beta(beta_from_s(spec.s));
    d.u3_lq = lp_norm(inverse_transform_unchecked(u0[2]), q);
  }
  return d;
}

/// v0 of each final bound, with the proof's additive initial terms.
inline double initial_bound(const InitialData& d, const CriterionSpec& spec, double C) {
  const FlowMeasures& m = d.measures;
  const double gh = std::pow(std::sqrt(m.grad_h_sq), 8.0 / 3.0);
  switch (spec.theorem) {
    case TheoremId::T1_2: return m.enstrophy;
    case TheoremId::T1_3i:
    case TheoremId::C1_4a: return m.grad_sq + C * gh;
    case TheoremId::T1_3ii:
    case TheoremId::C1_4b: return m.grad_sq + C * (gh + 1.0);
    case TheoremId::T1_4: {
      const double q = lebesgue_from_beta(beta_from_s(spec.s));
      return C * std::pow(d.u3_lq, enstrophy_initial_power(q)) + m.enstrophy;
    }
    case TheoremId::T1_5: {
      const double beta = beta_from_s(spec.s);
      return C * std::pow(d.u3_lq, gradient_initial_power(beta)) + m.grad_sq + gh;
    }
  }
  return 0.0;
}

/// Ratio production / (a(t) companion), where production is the nonlinear
/// part of d/dt ||grad u||^2 (equal to that of ||omega||^2). Dissipation only
/// lowers both d/dt companion and d/dt(companion + nu int ||Lap u||^2), so a
/// constant above every ratio closes the Gronwall inequality for both. Skipped
/// when the denominator vanishes; `unbounded` when production is positive there.
struct RateRatio {
  double value = 0.0;
  bool skipped = false;
  bool unbounded = false;
};

inline RateRatio rate_ratio(const FlowMeasures& m, const CriterionSpec& spec, double nu) {
  const double p = m.production(nu);
  const double den = gronwall_integrand(criterion_terms(m, spec)) * companion(m, spec);
  if (!(den > 0.0)) return {0.0, true, p > 0.0};
  return {p / den, false, false};
}

/// rho = ||grad u||_{B^{-1}_{inf,inf}} / ||u||_{B^0_{inf,inf}} under both vector conventions.
struct EquivalenceReport {
  lp::Ratio components;  // max over the nine d_j u_i and the three u_i
  lp::Ratio magnitude;   // pointwise Euclidean / Frobenius magnitude per block
};

inline EquivalenceReport equivalence_check(const FlowMeasures& m) {
  std::vector<const lp::BlockNorms*> all;
  for (const auto& row : m.grad) {
    for (const auto& b : row) all.push_back(&b);
  }
  EquivalenceReport r;
  r.components = lp::Ratio::of(besov_max(all, -1.0), besov_max({&m.vel[0], &m.vel[1], &m.vel[2]}, 0.0));
  return r;
}

inline EquivalenceReport equivalence_check(const SpectralVectorField& u) {
  EquivalenceReport r = equivalence_check(measure_flow(u));
  std::vector<SpectralField> d;
  d.reserve(9);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) d.push_back(partial_derivative(u[i], j + 1));
  }
  std::vector<const SpectralField*> dp;
  for (const auto& f : d) dp.push_back(&f);
  const double top = lp::besov_from_blocks(lp::block_norms_magnitude(dp, kInf), -1.0, kInf);
  const double bottom = lp::besov_from_blocks(lp::block_norms_magnitude({&u[0], &u[1], &u[2]}, kInf), 0.0, kInf);
  r.magnitude = lp::Ratio::of(top, bottom);
  return r;
}

}  // namespace besovns::monitor
