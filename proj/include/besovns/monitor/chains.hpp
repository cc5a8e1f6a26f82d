#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "besovns/fft.hpp"
#include "besovns/io/csv.hpp"
#include "besovns/lp/besov.hpp"
#include "besovns/lp/inequalities.hpp"
#include "besovns/monitor/constants.hpp"
#include "besovns/monitor/criteria.hpp"
#include "besovns/monitor/exponents.hpp"
#include "besovns/norms.hpp"
#include "besovns/ns/pressure.hpp"
#include "besovns/operators.hpp"

namespace besovns::monitor {

/// Slack allowed on inequalities that hold with constant 1 (Hoelder, Young,
/// pointwise bounds) and on exact identities.
inline constexpr double kExactTolerance = 1e-10;

enum class LinkKind { Exact, Identity, Calibrated };

inline std::string to_string(LinkKind k) {
  switch (k) {
    case LinkKind::Exact: return "exact";
    case LinkKind::Identity: return "identity";
    case LinkKind::Calibrated: return "calibrated";
  }
  return "?";
}

/// One inequality step measured as lhs / rhs.
struct LinkReport {
  std::string name;
  LinkKind kind = LinkKind::Exact;
  lp::Ratio ratio;
  /// Constant-table key for calibrated links.
  std::string constant;
  /// Calibrated bound when known, else infinity.
  double bound = std::numeric_limits<double>::infinity();

  /// Exact links: ratio <= 1 + tol. Identities: |ratio - 1| <= tol.
  /// Calibrated links: ratio <= bound (informational on held-out data).
  bool holds() const {
    if (ratio.skipped) return true;
    switch (kind) {
      case LinkKind::Exact: return ratio.value <= 1.0 + kExactTolerance;
      case LinkKind::Identity: return std::abs(ratio.value - 1.0) <= kExactTolerance;
      case LinkKind::Calibrated: return ratio.value <= bound * (1.0 + 1e-12);
    }
    return false;
  }
};

struct ChainReport {
  std::string chain;
  double t = 0.0;
  bool skipped = false;
  std::string note;
  std::vector<LinkReport> links;

  const LinkReport* link(const std::string& name) const {
    for (const auto& l : links) {
      if (l.name == name) return &l;
    }
    return nullptr;
  }

  /// All exact and identity links hold.
  bool exact_links_hold() const {
    return std::all_of(links.begin(), links.end(),
                       [](const LinkReport& l) { return l.kind == LinkKind::Calibrated || l.holds(); });
  }
};

inline std::string beta_tag(double beta) { return "@beta=" + io::format_double(beta); }

namespace detail {

inline LinkReport link(std::string name, LinkKind kind, double num, double den, const ConstantsTable* table = nullptr,
                       std::string constant = {}) {
  LinkReport l{std::move(name), kind, lp::Ratio::of(num, den), std::move(constant)};
  if (kind == LinkKind::Calibrated && table && !l.constant.empty()) {
    if (const auto* c = table->find(l.constant)) l.bound = c->value;
  }
  return l;
}

/// Both sides zero counts as a trivially satisfied link.
inline LinkReport zero_aware(LinkReport l, double num, double den) {
  if (num == 0.0 && den == 0.0) l.ratio = {0.0, true};
  return l;
}

inline double integral(const RealField& f) {
  double acc = 0.0;
  for (double v : f.values()) acc += v;
  return acc * f.grid().cell_volume();
}

/// Sample-space derivatives d[i][j] = d_{j+1} u_{i+1}.
inline std::array<RealVectorField, 3> real_gradient(const SpectralVectorField& u) {
  return {inverse_transform_unchecked(gradient(u[0])), inverse_transform_unchecked(gradient(u[1])),
          inverse_transform_unchecked(gradient(u[2]))};
}

inline RealField pointwise(const Grid& g, auto&& fn) {
  RealField out(g);
  for (std::size_t x = 0; x < out.size(); ++x) out[x] = fn(x);
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Enstrophy chain for the full gradient criterion.

struct VorticityConstants {
  double curl_l4 = 1.0;
  double a3_gradient = 1.0;
  double chain() const { return curl_l4 * curl_l4 * a3_gradient; }
  /// Gronwall constant C0^2 / nu after Young's inequality.
  double gronwall(double nu) const { return chain() * chain() / nu; }
};

inline VorticityConstants vorticity_constants(const ConstantsTable& t) {
  return {t.value_or("link.curl_l4", 1.0), t.value_or("link.a3_gradient", 1.0)};
}

/// Links of the enstrophy estimate at one state:
///   stretching_holder    |int (w.grad)u.w| <= ||w||_4^2 ||grad u||_2
///   curl_l4              ||w||_4 <= C ||grad u||_4
///   a3_gradient          ||grad u||_4^2 <= C ||grad u||_{B^-1} ||Lap u||_2
///   stretching_chain     |int (w.grad)u.w| <= C0 ||grad u||_{B^-1} ||Lap u|| ||grad u||
///   young                C0 a^(1/2) X Y^(1/2) <= C0^2/(2 nu) a Y + nu/2 X^2
///   curl_l2, curl_h1     ||w||_2 = ||grad u||_2, ||grad w||_2 = ||Lap u||_2
///   stretching_identity  int (w.grad)u.w = <Lap u, N(u)>
/// `m` must be measure_flow(u, t, nu, ...) with dynamics.
inline ChainReport verify_vorticity_chain(const SpectralVectorField& u, const FlowMeasures& m, double nu,
                                          const ConstantsTable* table = nullptr) {
  if (!m.has_dynamics) throw std::invalid_argument("vorticity chain needs measures with dynamics");
  ChainReport r{"vorticity", m.t};
  const auto D = detail::real_gradient(u);
  const SpectralVectorField w = curl(u);
  const RealField wmag = magnitude(inverse_transform_unchecked(w));
  const RealField gmag = frobenius(D[0], D[1], D[2]);
  const double w4 = lp_norm(wmag, 4.0);
  const double g4 = lp_norm(gmag, 4.0);
  const double g2 = std::sqrt(m.grad_sq);
  const double lap = std::sqrt(m.lap_sq);
  const double a_half = criterion_value(m, CriterionSpec::make(TheoremId::T1_2));
  const VorticityConstants k = table ? vorticity_constants(*table) : VorticityConstants{};
  const double C0 = k.chain();
  const double vs = std::abs(m.stretching);

  using detail::link;
  using detail::zero_aware;
  r.links.push_back(zero_aware(link("stretching_holder", LinkKind::Exact, vs, w4 * w4 * g2), vs, w4 * w4 * g2));
  r.links.push_back(link("curl_l4", LinkKind::Calibrated, w4, g4, table, "link.curl_l4"));
  r.links.push_back(link("a3_gradient", LinkKind::Calibrated, g4 * g4, a_half * lap, table, "link.a3_gradient"));
  {
    LinkReport l = link("stretching_chain", LinkKind::Calibrated, vs, C0 * a_half * lap * g2);
    l.bound = 1.0;
    r.links.push_back(zero_aware(l, vs, a_half * lap * g2));
  }
  {
    const double lhs = C0 * a_half * lap * g2;
    const double rhs = C0 * C0 / (2.0 * nu) * a_half * a_half * m.grad_sq + 0.5 * nu * m.lap_sq;
    r.links.push_back(zero_aware(link("young", LinkKind::Exact, lhs, rhs), lhs, rhs));
  }
  r.links.push_back(zero_aware(link("curl_l2", LinkKind::Identity, std::sqrt(m.enstrophy), g2), m.enstrophy, g2));
  {
    const double gw = std::sqrt(derivative_norm_sq(w, 1));
    r.links.push_back(zero_aware(link("curl_h1", LinkKind::Identity, gw, lap), gw, lap));
  }
  {
    // <Lap u, N> from the rate: d/dt ||grad u||^2 = -2 nu ||Lap u||^2 + 2 <Lap u, N>.
    const double production = 0.5 * m.grad_sq_rate + nu * m.lap_sq;
    const double scale = std::abs(production) + std::abs(m.stretching) + nu * m.lap_sq;
    LinkReport l{"stretching_identity", LinkKind::Identity, {1.0 + (m.stretching - production) / scale, false}, ""};
    if (!(scale > 0.0)) l.ratio = {0.0, true};
    r.links.push_back(l);
  }
  return r;
}

inline ChainReport verify_vorticity_chain(const SpectralVectorField& u, double nu, const ConstantsTable* table = nullptr,
                                          bool dealias = true, double t = 0.0) {
  return verify_vorticity_chain(u, measure_flow(u, t, nu, dealias), nu, table);
}

/// Enstrophy balance along sampled states, with time derivatives from
/// centered differences (second-order one-sided at the ends).
struct VorticityBalance {
  std::vector<double> t;
  std::vector<double> rate;        // d/dt ||w||^2 from differences
  std::vector<double> lhs;         // rate + nu ||grad w||^2
  std::vector<double> rhs;         // G a(t) ||w||^2
  std::vector<double> identity_defect;  // |rate/2 + nu ||grad w||^2 - stretching| / scale
  double tolerance = 0.0;          // interior tolerance; ends use 10x
  bool inconclusive = false;
  bool inequality_holds = true;
  bool identity_holds = true;
  double max_identity_defect = 0.0;
};

/// Checks d/dt ||w||^2 + nu ||grad w||^2 <= G ||grad u||_{B^-1}^2 ||w||^2 at
/// every sample and that the stretching integral balances the enstrophy rate.
inline VorticityBalance verify_vorticity_balance(const std::vector<FlowMeasures>& ms, double nu, double G,
                                                 double tolerance = 1e-3) {
  VorticityBalance b;
  b.tolerance = tolerance;
  const std::size_t n = ms.size();
  if (n < 3) {
    b.inconclusive = true;
    return b;
  }
  const CriterionSpec spec = CriterionSpec::make(TheoremId::T1_2);
  for (std::size_t i = 0; i < n; ++i) {
    if (!ms[i].has_dynamics) throw std::invalid_argument("vorticity balance needs measures with dynamics");
    double d = 0.0;
    if (i == 0) {
      const double h1 = ms[1].t - ms[0].t, h2 = ms[2].t - ms[1].t;
      d = -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * ms[0].enstrophy + (h1 + h2) / (h1 * h2) * ms[1].enstrophy -
          h1 / (h2 * (h1 + h2)) * ms[2].enstrophy;
    } else if (i == n - 1) {
      const double h1 = ms[n - 2].t - ms[n - 3].t, h2 = ms[n - 1].t - ms[n - 2].t;
      d = h2 / (h1 * (h1 + h2)) * ms[n - 3].enstrophy - (h1 + h2) / (h1 * h2) * ms[n - 2].enstrophy +
          (h1 + 2.0 * h2) / (h2 * (h1 + h2)) * ms[n - 1].enstrophy;
    } else {
      const double h1 = ms[i].t - ms[i - 1].t, h2 = ms[i + 1].t - ms[i].t;
      d = -h2 / (h1 * (h1 + h2)) * ms[i - 1].enstrophy + (h2 - h1) / (h1 * h2) * ms[i].enstrophy +
          h1 / (h2 * (h1 + h2)) * ms[i + 1].enstrophy;
    }
    const double diss = nu * ms[i].lap_sq;
    const double a = std::pow(criterion_value(ms[i], spec), 2.0);
    const double lhs = d + diss;
    const double rhs = G * a * ms[i].enstrophy;
    const double tol = (i == 0 || i == n - 1 ? 10.0 : 1.0) * tolerance;
    const double scale = std::abs(d) + diss + std::abs(ms[i].stretching);
    const double defect = scale > 0.0 ? std::abs(0.5 * d + diss - ms[i].stretching) / scale : 0.0;
    b.t.push_back(ms[i].t);
    b.rate.push_back(d);
    b.lhs.push_back(lhs);
    b.rhs.push_back(rhs);
    b.identity_defect.push_back(defect);
    b.max_identity_defect = std::max(b.max_identity_defect, defect);
    if (lhs > rhs + tol * scale) b.inequality_holds = false;
    if (defect > tol) b.identity_holds = false;
  }
  return b;
}

// ---------------------------------------------------------------------------
// Horizontal-gradient chain.

/// Links of the horizontal estimates:
///   horizontal_identity   int [(u.grad)u].Lap_h u = -sum_{i<=2} int d_j u_k d_i u_j d_i u_k
///   horizontal_pointwise  |that| <= int |grad u| |grad_h u|^2
///   horizontal_holder     int |grad u| |grad_h u|^2 <= ||grad_h u||_4^2 ||grad u||_2
///   a3_horizontal         ||grad_h u||_4^2 <= C ||grad_h u||_{B^-1} ||grad_h grad u||_2
///   shared_holder         int |grad_h u| |grad u|^2 <= ||grad_h u||_2 ||grad u||_4^2
///   ladyzhenskaya_gradient ||grad u||_4^2 <= C ||grad u||^(1/2) ||grad_h grad u|| ||Lap u||^(1/2)
inline ChainReport verify_horizontal_chain(const SpectralVectorField& u, const FlowMeasures& m,
                                           const ConstantsTable* table = nullptr) {
  const Grid& g = u.grid();
  ChainReport r{"horizontal", m.t};
  const auto D = detail::real_gradient(u);
  const RealVectorField us = inverse_transform_unchecked(u);
  const RealField gmag = frobenius(D[0], D[1], D[2]);
  const RealField hmag = detail::pointwise(g, [&](std::size_t x) {
    double a = 0.0;
    for (int i = 0; i < 3; ++i) a += D[i][0][x] * D[i][0][x] + D[i][1][x] * D[i][1][x];
    return std::sqrt(a);
  });
  // (u.grad)u and Lap_h u in sample space.
  double conv_lap_h = 0.0;
  for (int k = 0; k < 3; ++k) {
    const RealField lh = inverse_transform_unchecked(horizontal_laplacian(u[k]));
    for (std::size_t x = 0; x < lh.size(); ++x) {
      const double c = us[0][x] * D[k][0][x] + us[1][x] * D[k][1][x] + us[2][x] * D[k][2][x];
      conv_lap_h += c * lh[x];
    }
  }
  conv_lap_h *= g.cell_volume();
  double triple = 0.0;
  for (std::size_t x = 0; x < gmag.size(); ++x) {
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 3; ++j) {
        for (int k = 0; k < 3; ++k) triple += D[k][j][x] * D[j][i][x] * D[k][i][x];
      }
    }
  }
  triple *= -g.cell_volume();
  const double pointwise_bound = detail::integral(detail::pointwise(g, [&](std::size_t x) {
    return gmag[x] * hmag[x] * hmag[x];
  }));
  const double shared = detail::integral(detail::pointwise(g, [&](std::size_t x) {
    return hmag[x] * gmag[x] * gmag[x];
  }));
  const double h4 = lp_norm(hmag, 4.0), h2 = lp_norm(hmag, 2.0);
  const double g4 = lp_norm(gmag, 4.0), g2 = lp_norm(gmag, 2.0);
  double hg_sq = 0.0;  // ||grad_h grad u||^2
  for (int i = 0; i < 3; ++i) {
    for (int a = 1; a <= 2; ++a) hg_sq += l2_norm_sq(gradient(partial_derivative(u[i], a)));
  }
  const double hg = std::sqrt(hg_sq);
  const double lap = std::sqrt(l2_norm_sq(laplacian(u)));
  const double hb = criterion_value(m, CriterionSpec::make(TheoremId::T1_3i));

  using detail::link;
  using detail::zero_aware;
  {
    const double scale = std::abs(conv_lap_h) + std::abs(triple);
    LinkReport l{"horizontal_identity", LinkKind::Identity, {1.0 + (conv_lap_h - triple) / scale, false}, ""};
    if (!(scale > 0.0)) l.ratio = {0.0, true};
    r.links.push_back(l);
  }
  r.links.push_back(zero_aware(link("horizontal_pointwise", LinkKind::Exact, std::abs(triple), pointwise_bound),
                               triple, pointwise_bound));
  r.links.push_back(zero_aware(link("horizontal_holder", LinkKind::Exact, pointwise_bound, h4 * h4 * g2),
                               pointwise_bound, h4 * h4 * g2));
  r.links.push_back(link("a3_horizontal", LinkKind::Calibrated, h4 * h4, hb * hg, table, "link.a3_horizontal"));
  r.links.push_back(zero_aware(link("shared_holder", LinkKind::Exact, shared, h2 * g4 * g4), shared, h2 * g4 * g4));
  r.links.push_back(link("ladyzhenskaya_gradient", LinkKind::Calibrated, g4 * g4, std::sqrt(g2) * hg * std::sqrt(lap),
                         table, "link.ladyzhenskaya_gradient"));
  return r;
}

inline ChainReport verify_horizontal_chain(const SpectralVectorField& u, const ConstantsTable* table = nullptr,
                                           double t = 0.0) {
  return verify_horizontal_chain(u, measure_flow(u, t), table);
}

// ---------------------------------------------------------------------------
// Frequency splitting of u3.

struct SplitConstants {
  double bernstein_low = 1.0;   // ||Delta_j f||_inf <= C 2^{3j/2} ||Delta_j f||_2
  double bernstein_high = 1.0;  // ||Delta_j f||_inf <= C 2^{-j} max_i ||Delta_j d_i f||_inf
};

inline SplitConstants split_constants(const ConstantsTable& t) {
  return {t.value_or("link.bernstein_low", 1.0), t.value_or("link.bernstein_high", 1.0)};
}

/// Largest per-block Bernstein ratios of one field, for calibration.
inline SplitConstants split_block_ratios(const SpectralField& f) {
  const lp::BlockRange range = lp::block_range(f.grid());
  const lp::DyadicProfile profile;
  SplitConstants c{0.0, 0.0};
  const lp::BlockNorms inf = lp::block_norms(f, kInf, profile, range);
  const lp::BlockNorms two = lp::block_norms(f, 2.0, profile, range);
  std::array<lp::BlockNorms, 3> d;
  for (int i = 0; i < 3; ++i) d[i] = lp::block_norms(partial_derivative(f, i + 1), kInf, profile, range);
  for (int j = range.j_min; j <= range.j_max; ++j) {
    const double dj = std::max({d[0].at(j), d[1].at(j), d[2].at(j)});
    if (two.at(j) > 0.0) c.bernstein_low = std::max(c.bernstein_low, inf.at(j) / (std::exp2(1.5 * j) * two.at(j)));
    if (dj > 0.0) c.bernstein_high = std::max(c.bernstein_high, inf.at(j) * std::exp2(j) / dj);
  }
  return c;
}

/// sigma, its integer part, and the epsilon of the split.
struct FrequencySplitParams {
  double epsilon = 0.5;
  double sigma = 0.0;
  int split = 0;  // [sigma]
};

struct SplitReport {
  FrequencySplitParams params;
  bool skipped = false;       // u3 == 0
  bool inconclusive = false;  // sigma outside the resolvable block range
  std::string flag;
  double u3_l2 = 0.0;         // A = ||u3||_2
  double grad_besov = 0.0;    // Bn = ||grad u3||_{B^{-1+eps}_{inf,inf}}
  double linf = 0.0;          // ||u3||_inf
  double low_sum = 0.0;       // sum_{j <= [sigma]} ||Delta_j u3||_inf
  double high_sum = 0.0;      // sum_{j > [sigma]} ||Delta_j u3||_inf
  double low_bound = 0.0;     // C_B 2^{3[sigma]/2} A / (1 - 2^{-3/2})
  double high_bound = 0.0;    // C_H 2^{-eps([sigma]+1)} Bn / (1 - 2^{-eps})
  double combined_constant = 0.0;
  double combined_bound = 0.0;  // combined_constant A^{eps/(3/2+eps)} Bn^{(3/2)/(3/2+eps)}
  double balance_defect = 0.0;  // |2^{3 sigma/2} A - 2^{-eps sigma} Bn| / (2^{3 sigma/2} A)

  bool low_holds() const { return low_sum <= low_bound * (1.0 + kExactTolerance); }
  bool high_holds() const { return high_sum <= high_bound * (1.0 + kExactTolerance); }
  bool combined_holds() const { return linf <= combined_bound * (1.0 + kExactTolerance); }
  /// Silent failure: a conclusive case whose bound does not dominate.
  bool ok() const { return skipped || inconclusive || (low_holds() && high_holds() && combined_holds()); }
};

/// Splits u3 at sigma, where 2^{3 sigma/2} ||u3||_2 = 2^{-eps sigma} ||grad u3||_{B^{-1+eps}},
/// and checks both Bernstein sums and the balanced bound against ||u3||_inf.
/// The low sum runs through j = [sigma] so that the two sums cover every block.
inline SplitReport frequency_split_verify(const SpectralField& u3, double epsilon, const SplitConstants& c) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("frequency split requires 0 < epsilon < 1");
  SplitReport r;
  r.params.epsilon = epsilon;
  const Grid& g = u3.grid();
  const lp::BlockRange range = lp::block_range(g);
  const lp::DyadicProfile profile;
  r.u3_l2 = std::sqrt(l2_norm_sq(u3));
  if (!(r.u3_l2 > 0.0)) {
    r.skipped = true;
    r.flag = "u3 vanishes";
    return r;
  }
  const lp::BlockNorms inf = lp::block_norms(u3, kInf, profile, range);
  for (int i = 0; i < 3; ++i) {
    const lp::BlockNorms d = lp::block_norms(partial_derivative(u3, i + 1), kInf, profile, range);
    r.grad_besov = std::max(r.grad_besov, lp::besov_from_blocks(d, -1.0 + epsilon, kInf));
  }
  r.linf = lp_norm(inverse_transform_unchecked(remove_mean(u3)), kInf);
  const double A = r.u3_l2, B = r.grad_besov;
  r.params.sigma = std::log2(B / A) / (1.5 + epsilon);
  r.params.split = static_cast<int>(std::floor(r.params.sigma));
  const int js = r.params.split;
  for (int j = range.j_min; j <= range.j_max; ++j) (j <= js ? r.low_sum : r.high_sum) += inf.at(j);
  const double low_geom = 1.0 / (1.0 - std::exp2(-1.5));
  const double high_geom = 1.0 / (1.0 - std::exp2(-epsilon));
  r.low_bound = c.bernstein_low * low_geom * std::exp2(1.5 * js) * A;
  r.high_bound = c.bernstein_high * high_geom * std::exp2(-epsilon * (js + 1)) * B;
  r.combined_constant = c.bernstein_low * low_geom + c.bernstein_high * high_geom;
  const double theta = epsilon / (1.5 + epsilon);
  r.combined_bound = r.combined_constant * std::pow(A, theta) * std::pow(B, 1.0 - theta);
  const double left = std::exp2(1.5 * r.params.sigma) * A;
  r.balance_defect = std::abs(left - std::exp2(-epsilon * r.params.sigma) * B) / left;
  if (!(js >= range.j_min && js <= range.j_max)) {
    r.inconclusive = true;
    r.flag = "sigma=" + io::format_double(r.params.sigma) + " outside resolvable blocks " + range.to_string();
  }
  return r;
}

// ---------------------------------------------------------------------------
// Pressure chain for ||u3||_{L^q}.

/// Links of the L^q estimate of u3 with (beta, mu, q):
///   pressure_ibp          |int d3 p |u3|^{q-2} u3| <= C (q-1) int |p| |u3|^{q-2} |d3 u3|
///   pressure_holder       int |p||u3|^{q-2}|d3 u3| <= ||p||_mu ||u3||_q^{q-2} ||d3 u3||_beta
///   pressure_estimate     ||p||_mu <= C ||u||_{2 mu}^2
///   gagliardo_nirenberg   ||u||_{2mu}^2 <= C ||u||_2^{(3-mu)/mu} ||grad u||_2^{3(mu-1)/mu}
///   interpolation_a6      ||d3u3||_beta <= C ||d3u3||_{B^{2/(2-beta)}}^{1-2/beta} ||grad d3u3||_2^{2/beta}
///   hessian_bound         ||grad d3 u3||_2 <= ||Lap u||_2
inline ChainReport verify_pressure_chain(const SpectralVectorField& u, const ExponentPair& e,
                                         const ConstantsTable* table = nullptr, double beta_floor = 7.0,
                                         bool dealias = true, double t = 0.0) {
  e.validate(beta_floor);
  ChainReport r{"pressure", t};
  if (!(l2_norm_sq(u[2]) > 0.0)) {
    r.skipped = true;
    r.note = "u3 vanishes";
    return r;
  }
  const Grid& g = u.grid();
  const std::string tag = beta_tag(e.beta);
  const SpectralField p = ns::pressure_coefficients(u, dealias);
  const RealField ps = inverse_transform_unchecked(p);
  const RealField d3p = inverse_transform_unchecked(partial_derivative(p, 3));
  const RealField u3 = inverse_transform_unchecked(u[2]);
  const SpectralField d3u3_hat = partial_derivative(u[2], 3);
  const RealField d3u3 = inverse_transform_unchecked(d3u3_hat);
  const RealField speed = magnitude(inverse_transform_unchecked(u));
  const double q = e.q;

  const double ibp_lhs = std::abs(detail::integral(detail::pointwise(g, [&](std::size_t x) {
    return d3p[x] * std::pow(std::abs(u3[x]), q - 2.0) * u3[x];
  })));
  const double holder_lhs = detail::integral(detail::pointwise(g, [&](std::size_t x) {
    return std::abs(ps[x]) * std::pow(std::abs(u3[x]), q - 2.0) * std::abs(d3u3[x]);
  }));
  const double p_mu = lp_norm(ps, e.mu);
  const double u3_q = lp_norm(u3, q);
  const double d33_beta = lp_norm(d3u3, e.beta);
  const double u_2mu = lp_norm(speed, 2.0 * e.mu);
  const double u_2 = lp_norm(speed, 2.0);
  const double gu = std::sqrt(derivative_norm_sq(u, 1));
  const double besov = lp::besov_norm(d3u3_hat, {2.0 / (2.0 - e.beta), kInf, kInf}).value;
  const double grad_d33 = std::sqrt(l2_norm_sq(gradient(d3u3_hat)));
  const double lap = std::sqrt(l2_norm_sq(laplacian(u)));

  using detail::link;
  using detail::zero_aware;
  r.links.push_back(zero_aware(link("pressure_ibp", LinkKind::Calibrated, ibp_lhs, (q - 1.0) * holder_lhs, table,
                                    "link.pressure_ibp" + tag),
                               ibp_lhs, holder_lhs));
  const double holder_rhs = p_mu * std::pow(u3_q, q - 2.0) * d33_beta;
  r.links.push_back(zero_aware(link("pressure_holder", LinkKind::Exact, holder_lhs, holder_rhs), holder_lhs, holder_rhs));
  r.links.push_back(
      link("pressure_estimate", LinkKind::Calibrated, p_mu, u_2mu * u_2mu, table, "link.pressure_estimate" + tag));
  r.links.push_back(link("gagliardo_nirenberg", LinkKind::Calibrated, u_2mu * u_2mu,
                         std::pow(u_2, (3.0 - e.mu) / e.mu) * std::pow(gu, 3.0 * (e.mu - 1.0) / e.mu), table,
                         "link.gagliardo_nirenberg" + tag));
  r.links.push_back(zero_aware(link("interpolation_a6", LinkKind::Calibrated, d33_beta,
                                    std::pow(besov, 1.0 - 2.0 / e.beta) * std::pow(grad_d33, 2.0 / e.beta), table,
                                    "link.interpolation_a6" + tag),
                               d33_beta, besov));
  r.links.push_back(zero_aware(link("hessian_bound", LinkKind::Exact, grad_d33, lap), grad_d33, lap));
  return r;
}

/// Links of the three enstrophy terms K1, K2, K3 of the anisotropic estimate,
/// with 1/p + 1/q = 1/2 and q from the exponent pair:
///   k1_holder   int |d3u2|^2 |grad u| <= ||d3u2||_4^2 ||grad u||_2     (k2 likewise with u1)
///   k1_a3       ||d3u2||_4^2 <= C ||d3u2||_{B^-1} ||grad d3u2||_2
///   k3_holder   int |u3||grad u||Lap u| <= ||u3||_q ||grad u||_p ||Lap u||_2
///   k3_sobolev  ||grad u||_p <= C ||grad u||_2^{(6-p)/2p} ||Lap u||_2^{3(p-2)/2p}
inline ChainReport verify_enstrophy_terms(const SpectralVectorField& u, const FlowMeasures& m, const ExponentPair& e,
                                          const ConstantsTable* table = nullptr) {
  const Grid& g = u.grid();
  ChainReport r{"enstrophy_terms", m.t};
  const auto D = detail::real_gradient(u);
  const RealField gmag = frobenius(D[0], D[1], D[2]);
  const RealField lapmag = magnitude(inverse_transform_unchecked(laplacian(u)));
  const RealField u3 = inverse_transform_unchecked(u[2]);
  const double g2 = lp_norm(gmag, 2.0);
  const double lap = lp_norm(lapmag, 2.0);
  using detail::link;
  using detail::zero_aware;
  for (int comp : {1, 0}) {
    const std::string name = comp == 1 ? "k1" : "k2";
    const RealField& d3 = D[comp][2];
    const double lhs = detail::integral(detail::pointwise(g, [&](std::size_t x) { return d3[x] * d3[x] * gmag[x]; }));
    const double l4 = lp_norm(d3, 4.0);
    r.links.push_back(zero_aware(link(name + "_holder", LinkKind::Exact, lhs, l4 * l4 * g2), lhs, l4 * l4 * g2));
    const double b = lp::besov_from_blocks(m.grad[comp][2], -1.0, kInf);
    const double gd = std::sqrt(l2_norm_sq(gradient(partial_derivative(u[comp], 3))));
    r.links.push_back(zero_aware(link(name + "_a3", LinkKind::Calibrated, l4 * l4, b * gd, table, "link.k_a3"),
                                 l4, b * gd));
  }
  const double q = e.q;
  const double p = 2.0 * q / (q - 2.0);
  const double lhs3 =
      detail::integral(detail::pointwise(g, [&](std::size_t x) { return std::abs(u3[x]) * gmag[x] * lapmag[x]; }));
  const double gp = lp_norm(gmag, p);
  const double rhs3 = lp_norm(u3, q) * gp * lap;
  r.links.push_back(zero_aware(link("k3_holder", LinkKind::Exact, lhs3, rhs3), lhs3, rhs3));
  r.links.push_back(link("k3_sobolev", LinkKind::Calibrated, gp,
                         std::pow(g2, (6.0 - p) / (2.0 * p)) * std::pow(lap, 3.0 * (p - 2.0) / (2.0 * p)), table,
                         "link.k3_sobolev" + beta_tag(e.beta)));
  return r;
}

inline ChainReport verify_enstrophy_terms(const SpectralVectorField& u, const ExponentPair& e,
                                          const ConstantsTable* table = nullptr, double t = 0.0) {
  return verify_enstrophy_terms(u, measure_flow(u, t), e, table);
}

// ---------------------------------------------------------------------------
// Ladyzhenskaya-type inequalities.

struct LadyzhenskayaReport {
  double r = 2.0;
  lp::Ratio isotropic;    // ||f||_r / (||f||_2^{(6-r)/2r} ||grad f||_2^{3(r-2)/2r})
  lp::Ratio anisotropic;  // ||f||_r / (||f||_2^{(6-r)/2r} prod_i ||d_i f||_2^{(r-2)/2r})
  /// Some d_i f vanishes: the anisotropic form degenerates on the torus.
  bool degenerate = false;
};

inline LadyzhenskayaReport verify_ladyzhenskaya(const SpectralField& f, double r) {
  if (!(r >= 2.0 && r <= 6.0)) throw std::invalid_argument("Ladyzhenskaya check requires 2 <= r <= 6");
  LadyzhenskayaReport rep;
  rep.r = r;
  const RealField fs = inverse_transform_unchecked(f);
  const double fr = lp_norm(fs, r);
  // Same quadrature on both sides, so r = 2 gives exactly 1.
  const double f2 = lp_norm(fs, 2.0);
  const double a = (6.0 - r) / (2.0 * r);
  const double b = (r - 2.0) / (2.0 * r);
  double prod = 1.0;
  double grad_sq = 0.0;
  for (int i = 1; i <= 3; ++i) {
    const double di = std::sqrt(l2_norm_sq(partial_derivative(f, i)));
    if (!(di > 0.0)) rep.degenerate = true;
    grad_sq += di * di;
    prod *= std::pow(di, b);
  }
  rep.isotropic = lp::Ratio::of(fr, std::pow(f2, a) * std::pow(std::sqrt(grad_sq), 3.0 * b));
  rep.anisotropic = rep.degenerate && r > 2.0 ? lp::Ratio{0.0, true} : lp::Ratio::of(fr, std::pow(f2, a) * prod);
  return rep;
}

}  // namespace besovns::monitor
