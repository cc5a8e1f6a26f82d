#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "besovns/fft.hpp"
#include "besovns/lp/blocks.hpp"
#include "besovns/lp/profile.hpp"
#include "besovns/norms.hpp"

namespace besovns::lp {

/// Exponent triple of the homogeneous Besov space B^s_{p,q}.
struct BesovIndex {
  double s = 0.0;
  double p = 2.0;
  double q = 2.0;

  void validate() const {
    require_exponent(p, "p");
    require_exponent(q, "q");
  }
};

/// Spectral share of L2 energy in blocks cut by the grid above which a norm is flagged.
inline constexpr double kTopBlockShareLimit = 0.01;

/// ||Delta_j f||_{L^p} for every j in a range, plus bookkeeping shared by all
/// Besov norms built from them.
struct BlockNorms {
  BlockRange range;
  double p = 2.0;
  std::vector<double> norms;
  bool mean_ignored = false;
  double top_block_share = 0.0;

  double at(int j) const { return range.contains(j) ? norms[static_cast<std::size_t>(j - range.j_min)] : 0.0; }
};

inline BlockNorms block_norms(const SpectralField& f, double p, const DyadicProfile& profile, const BlockRange& range) {
  require_exponent(p);
  const Grid& g = f.grid();
  BlockNorms out;
  out.range = range;
  out.p = p;
  out.mean_ignored = std::abs(f.mean()) > 0.0;
  double total = 0.0;
  double truncated = 0.0;
  for (int j = range.j_min; j <= range.j_max; ++j) {
    const SpectralField b = dyadic_block(f, j, profile);
    double energy = 0.0;
    for (const auto& c : b.values()) energy += std::norm(c);
    total += energy;
    if (block_truncated(g, j)) truncated += energy;
    out.norms.push_back(energy == 0.0 ? 0.0 : lp_norm(inverse_transform_unchecked(b), p));
  }
  out.top_block_share = total > 0.0 ? truncated / total : 0.0;
  return out;
}

inline BlockNorms block_norms(const SpectralField& f, double p) {
  return block_norms(f, p, build_profile(), block_range(f.grid()));
}

/// Block norms of a vector or tensor quantity measured with the pointwise
/// Euclidean magnitude: n_j = || |(Delta_j c_1, ..., Delta_j c_m)| ||_{L^p}.
inline BlockNorms block_norms_magnitude(const std::vector<const SpectralField*>& comps, double p) {
  require_exponent(p);
  if (comps.empty()) throw std::invalid_argument("magnitude block norms need at least one component");
  const Grid& g = comps.front()->grid();
  const DyadicProfile profile = build_profile();
  BlockNorms out;
  out.range = block_range(g);
  out.p = p;
  double total = 0.0;
  double truncated = 0.0;
  for (int j = out.range.j_min; j <= out.range.j_max; ++j) {
    RealField mag(g);
    double energy = 0.0;
    for (const auto* c : comps) {
      if (std::abs(c->mean()) > 0.0) out.mean_ignored = true;
      const SpectralField b = dyadic_block(*c, j, profile);
      for (const auto& z : b.values()) energy += std::norm(z);
      const RealField x = inverse_transform_unchecked(b);
      for (std::size_t i = 0; i < mag.size(); ++i) mag[i] += x[i] * x[i];
    }
    for (auto& v : mag.values()) v = std::sqrt(v);
    total += energy;
    if (block_truncated(g, j)) truncated += energy;
    out.norms.push_back(lp_norm(mag, p));
  }
  out.top_block_share = total > 0.0 ? truncated / total : 0.0;
  return out;
}

/// (sum_j (2^{js} n_j)^q)^{1/q}, or sup_j 2^{js} n_j for q = infinity.
inline double besov_from_blocks(const BlockNorms& b, double s, double q) {
  require_exponent(q, "q");
  double acc = 0.0;
  for (int j = b.range.j_min; j <= b.range.j_max; ++j) {
    const double t = std::exp2(j * s) * b.at(j);
    if (std::isinf(q)) {
      acc = std::max(acc, t);
    } else {
      acc += std::pow(t, q);
    }
  }
  return std::isinf(q) ? acc : std::pow(acc, 1.0 / q);
}

struct BesovResult {
  double value = 0.0;
  BlockRange range;
  bool mean_ignored = false;
  bool empty_range = false;
  double top_block_share = 0.0;
  bool top_block_flag = false;
};

inline BesovResult besov_norm(const SpectralField& f, const BesovIndex& idx, const DyadicProfile& profile,
                              const BlockRange& range) {
  idx.validate();
  BesovResult r;
  r.range = range;
  if (range.empty()) {
    r.empty_range = true;
    r.mean_ignored = std::abs(f.mean()) > 0.0;
    return r;
  }
  const BlockNorms b = block_norms(f, idx.p, profile, range);
  r.value = besov_from_blocks(b, idx.s, idx.q);
  r.mean_ignored = b.mean_ignored;
  r.top_block_share = b.top_block_share;
  r.top_block_flag = b.top_block_share > kTopBlockShareLimit;
  return r;
}

inline BesovResult besov_norm(const SpectralField& f, const BesovIndex& idx) {
  return besov_norm(f, idx, build_profile(), block_range(f.grid()));
}

/// Max over components, the vector convention used throughout.
inline double besov_norm_max(const std::vector<const SpectralField*>& comps, const BesovIndex& idx) {
  double m = 0.0;
  for (const auto* c : comps) m = std::max(m, besov_norm(*c, idx).value);
  return m;
}

inline double besov_norm_max(const SpectralVectorField& v, const BesovIndex& idx) {
  return besov_norm_max({&v[0], &v[1], &v[2]}, idx);
}

/// (sum_{k != 0} |k|^{2s} |c_k|^2 (2 pi)^3)^{1/2}.
inline double sobolev_seminorm(const SpectralField& f, double s) {
  double acc = 0.0;
  f.grid().for_each_mode([&](std::size_t i, const Wavevector& k) {
    if (k.is_zero()) return;
    acc += std::pow(static_cast<double>(k.norm_sq()), s) * std::norm(f[i]);
  });
  return std::sqrt(Grid::volume() * acc);
}

}  // namespace besovns::lp
