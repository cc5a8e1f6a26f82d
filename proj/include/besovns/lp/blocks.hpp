#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "besovns/field.hpp"
#include "besovns/lp/profile.hpp"

namespace besovns::lp {

namespace detail {

/// phi(2^-j |k|) for every mode of an n-grid (k = 0 gets 0). The profile has
/// no parameters, so tables are shared per (n, j).
inline const std::vector<double>& block_weights(const Grid& g, int j) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<std::vector<double>>> cache;
  const std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{g.n(), j}];
  if (!slot) {
    const DyadicProfile profile;
    auto w = std::make_unique<std::vector<double>>(g.size());
    g.for_each_mode([&](std::size_t i, const Wavevector& k) { (*w)[i] = k.is_zero() ? 0.0 : profile.phi_j(k.norm(), j); });
    slot = std::move(w);
  }
  return *slot;
}

}  // namespace detail

/// Homogeneous block: c_k <- phi(2^-j |k|) c_k, with k = 0 always dropped.
inline SpectralField dyadic_block(const SpectralField& f, int j, const DyadicProfile& = {}) {
  const auto& w = detail::block_weights(f.grid(), j);
  SpectralField out(f);
  auto v = out.values();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= w[i];
  return out;
}

/// Low-pass: c_k <- chi(2^-j |k|) c_k. Keeps the mean.
inline SpectralField low_pass(const SpectralField& f, int j, const DyadicProfile& profile = {}) {
  return f.multiplied([&](const Wavevector& k) { return profile.chi_j(k.norm(), j); });
}

}  // namespace besovns::lp
