#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "besovns/fft.hpp"
#include "besovns/lp/besov.hpp"
#include "besovns/norms.hpp"
#include "besovns/operators.hpp"

namespace besovns::lp {

/// A measured ratio, or a skip when its denominator vanished.
struct Ratio {
  double value = 0.0;
  bool skipped = false;

  static Ratio of(double num, double den) {
    if (!(den > 0.0) || !std::isfinite(den)) return {0.0, true};
    return {num / den, false};
  }
};

struct BernsteinReport {
  int j = 0;
  int order = 0;
  double p = 2.0;
  double q = 2.0;
  /// sup_{|a|=k} ||d^a f||_q / (lambda^{k + 3(1/p - 1/q)} ||f||_p)
  Ratio upper;
  /// lambda^k ||f||_p / sup_{|a|=k} ||d^a f||_p, only for p == q
  Ratio lower;
  /// || |grad f| ||_q / (lambda^{1 + 3(1/p - 1/q)} ||f||_p), only for order 1
  Ratio gradient;
  bool skipped = false;
};

namespace detail {

inline double inv(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

/// All multi-indices (a1, a2, a3) with a1 + a2 + a3 = k.
inline std::vector<std::array<int, 3>> multi_indices(int k) {
  std::vector<std::array<int, 3>> out;
  for (int a = 0; a <= k; ++a) {
    for (int b = 0; a + b <= k; ++b) out.push_back({a, b, k - a - b});
  }
  return out;
}

inline SpectralField apply_derivative(SpectralField f, const std::array<int, 3>& a) {
  for (int axis = 0; axis < 3; ++axis) {
    for (int m = 0; m < a[static_cast<std::size_t>(axis)]; ++m) f = partial_derivative(f, axis + 1);
  }
  return f;
}

}  // namespace detail

/// Measures both Bernstein directions on a band-limited field with lambda = 2^j.
inline BernsteinReport check_bernstein(const SpectralField& f_band, int j, int order, double p, double q) {
  require_exponent(p, "p");
  require_exponent(q, "q");
  if (q < p) throw std::invalid_argument("Bernstein check requires q >= p");
  if (order < 0) throw std::invalid_argument("derivative order must be nonnegative");
  BernsteinReport r;
  r.j = j;
  r.order = order;
  r.p = p;
  r.q = q;
  const double fp = lp_norm(inverse_transform(f_band), p);
  if (!(fp > 0.0)) {
    r.skipped = true;
    r.upper = r.lower = r.gradient = {0.0, true};
    return r;
  }
  const double lambda = std::ldexp(1.0, j);
  double sup_q = 0.0;
  double sup_p = 0.0;
  for (const auto& a : detail::multi_indices(order)) {
    const RealField d = inverse_transform(detail::apply_derivative(f_band, a));
    sup_q = std::max(sup_q, lp_norm(d, q));
    if (p == q) sup_p = std::max(sup_p, lp_norm(d, p));
  }
  const double scale = std::pow(lambda, order + 3.0 * (detail::inv(p) - detail::inv(q)));
  r.upper = Ratio::of(sup_q, scale * fp);
  r.lower = p == q ? Ratio::of(std::pow(lambda, order) * fp, sup_p) : Ratio{0.0, true};
  if (order == 1) {
    const double gq = lp_norm(inverse_transform(gradient(f_band)), q);
    r.gradient = Ratio::of(gq, std::pow(lambda, 1.0 + 3.0 * (detail::inv(p) - detail::inv(q))) * fp);
  } else {
    r.gradient = {0.0, true};
  }
  return r;
}

/// alpha, beta, p, q, theta tied by beta = alpha (p/q - 1) and theta = q/p.
struct InterpolationSpec {
  double alpha = 1.0;
  double beta = 1.0;
  double p = 4.0;
  double q = 2.0;
  double theta = 0.5;

  void validate() const {
    if (!(alpha > 0.0)) throw std::invalid_argument("interpolation requires alpha > 0");
    if (!(q >= 1.0 && q < p && std::isfinite(p))) throw std::invalid_argument("interpolation requires 1 <= q < p < inf");
    if (std::abs(beta - alpha * (p / q - 1.0)) > 1e-12) throw std::invalid_argument("beta must equal alpha (p/q - 1)");
    if (std::abs(theta - q / p) > 1e-12) throw std::invalid_argument("theta must equal q/p");
  }

  static InterpolationSpec make(double alpha, double p, double q) {
    return {alpha, alpha * (p / q - 1.0), p, q, q / p};
  }
  /// L^4 against B^{-1}_{inf,inf} and H^1.
  static InterpolationSpec a3() { return make(1.0, 4.0, 2.0); }
  /// L^6 against B^{-1/2}_{inf,inf} and H^1.
  static InterpolationSpec a4_6() { return make(0.5, 6.0, 2.0); }
  /// L^3 against B^{-2}_{inf,inf} and H^1.
  static InterpolationSpec a4_3() { return make(2.0, 3.0, 2.0); }
};

/// ||f||_p / (||f||_{B^{-alpha}_{inf,inf}}^{1-theta} ||f||_{B^beta_{q,q}}^theta).
/// The q = 2 factor is evaluated as the H^beta seminorm.
inline Ratio interpolation_ratio(const SpectralField& f, const InterpolationSpec& spec) {
  spec.validate();
  const double lhs = lp_norm(inverse_transform(remove_mean(f)), spec.p);
  const double low = besov_norm(f, {-spec.alpha, kInf, kInf}).value;
  const double high = spec.q == 2.0 ? sobolev_seminorm(f, spec.beta) : besov_norm(f, {spec.beta, spec.q, spec.q}).value;
  return Ratio::of(lhs, std::pow(low, 1.0 - spec.theta) * std::pow(high, spec.theta));
}

/// ||f||_{B^{theta s1 + (1-theta) s2}_{p,r}} / (||f||_{B^{s1}_{p,r}}^theta ||f||_{B^{s2}_{p,r}}^{1-theta}).
/// Sequence Hoelder makes this <= 1 for every r.
inline Ratio besov_interpolation_ratio(const SpectralField& f, double s1, double s2, double theta, double p, double r) {
  if (!(s1 < s2)) throw std::invalid_argument("Besov interpolation requires s1 < s2");
  if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("Besov interpolation requires 0 < theta < 1");
  const BlockNorms b = block_norms(f, p);
  const double lhs = besov_from_blocks(b, theta * s1 + (1.0 - theta) * s2, r);
  const double a = besov_from_blocks(b, s1, r);
  const double c = besov_from_blocks(b, s2, r);
  return Ratio::of(lhs, std::pow(a, theta) * std::pow(c, 1.0 - theta));
}

/// ||f||_{B^{-3/p}_{inf,inf}} / ||f||_{L^p}.
inline Ratio embedding_ratio(const SpectralField& f, double p) {
  require_exponent(p);
  const double num = besov_norm(f, {-3.0 * detail::inv(p), kInf, kInf}).value;
  return Ratio::of(num, lp_norm(inverse_transform(remove_mean(f)), p));
}

/// g(x) = f(2x), placed on a grid twice as fine so every mode of f survives.
/// L^p norms are preserved exactly and block j of f becomes block j+1 of g.
inline SpectralField dilate_by_two(const SpectralField& f) {
  const Grid& g = f.grid();
  const Grid fine(2 * g.n());
  SpectralField out(fine);
  g.for_each_mode([&](std::size_t i, const Wavevector& k) { out.at({2 * k.k1, 2 * k.k2, 2 * k.k3}) = f[i]; });
  return out;
}

inline SpectralVectorField dilate_by_two(const SpectralVectorField& v) {
  return {dilate_by_two(v[0]), dilate_by_two(v[1]), dilate_by_two(v[2])};
}

}  // namespace besovns::lp
