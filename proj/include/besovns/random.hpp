#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "besovns/fft.hpp"
#include "besovns/field.hpp"
#include "besovns/operators.hpp"

namespace besovns {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Generator seeded from (seed, component, k) alone, so a band-limited field
/// does not depend on the grid it is drawn on.
inline std::mt19937_64 mode_rng(std::uint64_t seed, int component, const Wavevector& k) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(component + 1));
  h = splitmix64(h ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(k.k1)));
  h = splitmix64(h ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(k.k2)));
  h = splitmix64(h ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(k.k3)));
  return std::mt19937_64(h);
}

/// One representative of each {k, -k} pair.
inline bool canonical_half(const Wavevector& k) {
  if (k.k1 != 0) return k.k1 > 0;
  if (k.k2 != 0) return k.k2 > 0;
  return k.k3 > 0;
}

}  // namespace detail

/// Shape of a random spectrum: coefficients ~ N(0,1) * |k|^slope for 0 < |k| <= band.
struct RandomSpectrum {
  double slope = -2.0;
  double band = 5.0;
};

/// Mean-zero Hermitian random field. Modes on a Nyquist plane are left at zero,
/// as is everything outside the band.
inline SpectralField random_spectral_field(const Grid& g, std::uint64_t seed, int component,
                                           const RandomSpectrum& spec = {}) {
  SpectralField F(g);
  std::normal_distribution<double> normal(0.0, 1.0);
  g.for_each_mode([&](std::size_t i, const Wavevector& k) {
    if (!detail::canonical_half(k)) return;
    if (g.is_nyquist(k.k1) || g.is_nyquist(k.k2) || g.is_nyquist(k.k3)) return;
    const double r = k.norm();
    if (r > spec.band) return;
    auto rng = detail::mode_rng(seed, component, k);
    const double re = normal(rng);
    const double im = normal(rng);
    const Complex c = std::pow(r, spec.slope) * Complex{re, im};
    F[i] = c;
    F[g.conjugate_index(i)] = std::conj(c);
  });
  return F;
}

inline SpectralVectorField random_spectral_vector(const Grid& g, std::uint64_t seed, const RandomSpectrum& spec = {}) {
  return {random_spectral_field(g, seed, 0, spec), random_spectral_field(g, seed, 1, spec),
          random_spectral_field(g, seed, 2, spec)};
}

/// Independent uniform(-1, 1) samples, including the Nyquist content.
inline RealField white_noise(const Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(detail::splitmix64(seed));
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  RealField f(g);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = u(rng);
  return f;
}

/// A random field times a periodised Gaussian envelope of the given width
/// centred at a seeded point, then dealiased and made mean-zero. Unlike
/// random_spectral_field, which fills the box, its energy sits in a ball.
inline SpectralField random_wave_packet(const Grid& g, std::uint64_t seed, double width,
                                        const RandomSpectrum& spec = {}, int component = 2) {
  RealField f = inverse_transform_unchecked(random_spectral_field(g, seed, component, spec));
  std::mt19937_64 rng(detail::splitmix64(seed ^ 0x5eedULL));
  std::uniform_real_distribution<double> pos(0.0, g.box_length());
  const double c[3] = {pos(rng), pos(rng), pos(rng)};
  const double L = g.box_length();
  g.for_each_point([&](std::size_t i, double x1, double x2, double x3) {
    double r2 = 0.0;
    for (const double d : {x1 - c[0], x2 - c[1], x3 - c[2]}) {
      const double w = std::remainder(d, L);
      r2 += w * w;
    }
    f[i] *= std::exp(-r2 / (2.0 * width * width));
  });
  return remove_mean(dealias(forward_transform(f)));
}

}  // namespace besovns
