#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "besovns/error.hpp"
#include "besovns/ns/state.hpp"

namespace besovns::ns {

/// Binary checkpoint, all values little-endian:
///   bytes 0-7    magic "BESOVNS1"
///   int32        n
///   float64      t
///   float64      nu
///   3 n^3 x (float64 re, float64 im)
/// Coefficients are ordered by component (u1, u2, u3), then by flat index
/// (i1 * n + i2) * n + i3 where index i on an axis carries wavenumber i for
/// i <= n/2 and i - n otherwise. Reading it back restores the state bit for bit.
inline constexpr std::array<char, 8> kCheckpointMagic{'B', 'E', 'S', 'O', 'V', 'N', 'S', '1'};

struct Checkpoint {
  FlowState state;
  double nu = 0.0;
};

namespace detail {

template <class T>
void put(std::ostream& os, T v) {
  std::array<char, sizeof(T)> b;
  std::memcpy(b.data(), &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b.begin(), b.end());
  os.write(b.data(), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  std::array<char, sizeof(T)> b;
  if (!is.read(b.data(), sizeof(T))) throw Error("checkpoint is truncated");
  if constexpr (std::endian::native == std::endian::big) std::reverse(b.begin(), b.end());
  T v;
  std::memcpy(&v, b.data(), sizeof(T));
  return v;
}

}  // namespace detail

inline void write_checkpoint(const std::filesystem::path& path, const FlowState& s, double nu) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error("cannot open checkpoint for writing: " + path.string());
  os.write(kCheckpointMagic.data(), kCheckpointMagic.size());
  detail::put<std::int32_t>(os, s.u.grid().n());
  detail::put<double>(os, s.t);
  detail::put<double>(os, nu);
  for (const auto& c : s.u) {
    for (const auto& z : c.values()) {
      detail::put<double>(os, z.real());
      detail::put<double>(os, z.imag());
    }
  }
  if (!os) throw Error("failed writing checkpoint: " + path.string());
}

inline Checkpoint read_checkpoint(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open checkpoint: " + path.string());
  std::array<char, 8> magic{};
  if (!is.read(magic.data(), magic.size()) || magic != kCheckpointMagic) {
    throw Error("not a checkpoint file: " + path.string());
  }
  const auto n = detail::get<std::int32_t>(is);
  const Grid g(n);
  const double t = detail::get<double>(is);
  const double nu = detail::get<double>(is);
  SpectralVectorField u(g);
  for (auto& c : u) {
    for (auto& z : c.values()) {
      const double re = detail::get<double>(is);
      const double im = detail::get<double>(is);
      z = Complex{re, im};
    }
  }
  return {FlowState{t, std::move(u)}, nu};
}

}  // namespace besovns::ns
