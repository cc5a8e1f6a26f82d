#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>

namespace besovns {

/// Integer wavevector on the periodic lattice.
struct Wavevector {
  int k1 = 0;
  int k2 = 0;
  int k3 = 0;

  int operator[](int axis) const { return axis == 1 ? k1 : (axis == 2 ? k2 : k3); }
  int norm_sq() const { return k1 * k1 + k2 * k2 + k3 * k3; }
  double norm() const { return std::sqrt(static_cast<double>(norm_sq())); }
  int max_abs() const;
  bool is_zero() const { return k1 == 0 && k2 == 0 && k3 == 0; }
  friend bool operator==(const Wavevector&, const Wavevector&) = default;
};

inline int Wavevector::max_abs() const {
  int a = std::abs(k1), b = std::abs(k2), c = std::abs(k3);
  return a > b ? (a > c ? a : c) : (b > c ? b : c);
}

/// Uniform n^3 discretization of the periodic box [0, 2*pi)^3.
///
/// Samples are stored row-major with axis 1 slowest: flat(i1, i2, i3) =
/// (i1 * n + i2) * n + i3. The same layout is used for coefficients, where
/// index i on an axis carries wavenumber i for i <= n/2 and i - n otherwise,
/// so each axis covers {-n/2+1, ..., n/2}.
class Grid {
 public:
  explicit Grid(int n) : n_(n) {
    if (n < 8 || n % 2 != 0) {
      throw std::invalid_argument("grid size must be even and >= 8, got " + std::to_string(n));
    }
  }

  int n() const noexcept { return n_; }
  std::size_t size() const noexcept {
    return static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_);
  }
  static constexpr double box_length() noexcept { return 2.0 * std::numbers::pi; }
  double spacing() const noexcept { return box_length() / n_; }
  double cell_volume() const noexcept { return spacing() * spacing() * spacing(); }
  static constexpr double volume() noexcept { return box_length() * box_length() * box_length(); }

  int nyquist() const noexcept { return n_ / 2; }
  /// Largest |k_i| retained by the 2/3 rule.
  int dealias_limit() const noexcept { return n_ / 3; }

  int wavenumber(int index) const noexcept { return index <= n_ / 2 ? index : index - n_; }
  int index_of(int k) const noexcept { return ((k % n_) + n_) % n_; }
  bool is_nyquist(int k) const noexcept { return k == n_ / 2 || k == -n_ / 2; }

  std::size_t flat(int i1, int i2, int i3) const noexcept {
    return (static_cast<std::size_t>(i1) * n_ + static_cast<std::size_t>(i2)) * n_ + static_cast<std::size_t>(i3);
  }
  std::size_t flat_of(const Wavevector& k) const noexcept {
    return flat(index_of(k.k1), index_of(k.k2), index_of(k.k3));
  }
  Wavevector wavevector(std::size_t flat_index) const noexcept {
    const auto nn = static_cast<std::size_t>(n_);
    const int i3 = static_cast<int>(flat_index % nn);
    const int i2 = static_cast<int>((flat_index / nn) % nn);
    const int i1 = static_cast<int>(flat_index / (nn * nn));
    return {wavenumber(i1), wavenumber(i2), wavenumber(i3)};
  }
  /// Flat index of -k (mod n on each axis).
  std::size_t conjugate_index(std::size_t flat_index) const noexcept {
    const Wavevector k = wavevector(flat_index);
    return flat(index_of(-k.k1), index_of(-k.k2), index_of(-k.k3));
  }

  double coordinate(int index) const noexcept { return index * spacing(); }

  /// Visit every mode: f(flat_index, wavevector).
  template <class F>
  void for_each_mode(F&& f) const {
    std::size_t idx = 0;
    for (int i1 = 0; i1 < n_; ++i1) {
      const int k1 = wavenumber(i1);
      for (int i2 = 0; i2 < n_; ++i2) {
        const int k2 = wavenumber(i2);
        for (int i3 = 0; i3 < n_; ++i3, ++idx) {
          f(idx, Wavevector{k1, k2, wavenumber(i3)});
        }
      }
    }
  }

  /// Visit every sample point: f(flat_index, x1, x2, x3).
  template <class F>
  void for_each_point(F&& f) const {
    const double h = spacing();
    std::size_t idx = 0;
    for (int i1 = 0; i1 < n_; ++i1) {
      for (int i2 = 0; i2 < n_; ++i2) {
        for (int i3 = 0; i3 < n_; ++i3, ++idx) {
          f(idx, i1 * h, i2 * h, i3 * h);
        }
      }
    }
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int n_;
};

/// Wavenumber used by odd-order derivative symbols: zero on the Nyquist plane.
inline int derivative_wavenumber(const Grid& g, int k) noexcept { return g.is_nyquist(k) ? 0 : k; }

/// True if every |k_i| is within the 2/3-rule band.
inline bool within_dealias_band(const Grid& g, const Wavevector& k) noexcept {
  return k.max_abs() <= g.dealias_limit();
}

}  // namespace besovns
