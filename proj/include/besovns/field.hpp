#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <new>
#include <span>
#include <type_traits>
#include <utility>
#include <vector>

#include "besovns/error.hpp"
#include "besovns/grid.hpp"

namespace besovns {

using Complex = std::complex<double>;

/// 64-byte aligned storage so FFTW can use its SIMD code paths.
template <class T>
struct AlignedAllocator {
  using value_type = T;
  static constexpr std::size_t kAlignment = 64;

  AlignedAllocator() noexcept = default;
  template <class U>
  AlignedAllocator(const AlignedAllocator<U>&) noexcept {}

  T* allocate(std::size_t n) {
    const std::size_t bytes = ((n * sizeof(T) + kAlignment - 1) / kAlignment) * kAlignment;
    void* p = std::aligned_alloc(kAlignment, bytes == 0 ? kAlignment : bytes);
    if (p == nullptr) throw std::bad_alloc();
    return static_cast<T*>(p);
  }
  void deallocate(T* p, std::size_t) noexcept { std::free(p); }

  template <class U>
  bool operator==(const AlignedAllocator<U>&) const noexcept {
    return true;
  }
};

template <class T>
using AlignedVector = std::vector<T, AlignedAllocator<T>>;

/// Scalar field sampled on the grid points x_j = j * spacing.
class RealField {
 public:
  explicit RealField(Grid grid) : grid_(grid), samples_(grid.size(), 0.0) {}
  RealField(Grid grid, const std::vector<double>& samples)
      : grid_(grid), samples_(samples.begin(), samples.end()) {
    if (samples_.size() != grid_.size()) throw std::invalid_argument("sample count does not match grid");
  }
  RealField(Grid grid, AlignedVector<double> samples) : grid_(grid), samples_(std::move(samples)) {
    if (samples_.size() != grid_.size()) throw std::invalid_argument("sample count does not match grid");
  }

  const Grid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return samples_; }
  std::span<double> values() noexcept { return samples_; }
  double operator[](std::size_t i) const noexcept { return samples_[i]; }
  double& operator[](std::size_t i) noexcept { return samples_[i]; }
  std::size_t size() const noexcept { return samples_.size(); }

  /// Samples f(x1, x2, x3) at every grid point.
  template <class F>
  static RealField sample(const Grid& grid, F&& f) {
    RealField out(grid);
    grid.for_each_point([&](std::size_t i, double x1, double x2, double x3) { out.samples_[i] = f(x1, x2, x3); });
    return out;
  }

 private:
  Grid grid_;
  AlignedVector<double> samples_;
};

/// Fourier coefficients c_k of a real field, normalized so that
///   f(x) = sum_k c_k exp(i k.x),   c_k = n^-3 sum_j f(x_j) exp(-i k.x_j).
/// With this choice forward/inverse are exact inverses and
///   sum_k |c_k|^2 = (2 pi)^-3 * integral |f|^2  (Riemann sum on the grid).
class SpectralField {
 public:
  explicit SpectralField(Grid grid) : grid_(grid), coeffs_(grid.size(), Complex{0.0, 0.0}) {}
  SpectralField(Grid grid, const std::vector<Complex>& coeffs)
      : grid_(grid), coeffs_(coeffs.begin(), coeffs.end()) {
    if (coeffs_.size() != grid_.size()) throw std::invalid_argument("coefficient count does not match grid");
  }
  SpectralField(Grid grid, AlignedVector<Complex> coeffs) : grid_(grid), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != grid_.size()) throw std::invalid_argument("coefficient count does not match grid");
  }

  const Grid& grid() const noexcept { return grid_; }
  std::span<const Complex> values() const noexcept { return coeffs_; }
  std::span<Complex> values() noexcept { return coeffs_; }
  const Complex& operator[](std::size_t i) const noexcept { return coeffs_[i]; }
  Complex& operator[](std::size_t i) noexcept { return coeffs_[i]; }
  const Complex& at(const Wavevector& k) const { return coeffs_[grid_.flat_of(k)]; }
  Complex& at(const Wavevector& k) { return coeffs_[grid_.flat_of(k)]; }
  std::size_t size() const noexcept { return coeffs_.size(); }

  Complex mean() const noexcept { return coeffs_[0]; }

  /// Apply a real multiplier m(k) mode by mode.
  template <class M>
  SpectralField multiplied(M&& m) const {
    SpectralField out(*this);
    grid_.for_each_mode([&](std::size_t i, const Wavevector& k) { out.coeffs_[i] *= m(k); });
    return out;
  }

  SpectralField& operator+=(const SpectralField& o) {
    check_same_grid(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  SpectralField& operator-=(const SpectralField& o) {
    check_same_grid(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
  }
  SpectralField& operator*=(double a) {
    for (auto& c : coeffs_) c *= a;
    return *this;
  }
  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

 private:
  void check_same_grid(const SpectralField& o) const {
    if (!(o.grid_ == grid_)) throw GridMismatchError("spectral fields live on different grids");
  }

  Grid grid_;
  AlignedVector<Complex> coeffs_;
};

enum class Representation { Samples, Coefficients };

template <class F>
constexpr Representation representation_of() {
  if constexpr (std::is_same_v<F, RealField>) {
    return Representation::Samples;
  } else {
    return Representation::Coefficients;
  }
}

/// Three components sharing one grid and one representation.
template <class F>
class VectorField {
 public:
  VectorField(F c1, F c2, F c3) : c_{std::move(c1), std::move(c2), std::move(c3)} {
    if (!(c_[0].grid() == c_[1].grid()) || !(c_[0].grid() == c_[2].grid())) {
      throw GridMismatchError("vector components live on different grids");
    }
  }
  explicit VectorField(const Grid& g) : c_{F(g), F(g), F(g)} {}

  static constexpr Representation representation() { return representation_of<F>(); }
  const Grid& grid() const noexcept { return c_[0].grid(); }

  /// Component by zero-based index.
  const F& operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  F& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }
  /// Component by one-based axis, matching u_1, u_2, u_3.
  const F& axis(int a) const { return c_[static_cast<std::size_t>(a - 1)]; }

  auto begin() const { return c_.begin(); }
  auto end() const { return c_.end(); }
  auto begin() { return c_.begin(); }
  auto end() { return c_.end(); }

 private:
  std::array<F, 3> c_;
};

using RealVectorField = VectorField<RealField>;
using SpectralVectorField = VectorField<SpectralField>;

inline SpectralVectorField operator+(const SpectralVectorField& a, const SpectralVectorField& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
inline SpectralVectorField operator-(const SpectralVectorField& a, const SpectralVectorField& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
inline SpectralVectorField operator*(double s, const SpectralVectorField& a) {
  return {s * a[0], s * a[1], s * a[2]};
}

}  // namespace besovns
