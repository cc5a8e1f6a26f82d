#pragma once

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <vector>

#include "besovns/error.hpp"
#include "besovns/field.hpp"

namespace besovns {

namespace detail {

/// Owns one forward and one backward out-of-place c2c plan for an n^3 grid.
class FftPlans {
 public:
  explicit FftPlans(int n) {
    const std::size_t total = static_cast<std::size_t>(n) * n * n;
    auto* a = fftw_alloc_complex(total);
    auto* b = fftw_alloc_complex(total);
    alignment_ = fftw_alignment_of(reinterpret_cast<double*>(a));
    forward_ = fftw_plan_dft_3d(n, n, n, a, b, FFTW_FORWARD, FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_3d(n, n, n, a, b, FFTW_BACKWARD, FFTW_ESTIMATE);
    forward_unaligned_ = fftw_plan_dft_3d(n, n, n, a, b, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    backward_unaligned_ = fftw_plan_dft_3d(n, n, n, a, b, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(a);
    fftw_free(b);
    if (!forward_ || !backward_ || !forward_unaligned_ || !backward_unaligned_) throw Error("FFTW plan creation failed");
  }
  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;
  ~FftPlans() {
    for (auto p : {forward_, backward_, forward_unaligned_, backward_unaligned_}) fftw_destroy_plan(p);
  }

  // fftw_execute_dft is thread-safe; only planning needs the lock.
  void forward(const Complex* in, Complex* out) const { execute(aligned(in, out) ? forward_ : forward_unaligned_, in, out); }
  void backward(const Complex* in, Complex* out) const {
    execute(aligned(in, out) ? backward_ : backward_unaligned_, in, out);
  }

  static const FftPlans& for_size(int n) {
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<FftPlans>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<FftPlans>(n);
    return *slot;
  }

 private:
  // Plans made with FFTW_ESTIMATE pick the same algorithm every time, so
  // results are reproducible bit for bit across runs.
  bool aligned(const Complex* in, Complex* out) const {
    return fftw_alignment_of(reinterpret_cast<double*>(const_cast<Complex*>(in))) == alignment_ &&
           fftw_alignment_of(reinterpret_cast<double*>(out)) == alignment_;
  }
  static void execute(fftw_plan p, const Complex* in, Complex* out) {
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in)), reinterpret_cast<fftw_complex*>(out));
  }

  int alignment_ = 0;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
  fftw_plan forward_unaligned_ = nullptr;
  fftw_plan backward_unaligned_ = nullptr;
};

/// Per-thread work buffer of at least `size` elements.
inline Complex* scratch(std::size_t size) {
  thread_local AlignedVector<Complex> buf;
  if (buf.size() < size) buf.resize(size);
  return buf.data();
}

inline std::string format_index(const Grid& g, std::size_t flat) {
  const auto n = static_cast<std::size_t>(g.n());
  std::ostringstream os;
  os << "(" << flat / (n * n) << "," << (flat / n) % n << "," << flat % n << ")";
  return os.str();
}

}  // namespace detail

/// Relative Hermitian-symmetry tolerance accepted by inverse_transform.
inline constexpr double kHermitianTolerance = 1e-10;

/// Samples -> coefficients. Throws NonFiniteError naming the first bad sample.
inline SpectralField forward_transform(const RealField& f) {
  const Grid& g = f.grid();
  const auto vals = f.values();
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (!std::isfinite(vals[i])) {
      throw NonFiniteError("non-finite sample at index " + detail::format_index(g, i), i);
    }
  }
  Complex* in = detail::scratch(g.size());
  std::copy(vals.begin(), vals.end(), in);
  AlignedVector<Complex> out(g.size());
  detail::FftPlans::for_size(g.n()).forward(in, out.data());
  const double scale = 1.0 / static_cast<double>(g.size());
  for (auto& c : out) c *= scale;
  return SpectralField(g, std::move(out));
}

/// Largest |c(-k) - conj(c(k))| relative to max |c|, and where it occurs.
struct HermitianCheck {
  double violation = 0.0;
  std::size_t worst = 0;
};

inline HermitianCheck hermitian_violation(const SpectralField& F) {
  const Grid& g = F.grid();
  const auto c = F.values();
  double scale = 0.0;
  for (const auto& v : c) scale = std::max(scale, std::abs(v));
  HermitianCheck out;
  if (scale == 0.0) return out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double d = std::abs(c[g.conjugate_index(i)] - std::conj(c[i])) / scale;
    if (d > out.violation) {
      out.violation = d;
      out.worst = i;
    }
  }
  return out;
}

/// Coefficients -> samples without the symmetry check. The imaginary part is dropped.
inline RealField inverse_transform_unchecked(const SpectralField& F) {
  const Grid& g = F.grid();
  Complex* out = detail::scratch(g.size());
  detail::FftPlans::for_size(g.n()).backward(F.values().data(), out);
  AlignedVector<double> re(g.size());
  std::transform(out, out + g.size(), re.begin(), [](const Complex& z) { return z.real(); });
  return RealField(g, std::move(re));
}

/// Coefficients -> samples. Throws HermitianError when coefficients are not the
/// transform of a real field (relative violation above kHermitianTolerance).
inline RealField inverse_transform(const SpectralField& F) {
  const auto chk = hermitian_violation(F);
  if (chk.violation > kHermitianTolerance) {
    const Wavevector k = F.grid().wavevector(chk.worst);
    std::ostringstream os;
    os << "coefficients are not Hermitian-symmetric: worst mode k=(" << k.k1 << "," << k.k2 << "," << k.k3
       << "), relative violation " << chk.violation;
    throw HermitianError(os.str(), k.k1, k.k2, k.k3, chk.violation);
  }
  return inverse_transform_unchecked(F);
}

inline SpectralVectorField forward_transform(const RealVectorField& v) {
  return {forward_transform(v[0]), forward_transform(v[1]), forward_transform(v[2])};
}
inline RealVectorField inverse_transform(const SpectralVectorField& v) {
  return {inverse_transform(v[0]), inverse_transform(v[1]), inverse_transform(v[2])};
}
inline RealVectorField inverse_transform_unchecked(const SpectralVectorField& v) {
  return {inverse_transform_unchecked(v[0]), inverse_transform_unchecked(v[1]), inverse_transform_unchecked(v[2])};
}

}  // namespace besovns
