#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace besovns::monitor {

/// Exact rational number for exponent bookkeeping. Always stored reduced with
/// a positive denominator, so equal values compare equal field by field.
class Rational {
 public:
  constexpr Rational(std::int64_t num = 0, std::int64_t den = 1) : num_(num), den_(den) {
    if (den_ == 0) throw std::domain_error("rational with zero denominator");
    normalize();
  }

  constexpr std::int64_t num() const { return num_; }
  constexpr std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  friend constexpr Rational operator+(Rational a, Rational b) {
    return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
  }
  friend constexpr Rational operator-(Rational a, Rational b) {
    return {a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_};
  }
  friend constexpr Rational operator*(Rational a, Rational b) { return {a.num_ * b.num_, a.den_ * b.den_}; }
  friend constexpr Rational operator/(Rational a, Rational b) { return {a.num_ * b.den_, a.den_ * b.num_}; }
  friend constexpr Rational operator-(Rational a) { return {-a.num_, a.den_}; }
  friend constexpr bool operator==(Rational, Rational) = default;
  friend constexpr bool operator<(Rational a, Rational b) { return a.num_ * b.den_ < b.num_ * a.den_; }
  friend constexpr bool operator>(Rational a, Rational b) { return b < a; }

  friend std::ostream& operator<<(std::ostream& os, Rational r) { return os << r.num_ << '/' << r.den_; }

 private:
  constexpr void normalize() {
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    const std::int64_t g = std::gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  std::int64_t num_;
  std::int64_t den_;
};

// The formulas below are templates so the same expression runs in double for
// the monitor and in Rational for the exactness tests.

/// Time exponent of the split argument, 4 / (3/2 + eps).
template <class T>
T split_exponent(T eps) {
  return T(4) / (T(3) / T(2) + eps);
}

/// 8 / (5 - 2s).
template <class T>
T horizontal_time_exponent(T s) {
  return T(8) / (T(5) - T(2) * s);
}

/// beta from s = 2 / (beta - 2).
template <class T>
T beta_from_s(T s) {
  return T(2) / s + T(2);
}

template <class T>
T s_from_beta(T beta) {
  return T(2) / (beta - T(2));
}

/// mu = 3 beta / (beta + 2).
template <class T>
T mu_from_beta(T beta) {
  return T(3) * beta / (beta + T(2));
}

/// Lebesgue exponent q closing 1/mu + 1/beta + (q - 2)/q = 1.
template <class T>
T lebesgue_from_beta(T beta) {
  const T mu = mu_from_beta(beta);
  return T(2) / (T(1) / mu + T(1) / beta);
}

/// 3 beta (mu - 1) / (mu (beta - 1)); equals 2 under the choice of mu.
template <class T>
T gradient_power(T beta) {
  const T mu = mu_from_beta(beta);
  return T(3) * beta * (mu - T(1)) / (mu * (beta - T(1)));
}

/// Power of the anisotropic criterion in the enstrophy chain,
/// q (beta - 2) / (beta (q - 3) - q).
template <class T>
T pressure_chain_exponent(T beta) {
  const T q = lebesgue_from_beta(beta);
  return q * (beta - T(2)) / (beta * (q - T(3)) - q);
}

/// 4 / (2 - 5s).
template <class T>
T anisotropic_time_exponent(T s) {
  return T(4) / (T(2) - T(5) * s);
}

/// Power of the criterion in the gradient chain, 4q (beta - 2) / (beta (3q - 10) - 4q).
template <class T>
T gradient_chain_exponent(T beta) {
  const T q = lebesgue_from_beta(beta);
  return T(4) * q * (beta - T(2)) / (beta * (T(3) * q - T(10)) - T(4) * q);
}

/// 12 (beta - 2) / (4 beta - 37).
template <class T>
T gradient_chain_reduced(T beta) {
  return T(12) * (beta - T(2)) / (T(4) * beta - T(37));
}

/// 24 / (8 - 29 s).
template <class T>
T vertical_time_exponent(T s) {
  return T(24) / (T(8) - T(29) * s);
}

/// Powers of ||u3(0)||_{L^q} in the additive initial terms.
template <class T>
T enstrophy_initial_power(T q) {
  return T(2) * q / (q - T(3));
}

template <class T>
T gradient_initial_power(T beta) {
  return T(24) * beta / (T(9) * beta - T(25));
}

/// beta, mu and q of the pressure chain.
struct ExponentPair {
  double beta = 12.0;
  double mu = 0.0;
  double q = 0.0;

  static ExponentPair from_beta(double beta) { return {beta, mu_from_beta(beta), lebesgue_from_beta(beta)}; }
  static ExponentPair from_s(double s) { return from_beta(beta_from_s(s)); }

  /// Checks 1 <= mu <= 3, q/(beta (q - 3)) < 1 and beta above `beta_floor`
  /// (7 for the enstrophy chain, 37/4 for the gradient chain).
  void validate(double beta_floor = 7.0) const {
    if (!(beta > beta_floor)) {
      throw std::invalid_argument("pressure chain requires beta > " + std::to_string(beta_floor));
    }
    if (std::abs(mu - mu_from_beta(beta)) > 1e-12 || std::abs(q - lebesgue_from_beta(beta)) > 1e-12) {
      throw std::invalid_argument("mu and q must follow from beta");
    }
    if (!(mu >= 1.0 && mu <= 3.0)) throw std::invalid_argument("pressure chain requires 1 <= mu <= 3");
    if (!(q > 3.0 && q / (beta * (q - 3.0)) < 1.0)) {
      throw std::invalid_argument("pressure chain requires q > 3 and q / (beta (q - 3)) < 1");
    }
  }
};

}  // namespace besovns::monitor
