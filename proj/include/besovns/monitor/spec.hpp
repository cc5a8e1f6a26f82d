#pragma once

#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "besovns/io/csv.hpp"
#include "besovns/monitor/exponents.hpp"

namespace besovns::monitor {

enum class TheoremId { T1_2, T1_3i, T1_3ii, C1_4a, C1_4b, T1_4, T1_5 };

inline constexpr std::array<TheoremId, 7> kAllTheorems{TheoremId::T1_2,  TheoremId::T1_3i, TheoremId::T1_3ii,
                                                       TheoremId::C1_4a, TheoremId::C1_4b, TheoremId::T1_4,
                                                       TheoremId::T1_5};

inline std::string to_string(TheoremId id) {
  switch (id) {
    case TheoremId::T1_2: return "T1.2";
    case TheoremId::T1_3i: return "T1.3i";
    case TheoremId::T1_3ii: return "T1.3ii";
    case TheoremId::C1_4a: return "C1.4a";
    case TheoremId::C1_4b: return "C1.4b";
    case TheoremId::T1_4: return "T1.4";
    case TheoremId::T1_5: return "T1.5";
  }
  return "?";
}

inline TheoremId theorem_from_string(const std::string& s) {
  for (TheoremId id : kAllTheorems) {
    if (to_string(id) == s) return id;
  }
  throw std::invalid_argument("unknown theorem '" + s + "' (expected T1.2, T1.3i, T1.3ii, C1.4a, C1.4b, T1.4 or T1.5)");
}

/// Open interval for s, or none for theorems without a parameter.
struct SInterval {
  bool used = false;
  double hi = 0.0;
  const char* hi_text = "";
};

inline SInterval s_interval(TheoremId id) {
  switch (id) {
    case TheoremId::T1_3ii:
    case TheoremId::C1_4b: return {true, 1.0, "1"};
    case TheoremId::T1_4: return {true, 0.4, "2/5"};
    case TheoremId::T1_5: return {true, 8.0 / 29.0, "8/29"};
    default: return {};
  }
}

inline constexpr double kDefaultS = 0.2;

/// One theorem's criterion: which quantity, its Besov index and time exponent.
struct CriterionSpec {
  TheoremId theorem = TheoremId::T1_2;
  double s = 0.0;

  bool has_s() const { return s_interval(theorem).used; }

  void validate() const {
    const SInterval iv = s_interval(theorem);
    if (!iv.used) return;
    if (!(s > 0.0 && s < iv.hi)) {
      std::ostringstream os;
      os << to_string(theorem) << " requires 0 < s < " << iv.hi_text << " (got s = " << s << ")";
      throw std::invalid_argument(os.str());
    }
  }

  /// Exponent of the time integral of the main criterion quantity.
  double q_time() const {
    switch (theorem) {
      case TheoremId::T1_2: return 2.0;
      case TheoremId::T1_3i:
      case TheoremId::C1_4a: return 8.0 / 3.0;
      case TheoremId::T1_3ii:
      case TheoremId::C1_4b: return horizontal_time_exponent(s);
      case TheoremId::T1_4: return anisotropic_time_exponent(s);
      case TheoremId::T1_5: return vertical_time_exponent(s);
    }
    return 0.0;
  }

  /// Companion is the enstrophy for the vorticity-based proofs, ||grad u||^2 otherwise.
  bool enstrophy_companion() const { return theorem == TheoremId::T1_2 || theorem == TheoremId::T1_4; }

  /// e.g. "T1.5" or "T1.5@s=0.2", used as constant and column key.
  std::string key() const {
    if (!has_s()) return to_string(theorem);
    return to_string(theorem) + "@s=" + io::format_double(s);
  }

  static CriterionSpec make(TheoremId id, double s = kDefaultS) {
    CriterionSpec c{id, s_interval(id).used ? s : 0.0};
    c.validate();
    return c;
  }

  friend bool operator==(const CriterionSpec&, const CriterionSpec&) = default;
};

/// s moved into the theorem's open interval: kept if inside, else the interval midpoint.
inline double clamp_s(TheoremId id, double s) {
  const SInterval iv = s_interval(id);
  if (!iv.used) return 0.0;
  return (s > 0.0 && s < iv.hi) ? s : 0.5 * iv.hi;
}

/// All seven criteria with s clamped into each interval.
inline std::vector<CriterionSpec> default_specs(double s = kDefaultS) {
  std::vector<CriterionSpec> out;
  for (TheoremId id : kAllTheorems) out.push_back(CriterionSpec::make(id, clamp_s(id, s)));
  return out;
}

}  // namespace besovns::monitor
