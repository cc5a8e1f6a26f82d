#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "besovns/io/csv.hpp"
#include "besovns/monitor/chains.hpp"
#include "besovns/monitor/constants.hpp"
#include "besovns/monitor/criteria.hpp"
#include "besovns/monitor/spec.hpp"
#include "besovns/ns/state.hpp"
#include "besovns/random.hpp"

namespace besovns::monitor {

/// Stored when an ensemble never produced a positive ratio, so that every
/// constant stays positive.
inline constexpr double kConstantFloor = 1e-12;

/// Seeded random divergence-free states used to calibrate constants.
struct CalibrationEnsemble {
  std::uint64_t first_seed = 0;
  int count = 100;
  int n = 32;
  double slope = -2.0;
  double amplitude = 0.5;
  double band = 5.0;
  double nu = 0.1;
  double packet_width = 0.4;
  bool dealias = true;

  std::string describe() const {
    std::ostringstream os;
    os << "random seeds " << first_seed << "-" << first_seed + static_cast<std::uint64_t>(std::max(count, 1)) - 1
       << " slope=" << io::format_double(slope) << " amplitude=" << io::format_double(amplitude)
       << " band=" << io::format_double(band) << " nu=" << io::format_double(nu)
       << " packet=" << io::format_double(packet_width)
       << (dealias ? "" : " no-dealias");
    return os.str();
  }

  ns::FlowState state(int i) const {
    return ns::random_divfree_init(Grid(n), first_seed + static_cast<std::uint64_t>(i), slope, amplitude, band);
  }

  SpectralField packet(int i) const {
    return random_wave_packet(Grid(n), first_seed + static_cast<std::uint64_t>(i), packet_width, {slope, band});
  }
};

struct CalibrationOptions {
  std::vector<CriterionSpec> specs = default_specs();
  double epsilon = 0.5;       // frequency split
  double ladyzhenskaya_r = 4.0;
};

/// Exponent pairs needed by the anisotropic criteria of `specs`, with the
/// beta floor of each chain (7 for the enstrophy chain, 37/4 for the gradient one).
inline std::vector<std::pair<ExponentPair, double>> exponent_pairs(const std::vector<CriterionSpec>& specs) {
  std::vector<std::pair<ExponentPair, double>> out;
  for (const auto& s : specs) {
    double floor = 0.0;
    if (s.theorem == TheoremId::T1_4) floor = 7.0;
    if (s.theorem == TheoremId::T1_5) floor = 37.0 / 4.0;
    if (floor == 0.0) continue;
    const ExponentPair e = ExponentPair::from_s(s.s);
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& p) { return p.first.beta == e.beta; });
    if (it == out.end()) {
      out.emplace_back(e, floor);
    } else {
      it->second = std::max(it->second, floor);
    }
  }
  return out;
}

/// Running maxima (or minima) of measured ratios.
class RatioTracker {
 public:
  void max(const std::string& name, double v) {
    if (!std::isfinite(v)) return;
    auto [it, fresh] = max_.try_emplace(name, v);
    if (!fresh) it->second = std::max(it->second, v);
  }
  void max(const std::string& name, const lp::Ratio& r) {
    if (!r.skipped) max(name, r.value);
  }
  void min(const std::string& name, double v) {
    if (!std::isfinite(v)) return;
    auto [it, fresh] = min_.try_emplace(name, v);
    if (!fresh) it->second = std::min(it->second, v);
  }

  /// Stores every tracked value; non-positive maxima are floored.
  void store(ConstantsTable& t, const std::string& ensemble, const std::string& grids) const {
    for (const auto& [name, v] : max_) {
      if (v > 0.0) {
        t.set({name, v, ensemble, grids});
      } else {
        t.set({name, kConstantFloor, ensemble + " (largest ratio " + io::format_double(v) + " floored)", grids});
      }
    }
    for (const auto& [name, v] : min_) {
      if (v > 0.0) t.set({name, v, ensemble, grids});
    }
  }

  const std::map<std::string, double>& maxima() const { return max_; }

 private:
  std::map<std::string, double> max_;
  std::map<std::string, double> min_;
};

/// Key of the Gronwall constant of a criterion.
inline std::string gronwall_key(const CriterionSpec& spec) { return "gronwall." + spec.key(); }

/// Measures every link and closing ratio on the ensemble and freezes the
/// largest values (smallest for equivalence lower bounds).
///
/// The full-gradient criterion keeps the chain constant C0 = C_curl^2 C_a3 and
/// its Gronwall constant C0^2 / nu. The other criteria use the production
/// ratio of rate_ratio. Bernstein constants of the frequency split are
/// measured on both the box-filling u3 and a localized wave packet per seed.
inline ConstantsTable calibrate(const CalibrationEnsemble& ens, const CalibrationOptions& opt = {}) {
  for (const auto& s : opt.specs) s.validate();
  const auto pairs = exponent_pairs(opt.specs);
  RatioTracker tr;
  for (int i = 0; i < ens.count; ++i) {
    const ns::FlowState st = ens.state(i);
    const SpectralVectorField& u = st.u;
    const FlowMeasures m = measure_flow(u, 0.0, ens.nu, ens.dealias);

    for (const auto& spec : opt.specs) {
      if (spec.theorem == TheoremId::T1_2) continue;
      const RateRatio rr = rate_ratio(m, spec, ens.nu);
      if (!rr.skipped) tr.max(gronwall_key(spec), rr.value);
    }
    for (const auto& chain : {verify_vorticity_chain(u, m, ens.nu), verify_horizontal_chain(u, m)}) {
      for (const auto& l : chain.links) {
        if (l.kind == LinkKind::Calibrated && !l.constant.empty()) tr.max(l.constant, l.ratio);
      }
    }
    for (const auto& [e, floor] : pairs) {
      for (const auto& chain : {verify_pressure_chain(u, e, nullptr, floor, ens.dealias), verify_enstrophy_terms(u, m, e)}) {
        for (const auto& l : chain.links) {
          if (l.kind == LinkKind::Calibrated && !l.constant.empty()) tr.max(l.constant, l.ratio);
        }
      }
    }
    for (const SpectralField& f : {u[2], ens.packet(i)}) {
      const SplitConstants sc = split_block_ratios(f);
      tr.max("link.bernstein_low", sc.bernstein_low);
      tr.max("link.bernstein_high", sc.bernstein_high);
    }

    const EquivalenceReport eq = equivalence_check(u);
    if (!eq.components.skipped) {
      tr.max("equivalence.components.upper", eq.components.value);
      tr.min("equivalence.components.lower", eq.components.value);
    }
    if (!eq.magnitude.skipped) {
      tr.max("equivalence.magnitude.upper", eq.magnitude.value);
      tr.min("equivalence.magnitude.lower", eq.magnitude.value);
    }
    const std::string r_tag = "@r=" + io::format_double(opt.ladyzhenskaya_r);
    for (int c = 0; c < 3; ++c) {
      const LadyzhenskayaReport lr = verify_ladyzhenskaya(u[c], opt.ladyzhenskaya_r);
      tr.max("ladyzhenskaya.isotropic" + r_tag, lr.isotropic);
      tr.max("ladyzhenskaya.anisotropic" + r_tag, lr.anisotropic);
    }
  }

  ConstantsTable table;
  const std::string desc = ens.describe();
  const std::string grids = std::to_string(ens.n);
  tr.store(table, desc, grids);
  const VorticityConstants vc = vorticity_constants(table);
  table.set({gronwall_key(CriterionSpec::make(TheoremId::T1_2)), vc.gronwall(ens.nu), desc, grids});
  return table;
}

}  // namespace besovns::monitor
