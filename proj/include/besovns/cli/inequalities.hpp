#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "besovns/io/csv.hpp"
#include "besovns/lp/besov.hpp"
#include "besovns/lp/blocks.hpp"
#include "besovns/lp/inequalities.hpp"
#include "besovns/monitor/calibration.hpp"
#include "besovns/monitor/chains.hpp"
#include "besovns/monitor/criteria.hpp"
#include "besovns/ns/pressure.hpp"

namespace besovns::cli {

/// Extremes of one inequality's measured ratio over an ensemble. Exact rows
/// carry a bound that every ratio must respect; measured rows only record.
struct InequalityRow {
  std::string name;
  std::string kind = "measured";  // exact or measured
  int samples = 0;
  int skipped = 0;
  double min_ratio = std::numeric_limits<double>::infinity();
  double max_ratio = -std::numeric_limits<double>::infinity();
  double bound = std::numeric_limits<double>::infinity();

  bool exact() const { return kind == "exact"; }
  bool holds() const { return !exact() || samples == 0 || max_ratio <= bound * (1.0 + monitor::kExactTolerance); }

  void add(const lp::Ratio& r) {
    if (r.skipped || !std::isfinite(r.value)) {
      ++skipped;
      return;
    }
    ++samples;
    min_ratio = std::min(min_ratio, r.value);
    max_ratio = std::max(max_ratio, r.value);
  }
};

struct InequalitySuite {
  std::string ensemble;
  std::vector<InequalityRow> rows;

  bool all_exact_hold() const {
    return std::all_of(rows.begin(), rows.end(), [](const InequalityRow& r) { return r.holds(); });
  }

  const InequalityRow* find(const std::string& name) const {
    for (const auto& r : rows) {
      if (r.name == name) return &r;
    }
    return nullptr;
  }

  /// Header: inequality,kind,samples,skipped,min_ratio,max_ratio,bound,holds
  std::string csv() const {
    std::string out = "inequality,kind,samples,skipped,min_ratio,max_ratio,bound,holds\n";
    for (const auto& r : rows) {
      const bool any = r.samples > 0;
      out += io::join_csv({r.name, r.kind, std::to_string(r.samples), std::to_string(r.skipped),
                           any ? io::format_double(r.min_ratio) : "", any ? io::format_double(r.max_ratio) : "",
                           r.exact() ? io::format_double(r.bound) : "", r.holds() ? "true" : "false"}) +
             "\n";
    }
    return out;
  }
};

/// Every functional inequality the criteria rest on, measured on the
/// ensemble's velocity components: Bernstein per block, the Besov/Sobolev
/// interpolations, Besov interpolation by sequence Hoelder, embeddings,
/// Ladyzhenskaya forms, the Besov/Sobolev equivalence, the velocity
/// equivalence and the pressure estimates.
inline InequalitySuite run_inequality_suite(const monitor::CalibrationEnsemble& ens) {
  InequalitySuite suite;
  suite.ensemble = ens.describe();
  std::map<std::string, std::size_t> index;
  auto row = [&](const std::string& name, const std::string& kind = "measured", double bound = 1.0) -> InequalityRow& {
    auto it = index.find(name);
    if (it == index.end()) {
      InequalityRow r;
      r.name = name;
      r.kind = kind;
      if (kind == "exact") r.bound = bound;
      it = index.emplace(name, suite.rows.size()).first;
      suite.rows.push_back(r);
    }
    return suite.rows[it->second];
  };

  for (int i = 0; i < ens.count; ++i) {
    const SpectralVectorField u = ens.state(i).u;
    const lp::BlockRange range = lp::block_range(u.grid());
    for (int c = 0; c < 3; ++c) {
      const SpectralField& f = u[c];
      for (int j = range.j_min; j <= range.j_max; ++j) {
        const SpectralField b = lp::dyadic_block(f, j);
        const lp::BernsteinReport d1 = lp::check_bernstein(b, j, 1, kInf, kInf);
        if (d1.skipped) continue;
        row("bernstein.upper@order=1,p=inf,q=inf").add(d1.upper);
        row("bernstein.lower@order=1,p=inf").add(d1.lower);
        row("bernstein.gradient@p=inf,q=inf").add(d1.gradient);
        row("bernstein.upper@order=0,p=2,q=inf").add(lp::check_bernstein(b, j, 0, 2.0, kInf).upper);
      }
      row("interpolation.a3@p=4").add(lp::interpolation_ratio(f, lp::InterpolationSpec::a3()));
      row("interpolation.a4@p=6").add(lp::interpolation_ratio(f, lp::InterpolationSpec::a4_6()));
      row("interpolation.a4@p=3").add(lp::interpolation_ratio(f, lp::InterpolationSpec::a4_3()));
      row("besov_interpolation@s1=-1,s2=0,p=inf,r=inf", "exact")
          .add(lp::besov_interpolation_ratio(f, -1.0, 0.0, 0.5, kInf, kInf));
      row("besov_interpolation@s1=-1,s2=1,p=2,r=2", "exact")
          .add(lp::besov_interpolation_ratio(f, -1.0, 1.0, 0.5, 2.0, 2.0));
      for (double p : {2.0, 4.0, 6.0}) {
        row("embedding@p=" + io::format_double(p)).add(lp::embedding_ratio(f, p));
      }
      {
        // At s = 0 the squared weights sum to between 1/2 and 1, so both
        // directions are exact; at s = 1 the 2^j versus |k| mismatch adds a
        // constant that is only measured.
        const double l2 = lp::sobolev_seminorm(f, 0.0);
        const double b0 = lp::besov_norm(f, {0.0, 2.0, 2.0}).value;
        row("sobolev_equivalence@s=0", "exact").add(lp::Ratio::of(b0, l2));
        row("sobolev_equivalence_inverse@s=0", "exact", std::sqrt(2.0)).add(lp::Ratio::of(l2, b0));
        row("sobolev_equivalence@s=1").add(lp::Ratio::of(lp::besov_norm(f, {1.0, 2.0, 2.0}).value,
                                                         lp::sobolev_seminorm(f, 1.0)));
      }
      const monitor::LadyzhenskayaReport l2 = monitor::verify_ladyzhenskaya(f, 2.0);
      row("ladyzhenskaya.isotropic@r=2", "exact").add(l2.isotropic);
      row("ladyzhenskaya.anisotropic@r=2", "exact").add(l2.anisotropic);
      const monitor::LadyzhenskayaReport l4 = monitor::verify_ladyzhenskaya(f, 4.0);
      row("ladyzhenskaya.isotropic@r=4").add(l4.isotropic);
      row("ladyzhenskaya.anisotropic@r=4").add(l4.anisotropic);
    }
    const monitor::EquivalenceReport eq = monitor::equivalence_check(u);
    row("equivalence.components").add(eq.components);
    row("equivalence.magnitude").add(eq.magnitude);
    for (const auto& pr : ns::check_pressure_estimates(u, {2.0, 3.0, 4.0}, ens.dealias)) {
      row("pressure.value@q=" + io::format_double(pr.q)).add(pr.value);
      row("pressure.gradient@q=" + io::format_double(pr.q)).add(pr.gradient);
    }
  }
  return suite;
}

}  // namespace besovns::cli
