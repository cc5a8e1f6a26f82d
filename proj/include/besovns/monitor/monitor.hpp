#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "besovns/io/csv.hpp"
#include "besovns/lp/besov.hpp"
#include "besovns/monitor/calibration.hpp"
#include "besovns/monitor/constants.hpp"
#include "besovns/monitor/criteria.hpp"
#include "besovns/monitor/series.hpp"
#include "besovns/monitor/spec.hpp"
#include "besovns/ns/solver.hpp"

namespace besovns::monitor {

enum class Verdict { Pass, Fail, Inconclusive };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

/// Any fail dominates any inconclusive.
inline Verdict aggregate(const std::vector<Verdict>& vs) {
  if (std::find(vs.begin(), vs.end(), Verdict::Fail) != vs.end()) return Verdict::Fail;
  if (std::find(vs.begin(), vs.end(), Verdict::Inconclusive) != vs.end()) return Verdict::Inconclusive;
  return Verdict::Pass;
}

/// Relative slack on B(t) >= companion(t), for round-off at t = 0 where both
/// sides can be the same number.
inline constexpr double kDominanceSlack = 1e-12;

struct CriterionReport {
  CriterionSpec spec;
  std::vector<std::string> term_labels;
  std::vector<TimeSeries> terms;  // each Besov quantity
  TimeSeries value;               // max over terms
  TimeSeries integrand;           // sum of value^q over terms
  double bochner = 0.0;           // int_0^T integrand
  TimeSeries companion;           // ||w||^2 or ||grad u||^2
  TimeSeries secondary;           // companion + nu int ||Lap u||^2
  TimeSeries bound;               // B(t)
  double constant = 0.0;
  double v0 = 0.0;
  double companion_sup = 0.0;
  double min_margin = 0.0;        // min_t B / companion
  bool secondary_dominated = false;
  Verdict verdict = Verdict::Inconclusive;
  std::vector<std::string> warnings;
};

struct MonitorResult {
  std::vector<FlowMeasures> measures;
  std::vector<CriterionReport> reports;
};

inline std::vector<FlowMeasures> measure_trajectory(const ns::Trajectory& tr) {
  std::vector<FlowMeasures> out;
  out.reserve(tr.samples.size());
  for (const auto& s : tr.samples) out.push_back(measure_flow(s.state, tr.config.nu, tr.config.dealias));
  return out;
}

inline CriterionReport evaluate_criterion(const ns::Trajectory& tr, const std::vector<FlowMeasures>& ms,
                                          const CriterionSpec& spec, const ConstantsTable& constants) {
  CriterionReport rep;
  rep.spec = spec;
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    rep.warnings.push_back(std::string("invalid criterion: ") + e.what());
    return rep;
  }
  const double nu = tr.config.nu;
  const auto* c = constants.find(gronwall_key(spec));
  bool ok_numbers = true;

  double top_share = 0.0;
  std::vector<double> lap_sq;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const auto terms = criterion_terms(ms[i], spec);
    if (i == 0) {
      for (const auto& t : terms) rep.term_labels.push_back(t.label);
      rep.terms.resize(terms.size());
    }
    const double t = ms[i].t;
    double v = 0.0;
    for (std::size_t k = 0; k < terms.size(); ++k) {
      if (!std::isfinite(terms[k].value)) ok_numbers = false;
      rep.terms[k].push(t, std::isfinite(terms[k].value) ? terms[k].value : 0.0);
      v = std::max(v, terms[k].value);
    }
    const double a = gronwall_integrand(terms);
    const double comp = companion(ms[i], spec);
    if (!std::isfinite(a) || !std::isfinite(comp)) ok_numbers = false;
    rep.value.push(t, std::isfinite(v) ? v : 0.0);
    rep.integrand.push(t, std::isfinite(a) ? a : 0.0);
    rep.companion.push(t, std::isfinite(comp) ? comp : 0.0);
    lap_sq.push_back(ms[i].lap_sq);
    top_share = std::max(top_share, ms[i].top_block_share);
  }
  rep.bochner = running_integral(rep.integrand).back();
  {
    const std::vector<double> diss = running_integral(TimeSeries(rep.companion.times(), lap_sq));
    for (std::size_t i = 0; i < rep.companion.size(); ++i) {
      rep.secondary.push(rep.companion.t(i), rep.companion.value(i) + nu * diss[i]);
    }
  }
  for (double v : rep.companion.values()) rep.companion_sup = std::max(rep.companion_sup, v);

  if (top_share > lp::kTopBlockShareLimit) {
    rep.warnings.push_back("energy share " + io::format_double(top_share) + " in grid-cut blocks");
  }
  if (tr.aborted) rep.warnings.push_back("trajectory truncated: " + tr.abort_reason);
  if (!ok_numbers) {
    rep.warnings.push_back("non-finite criterion or companion value");
    rep.verdict = Verdict::Fail;
    return rep;
  }
  if (!c) {
    rep.warnings.push_back("no calibrated constant " + gronwall_key(spec));
    return rep;
  }
  rep.constant = c->value;
  rep.v0 = initial_bound(initial_data(tr.samples.front().state.u, ms.front(), spec), spec, rep.constant);
  rep.bound = gronwall_bound(rep.v0, rep.integrand, rep.constant);

  bool dominated = true;
  rep.secondary_dominated = true;
  rep.min_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rep.bound.size(); ++i) {
    const double B = rep.bound.value(i);
    const double comp = rep.companion.value(i);
    if (B < comp * (1.0 - kDominanceSlack)) dominated = false;
    if (B < rep.secondary.value(i) * (1.0 - kDominanceSlack)) rep.secondary_dominated = false;
    if (comp > 0.0) rep.min_margin = std::min(rep.min_margin, B / comp);
  }
  if (!std::isfinite(rep.bound.values().back())) {
    rep.warnings.push_back("Gronwall bound overflowed");
  }
  if (tr.aborted) {
    rep.verdict = dominated ? Verdict::Inconclusive : Verdict::Fail;
  } else {
    rep.verdict = dominated ? Verdict::Pass : Verdict::Fail;
  }
  return rep;
}

/// One report per criterion over a solver trajectory. Pass means B(t) >=
/// companion(t) at every sample with finite values; a truncated run is at best
/// inconclusive.
inline MonitorResult run_monitor(const ns::Trajectory& tr, const std::vector<CriterionSpec>& specs,
                                 const ConstantsTable& constants) {
  if (tr.samples.empty()) throw std::invalid_argument("monitor needs a non-empty trajectory");
  MonitorResult res;
  res.measures = measure_trajectory(tr);
  for (const auto& spec : specs) res.reports.push_back(evaluate_criterion(tr, res.measures, spec, constants));
  return res;
}

}  // namespace besovns::monitor
