#pragma once

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "besovns/io/csv.hpp"
#include "besovns/monitor/chains.hpp"
#include "besovns/monitor/monitor.hpp"
#include "besovns/ns/solver.hpp"

namespace besovns::cli {

using io::format_double;

/// One line of report.csv. Wall-clock time goes to timing.csv so that the
/// report itself replays bit-exactly.
struct ReportRow {
  std::string run_id;
  std::string theorem;
  std::string s;  // empty for criteria without s
  double q_time = 0.0;
  double bochner = 0.0;
  double companion_sup = 0.0;
  double constant = 0.0;
  double v0 = 0.0;
  double min_margin = 0.0;
  monitor::Verdict verdict = monitor::Verdict::Inconclusive;
  double wall_seconds = 0.0;

  static ReportRow from(const std::string& run_id, const monitor::CriterionReport& r, double wall_seconds) {
    ReportRow row;
    row.run_id = run_id;
    row.theorem = monitor::to_string(r.spec.theorem);
    row.s = r.spec.has_s() ? format_double(r.spec.s) : "";
    row.q_time = r.spec.q_time();
    row.bochner = r.bochner;
    row.companion_sup = r.companion_sup;
    row.constant = r.constant;
    row.v0 = r.v0;
    row.min_margin = r.min_margin;
    row.verdict = r.verdict;
    row.wall_seconds = wall_seconds;
    return row;
  }
};

inline constexpr const char* kReportHeader = "run_id,theorem,s,q_time,bochner,companion_sup,constant,v0,min_margin,verdict";
inline constexpr const char* kTimingHeader = "run_id,stage,seconds";
inline constexpr const char* kChainsHeader = "t,chain,link,kind,ratio,constant,bound,holds,note";

inline std::string report_line(const ReportRow& r) {
  return io::join_csv({r.run_id, r.theorem, r.s, format_double(r.q_time), format_double(r.bochner),
                       format_double(r.companion_sup), format_double(r.constant), format_double(r.v0),
                       format_double(r.min_margin), monitor::to_string(r.verdict)});
}

/// Warnings become `# warning: ...` lines above the header.
inline std::string report_csv(const std::vector<ReportRow>& rows, const std::vector<std::string>& warnings) {
  std::string out;
  for (const auto& w : warnings) {
    std::string one = w;
    for (char& ch : one) {
      if (ch == '\n' || ch == '\r') ch = ' ';
    }
    out += "# warning: " + one + "\n";
  }
  out += kReportHeader;
  out += '\n';
  for (const auto& r : rows) out += report_line(r) + "\n";
  return out;
}

/// Column order: t, energy, grad_sq, omega_l2, then one column per criterion
/// keyed by CriterionSpec::key().
inline std::string timeseries_csv(const ns::Trajectory& tr, const monitor::MonitorResult& res) {
  std::vector<std::string> header{"t", "energy", "grad_sq", "omega_l2"};
  for (const auto& r : res.reports) header.push_back(r.spec.key());
  std::string out = io::join_csv(header) + "\n";
  for (std::size_t i = 0; i < tr.samples.size(); ++i) {
    const auto& d = tr.samples[i].diag;
    std::vector<std::string> row{format_double(tr.samples[i].t()), format_double(d.energy), format_double(d.grad_sq),
                                 format_double(d.omega_l2)};
    for (const auto& r : res.reports) {
      row.push_back(i < r.value.size() ? format_double(r.value.value(i)) : std::string("nan"));
    }
    out += io::join_csv(row) + "\n";
  }
  return out;
}

struct TimingRow {
  std::string stage;
  double seconds = 0.0;
};

inline std::string timing_csv(const std::string& run_id, const std::vector<TimingRow>& rows) {
  std::string out = std::string(kTimingHeader) + "\n";
  for (const auto& r : rows) out += io::join_csv({run_id, r.stage, format_double(r.seconds)}) + "\n";
  return out;
}

inline std::string chain_lines(const monitor::ChainReport& c) {
  std::string out;
  if (c.skipped) {
    return io::join_csv({format_double(c.t), c.chain, "", "", "", "", "", "", "skipped: " + c.note}) + "\n";
  }
  for (const auto& l : c.links) {
    const std::string ratio = l.ratio.skipped ? "" : format_double(l.ratio.value);
    const bool has_bound = std::isfinite(l.bound);
    out += io::join_csv({format_double(c.t), c.chain, l.name, monitor::to_string(l.kind), ratio, l.constant,
                         has_bound ? format_double(l.bound) : "", l.holds() ? "true" : "false",
                         l.ratio.skipped ? "skipped" : ""}) +
           "\n";
  }
  return out;
}

inline std::string split_line(double t, const monitor::SplitReport& s) {
  std::string note;
  if (s.skipped) note = "skipped: u3 vanishes";
  if (s.inconclusive) note = "inconclusive: " + s.flag;
  const std::string ratio = (s.skipped || !(s.combined_bound > 0.0)) ? "" : format_double(s.linf / s.combined_bound);
  return io::join_csv({format_double(t), "frequency_split", "combined", "calibrated", ratio, "link.bernstein_low",
                       "1", s.ok() ? "true" : "false", note}) +
         "\n";
}

/// Writes `text` to `path`, failing loudly.
inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace besovns::cli
