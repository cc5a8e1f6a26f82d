#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <thread>
#include <vector>

#include "besovns/cli/config.hpp"
#include "besovns/cli/inequalities.hpp"
#include "besovns/cli/output.hpp"
#include "besovns/monitor/calibration.hpp"
#include "besovns/monitor/chains.hpp"
#include "besovns/monitor/monitor.hpp"
#include "besovns/ns/checkpoint.hpp"
#include "besovns/ns/solver.hpp"

namespace besovns::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFail = 2;
inline constexpr int kExitInconclusive = 3;

/// Overrides the root of relative output directories.
inline constexpr const char* kOutputRootEnv = "BESOVNS_OUTPUT_ROOT";

inline int exit_code(monitor::Verdict v) {
  switch (v) {
    case monitor::Verdict::Pass: return kExitPass;
    case monitor::Verdict::Fail: return kExitFail;
    case monitor::Verdict::Inconclusive: return kExitInconclusive;
  }
  return kExitUsage;
}

/// Usage errors dominate, then fail, then inconclusive.
inline int combine_exit_codes(const std::vector<int>& codes) {
  for (int want : {kExitUsage, kExitFail, kExitInconclusive}) {
    if (std::find(codes.begin(), codes.end(), want) != codes.end()) return want;
  }
  return kExitPass;
}

inline std::filesystem::path output_dir(const OutputConfig& o) {
  std::filesystem::path dir(o.dir);
  const char* root = std::getenv(kOutputRootEnv);
  if (root && *root && dir.is_relative()) dir = std::filesystem::path(root) / dir;
  return dir;
}

/// Creates `dir` and checks that a file can be written there.
inline void prepare_output_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
  const std::filesystem::path probe = dir / ".besovns-write-check";
  {
    std::ofstream out(probe, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("output directory " + dir.string() + " is not writable");
  }
  std::filesystem::remove(probe, ec);
}

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// Exponent pair for the per-sample pressure and enstrophy chains: the first
/// anisotropic criterion's s, else the default s.
inline std::pair<monitor::ExponentPair, double> chain_exponents(const std::vector<monitor::CriterionSpec>& specs) {
  for (const auto& s : specs) {
    if (s.theorem == monitor::TheoremId::T1_5) return {monitor::ExponentPair::from_s(s.s), 37.0 / 4.0};
    if (s.theorem == monitor::TheoremId::T1_4) return {monitor::ExponentPair::from_s(s.s), 7.0};
  }
  return {monitor::ExponentPair::from_s(monitor::kDefaultS), 37.0 / 4.0};
}

}  // namespace detail

/// Calibrates on the configured ensemble for the configured criteria.
inline monitor::ConstantsTable calibrate_for(const RunConfig& c) {
  monitor::CalibrationOptions opt;
  opt.specs = c.monitor.effective_specs();
  opt.epsilon = c.monitor.epsilon;
  return monitor::calibrate(c.monitor.ensemble(c.solver.nu, c.solver.dealias), opt);
}

/// Per-sample chain rows plus the enstrophy balance over the run. Returns the
/// rows and appends a warning for every exact link that fails.
inline std::string chains_csv(const ns::Trajectory& tr, const monitor::MonitorResult& res,
                              const std::vector<monitor::CriterionSpec>& specs,
                              const monitor::ConstantsTable& constants, double epsilon,
                              std::vector<std::string>& warnings) {
  using namespace monitor;
  std::string out = std::string(kChainsHeader) + "\n";
  const double nu = tr.config.nu;
  const auto [pair, floor] = detail::chain_exponents(specs);
  const SplitConstants sc = split_constants(constants);
  auto note_exact = [&](const ChainReport& r) {
    for (const auto& l : r.links) {
      if ((l.kind == LinkKind::Exact || l.kind == LinkKind::Identity) && !l.holds()) {
        warnings.push_back("chain link " + r.chain + "." + l.name + " violated at t=" + format_double(r.t));
      }
    }
  };
  for (std::size_t i = 0; i < tr.samples.size(); ++i) {
    const auto& u = tr.samples[i].state.u;
    const FlowMeasures& m = res.measures[i];
    for (const ChainReport& r :
         {verify_vorticity_chain(u, m, nu, &constants), verify_horizontal_chain(u, m, &constants),
          verify_pressure_chain(u, pair, &constants, floor, tr.config.dealias, m.t),
          verify_enstrophy_terms(u, m, pair, &constants)}) {
      out += chain_lines(r);
      note_exact(r);
    }
    out += split_line(m.t, frequency_split_verify(u[2], epsilon, sc));
  }
  const VorticityBalance b =
      verify_vorticity_balance(res.measures, nu, constants.value_or(gronwall_key(CriterionSpec::make(TheoremId::T1_2)), 0.0));
  if (b.inconclusive) {
    out += io::join_csv({"", "vorticity_balance", "", "", "", "", "", "", "inconclusive: fewer than 3 samples"}) + "\n";
  } else {
    for (std::size_t i = 0; i < b.t.size(); ++i) {
      const std::string ratio = b.rhs[i] > 0.0 ? format_double(b.lhs[i] / b.rhs[i]) : "";
      out += io::join_csv({format_double(b.t[i]), "vorticity_balance", "inequality", "calibrated", ratio,
                           gronwall_key(CriterionSpec::make(TheoremId::T1_2)), "1",
                           b.inequality_holds ? "true" : "false", ""}) +
             "\n";
      out += io::join_csv({format_double(b.t[i]), "vorticity_balance", "identity_defect", "identity",
                           format_double(b.identity_defect[i]), "", format_double(b.tolerance),
                           b.identity_holds ? "true" : "false", ""}) +
             "\n";
    }
    if (!b.identity_holds) warnings.push_back("enstrophy balance identity defect " + format_double(b.max_identity_defect));
  }
  return out;
}

struct RunOutcome {
  int exit_code = kExitUsage;
  monitor::Verdict verdict = monitor::Verdict::Inconclusive;
  std::vector<ReportRow> rows;
  std::vector<std::string> warnings;
  std::filesystem::path dir;
};

/// Solves, monitors and writes every enabled output with the given constants.
inline RunOutcome execute_run(const RunConfig& c, const monitor::ConstantsTable& constants, double calibrate_seconds,
                              std::ostream& log) {
  RunOutcome o;
  o.dir = output_dir(c.output);
  prepare_output_dir(o.dir);
  const std::string id = c.run_id();
  const auto specs = c.monitor.effective_specs();
  std::vector<TimingRow> timing;
  if (calibrate_seconds > 0.0) timing.push_back({"calibrate", calibrate_seconds});

  auto t0 = std::chrono::steady_clock::now();
  const ns::Trajectory tr = ns::run(c.solver);
  timing.push_back({"solve", detail::seconds_since(t0)});

  t0 = std::chrono::steady_clock::now();
  monitor::MonitorResult res;
  res.measures = monitor::measure_trajectory(tr);
  timing.push_back({"measure", detail::seconds_since(t0)});
  for (const auto& spec : specs) {
    const auto t1 = std::chrono::steady_clock::now();
    res.reports.push_back(monitor::evaluate_criterion(tr, res.measures, spec, constants));
    const double secs = detail::seconds_since(t1);
    timing.push_back({"monitor " + spec.key(), secs});
    o.rows.push_back(ReportRow::from(id, res.reports.back(), secs));
  }

  for (const auto& w : tr.warnings) o.warnings.push_back(w);
  if (tr.aborted) o.warnings.push_back("run aborted: " + tr.abort_reason);
  for (const auto& r : res.reports) {
    for (const auto& w : r.warnings) o.warnings.push_back(r.spec.key() + ": " + w);
  }
  if (c.output.chains) {
    t0 = std::chrono::steady_clock::now();
    write_file(o.dir / "chains.csv", chains_csv(tr, res, specs, constants, c.monitor.epsilon, o.warnings));
    timing.push_back({"chains", detail::seconds_since(t0)});
  }
  if (c.output.timeseries) write_file(o.dir / "timeseries.csv", timeseries_csv(tr, res));
  if (c.output.report) write_file(o.dir / "report.csv", report_csv(o.rows, o.warnings));
  if (c.output.checkpoints) ns::write_checkpoint(o.dir / "checkpoint.bin", tr.samples.back().state, c.solver.nu);
  write_file(o.dir / "timing.csv", timing_csv(id, timing));

  std::vector<monitor::Verdict> vs;
  for (const auto& r : res.reports) vs.push_back(r.verdict);
  o.verdict = monitor::aggregate(vs);
  o.exit_code = exit_code(o.verdict);
  for (const auto& w : o.warnings) log << "warning: " << w << "\n";
  for (const auto& r : o.rows) {
    log << id << " " << r.theorem << (r.s.empty() ? "" : " s=" + r.s) << " " << monitor::to_string(r.verdict)
        << " bochner=" << format_double(r.bochner) << " C=" << format_double(r.constant) << "\n";
  }
  log << id << " verdict " << monitor::to_string(o.verdict) << " -> " << o.dir.string() << "\n";
  return o;
}

/// The constants file named by the config, or an in-process calibration that
/// is also saved as constants.csv in the output directory. `calibrate = true`
/// forces the calibration even when a file is named.
inline monitor::ConstantsTable obtain_constants(const RunConfig& c, std::ostream& log, double& seconds) {
  seconds = 0.0;
  if (!c.monitor.constants.empty() && !c.monitor.calibrate) return monitor::ConstantsTable::read(c.monitor.constants);
  log << "calibrating on " << c.monitor.ensemble(c.solver.nu, c.solver.dealias).describe() << "\n";
  const auto t0 = std::chrono::steady_clock::now();
  monitor::ConstantsTable t = calibrate_for(c);
  seconds = detail::seconds_since(t0);
  const std::filesystem::path dir = output_dir(c.output);
  prepare_output_dir(dir);
  t.write(dir / "constants.csv");
  return t;
}

/// run: exit 0 iff every verdict passes, 2 on any fail, 3 on any
/// inconclusive, 1 on a usage error.
inline int run_experiment(const RunConfig& c, std::ostream& log, std::ostream& err) {
  try {
    c.validate();
    double secs = 0.0;
    const monitor::ConstantsTable constants = obtain_constants(c, log, secs);
    return execute_run(c, constants, secs, log).exit_code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

/// Runs seeds seed, seed+1, ..., seed+N-1 on worker threads, each into
/// <dir>/seed-<k>. Constants are obtained once and shared read-only.
inline int run_ensemble(const RunConfig& c, int count, std::ostream& log, std::ostream& err) {
  if (count < 1) {
    err << "error: --ensemble needs N >= 1\n";
    return kExitUsage;
  }
  monitor::ConstantsTable constants;
  double secs = 0.0;
  try {
    c.validate();
    constants = obtain_constants(c, log, secs);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  std::vector<int> codes(static_cast<std::size_t>(count), kExitUsage);
  std::vector<std::string> logs(static_cast<std::size_t>(count));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int k = next++; k < count; k = next++) {
      RunConfig one = c;
      one.solver.seed = c.solver.seed + static_cast<std::uint64_t>(k);
      one.output.dir = (std::filesystem::path(c.output.dir) / ("seed-" + std::to_string(one.solver.seed))).string();
      if (!c.output.run_id.empty()) one.output.run_id = c.output.run_id + "-seed" + std::to_string(one.solver.seed);
      std::ostringstream os;
      try {
        codes[static_cast<std::size_t>(k)] = execute_run(one, constants, 0.0, os).exit_code;
      } catch (const std::exception& e) {
        os << "error: " << e.what() << "\n";
      }
      logs[static_cast<std::size_t>(k)] = os.str();
    }
  };
  const int workers = std::clamp(static_cast<int>(std::thread::hardware_concurrency()), 1, count);
  std::vector<std::thread> pool;
  for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (const auto& l : logs) log << l;
  return combine_exit_codes(codes);
}

inline int calibrate_command(const RunConfig& c, std::ostream& log, std::ostream& err) {
  try {
    c.validate();
    const std::filesystem::path dir = output_dir(c.output);
    prepare_output_dir(dir);
    log << "calibrating on " << c.monitor.ensemble(c.solver.nu, c.solver.dealias).describe() << "\n";
    const monitor::ConstantsTable t = calibrate_for(c);
    t.write(dir / "constants.csv");
    log << t.size() << " constants -> " << (dir / "constants.csv").string() << "\n";
    return kExitPass;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

/// Exit 0 when every exact inequality holds, 2 otherwise.
inline int verify_inequalities_command(const RunConfig& c, std::ostream& log, std::ostream& err) {
  try {
    c.validate();
    const std::filesystem::path dir = output_dir(c.output);
    prepare_output_dir(dir);
    const InequalitySuite suite = run_inequality_suite(c.monitor.ensemble(c.solver.nu, c.solver.dealias));
    write_file(dir / "inequalities.csv", suite.csv());
    for (const auto& row : suite.rows) {
      log << row.name << " " << row.kind << " max=" << format_double(row.max_ratio)
          << (row.exact() ? (row.holds() ? " holds" : " VIOLATED") : "") << "\n";
    }
    return suite.all_exact_hold() ? kExitPass : kExitFail;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace besovns::cli
