#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "besovns/io/csv.hpp"
#include "besovns/monitor/calibration.hpp"
#include "besovns/monitor/spec.hpp"
#include "besovns/ns/state.hpp"

namespace besovns::cli {

struct MonitorConfig {
  /// s used by `theorem` lines without their own `s`, clamped per theorem.
  double default_s = monitor::kDefaultS;
  /// Empty means every criterion at default_s.
  std::vector<monitor::CriterionSpec> specs;
  /// Constants file; empty means calibrate in-process before the run.
  std::string constants;
  /// Calibrate in-process even when a constants file is named.
  bool calibrate = false;
  int calibration_count = 100;
  std::uint64_t calibration_seed = 0;
  int calibration_n = 32;
  double epsilon = 0.5;

  std::vector<monitor::CriterionSpec> effective_specs() const {
    return specs.empty() ? monitor::default_specs(default_s) : specs;
  }

  monitor::CalibrationEnsemble ensemble(double nu, bool dealias) const {
    monitor::CalibrationEnsemble e;
    e.first_seed = calibration_seed;
    e.count = calibration_count;
    e.n = calibration_n;
    e.nu = nu;
    e.dealias = dealias;
    return e;
  }

  friend bool operator==(const MonitorConfig&, const MonitorConfig&) = default;
};

struct OutputConfig {
  std::string dir = "besovns-out";
  /// Empty means derived from the initial condition, grid and seed.
  std::string run_id;
  bool timeseries = true;
  bool report = true;
  bool checkpoints = false;
  bool chains = false;

  friend bool operator==(const OutputConfig&, const OutputConfig&) = default;
};

struct RunConfig {
  ns::SolverConfig solver;
  MonitorConfig monitor;
  OutputConfig output;

  std::string run_id() const {
    if (!output.run_id.empty()) return output.run_id;
    std::string id = ns::to_string(solver.init) + "-n" + std::to_string(solver.n);
    if (solver.init == ns::InitialCondition::Random) id += "-seed" + std::to_string(solver.seed);
    return id;
  }

  void validate() const {
    solver.validate();
    for (const auto& s : monitor.specs) s.validate();
    if (monitor.calibration_count < 1) throw std::invalid_argument("calibration_count must be >= 1");
    Grid check(monitor.calibration_n);
    (void)check;
    if (!(monitor.epsilon > 0.0 && monitor.epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  }

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// A config error with the offending line (0 when not tied to one line).
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(int line, const std::string& what)
      : std::invalid_argument(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline double to_double(std::string_view v, const std::string& key, int line) {
  try {
    const double d = io::parse_double(v);
    if (!std::isfinite(d)) throw std::invalid_argument("");
    return d;
  } catch (const std::invalid_argument&) {
    throw ConfigError(line, "expected a finite number for '" + key + "' (got '" + std::string(v) + "')");
  }
}

template <class Int>
Int to_integer(std::string_view v, const std::string& key, int line) {
  Int out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ConfigError(line, "expected an integer for '" + key + "' (got '" + std::string(v) + "')");
  }
  return out;
}

inline bool to_bool(std::string_view v, const std::string& key, int line) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError(line, "expected true or false for '" + key + "' (got '" + std::string(v) + "')");
}

inline const char* to_text(bool b) { return b ? "true" : "false"; }

}  // namespace detail

/// Parses `key = value` lines in [solver], [monitor] and [output] sections.
/// In [monitor], `theorem = ID` (or `all`) adds criteria and a following
/// `s = x` sets the s of the criterion just added; an `s` before any
/// `theorem` line sets the default s.
inline RunConfig parse_config(std::string_view text) {
  RunConfig c;
  std::string section;
  int line_no = 0;
  bool last_has_theorem = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = text.find('\n', pos);
    std::string_view raw = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;
    if (const std::size_t hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const std::string_view line = detail::trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(line_no, "malformed section header '" + std::string(line) + "'");
      section = std::string(detail::trim(line.substr(1, line.size() - 2)));
      if (section != "solver" && section != "monitor" && section != "output") {
        throw ConfigError(line_no, "unknown section [" + section + "] (expected [solver], [monitor] or [output])");
      }
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(line_no, "expected 'key = value' (got '" + std::string(line) + "')");
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string_view value = detail::trim(line.substr(eq + 1));
    if (section.empty()) throw ConfigError(line_no, "key '" + key + "' outside a section");
    if (value.empty()) throw ConfigError(line_no, "missing value for '" + key + "'");
    auto unknown = [&] { return ConfigError(line_no, "unknown key '" + key + "' in [" + section + "]"); };
    auto& S = c.solver;
    auto& M = c.monitor;
    auto& O = c.output;

    if (section == "solver") {
      if (key == "n") {
        S.n = detail::to_integer<int>(value, key, line_no);
        try {
          Grid check(S.n);
        } catch (const std::exception& e) {
          throw ConfigError(line_no, e.what());
        }
      } else if (key == "nu") {
        S.nu = detail::to_double(value, key, line_no);
        if (!(S.nu > 0.0)) throw ConfigError(line_no, "nu must be positive");
      } else if (key == "dt") {
        S.dt = detail::to_double(value, key, line_no);
        if (!(S.dt > 0.0)) throw ConfigError(line_no, "dt must be positive");
      } else if (key == "T") {
        S.T = detail::to_double(value, key, line_no);
        if (!(S.T >= 0.0)) throw ConfigError(line_no, "T must be nonnegative");
      } else if (key == "dealias") {
        S.dealias = detail::to_bool(value, key, line_no);
      } else if (key == "init") {
        try {
          S.init = ns::initial_condition_from_string(std::string(value));
        } catch (const std::invalid_argument& e) {
          throw ConfigError(line_no, e.what());
        }
      } else if (key == "slope") {
        S.slope = detail::to_double(value, key, line_no);
      } else if (key == "amplitude") {
        S.amplitude = detail::to_double(value, key, line_no);
        if (!(S.amplitude >= 0.0)) throw ConfigError(line_no, "amplitude must be nonnegative");
      } else if (key == "band") {
        S.band = detail::to_double(value, key, line_no);
        if (!(S.band >= 1.0)) throw ConfigError(line_no, "band must be >= 1");
      } else if (key == "seed") {
        S.seed = detail::to_integer<std::uint64_t>(value, key, line_no);
      } else if (key == "stride") {
        S.stride = detail::to_integer<int>(value, key, line_no);
        if (S.stride < 1) throw ConfigError(line_no, "stride must be >= 1");
      } else {
        throw unknown();
      }
    } else if (section == "monitor") {
      if (key == "theorem") {
        if (value == "all") {
          for (const auto& s : monitor::default_specs(M.default_s)) M.specs.push_back(s);
          last_has_theorem = false;
        } else {
          try {
            const monitor::TheoremId id = monitor::theorem_from_string(std::string(value));
            M.specs.push_back(monitor::CriterionSpec::make(id, monitor::clamp_s(id, M.default_s)));
          } catch (const std::invalid_argument& e) {
            throw ConfigError(line_no, e.what());
          }
          last_has_theorem = true;
        }
      } else if (key == "s") {
        const double s = detail::to_double(value, key, line_no);
        if (!last_has_theorem) {
          if (!(s > 0.0 && s < 1.0)) throw ConfigError(line_no, "default s requires 0 < s < 1");
          M.default_s = s;
        } else {
          monitor::CriterionSpec& spec = M.specs.back();
          if (!spec.has_s()) throw ConfigError(line_no, monitor::to_string(spec.theorem) + " takes no s parameter");
          spec.s = s;
          try {
            spec.validate();
          } catch (const std::invalid_argument& e) {
            throw ConfigError(line_no, e.what());
          }
        }
      } else if (key == "constants") {
        M.constants = std::string(value);
      } else if (key == "calibrate") {
        M.calibrate = detail::to_bool(value, key, line_no);
      } else if (key == "calibration_count") {
        M.calibration_count = detail::to_integer<int>(value, key, line_no);
        if (M.calibration_count < 1) throw ConfigError(line_no, "calibration_count must be >= 1");
      } else if (key == "calibration_seed") {
        M.calibration_seed = detail::to_integer<std::uint64_t>(value, key, line_no);
      } else if (key == "calibration_n") {
        M.calibration_n = detail::to_integer<int>(value, key, line_no);
        try {
          Grid check(M.calibration_n);
        } catch (const std::exception& e) {
          throw ConfigError(line_no, e.what());
        }
      } else if (key == "epsilon") {
        M.epsilon = detail::to_double(value, key, line_no);
        if (!(M.epsilon > 0.0 && M.epsilon < 1.0)) throw ConfigError(line_no, "epsilon must lie in (0, 1)");
      } else {
        throw unknown();
      }
    } else {
      if (key == "dir") {
        O.dir = std::string(value);
      } else if (key == "run_id") {
        if (value.find(',') != std::string_view::npos) throw ConfigError(line_no, "run_id must not contain commas");
        O.run_id = std::string(value);
      } else if (key == "timeseries") {
        O.timeseries = detail::to_bool(value, key, line_no);
      } else if (key == "report") {
        O.report = detail::to_bool(value, key, line_no);
      } else if (key == "checkpoints") {
        O.checkpoints = detail::to_bool(value, key, line_no);
      } else if (key == "chains") {
        O.chains = detail::to_bool(value, key, line_no);
      } else {
        throw unknown();
      }
    }
  }
  c.validate();
  return c;
}

/// Every field written out explicitly; parse_config(serialize(c)) == c.
inline std::string serialize(const RunConfig& c) {
  using io::format_double;
  const auto& S = c.solver;
  const auto& M = c.monitor;
  const auto& O = c.output;
  std::ostringstream os;
  os << "[solver]\n"
     << "n = " << S.n << "\n"
     << "nu = " << format_double(S.nu) << "\n"
     << "dt = " << format_double(S.dt) << "\n"
     << "T = " << format_double(S.T) << "\n"
     << "dealias = " << detail::to_text(S.dealias) << "\n"
     << "init = " << ns::to_string(S.init) << "\n"
     << "slope = " << format_double(S.slope) << "\n"
     << "amplitude = " << format_double(S.amplitude) << "\n"
     << "band = " << format_double(S.band) << "\n"
     << "seed = " << S.seed << "\n"
     << "stride = " << S.stride << "\n"
     << "\n[monitor]\n"
     << "s = " << format_double(M.default_s) << "\n";
  for (const auto& spec : M.specs) {
    os << "theorem = " << monitor::to_string(spec.theorem) << "\n";
    if (spec.has_s()) os << "s = " << format_double(spec.s) << "\n";
  }
  if (!M.constants.empty()) os << "constants = " << M.constants << "\n";
  os << "calibrate = " << detail::to_text(M.calibrate) << "\n"
     << "calibration_count = " << M.calibration_count << "\n"
     << "calibration_seed = " << M.calibration_seed << "\n"
     << "calibration_n = " << M.calibration_n << "\n"
     << "epsilon = " << format_double(M.epsilon) << "\n"
     << "\n[output]\n"
     << "dir = " << O.dir << "\n";
  if (!O.run_id.empty()) os << "run_id = " << O.run_id << "\n";
  os << "timeseries = " << detail::to_text(O.timeseries) << "\n"
     << "report = " << detail::to_text(O.report) << "\n"
     << "checkpoints = " << detail::to_text(O.checkpoints) << "\n"
     << "chains = " << detail::to_text(O.chains) << "\n";
  return os.str();
}

inline RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(0, "cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

/// Documented defaults, shown by --help.
inline std::string defaults_help() {
  return "# Config file: [solver], [monitor], [output] sections of 'key = value' lines, '#' comments.\n"
         "# With no theorem lines every criterion runs at s = 0.2 moved into its interval.\n"
         "# With no constants file, run calibrates in-process on the configured ensemble.\n"
         "# Defaults:\n" +
         serialize(RunConfig{});
}

}  // namespace besovns::cli
