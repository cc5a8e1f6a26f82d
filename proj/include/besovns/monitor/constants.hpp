#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include "besovns/error.hpp"
#include "besovns/io/csv.hpp"

namespace besovns::monitor {

/// A constant the analysis leaves unspecified, replaced by the largest ratio
/// measured over a seeded ensemble.
struct CalibratedConstant {
  std::string name;
  double value = 1.0;
  std::string ensemble;  // how to regenerate the fields
  std::string grids;     // grid sizes used, ';'-separated

  friend bool operator==(const CalibratedConstant&, const CalibratedConstant&) = default;
};

/// Name-keyed set of calibrated constants, stored as
///   name,value,ensemble,grids
/// with the value printed to 17 significant digits.
class ConstantsTable {
 public:
  void set(CalibratedConstant c) {
    if (!(c.value > 0.0) || !std::isfinite(c.value)) {
      throw std::invalid_argument("calibrated constant '" + c.name + "' must be positive and finite");
    }
    if (c.name.find(',') != std::string::npos || c.ensemble.find(',') != std::string::npos ||
        c.grids.find(',') != std::string::npos) {
      throw std::invalid_argument("constant fields may not contain commas");
    }
    entries_[c.name] = std::move(c);
  }

  const CalibratedConstant* find(const std::string& name) const {
    const auto it = entries_.find(name);
    return it == entries_.end() ? nullptr : &it->second;
  }

  bool contains(const std::string& name) const { return find(name) != nullptr; }

  double value(const std::string& name) const {
    const auto* c = find(name);
    if (!c) throw Error("no calibrated constant named '" + name + "'");
    return c->value;
  }

  double value_or(const std::string& name, double fallback) const {
    const auto* c = find(name);
    return c ? c->value : fallback;
  }

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  std::string to_csv() const {
    std::string out = "name,value,ensemble,grids\n";
    for (const auto& [name, c] : entries_) {
      out += io::join_csv({c.name, io::format_double(c.value), c.ensemble, c.grids}) + "\n";
    }
    return out;
  }

  static ConstantsTable from_csv(const std::string& text) {
    ConstantsTable t;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    bool header = false;
    while (std::getline(is, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line.front() == '#') continue;
      if (!header) {
        if (line != "name,value,ensemble,grids") throw Error("constants file: unexpected header on line 1");
        header = true;
        continue;
      }
      const auto f = io::split_csv_line(line);
      if (f.size() != 4) throw Error("constants file line " + std::to_string(lineno) + ": expected 4 fields");
      try {
        t.set({f[0], io::parse_double(f[1]), f[2], f[3]});
      } catch (const std::invalid_argument& e) {
        throw Error("constants file line " + std::to_string(lineno) + ": " + e.what());
      }
    }
    return t;
  }

  void write(const std::filesystem::path& path) const {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot write constants file: " + path.string());
    os << to_csv();
    if (!os) throw Error("failed writing constants file: " + path.string());
  }

  static ConstantsTable read(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("cannot open constants file: " + path.string());
    std::stringstream ss;
    ss << is.rdbuf();
    return from_csv(ss.str());
  }

 private:
  std::map<std::string, CalibratedConstant> entries_;
};

}  // namespace besovns::monitor
