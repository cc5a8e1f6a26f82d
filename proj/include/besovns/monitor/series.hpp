#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace besovns::monitor {

/// Ordered (t, value) samples of one scalar diagnostic.
class TimeSeries {
 public:
  TimeSeries() = default;
  TimeSeries(std::vector<double> t, std::vector<double> v) {
    if (t.size() != v.size()) throw std::invalid_argument("time series needs as many values as times");
    for (std::size_t i = 0; i < t.size(); ++i) push(t[i], v[i]);
  }

  void push(double t, double v) {
    if (!std::isfinite(t) || !std::isfinite(v)) throw std::invalid_argument("time series entries must be finite");
    if (!t_.empty() && !(t > t_.back())) throw std::invalid_argument("time series times must increase strictly");
    t_.push_back(t);
    v_.push_back(v);
  }

  std::size_t size() const { return t_.size(); }
  bool empty() const { return t_.empty(); }
  double t(std::size_t i) const { return t_[i]; }
  double value(std::size_t i) const { return v_[i]; }
  const std::vector<double>& times() const { return t_; }
  const std::vector<double>& values() const { return v_; }

 private:
  std::vector<double> t_;
  std::vector<double> v_;
};

/// Trapezoid integral of value^q up to every sample; entry 0 is 0.
inline std::vector<double> running_bochner(const TimeSeries& s, double q_time) {
  if (s.empty()) throw std::invalid_argument("Bochner integral of an empty series");
  if (!(q_time >= 1.0)) throw std::invalid_argument("Bochner integral requires q >= 1");
  for (double v : s.values()) {
    if (v < 0.0) throw std::invalid_argument("Bochner integral of a negative series");
  }
  std::vector<double> out(s.size(), 0.0);
  double prev = std::pow(s.value(0), q_time);
  for (std::size_t i = 1; i < s.size(); ++i) {
    const double cur = std::pow(s.value(i), q_time);
    out[i] = out[i - 1] + 0.5 * (s.t(i) - s.t(i - 1)) * (prev + cur);
    prev = cur;
  }
  return out;
}

/// int value(t)^q dt over the sampled range.
inline double bochner_integral(const TimeSeries& s, double q_time) {
  return running_bochner(s, q_time).back();
}

/// Trapezoid running integral of a rate already raised to its powers.
inline std::vector<double> running_integral(const TimeSeries& s) { return running_bochner(s, 1.0); }

/// B(t_i) = v0 exp(C int_0^{t_i} a), where `rate` holds the integrand a(t).
inline TimeSeries gronwall_bound(double v0, const TimeSeries& rate, double C) {
  if (!(C > 0.0)) throw std::invalid_argument("Gronwall constant must be positive");
  if (!(v0 >= 0.0)) throw std::invalid_argument("Gronwall initial value must be nonnegative");
  const std::vector<double> I = running_integral(rate);
  TimeSeries out;
  for (std::size_t i = 0; i < rate.size(); ++i) out.push(rate.t(i), v0 * std::exp(C * I[i]));
  return out;
}

/// Same, for a single criterion series raised to q_time.
inline TimeSeries gronwall_bound(double v0, const TimeSeries& criterion, double q_time, double C) {
  if (criterion.empty()) throw std::invalid_argument("Gronwall bound of an empty series");
  TimeSeries rate;
  for (std::size_t i = 0; i < criterion.size(); ++i) rate.push(criterion.t(i), std::pow(criterion.value(i), q_time));
  return gronwall_bound(v0, rate, C);
}

}  // namespace besovns::monitor
