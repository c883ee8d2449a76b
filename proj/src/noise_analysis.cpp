#include "xbias/noise_analysis.hpp"

#include <cmath>
#include <limits>

#include "xbias/errors.hpp"

namespace xbias {

namespace {

void add_factor(AttenuationReport& r, std::string label, double p) {
  if (!(p < 0.5)) throw DomainError(label + ": flip probability " + std::to_string(p) + " is not below 1/2");
  r.factors.push_back({std::move(label), p, 1.0 - 2.0 * p});
  r.alpha *= 1.0 - 2.0 * p;
}

}  // namespace

AttenuationReport attenuation(const Circuit& c) {
  require_valid(c);
  if (auto why = shape_violation(c)) throw DomainError("not Theorem-1 shaped: " + *why);
  const Qubit m = c.layout.measured();
  AttenuationReport r;
  add_factor(r, "prep", c.prep.qubits[m].flip);
  add_factor(r, "meas", c.measure.flip);
  r.n_n = 2;
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const auto& g = c.gates[i];
    for (std::size_t j = 0; j < g.gate.support.size(); ++j) {
      if (g.gate.support[j] != m) continue;
      auto* named = std::get_if<Named>(&g.gate.kind);
      bool identity = named && named->which == NamedGate::kIdentity;
      std::string label = "gate " + std::to_string(i) + " (" + kind_name(g.gate.kind) + ")";
      if (identity) {
        if (g.noise.trivial()) break;
        ++r.n_i;
      } else {
        ++r.n_n;
      }
      add_factor(r, std::move(label), g.noise.flip_probability(static_cast<unsigned>(j)));
    }
  }
  return r;
}

double sample_complexity_real(double epsilon, double delta, double alpha) {
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0,1)");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in (0,1]");
  const double ae = alpha * epsilon;
  return 2.0 * std::log(2.0 / delta) / (ae * ae);
}

std::uint64_t sample_complexity(double epsilon, double delta, double alpha) {
  double n = std::ceil(sample_complexity_real(epsilon, delta, alpha));
  if (n >= 0x1.0p64) throw DomainError("sample complexity exceeds 2^64");
  return static_cast<std::uint64_t>(n);
}

double ErrorRateRule::p_at(double n) const {
  switch (kind) {
    case Kind::kConstant:
      return p;
    case Kind::kPowerLaw:
      return 0.5 * (1.0 - a / std::pow(n, k));
    case Kind::kExpSqrtLog:
      return 0.5 * (1.0 - std::exp(-std::sqrt(std::log(n))));
  }
  return p;
}

double GateCountRule::at(double n) const {
  return kind == Kind::kConstant ? count : std::sqrt(std::log(n));
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("slope fit needs at least two points");
  const std::size_t first = x.size() / 2 == x.size() - 1 ? 0 : x.size() / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double k = static_cast<double>(x.size() - first);
  for (std::size_t i = first; i < x.size(); ++i) {
    double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = k * sxx - sx * sx;
  if (den == 0.0) throw DomainError("slope fit needs distinct n values");
  return (k * sxy - sx * sy) / den;
}

OverheadSchedule overhead_schedule(const ErrorRateRule& rate, const GateCountRule& count,
                                   const std::vector<double>& n_values, double epsilon, double delta,
                                   double extra_locations) {
  OverheadSchedule s;
  std::vector<double> xs, ys;
  for (double n : n_values) {
    OverheadRow row;
    row.n = n;
    row.p_n = rate.p_at(n);
    if (!(row.p_n >= 0.0 && row.p_n < 0.5))
      throw DomainError("p_n = " + std::to_string(row.p_n) + " at n = " + std::to_string(n) + " is outside [0,1/2)");
    row.n_v = count.at(n);
    // computed in log space: alpha_n underflows for steep schedules
    const double log_alpha = (row.n_v + extra_locations) * std::log1p(-2.0 * row.p_n);
    row.alpha = std::exp(log_alpha);
    const double log_c = std::log(2.0 * std::log(2.0 / delta)) - 2.0 * (log_alpha + std::log(epsilon));
    row.c_n = std::ceil(std::exp(log_c));
    if (!std::isfinite(row.c_n)) row.c_n = std::numeric_limits<double>::infinity();
    xs.push_back(n);
    ys.push_back(std::isfinite(row.c_n) ? row.c_n : std::exp(std::min(log_c, 700.0)));
    s.rows.push_back(row);
  }
  if (xs.size() >= 2) s.slope = fit_loglog_slope(xs, ys);
  return s;
}

MeasurementScalingReport direct_measure_scaling(unsigned n, double p_meas) {
  if (n < 1) throw DomainError("n must be at least 1");
  if (!(p_meas >= 0.0 && p_meas < 0.5)) throw DomainError("p_meas must lie in [0,1/2)");
  MeasurementScalingReport r;
  r.n = n;
  r.p_meas = p_meas;
  r.gap = std::pow(1.0 - 2.0 * p_meas, n);
  r.p_correct = 0.5 * (1.0 + r.gap);
  return r;
}

double direct_measure_binomial(unsigned n, double p_meas) {
  if (n > 20) throw SizeError("binomial oracle limited to n <= 20");
  double total = 0.0, binom = 1.0;
  for (unsigned i = 0; i <= n; ++i) {
    if (i % 2 == 0) total += binom * std::pow(p_meas, i) * std::pow(1.0 - p_meas, n - i);
    binom = binom * (n - i) / (i + 1);
  }
  return total;
}

}  // namespace xbias
