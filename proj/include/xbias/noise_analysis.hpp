#pragma once

// Closed-form noise bookkeeping: attenuation of the measured qubit, shot
// counts, overhead schedules as the noise rate scales with n, and the
// direct-measurement comparison.

#include <cstdint>
#include <string>
#include <vector>

#include "xbias/circuit.hpp"

namespace xbias {

struct AttenuationFactor {
  std::string label;  // "prep", "meas", "gate 7 (ctrl_x)", ...
  double p = 0.0;
  double factor = 1.0;  // 1 - 2p
};

struct AttenuationReport {
  double alpha = 1.0;
  std::vector<AttenuationFactor> factors;
  std::size_t n_n = 0;  // prep + meas + non-identity gates on the measured qubit
  std::size_t n_i = 0;  // identity gates on the measured qubit with non-trivial noise
};

// Product of (1 - 2p_i) over every location of the measured qubit, where p_i
// sums the probabilities of the noise masks that contain it. Throws
// DomainError for circuits outside the Hadamard-test shape or any p_i >= 1/2.
AttenuationReport attenuation(const Circuit& c);

// ceil(2 ln(2/delta) / (alpha eps)^2)
std::uint64_t sample_complexity(double epsilon, double delta, double alpha);
// Same formula without rounding or integer range limits.
double sample_complexity_real(double epsilon, double delta, double alpha);

struct ErrorRateRule {
  enum class Kind { kConstant, kPowerLaw, kExpSqrtLog };
  Kind kind = Kind::kConstant;
  double p = 0.1;  // kConstant
  double a = 1.0;  // kPowerLaw: Delta_n = a / n^k
  double k = 1.0;

  static ErrorRateRule constant(double p) { return {Kind::kConstant, p, 1.0, 1.0}; }
  static ErrorRateRule power_law(double a, double k) { return {Kind::kPowerLaw, 0.0, a, k}; }
  // Delta_n = exp(-sqrt(ln n))
  static ErrorRateRule exp_sqrt_log() { return {Kind::kExpSqrtLog, 0.0, 1.0, 1.0}; }

  // p_n = (1 - Delta_n)/2
  double p_at(double n) const;
};

struct GateCountRule {
  enum class Kind { kConstant, kSqrtLog };
  Kind kind = Kind::kConstant;
  double count = 1.0;

  static GateCountRule constant(double count) { return {Kind::kConstant, count}; }
  // N_V = sqrt(ln n), not rounded
  static GateCountRule sqrt_log() { return {Kind::kSqrtLog, 0.0}; }

  double at(double n) const;
};

struct OverheadRow {
  double n = 0.0;
  double p_n = 0.0;
  double n_v = 0.0;
  double alpha = 0.0;
  double c_n = 0.0;  // may exceed 2^64, kept as a double
};

struct OverheadSchedule {
  std::vector<OverheadRow> rows;
  double slope = 0.0;  // least-squares d ln C_n / d ln n over the upper half of the rows
};

inline constexpr double kOverheadLocations = 4.0;  // prep, meas and the two cXX gates

// alpha_n = (1 - 2p_n)^{N_V(n) + extra}
OverheadSchedule overhead_schedule(const ErrorRateRule& rate, const GateCountRule& count,
                                   const std::vector<double>& n_values, double epsilon, double delta,
                                   double extra_locations = kOverheadLocations);

// Slope of ln y against ln x over the upper half of the points.
double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct MeasurementScalingReport {
  unsigned n = 0;
  double p_meas = 0.0;
  double p_correct = 0.0;
  double gap = 0.0;  // (1 - 2p)^n
};

// Parity of n independently flipped outcomes: p_correct = (1 + (1-2p)^n)/2.
MeasurementScalingReport direct_measure_scaling(unsigned n, double p_meas);
// sum over even i of C(n,i) p^i (1-p)^{n-i}; n <= 20.
double direct_measure_binomial(unsigned n, double p_meas);

}  // namespace xbias
