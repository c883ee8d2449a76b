#pragma once

// Hardware-benchmarking protocol: run a (simulated) noisy experiment, predict
// the measured-qubit observables classically, and decide whether the two are
// consistent. Diagnosis hints are heuristic.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "xbias/circuit.hpp"
#include "xbias/dense.hpp"
#include "xbias/fast_sim.hpp"
#include "xbias/rng.hpp"

namespace xbias {

// The declared noise is exact.
struct PerfectBias {};
// Every gate touching the data register also applies Z (p_z) and Y (p_y)
// errors to each of its data qubits.
struct ImperfectBias {
  double p_z = 0.0;
  double p_y = 0.0;
};
// True flip probabilities at measured-qubit locations (prep and measurement
// included) are `multiplier` times the declared ones.
struct Miscalibrated {
  double multiplier = 1.0;
};
// After each gate, exp(i angle X) on one support qubit picked with `seed`.
struct CoherentX {
  double angle = 0.0;
  std::uint64_t seed = kDefaultSeed;
};

using NoiseScenario = std::variant<PerfectBias, ImperfectBias, Miscalibrated, CoherentX>;

std::string scenario_name(const NoiseScenario& s);
void validate_scenario(const NoiseScenario& s);

enum class Backend { kDense, kSampled };

struct BasisCounts {
  std::uint64_t shots = 0;
  std::uint64_t plus = 0;  // outcomes +1

  double expectation() const;
};

struct ExperimentCounts {
  BasisCounts y;
  BasisCounts z;
};

// Exact outcome expectations <Y>, <Z> including the measurement flip.
struct ExperimentExpectations {
  double y = 0.0;
  double z = 0.0;
};

// Dense backend (total qubits <= 10).
ExperimentExpectations experiment_expectations(const Circuit& c, const NoiseScenario& scenario);
// Reduced state of the measured qubit before measurement, under the scenario.
// `padding` extra identity layers on every data qubit are inserted after B.
DensityMatrix experiment_reduced_state(const Circuit& c, const NoiseScenario& scenario, std::size_t padding = 0);

// Draws `shots` outcomes per basis; Y uses substream 0, Z substream 1.
ExperimentCounts sample_counts(const ExperimentExpectations& e, std::uint64_t shots, std::uint64_t seed);

ExperimentCounts simulate_experiment(const Circuit& c, const NoiseScenario& scenario, std::uint64_t shots,
                                     std::uint64_t seed, Backend backend = Backend::kDense);

struct Prediction {
  double alpha = 1.0;
  double y = 0.0;
  double z = 1.0;
  bool exact = true;  // false when (y, z) came from the sampler

  double ay() const { return alpha * y; }
  double az() const { return alpha * z; }
};

// Exact enumeration for n <= 20, otherwise the sampler with `plan`.
Prediction predict(const Circuit& c, const EstimationPlan& plan = EstimationPlan::for_accuracy(0.01, 0.01));

// Dense-only evidence used by hints I and III.
struct Diagnostics {
  Bloch base;     // measured qubit, experiment as run
  Bloch padded;   // same with extra identity layers on the data register
  std::size_t padding = 0;
};

inline constexpr std::size_t kDepthProbeLayers = 4;
inline constexpr double kDiagnosticTolerance = 1e-6;

Diagnostics diagnose(const Circuit& c, const NoiseScenario& scenario, std::size_t padding = kDepthProbeLayers);

struct Hint {
  std::string label;  // "I", "II" or "III"
  std::string evidence;
};

struct BenchmarkVerdict {
  bool consistent = false;
  double est_y = 0.0;
  double est_z = 0.0;
  double pred_ay = 0.0;
  double pred_az = 0.0;
  double halfwidth = 0.0;
  std::vector<Hint> hints;
  std::uint64_t shots = 0;  // Y and Z together
};

// Per-observable Hoeffding half-width for +-1 outcomes, union bound over the
// two bases: sqrt(2 ln(4/delta) / shots).
double confidence_halfwidth(std::uint64_t shots, double delta);

BenchmarkVerdict compare(const ExperimentCounts& counts, const Prediction& prediction, double delta,
                         const std::optional<Diagnostics>& diagnostics = std::nullopt);

}  // namespace xbias
