#pragma once

// Builds the noise-resilient Hadamard-test circuit: B on the data register,
// W gates fanned out through a GHZ-style parallelisation register, then the
// c_X V gates from the measured qubit.

#include <optional>
#include <vector>

#include "xbias/circuit.hpp"

namespace xbias {

// Gate given on data-relative qubits (0..n-1). `noise` positions refer to the
// emitted gate: for V and W, position 0 is the control.
struct SpecGate {
  LocalGate gate;
  NoiseChannel noise = NoiseChannel::noiseless();
};

struct HadamardTestSpec {
  std::size_t data_qubits = 1;
  std::vector<QubitPrep> data_prep;  // empty means |0> everywhere
  std::vector<SpecGate> b_gates;     // bias-preserving
  std::vector<SpecGate> v_gates;     // X-diagonal, arity <= 2
  std::vector<SpecGate> w_gates;     // Hermitian X-diagonal, arity <= 2
  std::size_t parallel_qubits = 0;

  double measured_prep_flip = 0.0;
  double parallel_prep_flip = 0.0;
  NoiseChannel entangler_noise = NoiseChannel::noiseless();  // both cXX; position 0 = measured
  NoiseChannel tree_noise = NoiseChannel::noiseless();       // every cNOT of the fan-out tree
  std::optional<double> identity_noise;                      // p_I on measured-qubit wait slots

  Basis basis = Basis::kZ;
  double measure_flip = 0.0;
};

struct BuildReport {
  std::size_t l_n = 0;    // gates touching the measured qubit
  std::size_t n_n = 0;    // prep + meas + non-identity gates on the measured qubit
  std::size_t n_i = 0;    // identity gates on the measured qubit
  std::size_t depth = 0;  // ASAP layers over all gates
  std::size_t total_gates = 0;

  bool operator==(const BuildReport&) const = default;
};

struct BuiltCircuit {
  Circuit circuit;
  BuildReport report;
};

// Throws DomainError when the spec is inconsistent (W without a
// parallelisation register, non-Hermitian W, V not X-diagonal, ...).
BuiltCircuit build(const HadamardTestSpec& spec);

BuildReport count_locations(const Circuit& c);

// ceil(log2 q) + 1: the cXX layer plus the doubling tree.
std::size_t entangler_depth(std::size_t q);

// ASAP layer count of a gate sequence.
std::size_t circuit_depth(const std::vector<GateInstance>& gates);

}  // namespace xbias
