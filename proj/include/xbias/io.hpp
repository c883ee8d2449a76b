#pragma once

// JSON formats for circuits, builder specs, scenarios and results.
//
// Circuit:
//   {"registers": {"measured": 1, "parallel": q, "data": n},
//    "prep": [{"qubit": i, "theta": t, "phi": f, "flip": p?}], "prep_flip": p,
//    "gates": [{"kind": k, "qubits": [...], "noise": [{"mask": [...], "p": p}], ...}],
//    "measure": {"qubit": 0, "basis": "Y"|"Z", "flip": p}}
// Unlisted qubits are prepared in |0>; "prep_flip" is the default flip for
// every qubit and a per-entry "flip" overrides it. Noise masks list global
// qubit indices; an omitted empty mask gets the leftover probability. Gate payloads by kind:
//   xdiag          "lambda": [[re, im], ...] or "angle": a (exp(i a X^{(x)k}))
//   perm           "perm": [...], "phases": [...]
//   cnot, toffoli_prime, cxx, identity   (no payload)
//   ctrl_x, ctrl_z "lambda" or "angle" for the payload on qubits[1:]
// Tables are indexed by sign strings: bit j is 1 for '-' on qubits[j].

#include <string>

#include <json.hpp>

#include "xbias/benchmark.hpp"
#include "xbias/builder.hpp"
#include "xbias/circuit.hpp"
#include "xbias/fast_sim.hpp"
#include "xbias/noise_analysis.hpp"

namespace xbias {

using Json = nlohmann::json;

Json circuit_to_json(const Circuit& c);
// Structural errors throw DomainError; the result is not validated.
Circuit circuit_from_json(const Json& j);

Json gate_to_json(const GateInstance& g);
GateInstance gate_from_json(const Json& j);
// `noise` masks in spec files use the emitted gate's positions.
LocalGate local_gate_from_json(const Json& j);
Json complex_list_to_json(const std::vector<Complex>& v);
std::vector<Complex> complex_list_from_json(const Json& j);

// Builder spec: {"data_qubits", "data_prep": [{"theta","phi","flip"}],
//   "b_gates"|"v_gates"|"w_gates": [{"kind", "qubits", payload, "noise": [{"mask": [positions], "p"}]}],
//   "parallel_qubits", "measured_prep_flip", "parallel_prep_flip",
//   "entangler_noise", "tree_noise": [{"mask": [positions], "p"}],
//   "identity_noise": p, "basis": "Y"|"Z", "measure_flip"}
HadamardTestSpec spec_from_json(const Json& j);

// {"type": "perfect"} | {"type": "imperfect", "p_z", "p_y"} |
// {"type": "miscalibrated", "multiplier"} | {"type": "coherent_x", "angle", "seed"}
NoiseScenario scenario_from_json(const Json& j);

Json to_json(const ValidationReport& r);
Json to_json(const EstimateResult& r);
Json to_json(const AttenuationReport& r);
Json to_json(const BuildReport& r);
Json to_json(const BenchmarkVerdict& v);

Json read_json_file(const std::string& path);
Circuit load_circuit(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace xbias
