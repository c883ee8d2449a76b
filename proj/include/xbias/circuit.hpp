#pragma once

// Domain types shared by every backend: register layout, local gates and
// their X-basis action, bit-flip noise channels, and whole circuits.
//
// Conventions used throughout the library:
//  * Qubit q of an m-qubit register is bit q of a computational-basis index.
//  * Inside a gate, position j of the support is bit j of a local index. The
//    same local index labels Z-basis states (bit = 1 for |1>) and X-basis
//    sign strings (bit = 1 for |->), since H^{(x)k} maps one onto the other.
//  * Controlled payloads act when the control sits in the -1 eigenstate of
//    the control axis: |-> for CtrlX, |1> for CtrlZ.

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace xbias {

using Qubit = std::uint32_t;
using Complex = std::complex<double>;

inline constexpr std::size_t kMaxGateArity = 3;
// Absolute tolerance for unitarity, Hermiticity and normalization checks.
inline constexpr double kTolerance = 1e-12;

// Global indexing is contiguous: measured (0), parallelisation, then data.
struct RegisterLayout {
  std::size_t parallel = 0;
  std::size_t data = 1;

  std::size_t total() const { return 1 + parallel + data; }
  Qubit measured() const { return 0; }
  Qubit parallel_qubit(std::size_t i) const { return static_cast<Qubit>(1 + i); }
  Qubit data_qubit(std::size_t i) const { return static_cast<Qubit>(1 + parallel + i); }
  bool is_parallel(Qubit q) const { return q >= 1 && q < 1 + parallel; }
  bool is_data(Qubit q) const { return q >= 1 + parallel && q < total(); }

  bool operator==(const RegisterLayout&) const = default;
};

// X-basis label {+,-}^k of a local basis state; bit j set means |-> at j.
struct SignString {
  std::uint32_t bits = 0;
  std::uint8_t length = 0;

  static SignString parse(std::string_view text);
  std::string str() const;
  bool minus(unsigned position) const { return (bits >> position) & 1U; }

  bool operator==(const SignString&) const = default;
};

// X_alpha as a bitmask over the positions of the owning support.
struct XMask {
  std::uint32_t bits = 0;

  bool contains(unsigned position) const { return (bits >> position) & 1U; }
  bool empty() const { return bits == 0; }
  static XMask of(std::initializer_list<unsigned> positions);

  // X_a X_b = X_{a symmetric-difference b}
  friend XMask operator*(XMask a, XMask b) { return XMask{a.bits ^ b.bits}; }
  bool operator==(const XMask&) const = default;
};

struct NoiseTerm {
  XMask mask;
  double p = 0.0;

  bool operator==(const NoiseTerm&) const = default;
};

// Probability distribution over X masks applied after a gate.
struct NoiseChannel {
  std::vector<NoiseTerm> terms;

  static NoiseChannel noiseless() { return NoiseChannel{{NoiseTerm{XMask{}, 1.0}}}; }
  // {(empty, 1-p), ({position}, p)}
  static NoiseChannel bit_flip(unsigned position, double p);

  // Total probability of the masks that flip `position`.
  double flip_probability(unsigned position) const;
  bool trivial() const;

  bool operator==(const NoiseChannel&) const = default;
};

// --- gate families -------------------------------------------------------

// Element of U^X_k: eigenvalue table lambda(s) in SignString order.
struct XDiag {
  std::vector<Complex> lambda;
  bool operator==(const XDiag&) const = default;
};

// Element of B_k given by its X-basis action V|s> = e^{i phase(s)} |perm(s)>.
struct BiasPerm {
  std::vector<std::uint32_t> perm;
  std::vector<double> phases;
  bool operator==(const BiasPerm&) const = default;
};

enum class NamedGate { kCnot, kToffoliPrime, kCxx, kIdentity };

struct Named {
  NamedGate which = NamedGate::kIdentity;
  bool operator==(const Named&) const = default;
};

// c_X U with control at position 0; payload is U's X-basis eigenvalue table
// over positions 1..k-1.
struct CtrlX {
  std::vector<Complex> payload;
  bool operator==(const CtrlX&) const = default;
};

// Z-basis control at position 0; payload must be Hermitian (eigenvalues +-1).
struct CtrlZ {
  std::vector<Complex> payload;
  bool operator==(const CtrlZ&) const = default;
};

using GateKind = std::variant<XDiag, BiasPerm, Named, CtrlX, CtrlZ>;

struct LocalGate {
  std::vector<Qubit> support;
  GateKind kind;

  std::size_t arity() const { return support.size(); }
  bool operator==(const LocalGate&) const = default;
};

std::string_view named_gate_name(NamedGate g);
std::optional<NamedGate> named_gate_from_name(std::string_view name);
std::size_t named_gate_arity(NamedGate g);
std::string kind_name(const GateKind& kind);

// Validating constructors. They throw DomainError on malformed input; the raw
// aggregate stays constructible so that loaders can hand bad circuits to
// validate_circuit.
LocalGate make_xdiag(std::vector<Qubit> support, std::vector<Complex> lambda);
// exp(i angle X^{(x)k}); lambda(s) = exp(i angle (-1)^{|s|}).
LocalGate make_x_rotation(std::vector<Qubit> support, double angle);
LocalGate make_bias_perm(std::vector<Qubit> support, std::vector<std::uint32_t> perm,
                         std::vector<double> phases);
LocalGate make_cnot(Qubit control, Qubit target);
LocalGate make_toffoli_prime(Qubit control_a, Qubit control_b, Qubit target);
LocalGate make_cxx(Qubit control, Qubit target);
LocalGate make_identity(std::vector<Qubit> support);
LocalGate make_ctrl_x(Qubit control, std::vector<Qubit> targets, std::vector<Complex> payload);
LocalGate make_ctrl_z(Qubit control, std::vector<Qubit> targets, std::vector<Complex> payload);

// X-rotation eigenvalue table on k qubits (used for payloads too).
std::vector<Complex> x_rotation_table(std::size_t k, double angle);

// Returns the same gate acting on mapped qubits: new support[j] = map[old support[j]].
LocalGate relabel(const LocalGate& gate, const std::vector<Qubit>& map);

// Generalized-permutation form of a gate in the X product basis. Every gate
// family here has one: XDiag and CtrlX are diagonal, BiasPerm/CtrlZ/Named
// permute sign strings.
struct XBasisAction {
  std::vector<std::uint32_t> perm;
  std::vector<Complex> phase;  // unit modulus

  bool diagonal() const;
};

// Throws DomainError for malformed payloads.
XBasisAction x_basis_action(const LocalGate& gate);

struct BiasAction {
  SignString image;
  double phase = 0.0;
};

// (sigma_V(s), phi_{s,V}) for a bias-preserving gate.
BiasAction act_bias_gate(const LocalGate& gate, SignString s);

// lambda(s) for a gate that is diagonal in the X basis.
Complex eigenvalue_xdiag(const LocalGate& gate, SignString s);

XMask sample_noise(const NoiseChannel& channel, std::mt19937_64& rng);

struct GateInstance {
  LocalGate gate;
  NoiseChannel noise = NoiseChannel::noiseless();

  bool operator==(const GateInstance&) const = default;
};

// |phi> = cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>, followed by a bit flip
// with probability `flip`.
struct QubitPrep {
  double theta = 0.0;
  double phi = 0.0;
  double flip = 0.0;

  static QubitPrep zero() { return {}; }
  static QubitPrep plus() { return {1.5707963267948966, 0.0, 0.0}; }
  std::array<Complex, 2> amplitudes() const;
  bool operator==(const QubitPrep&) const = default;
};

struct PrepState {
  std::vector<QubitPrep> qubits;
  bool operator==(const PrepState&) const = default;
};

enum class Basis { kY, kZ };

struct MeasurementSpec {
  Qubit qubit = 0;
  Basis basis = Basis::kZ;
  double flip = 0.0;

  bool operator==(const MeasurementSpec&) const = default;
};

struct Circuit {
  RegisterLayout layout;
  PrepState prep;
  std::vector<GateInstance> gates;
  MeasurementSpec measure;

  // All qubits in |0>, no gates, noiseless measurement of the measured qubit.
  static Circuit empty(RegisterLayout layout);
  std::size_t qubits() const { return layout.total(); }
  bool operator==(const Circuit&) const = default;
};

// --- validation ----------------------------------------------------------

enum class ViolationKind {
  kLayout,
  kPrep,
  kMeasurement,
  kSupport,
  kArity,
  kPayloadSize,
  kNonUnitEigenvalue,
  kNotPermutation,
  kCtrlZNotHermitian,
  kNoiseNotNormalized,
  kNoiseProbability,
  kNoiseMask,
};

struct Violation {
  ViolationKind kind;
  std::optional<std::size_t> gate;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(ViolationKind kind) const;
  std::string summary() const;
};

ValidationReport validate_circuit(const Circuit& circuit);
// Problems with one gate (support and payload) against `qubits` total qubits.
std::vector<Violation> validate_gate(const LocalGate& gate, std::size_t qubits);
std::vector<Violation> validate_noise(const NoiseChannel& noise, std::size_t arity);
// Throws DomainError carrying the report summary when the circuit is invalid.
void require_valid(const Circuit& circuit);

// --- Hadamard-test shape -------------------------------------------------

// <psi|U|psi> with |psi> = B (x)_i |phi_i>, everything on `qubits` data qubits
// indexed from 0.
struct OverlapProblem {
  std::size_t qubits = 0;
  std::vector<QubitPrep> prep;
  std::vector<LocalGate> b_gates;
  std::vector<LocalGate> u_gates;
};

// Empty when the circuit has the restricted Hadamard-test shape; otherwise a
// description of the first offending element.
std::optional<std::string> shape_violation(const Circuit& circuit);

// Splits a Hadamard-test circuit into its preparation unitary B (data-only
// gates before the first controlled gate) and U (payloads of the c_X V and
// Z-controlled W gates). Throws DomainError if the circuit is not shaped.
OverlapProblem extract_overlap_problem(const Circuit& circuit);

}  // namespace xbias
