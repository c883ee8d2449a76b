#pragma once

// Certification of gate families from dense matrices: X-type membership,
// bias preservation as a generalized permutation of the X basis, the
// controlled-gate propagation rules, and explicit X-error propagation.

#include <optional>
#include <string>
#include <vector>

#include "xbias/circuit.hpp"
#include "xbias/gate_matrix.hpp"

namespace xbias {

// Looser than kTolerance: the H conjugation accumulates round-off.
inline constexpr double kCertifyTolerance = 1e-8;

// True iff m is diagonal in the X product basis. Throws DomainError when m is
// not unitary.
bool is_x_type(const GateMatrix& m, double tol = kCertifyTolerance);

// V|s> = e^{i global_phase} e^{i phases[s]} |perm[s]>, phases[0] == 0.
struct PermutationCertificate {
  std::vector<std::uint32_t> perm;
  std::vector<double> phases;
  double global_phase = 0.0;

  XBasisAction action() const;
  GateMatrix reconstruct() const;
};

// X_mask conjugated through the gate leaves U^X: `entry` is the largest
// off-diagonal element of m X_mask m^dagger in the X basis.
struct Counterexample {
  XMask mask;
  unsigned arity = 0;
  std::uint32_t row = 0;
  std::uint32_t col = 0;
  Complex entry;
  GateMatrix conjugated;  // m X_mask m^dagger, Z basis

  // e.g. "HXH=Z" for symbol "H"; falls back to the offending entry when the
  // conjugate is not a Pauli string.
  std::string describe(const std::string& symbol, bool hermitian) const;
};

struct BiasCertificate {
  std::optional<PermutationCertificate> certificate;
  std::optional<Counterexample> counterexample;

  bool preserving() const { return certificate.has_value(); }
};

BiasCertificate certify_bias_preserving(const GateMatrix& m, double tol = kCertifyTolerance);

struct Axis {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

struct ControlCheck {
  bool pass = false;
  std::string reason;
};

// Whether c_P u (control axis P = n.sigma) is bias preserving and keeps X
// errors on the target from reaching the control. Throws DomainError for a
// non-unit axis or non-unitary u.
ControlCheck check_controlled(Axis axis, const GateMatrix& u);

struct PropagationResult {
  XMask input;
  bool x_type = false;
  // Diagonal of g X_e g^dagger in the X basis (valid when x_type).
  std::vector<Complex> table;
  // Largest off-diagonal modulus: the failure witness when !x_type.
  double off_diagonal = 0.0;
  bool is_pauli = false;
  XMask output;         // valid when is_pauli
  Complex phase{1.0, 0.0};  // g X_e g^dagger = phase * X_output when is_pauli
};

PropagationResult propagate_error(const GateMatrix& g, XMask e);
PropagationResult propagate_error(const LocalGate& g, XMask e);

// "XZ", "IY", ... when m is a Pauli string up to a unit phase (position 0
// first); empty otherwise.
std::optional<std::string> pauli_label(const GateMatrix& m, double tol = kCertifyTolerance);

}  // namespace xbias
