#include "xbias/circuit.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include "xbias/bias_check.hpp"
#include "xbias/errors.hpp"
#include "xbias/gate_matrix.hpp"

namespace xbias {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

bool unit_modulus(Complex z) { return std::abs(std::abs(z) - 1.0) <= kTolerance; }

bool plus_minus_one(Complex z) {
  return std::abs(z - Complex(1.0)) <= kTolerance || std::abs(z + Complex(1.0)) <= kTolerance;
}

std::string gate_prefix(std::optional<std::size_t> gate) {
  return gate ? "gate " + std::to_string(*gate) + ": " : std::string();
}

Violation violation(ViolationKind kind, std::optional<std::size_t> gate, const std::string& text) {
  return Violation{kind, gate, gate_prefix(gate) + text};
}

// Tables are derived from the dense matrices once and frozen; see the
// snapshot test in the bias-check unit tests.
const XBasisAction& named_table(NamedGate g) {
  static const auto build = [](NamedGate which) {
    auto cert = certify_bias_preserving(named_matrix(which));
    if (!cert.certificate) throw std::logic_error("named gate failed certification");
    return cert.certificate->action();
  };
  static const XBasisAction cnot = build(NamedGate::kCnot);
  static const XBasisAction toffoli = build(NamedGate::kToffoliPrime);
  static const XBasisAction cxx = build(NamedGate::kCxx);
  switch (g) {
    case NamedGate::kCnot:
      return cnot;
    case NamedGate::kToffoliPrime:
      return toffoli;
    case NamedGate::kCxx:
      return cxx;
    case NamedGate::kIdentity:
      break;
  }
  throw std::logic_error("identity has no fixed table");
}

XBasisAction identity_action(std::size_t k) {
  XBasisAction a;
  a.perm.resize(std::size_t{1} << k);
  for (std::uint32_t s = 0; s < a.perm.size(); ++s) a.perm[s] = s;
  a.phase.assign(a.perm.size(), Complex(1.0));
  return a;
}

void check_payload(const std::vector<Complex>& table, std::size_t expected, bool hermitian,
                   std::optional<std::size_t> gate, std::vector<Violation>& out) {
  if (table.size() != expected) {
    out.push_back(violation(ViolationKind::kPayloadSize, gate,
                            "table has " + std::to_string(table.size()) + " entries, expected " +
                                std::to_string(expected)));
    return;
  }
  for (std::size_t s = 0; s < table.size(); ++s) {
    if (!unit_modulus(table[s])) {
      out.push_back(violation(ViolationKind::kNonUnitEigenvalue, gate,
                              "entry " + std::to_string(s) + " does not have unit modulus"));
      return;
    }
  }
  if (hermitian && !std::all_of(table.begin(), table.end(), plus_minus_one))
    out.push_back(violation(ViolationKind::kCtrlZNotHermitian, gate, "CtrlZ payload not Hermitian"));
}

std::vector<Violation> gate_violations(const LocalGate& gate, std::size_t qubits,
                                       std::optional<std::size_t> index) {
  std::vector<Violation> out;
  const std::size_t k = gate.arity();
  if (k == 0 || k > kMaxGateArity) {
    out.push_back(violation(ViolationKind::kArity, index,
                            "support size " + std::to_string(k) + " outside 1..3"));
    return out;
  }
  std::set<Qubit> seen;
  for (Qubit q : gate.support) {
    if (q >= qubits)
      out.push_back(violation(ViolationKind::kSupport, index,
                              "qubit " + std::to_string(q) + " out of range"));
    if (!seen.insert(q).second)
      out.push_back(violation(ViolationKind::kSupport, index,
                              "qubit " + std::to_string(q) + " repeated in support"));
  }
  const std::size_t dim = std::size_t{1} << k;
  std::visit(overloaded{
                 [&](const XDiag& g) { check_payload(g.lambda, dim, false, index, out); },
                 [&](const BiasPerm& g) {
                   if (g.perm.size() != dim || g.phases.size() != dim) {
                     out.push_back(violation(ViolationKind::kPayloadSize, index,
                                             "permutation tables must have 2^k entries"));
                     return;
                   }
                   std::vector<bool> hit(dim, false);
                   for (auto img : g.perm) {
                     if (img >= dim || hit[img]) {
                       out.push_back(violation(ViolationKind::kNotPermutation, index,
                                               "sign-string map is not a bijection"));
                       return;
                     }
                     hit[img] = true;
                   }
                   for (double ph : g.phases)
                     if (!std::isfinite(ph)) {
                       out.push_back(violation(ViolationKind::kNonUnitEigenvalue, index,
                                               "phase is not finite"));
                       return;
                     }
                 },
                 [&](const Named& g) {
                   auto want = named_gate_arity(g.which);
                   if (want != 0 && want != k)
                     out.push_back(violation(ViolationKind::kArity, index,
                                             std::string(named_gate_name(g.which)) + " needs " +
                                                 std::to_string(want) + " qubits"));
                 },
                 [&](const CtrlX& g) {
                   if (k < 2) {
                     out.push_back(violation(ViolationKind::kArity, index, "ctrl_x needs a target"));
                     return;
                   }
                   check_payload(g.payload, dim / 2, false, index, out);
                 },
                 [&](const CtrlZ& g) {
                   if (k < 2) {
                     out.push_back(violation(ViolationKind::kArity, index, "ctrl_z needs a target"));
                     return;
                   }
                   check_payload(g.payload, dim / 2, true, index, out);
                 },
             },
             gate.kind);
  return out;
}

std::vector<Violation> noise_violations(const NoiseChannel& noise, std::size_t arity,
                                        std::optional<std::size_t> index) {
  std::vector<Violation> out;
  double total = 0.0;
  std::set<std::uint32_t> masks;
  for (const auto& t : noise.terms) {
    total += t.p;
    if (!(t.p >= 0.0 && t.p <= 1.0))
      out.push_back(violation(ViolationKind::kNoiseProbability, index,
                              "noise probability " + std::to_string(t.p) + " outside [0,1]"));
    if (arity < 32 && (t.mask.bits >> arity) != 0)
      out.push_back(violation(ViolationKind::kNoiseMask, index, "noise mask outside gate support"));
    if (!masks.insert(t.mask.bits).second)
      out.push_back(violation(ViolationKind::kNoiseMask, index, "noise mask repeated"));
  }
  if (!(std::abs(total - 1.0) <= kTolerance))
    out.push_back(violation(ViolationKind::kNoiseNotNormalized, index, "noise not normalized"));
  return out;
}

LocalGate checked(LocalGate g) {
  Qubit top = 0;
  for (Qubit q : g.support) top = std::max(top, q);
  auto v = gate_violations(g, std::size_t{top} + 1, std::nullopt);
  if (!v.empty()) throw DomainError(v.front().message);
  return g;
}

std::vector<Qubit> with_control(Qubit control, const std::vector<Qubit>& targets) {
  std::vector<Qubit> s{control};
  s.insert(s.end(), targets.begin(), targets.end());
  return s;
}

}  // namespace

SignString SignString::parse(std::string_view text) {
  if (text.size() > 32) throw DomainError("sign string longer than 32");
  SignString s;
  s.length = static_cast<std::uint8_t>(text.size());
  for (std::size_t j = 0; j < text.size(); ++j) {
    if (text[j] == '-')
      s.bits |= 1U << j;
    else if (text[j] != '+')
      throw DomainError("sign string may only contain '+' and '-'");
  }
  return s;
}

std::string SignString::str() const {
  std::string out;
  for (unsigned j = 0; j < length; ++j) out += minus(j) ? '-' : '+';
  return out;
}

XMask XMask::of(std::initializer_list<unsigned> positions) {
  XMask m;
  for (unsigned p : positions) m.bits |= 1U << p;
  return m;
}

NoiseChannel NoiseChannel::bit_flip(unsigned position, double p) {
  if (p == 0.0) return noiseless();
  return NoiseChannel{{NoiseTerm{XMask{}, 1.0 - p}, NoiseTerm{XMask::of({position}), p}}};
}

double NoiseChannel::flip_probability(unsigned position) const {
  double p = 0.0;
  for (const auto& t : terms)
    if (t.mask.contains(position)) p += t.p;
  return p;
}

bool NoiseChannel::trivial() const {
  return std::all_of(terms.begin(), terms.end(),
                     [](const NoiseTerm& t) { return t.mask.empty() || t.p == 0.0; });
}

std::string_view named_gate_name(NamedGate g) {
  switch (g) {
    case NamedGate::kCnot:
      return "cnot";
    case NamedGate::kToffoliPrime:
      return "toffoli_prime";
    case NamedGate::kCxx:
      return "cxx";
    case NamedGate::kIdentity:
      return "identity";
  }
  return "?";
}

std::optional<NamedGate> named_gate_from_name(std::string_view name) {
  for (auto g : {NamedGate::kCnot, NamedGate::kToffoliPrime, NamedGate::kCxx, NamedGate::kIdentity})
    if (named_gate_name(g) == name) return g;
  return std::nullopt;
}

// 0 means "any arity".
std::size_t named_gate_arity(NamedGate g) {
  switch (g) {
    case NamedGate::kCnot:
    case NamedGate::kCxx:
      return 2;
    case NamedGate::kToffoliPrime:
      return 3;
    case NamedGate::kIdentity:
      return 0;
  }
  return 0;
}

std::string kind_name(const GateKind& kind) {
  return std::visit(overloaded{
                        [](const XDiag&) { return std::string("xdiag"); },
                        [](const BiasPerm&) { return std::string("perm"); },
                        [](const Named& n) { return std::string(named_gate_name(n.which)); },
                        [](const CtrlX&) { return std::string("ctrl_x"); },
                        [](const CtrlZ&) { return std::string("ctrl_z"); },
                    },
                    kind);
}

std::vector<Complex> x_rotation_table(std::size_t k, double angle) {
  std::vector<Complex> t(std::size_t{1} << k);
  for (std::uint32_t s = 0; s < t.size(); ++s) {
    double sign = (std::popcount(s) % 2) ? -1.0 : 1.0;
    t[s] = std::polar(1.0, angle * sign);
  }
  return t;
}

LocalGate make_xdiag(std::vector<Qubit> support, std::vector<Complex> lambda) {
  return checked(LocalGate{std::move(support), XDiag{std::move(lambda)}});
}

LocalGate make_x_rotation(std::vector<Qubit> support, double angle) {
  auto table = x_rotation_table(support.size(), angle);
  return make_xdiag(std::move(support), std::move(table));
}

LocalGate make_bias_perm(std::vector<Qubit> support, std::vector<std::uint32_t> perm,
                         std::vector<double> phases) {
  return checked(LocalGate{std::move(support), BiasPerm{std::move(perm), std::move(phases)}});
}

LocalGate make_cnot(Qubit control, Qubit target) {
  return checked(LocalGate{{control, target}, Named{NamedGate::kCnot}});
}

LocalGate make_toffoli_prime(Qubit control_a, Qubit control_b, Qubit target) {
  return checked(LocalGate{{control_a, control_b, target}, Named{NamedGate::kToffoliPrime}});
}

LocalGate make_cxx(Qubit control, Qubit target) {
  return checked(LocalGate{{control, target}, Named{NamedGate::kCxx}});
}

LocalGate make_identity(std::vector<Qubit> support) {
  return checked(LocalGate{std::move(support), Named{NamedGate::kIdentity}});
}

LocalGate make_ctrl_x(Qubit control, std::vector<Qubit> targets, std::vector<Complex> payload) {
  return checked(LocalGate{with_control(control, targets), CtrlX{std::move(payload)}});
}

LocalGate make_ctrl_z(Qubit control, std::vector<Qubit> targets, std::vector<Complex> payload) {
  return checked(LocalGate{with_control(control, targets), CtrlZ{std::move(payload)}});
}

LocalGate relabel(const LocalGate& gate, const std::vector<Qubit>& map) {
  LocalGate out = gate;
  for (auto& q : out.support) {
    if (q >= map.size()) throw DomainError("relabel map too short");
    q = map[q];
  }
  return out;
}

bool XBasisAction::diagonal() const {
  for (std::uint32_t s = 0; s < perm.size(); ++s)
    if (perm[s] != s) return false;
  return true;
}

XBasisAction x_basis_action(const LocalGate& gate) {
  auto v = gate_violations(gate, std::numeric_limits<Qubit>::max(), std::nullopt);
  if (!v.empty()) throw DomainError(v.front().message);
  const std::size_t k = gate.arity();
  return std::visit(
      overloaded{
          [&](const XDiag& g) {
            auto a = identity_action(k);
            a.phase = g.lambda;
            return a;
          },
          [&](const BiasPerm& g) {
            XBasisAction a;
            a.perm = g.perm;
            a.phase.resize(g.phases.size());
            for (std::size_t s = 0; s < g.phases.size(); ++s) a.phase[s] = std::polar(1.0, g.phases[s]);
            return a;
          },
          [&](const Named& g) {
            if (g.which == NamedGate::kIdentity) return identity_action(k);
            return named_table(g.which);
          },
          // payload acts on the |-> branch of the control
          [&](const CtrlX& g) {
            auto a = identity_action(k);
            for (std::uint32_t s = 0; s < a.perm.size(); ++s)
              if (s & 1U) a.phase[s] = g.payload[s >> 1];
            return a;
          },
          // a -1 payload eigenvalue puts Z on the control, which swaps |+> and |->
          [&](const CtrlZ& g) {
            auto a = identity_action(k);
            for (std::uint32_t s = 0; s < a.perm.size(); ++s)
              if (g.payload[s >> 1].real() < 0.0) a.perm[s] = s ^ 1U;
            return a;
          },
      },
      gate.kind);
}

BiasAction act_bias_gate(const LocalGate& gate, SignString s) {
  if (s.length != gate.arity()) throw DomainError("sign string length does not match gate support");
  auto a = x_basis_action(gate);
  return BiasAction{SignString{a.perm[s.bits], s.length}, std::arg(a.phase[s.bits])};
}

Complex eigenvalue_xdiag(const LocalGate& gate, SignString s) {
  if (s.length != gate.arity()) throw DomainError("sign string length does not match gate support");
  auto a = x_basis_action(gate);
  if (!a.diagonal()) throw DomainError(kind_name(gate.kind) + " gate is not diagonal in the X basis");
  return a.phase[s.bits];
}

XMask sample_noise(const NoiseChannel& channel, std::mt19937_64& rng) {
  double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  double acc = 0.0;
  for (const auto& t : channel.terms) {
    acc += t.p;
    if (u < acc) return t.mask;
  }
  return channel.terms.empty() ? XMask{} : channel.terms.back().mask;
}

std::array<Complex, 2> QubitPrep::amplitudes() const {
  return {Complex(std::cos(theta / 2), 0.0), std::polar(std::sin(theta / 2), phi)};
}

Circuit Circuit::empty(RegisterLayout layout) {
  Circuit c;
  c.layout = layout;
  c.prep.qubits.assign(layout.total(), QubitPrep::zero());
  c.measure = MeasurementSpec{layout.measured(), Basis::kZ, 0.0};
  return c;
}

bool ValidationReport::has(ViolationKind kind) const {
  return std::any_of(violations.begin(), violations.end(),
                     [kind](const Violation& v) { return v.kind == kind; });
}

std::string ValidationReport::summary() const {
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += v.message;
  }
  return out;
}

std::vector<Violation> validate_gate(const LocalGate& gate, std::size_t qubits) {
  return gate_violations(gate, qubits, std::nullopt);
}

std::vector<Violation> validate_noise(const NoiseChannel& noise, std::size_t arity) {
  return noise_violations(noise, arity, std::nullopt);
}

ValidationReport validate_circuit(const Circuit& c) {
  ValidationReport r;
  auto add = [&](ViolationKind k, const std::string& m) { r.violations.push_back({k, std::nullopt, m}); };
  if (c.layout.data < 1) add(ViolationKind::kLayout, "data register must hold at least one qubit");
  const std::size_t m = c.layout.total();
  if (c.prep.qubits.size() != m) {
    add(ViolationKind::kPrep, "prep lists " + std::to_string(c.prep.qubits.size()) +
                                  " qubits, register has " + std::to_string(m));
  }
  for (std::size_t q = 0; q < c.prep.qubits.size(); ++q) {
    const auto& p = c.prep.qubits[q];
    if (!(p.theta >= 0.0 && p.theta <= std::numbers::pi))
      add(ViolationKind::kPrep, "prep theta of qubit " + std::to_string(q) + " outside [0,pi]");
    if (!(p.phi >= 0.0 && p.phi < 2 * std::numbers::pi))
      add(ViolationKind::kPrep, "prep phi of qubit " + std::to_string(q) + " outside [0,2pi)");
    if (!(p.flip >= 0.0 && p.flip < 0.5))
      add(ViolationKind::kPrep, "prep flip of qubit " + std::to_string(q) + " outside [0,1/2)");
  }
  if (c.measure.qubit != c.layout.measured())
    add(ViolationKind::kMeasurement, "measurement must target the measured register (qubit 0)");
  if (!(c.measure.flip >= 0.0 && c.measure.flip < 0.5))
    add(ViolationKind::kMeasurement, "measurement flip outside [0,1/2)");
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const auto& g = c.gates[i];
    auto gv = gate_violations(g.gate, m, i);
    auto nv = noise_violations(g.noise, g.gate.arity(), i);
    r.violations.insert(r.violations.end(), gv.begin(), gv.end());
    r.violations.insert(r.violations.end(), nv.begin(), nv.end());
  }
  return r;
}

void require_valid(const Circuit& circuit) {
  auto r = validate_circuit(circuit);
  if (!r.ok()) throw DomainError("invalid circuit: " + r.summary());
}

namespace {

bool is_named(const LocalGate& g, NamedGate which) {
  auto* n = std::get_if<Named>(&g.kind);
  return n && n->which == which;
}

}  // namespace

// The parallelisation register is tracked classically: in each X-basis branch
// of the measured qubit its qubits stay Z-basis states, because only cXX from
// the measured qubit and cNOT among themselves touch them.
std::optional<std::string> shape_violation(const Circuit& c) {
  const auto& L = c.layout;
  auto where = [](std::size_t i) { return "gate " + std::to_string(i) + ": "; };
  if (c.prep.qubits.size() != L.total()) return "prep size does not match register";
  if (c.measure.qubit != L.measured()) return "measurement is not on the measured register";
  for (std::size_t q = 0; q <= L.parallel; ++q)
    if (c.prep.qubits[q].theta != 0.0)
      return "qubit " + std::to_string(q) + " must be prepared in |0>";

  std::vector<int> bit_plus(L.parallel, 0), bit_minus(L.parallel, 0);
  auto pidx = [&](Qubit q) { return q - 1; };
  bool controlled_section = false;
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const auto& g = c.gates[i].gate;
    if (is_named(g, NamedGate::kIdentity)) continue;
    const Qubit head = g.support.front();
    bool all_data = std::all_of(g.support.begin(), g.support.end(), [&](Qubit q) { return L.is_data(q); });
    bool tail_data = std::all_of(g.support.begin() + 1, g.support.end(), [&](Qubit q) { return L.is_data(q); });
    bool is_ctrl_x = std::holds_alternative<CtrlX>(g.kind);
    bool is_ctrl_z = std::holds_alternative<CtrlZ>(g.kind);

    if (all_data && !controlled_section) continue;  // part of B
    if (all_data) return where(i) + "data-register gate after the controlled section";
    controlled_section = true;

    if (is_ctrl_x) {
      if (head != L.measured() || !tail_data)
        return where(i) + "ctrl_x must be controlled by the measured qubit and act on data";
      continue;
    }
    if (is_ctrl_z) {
      if (!L.is_parallel(head) || !tail_data)
        return where(i) + "ctrl_z must be controlled by a parallelisation qubit and act on data";
      auto p = pidx(head);
      if (bit_plus[p] != 0 || bit_minus[p] != 1)
        return where(i) + "ctrl_z control is not correlated with the measured qubit";
      continue;
    }
    if (is_named(g, NamedGate::kCxx) && head == L.measured() && L.is_parallel(g.support[1])) {
      bit_minus[pidx(g.support[1])] ^= 1;
      continue;
    }
    if (is_named(g, NamedGate::kCnot) && L.is_parallel(head) && L.is_parallel(g.support[1])) {
      bit_plus[pidx(g.support[1])] ^= bit_plus[pidx(head)];
      bit_minus[pidx(g.support[1])] ^= bit_minus[pidx(head)];
      continue;
    }
    return where(i) + kind_name(g.kind) + " gate does not fit the Hadamard-test shape";
  }
  for (std::size_t p = 0; p < L.parallel; ++p)
    if (bit_plus[p] != 0 || bit_minus[p] != 0)
      return "parallelisation qubit " + std::to_string(p + 1) + " is not disentangled at the end";
  return std::nullopt;
}

OverlapProblem extract_overlap_problem(const Circuit& c) {
  if (auto why = shape_violation(c)) throw DomainError("not a Hadamard-test circuit: " + *why);
  const auto& L = c.layout;
  OverlapProblem p;
  p.qubits = L.data;
  p.prep.assign(c.prep.qubits.begin() + 1 + L.parallel, c.prep.qubits.end());
  auto local = [&](Qubit q) { return static_cast<Qubit>(q - L.data_qubit(0)); };
  bool controlled_section = false;
  for (const auto& inst : c.gates) {
    const auto& g = inst.gate;
    bool all_data = std::all_of(g.support.begin(), g.support.end(), [&](Qubit q) { return L.is_data(q); });
    if (!all_data) controlled_section = true;
    if (is_named(g, NamedGate::kIdentity)) continue;
    if (all_data && !controlled_section) {
      LocalGate b = g;
      for (auto& q : b.support) q = local(q);
      p.b_gates.push_back(std::move(b));
      continue;
    }
    const std::vector<Complex>* payload = nullptr;
    if (auto* x = std::get_if<CtrlX>(&g.kind)) payload = &x->payload;
    if (auto* z = std::get_if<CtrlZ>(&g.kind)) payload = &z->payload;
    if (!payload) continue;
    std::vector<Qubit> targets;
    for (std::size_t j = 1; j < g.support.size(); ++j) targets.push_back(local(g.support[j]));
    p.u_gates.push_back(LocalGate{std::move(targets), XDiag{*payload}});
  }
  return p;
}

}  // namespace xbias
