#include "xbias/builder.hpp"

#include <algorithm>
#include <map>

#include "xbias/errors.hpp"

namespace xbias {

namespace {

bool is_identity(const LocalGate& g) {
  auto* n = std::get_if<Named>(&g.kind);
  return n && n->which == NamedGate::kIdentity;
}

std::vector<Complex> diagonal_payload(const SpecGate& sg, const char* family) {
  auto a = x_basis_action(sg.gate);
  if (!a.diagonal()) throw DomainError(std::string(family) + " gates must be diagonal in the X basis");
  if (sg.gate.arity() > kMaxGateArity - 1)
    throw DomainError(std::string(family) + " gates act on at most 2 data qubits");
  return a.phase;
}

std::vector<Qubit> to_global(const RegisterLayout& L, const std::vector<Qubit>& support) {
  std::vector<Qubit> out;
  for (Qubit q : support) {
    if (q >= L.data) throw DomainError("spec gate acts outside the data register");
    out.push_back(L.data_qubit(q));
  }
  return out;
}

// Pairs (control, target) of the doubling tree over parallel indices, layer by layer.
std::vector<std::pair<std::size_t, std::size_t>> fan_out(std::size_t q) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t have = 1; have < q; have *= 2)
    for (std::size_t j = 0; j < have && j + have < q; ++j) edges.emplace_back(j, j + have);
  return edges;
}

}  // namespace

std::size_t entangler_depth(std::size_t q) {
  if (q < 1) throw DomainError("entangler needs at least one parallelisation qubit");
  std::size_t layers = 0;
  while ((std::size_t{1} << layers) < q) ++layers;
  return layers + 1;
}

std::size_t circuit_depth(const std::vector<GateInstance>& gates) {
  std::map<Qubit, std::size_t> level;
  std::size_t depth = 0;
  for (const auto& g : gates) {
    std::size_t l = 0;
    for (Qubit q : g.gate.support) l = std::max(l, level[q]);
    ++l;
    for (Qubit q : g.gate.support) level[q] = l;
    depth = std::max(depth, l);
  }
  return depth;
}

BuiltCircuit build(const HadamardTestSpec& spec) {
  if (spec.data_qubits < 1) throw DomainError("spec needs at least one data qubit");
  if (!spec.w_gates.empty() && spec.parallel_qubits == 0)
    throw DomainError("W gates need a parallelisation register (q_n >= 1)");
  if (!spec.data_prep.empty() && spec.data_prep.size() != spec.data_qubits)
    throw DomainError("data_prep must list every data qubit");

  RegisterLayout L{spec.parallel_qubits, spec.data_qubits};
  Circuit c = Circuit::empty(L);
  c.prep.qubits[L.measured()].flip = spec.measured_prep_flip;
  for (std::size_t i = 0; i < L.parallel; ++i) c.prep.qubits[L.parallel_qubit(i)].flip = spec.parallel_prep_flip;
  for (std::size_t i = 0; i < spec.data_prep.size(); ++i) c.prep.qubits[L.data_qubit(i)] = spec.data_prep[i];
  c.measure = MeasurementSpec{L.measured(), spec.basis, spec.measure_flip};

  for (const auto& b : spec.b_gates) {
    LocalGate g = b.gate;
    g.support = to_global(L, g.support);
    c.gates.push_back({std::move(g), b.noise});
  }

  if (L.parallel > 0) {
    const auto tree = fan_out(L.parallel);
    const std::size_t open = c.gates.size();
    c.gates.push_back({make_cxx(L.measured(), L.parallel_qubit(0)), spec.entangler_noise});
    for (auto [a, b] : tree)
      c.gates.push_back({make_cnot(L.parallel_qubit(a), L.parallel_qubit(b)), spec.tree_noise});
    for (std::size_t i = 0; i < spec.w_gates.size(); ++i) {
      const auto& w = spec.w_gates[i];
      auto payload = diagonal_payload(w, "W");
      Qubit control = L.parallel_qubit(i % L.parallel);
      c.gates.push_back({make_ctrl_z(control, to_global(L, w.gate.support), payload), w.noise});
    }
    for (auto it = tree.rbegin(); it != tree.rend(); ++it)
      c.gates.push_back({make_cnot(L.parallel_qubit(it->first), L.parallel_qubit(it->second)), spec.tree_noise});
    c.gates.push_back({make_cxx(L.measured(), L.parallel_qubit(0)), spec.entangler_noise});

    if (spec.identity_noise) {
      // The measured qubit idles for every layer strictly between the two cXX gates.
      std::vector<GateInstance> middle(c.gates.begin() + static_cast<std::ptrdiff_t>(open) + 1, c.gates.end() - 1);
      const std::size_t idle = circuit_depth(middle);
      std::vector<GateInstance> waits(idle, GateInstance{make_identity({L.measured()}),
                                                         NoiseChannel::bit_flip(0, *spec.identity_noise)});
      c.gates.insert(c.gates.begin() + static_cast<std::ptrdiff_t>(open) + 1, waits.begin(), waits.end());
    }
  }

  for (const auto& v : spec.v_gates) {
    auto payload = diagonal_payload(v, "V");
    c.gates.push_back({make_ctrl_x(L.measured(), to_global(L, v.gate.support), payload), v.noise});
  }

  auto report = validate_circuit(c);
  if (!report.ok()) throw DomainError("built circuit is invalid: " + report.summary());
  return BuiltCircuit{c, count_locations(c)};
}

BuildReport count_locations(const Circuit& c) {
  BuildReport r;
  const Qubit m = c.layout.measured();
  for (const auto& g : c.gates) {
    if (std::find(g.gate.support.begin(), g.gate.support.end(), m) == g.gate.support.end()) continue;
    ++r.l_n;
    if (is_identity(g.gate))
      ++r.n_i;
  }
  r.n_n = 2 + r.l_n - r.n_i;
  r.depth = circuit_depth(c.gates);
  r.total_gates = c.gates.size();
  return r;
}

}  // namespace xbias
