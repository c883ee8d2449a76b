#include "xbias/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "xbias/errors.hpp"

namespace xbias {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

template <class F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed ") + what + ": " + e.what());
  }
}

std::vector<Complex> table_from(const Json& j, std::size_t k) {
  if (j.contains("lambda")) return complex_list_from_json(j.at("lambda"));
  if (j.contains("angle")) return x_rotation_table(k, j.at("angle").get<double>());
  throw DomainError("gate needs \"lambda\" or \"angle\"");
}

// `support` given: masks list global qubits; otherwise positions.
NoiseChannel noise_from_json(const Json& j, const std::vector<Qubit>* support) {
  NoiseChannel ch;
  for (const auto& t : j) {
    XMask mask;
    for (auto q : t.at("mask").get<std::vector<Qubit>>()) {
      unsigned pos = q;
      if (support) {
        auto it = std::find(support->begin(), support->end(), q);
        if (it == support->end()) throw DomainError("noise mask qubit " + std::to_string(q) + " not in gate support");
        pos = static_cast<unsigned>(it - support->begin());
      }
      if (pos >= 32) throw DomainError("noise mask position out of range");
      mask.bits ^= 1U << pos;
    }
    ch.terms.push_back({mask, t.at("p").get<double>()});
  }
  // the no-error term may be left implicit
  bool has_empty = false;
  double total = 0.0;
  for (const auto& t : ch.terms) {
    has_empty = has_empty || t.mask.empty();
    total += t.p;
  }
  if (!has_empty) ch.terms.insert(ch.terms.begin(), NoiseTerm{XMask{}, 1.0 - total});
  return ch;
}

Json noise_to_json(const NoiseChannel& ch, const std::vector<Qubit>& support) {
  Json out = Json::array();
  for (const auto& t : ch.terms) {
    Json mask = Json::array();
    for (std::size_t j = 0; j < support.size(); ++j)
      if (t.mask.contains(static_cast<unsigned>(j))) mask.push_back(support[j]);
    out.push_back({{"mask", mask}, {"p", t.p}});
  }
  return out;
}

Basis basis_from(const Json& j) {
  auto s = j.get<std::string>();
  if (s == "Y" || s == "y") return Basis::kY;
  if (s == "Z" || s == "z") return Basis::kZ;
  throw DomainError("basis must be \"Y\" or \"Z\"");
}

std::string basis_name(Basis b) { return b == Basis::kY ? "Y" : "Z"; }

std::string violation_kind_name(ViolationKind k) {
  switch (k) {
    case ViolationKind::kLayout: return "layout";
    case ViolationKind::kPrep: return "prep";
    case ViolationKind::kMeasurement: return "measurement";
    case ViolationKind::kSupport: return "support";
    case ViolationKind::kArity: return "arity";
    case ViolationKind::kPayloadSize: return "payload_size";
    case ViolationKind::kNonUnitEigenvalue: return "non_unit_eigenvalue";
    case ViolationKind::kNotPermutation: return "not_permutation";
    case ViolationKind::kCtrlZNotHermitian: return "ctrl_z_not_hermitian";
    case ViolationKind::kNoiseNotNormalized: return "noise_not_normalized";
    case ViolationKind::kNoiseProbability: return "noise_probability";
    case ViolationKind::kNoiseMask: return "noise_mask";
  }
  return "?";
}

SpecGate spec_gate_from_json(const Json& j) {
  SpecGate g;
  g.gate = local_gate_from_json(j);
  if (j.contains("noise")) g.noise = noise_from_json(j.at("noise"), nullptr);
  return g;
}

std::vector<SpecGate> spec_gates(const Json& j, const char* key) {
  std::vector<SpecGate> out;
  if (j.contains(key))
    for (const auto& g : j.at(key)) out.push_back(spec_gate_from_json(g));
  return out;
}

}  // namespace

Json complex_list_to_json(const std::vector<Complex>& v) {
  Json out = Json::array();
  for (auto z : v) out.push_back({z.real(), z.imag()});
  return out;
}

std::vector<Complex> complex_list_from_json(const Json& j) {
  std::vector<Complex> out;
  for (const auto& e : j) {
    if (e.is_number()) {
      out.emplace_back(e.get<double>(), 0.0);
    } else {
      if (e.size() != 2) throw DomainError("complex entries are [re, im]");
      out.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
    }
  }
  return out;
}

LocalGate local_gate_from_json(const Json& j) {
  return guarded("gate", [&] {
    LocalGate g;
    g.support = j.at("qubits").get<std::vector<Qubit>>();
    const auto kind = j.at("kind").get<std::string>();
    const std::size_t k = g.support.size();
    if (kind == "xdiag") {
      g.kind = XDiag{table_from(j, k)};
    } else if (kind == "perm") {
      BiasPerm p;
      p.perm = j.at("perm").get<std::vector<std::uint32_t>>();
      p.phases = j.contains("phases") ? j.at("phases").get<std::vector<double>>() : std::vector<double>(p.perm.size(), 0.0);
      g.kind = p;
    } else if (kind == "ctrl_x") {
      g.kind = CtrlX{table_from(j, k == 0 ? 0 : k - 1)};
    } else if (kind == "ctrl_z") {
      g.kind = CtrlZ{table_from(j, k == 0 ? 0 : k - 1)};
    } else if (auto named = named_gate_from_name(kind)) {
      g.kind = Named{*named};
    } else {
      throw DomainError("unknown gate kind \"" + kind + "\"");
    }
    return g;
  });
}

GateInstance gate_from_json(const Json& j) {
  return guarded("gate", [&] {
    GateInstance g;
    g.gate = local_gate_from_json(j);
    if (j.contains("noise")) g.noise = noise_from_json(j.at("noise"), &g.gate.support);
    return g;
  });
}

Json gate_to_json(const GateInstance& inst) {
  const auto& g = inst.gate;
  Json j{{"kind", kind_name(g.kind)}, {"qubits", g.support}};
  std::visit(overloaded{
                 [&](const XDiag& x) { j["lambda"] = complex_list_to_json(x.lambda); },
                 [&](const BiasPerm& p) {
                   j["perm"] = p.perm;
                   j["phases"] = p.phases;
                 },
                 [&](const Named&) {},
                 [&](const CtrlX& x) { j["lambda"] = complex_list_to_json(x.payload); },
                 [&](const CtrlZ& z) { j["lambda"] = complex_list_to_json(z.payload); },
             },
             g.kind);
  j["noise"] = noise_to_json(inst.noise, g.support);
  return j;
}

Json circuit_to_json(const Circuit& c) {
  Json prep = Json::array();
  for (std::size_t q = 0; q < c.prep.qubits.size(); ++q) {
    const auto& p = c.prep.qubits[q];
    prep.push_back({{"qubit", q}, {"theta", p.theta}, {"phi", p.phi}, {"flip", p.flip}});
  }
  Json gates = Json::array();
  for (const auto& g : c.gates) gates.push_back(gate_to_json(g));
  return Json{{"registers", {{"measured", 1}, {"parallel", c.layout.parallel}, {"data", c.layout.data}}},
              {"prep", prep},
              {"prep_flip", 0.0},
              {"gates", gates},
              {"measure", {{"qubit", c.measure.qubit}, {"basis", basis_name(c.measure.basis)}, {"flip", c.measure.flip}}}};
}

Circuit circuit_from_json(const Json& j) {
  return guarded("circuit", [&] {
    const auto& reg = j.at("registers");
    if (reg.value("measured", 1) != 1) throw DomainError("the measured register holds exactly one qubit");
    RegisterLayout layout{reg.value("parallel", std::size_t{0}), reg.at("data").get<std::size_t>()};
    Circuit c = Circuit::empty(layout);
    const double default_flip = j.value("prep_flip", 0.0);
    for (auto& p : c.prep.qubits) p.flip = default_flip;
    if (j.contains("prep")) {
      for (const auto& e : j.at("prep")) {
        auto q = e.at("qubit").get<std::size_t>();
        if (q >= c.prep.qubits.size()) throw DomainError("prep entry for qubit " + std::to_string(q) + " out of range");
        auto& p = c.prep.qubits[q];
        p.theta = e.value("theta", 0.0);
        p.phi = e.value("phi", 0.0);
        p.flip = e.value("flip", default_flip);
      }
    }
    if (j.contains("gates"))
      for (const auto& g : j.at("gates")) c.gates.push_back(gate_from_json(g));
    if (j.contains("measure")) {
      const auto& m = j.at("measure");
      c.measure.qubit = m.value("qubit", Qubit{0});
      c.measure.basis = m.contains("basis") ? basis_from(m.at("basis")) : Basis::kZ;
      c.measure.flip = m.value("flip", 0.0);
    }
    return c;
  });
}

HadamardTestSpec spec_from_json(const Json& j) {
  return guarded("spec", [&] {
    HadamardTestSpec s;
    s.data_qubits = j.at("data_qubits").get<std::size_t>();
    if (j.contains("data_prep"))
      for (const auto& e : j.at("data_prep"))
        s.data_prep.push_back(QubitPrep{e.value("theta", 0.0), e.value("phi", 0.0), e.value("flip", 0.0)});
    s.b_gates = spec_gates(j, "b_gates");
    s.v_gates = spec_gates(j, "v_gates");
    s.w_gates = spec_gates(j, "w_gates");
    s.parallel_qubits = j.value("parallel_qubits", std::size_t{0});
    s.measured_prep_flip = j.value("measured_prep_flip", 0.0);
    s.parallel_prep_flip = j.value("parallel_prep_flip", 0.0);
    if (j.contains("entangler_noise")) s.entangler_noise = noise_from_json(j.at("entangler_noise"), nullptr);
    if (j.contains("tree_noise")) s.tree_noise = noise_from_json(j.at("tree_noise"), nullptr);
    if (j.contains("identity_noise") && !j.at("identity_noise").is_null())
      s.identity_noise = j.at("identity_noise").get<double>();
    if (j.contains("basis")) s.basis = basis_from(j.at("basis"));
    s.measure_flip = j.value("measure_flip", 0.0);
    return s;
  });
}

NoiseScenario scenario_from_json(const Json& j) {
  return guarded("scenario", [&]() -> NoiseScenario {
    const auto type = j.value("type", std::string("perfect"));
    NoiseScenario s;
    if (type == "perfect") s = PerfectBias{};
    else if (type == "imperfect") s = ImperfectBias{j.value("p_z", 0.0), j.value("p_y", 0.0)};
    else if (type == "miscalibrated") s = Miscalibrated{j.at("multiplier").get<double>()};
    else if (type == "coherent_x") s = CoherentX{j.at("angle").get<double>(), j.value("seed", kDefaultSeed)};
    else throw DomainError("unknown scenario type \"" + type + "\"");
    validate_scenario(s);
    return s;
  });
}

Json to_json(const ValidationReport& r) {
  Json v = Json::array();
  for (const auto& x : r.violations) {
    Json e{{"kind", violation_kind_name(x.kind)}, {"message", x.message}};
    e["gate"] = x.gate ? Json(*x.gate) : Json(nullptr);
    v.push_back(e);
  }
  return Json{{"ok", r.ok()}, {"violations", v}};
}

Json to_json(const EstimateResult& r) {
  return Json{{"mean_re", r.mean.real()}, {"mean_im", r.mean.imag()}, {"stderr_re", r.stderr_re},
              {"stderr_im", r.stderr_im}, {"n_shots", r.shots},           {"seconds", r.seconds}};
}

Json to_json(const AttenuationReport& r) {
  Json f = Json::array();
  for (const auto& x : r.factors) f.push_back({{"label", x.label}, {"p", x.p}, {"factor", x.factor}});
  return Json{{"alpha", r.alpha}, {"n_n", r.n_n}, {"n_i", r.n_i}, {"factors", f}};
}

Json to_json(const BuildReport& r) {
  return Json{{"l_n", r.l_n}, {"n_n", r.n_n}, {"n_i", r.n_i}, {"depth", r.depth}, {"total_gates", r.total_gates}};
}

Json to_json(const BenchmarkVerdict& v) {
  Json hints = Json::array();
  for (const auto& h : v.hints) hints.push_back({{"label", h.label}, {"evidence", h.evidence}});
  return Json{{"consistent", v.consistent}, {"est_y", v.est_y},         {"est_z", v.est_z},
              {"pred_ay", v.pred_ay},       {"pred_az", v.pred_az},     {"halfwidth", v.halfwidth},
              {"hints", hints},             {"shots", v.shots}};
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(path + ": " + e.what());
  }
}

Circuit load_circuit(const std::string& path) { return circuit_from_json(read_json_file(path)); }

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write " + path);
  out << text;
}

}  // namespace xbias
