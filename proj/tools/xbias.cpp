// Command-line front end. Machine-readable output goes to stdout (or --out),
// human summaries to stderr. Exit codes: 0 ok, 1 domain error, 2 usage error.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "xbias/benchmark.hpp"
#include "xbias/bias_check.hpp"
#include "xbias/builder.hpp"
#include "xbias/dense.hpp"
#include "xbias/errors.hpp"
#include "xbias/fast_sim.hpp"
#include "xbias/io.hpp"
#include "xbias/noise_analysis.hpp"

using namespace xbias;

namespace {

struct NamedMatrix {
  const char* symbol;
  GateMatrix (*make)();
};

const std::map<std::string, NamedMatrix>& named_matrices() {
  static const std::map<std::string, NamedMatrix> table{
      {"hadamard", {"H", [] { return dense::hadamard(); }}},
      {"x", {"X", [] { return dense::pauli_x(); }}},
      {"y", {"Y", [] { return dense::pauli_y(); }}},
      {"z", {"Z", [] { return dense::pauli_z(); }}},
      {"identity", {"I", [] { return dense::identity(1); }}},
      {"cnot", {"CNOT", [] { return dense::cnot(); }}},
      {"toffoli", {"Toffoli", [] { return dense::toffoli(); }}},
      {"toffoli_prime", {"Toffoli'", [] { return dense::toffoli_prime(); }}},
      {"cxx", {"cXX", [] { return dense::cxx(); }}},
      {"cz_rx", {"cZ(Rx)", [] { return dense::controlled_z(dense::x_rotation(1, M_PI / 4)); }}},
  };
  return table;
}

GateMatrix matrix_from_json(const Json& j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  GateMatrix m(rows, rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    auto row = complex_list_from_json(j.at(r));
    if (static_cast<Eigen::Index>(row.size()) != rows) throw DomainError("matrix must be square");
    for (Eigen::Index c = 0; c < rows; ++c) m(r, c) = row[c];
  }
  return m;
}

struct GateChoice {
  std::string named;
  std::string matrix_file;

  GateMatrix matrix() const {
    if (!named.empty()) {
      auto it = named_matrices().find(named);
      if (it == named_matrices().end()) throw DomainError("unknown named gate \"" + named + "\"");
      return it->second.make();
    }
    if (!matrix_file.empty()) return matrix_from_json(read_json_file(matrix_file));
    throw DomainError("give --named or --matrix");
  }
  std::string symbol() const {
    auto it = named_matrices().find(named);
    return it != named_matrices().end() ? it->second.symbol : "G";
  }
};

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : sep) + p;
  return out;
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void add_gate_choice(CLI::App* cmd, GateChoice& g) {
  auto* named = cmd->add_option("--named", g.named, "Built-in gate: " + [] {
    std::vector<std::string> names;
    for (const auto& [k, v] : named_matrices()) names.push_back(k);
    return join(names, ", ");
  }());
  auto* file = cmd->add_option("--matrix", g.matrix_file, "JSON file: list of rows, each a list of [re, im]");
  named->excludes(file);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Biased-noise Hadamard tests: build, simulate, certify and benchmark"};
  app.require_subcommand(1);
  std::string out_path;
  std::uint64_t seed = kDefaultSeed;
  unsigned threads = 1;
  app.add_option("--out", out_path, "Write machine-readable output here instead of stdout");
  app.add_option("--seed", seed, "64-bit seed for randomized subcommands")->capture_default_str();
  app.add_option("--threads", threads, "Worker threads; results do not depend on it")->capture_default_str();

  std::string circuit_path, spec_path, scenario_path, scenario_inline, backend = "dense", format = "csv";
  double eps = 0.05, delta = 0.05, alpha = 1.0, p = 0.1;
  std::uint64_t shots = 0;
  unsigned n = 1;
  bool no_timing = false;
  GateChoice gate;
  std::vector<unsigned> mask_positions;
  std::vector<double> axis;

  auto* validate = app.add_subcommand("validate", "Check a circuit file; prints {ok, violations}");
  validate->add_option("circuit", circuit_path, "Circuit JSON")->required();

  auto* exact = app.add_subcommand("exact", "Dense <psi|U|psi> of a Hadamard-test circuit; prints {re, im, y, z}");
  exact->add_option("circuit", circuit_path, "Circuit JSON")->required();

  auto* estimate = app.add_subcommand(
      "estimate", "Sampled <psi|U|psi>; prints {mean_re, mean_im, stderr_re, stderr_im, n_shots, seconds}");
  estimate->add_option("circuit", circuit_path, "Circuit JSON")->required();
  estimate->add_option("--eps", eps, "Additive accuracy")->capture_default_str();
  estimate->add_option("--delta", delta, "Failure probability")->capture_default_str();
  estimate->add_option("--shots", shots, "Shot count (default: ceil(2 ln(2/delta)/eps^2))");
  estimate->add_flag("--no-timing", no_timing, "Report seconds as 0 so output is byte-reproducible");

  auto* buildc = app.add_subcommand("build", "Build a Hadamard-test circuit from a spec; prints {circuit, report}");
  buildc->add_option("spec", spec_path, "Spec JSON (see io.hpp for fields)")->required();

  auto* alphac = app.add_subcommand("alpha", "Attenuation of the measured qubit; prints {alpha, n_n, n_i, factors}");
  alphac->add_option("circuit", circuit_path, "Circuit JSON")->required();

  auto* samples = app.add_subcommand("samples", "Prints ceil(2 ln(2/delta)/(alpha eps)^2)");
  samples->add_option("--eps", eps)->required();
  samples->add_option("--delta", delta)->required();
  samples->add_option("--alpha", alpha)->capture_default_str();

  std::string rate = "sqrtlog", count_rule = "sqrtlog";
  double rate_a = 1.0, rate_k = 1.0, nv = 1.0, extra = kOverheadLocations;
  int min_exp = 4, max_exp = 20;
  auto* scaling = app.add_subcommand("scaling", "Overhead schedule; CSV columns n,p_n,N_V,alpha,C_n (slope on stderr)");
  scaling->add_option("--rate", rate, "constant | power | sqrtlog (Delta_n = exp(-sqrt(ln n)))")->capture_default_str();
  scaling->add_option("--p", p, "Constant p for --rate constant")->capture_default_str();
  scaling->add_option("--A", rate_a, "Delta_n = A/n^k for --rate power")->capture_default_str();
  scaling->add_option("--k", rate_k, "Exponent for --rate power")->capture_default_str();
  scaling->add_option("--count", count_rule, "constant | sqrtlog (N_V = sqrt(ln n))")->capture_default_str();
  scaling->add_option("--nv", nv, "N_V for --count constant")->capture_default_str();
  scaling->add_option("--min-exp", min_exp, "Smallest n = 2^min-exp")->capture_default_str();
  scaling->add_option("--max-exp", max_exp, "Largest n = 2^max-exp")->capture_default_str();
  scaling->add_option("--extra", extra, "Extra measured-qubit locations")->capture_default_str();
  scaling->add_option("--eps", eps)->capture_default_str();
  scaling->add_option("--delta", delta)->capture_default_str();
  scaling->add_option("--format", format, "csv | json")->capture_default_str();

  auto* meas = app.add_subcommand("meas-demo", "Prints (1 + (1-2p)^n)/2");
  meas->add_option("--n", n)->required();
  meas->add_option("--p", p)->required();

  auto* check = app.add_subcommand("check-gate", "Certify a gate as bias-preserving, or a controlled gate with --axis");
  add_gate_choice(check, gate);
  check->add_option("--axis", axis, "Control axis x,y,z: check c_P U with the gate as payload U")->delimiter(',')->expected(3);

  auto* prop = app.add_subcommand("propagate", "Conjugate an X error through a gate; prints the X-basis table");
  add_gate_choice(prop, gate);
  prop->add_option("--mask", mask_positions, "Error positions, e.g. 0,2")->delimiter(',')->required();

  auto* bench = app.add_subcommand(
      "benchmark", "Benchmark verdict; prints {consistent, est_y, est_z, pred_ay, pred_az, halfwidth, hints}");
  bench->add_option("circuit", circuit_path, "Circuit JSON (declared noise)")->required();
  auto* sfile = bench->add_option("--scenario", scenario_path, "Scenario JSON file");
  bench->add_option("--scenario-json", scenario_inline, "Scenario JSON text, e.g. {\"type\":\"miscalibrated\",\"multiplier\":2}")
      ->excludes(sfile);
  bench->add_option("--shots", shots, "Shots per basis (default: 10 x sample complexity at eps=0.1)");
  bench->add_option("--delta", delta)->capture_default_str();
  bench->add_option("--backend", backend, "dense | sampled")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    std::string output;
    auto emit_json = [&](const Json& j) { output = j.dump(2) + "\n"; };

    if (validate->parsed()) {
      auto report = validate_circuit(load_circuit(circuit_path));
      emit_json(to_json(report));
      if (!report.ok()) std::cerr << "invalid: " << report.summary() << "\n";
      if (!report.ok()) {
        std::cout << output;
        return 1;
      }
    } else if (exact->parsed()) {
      auto c = load_circuit(circuit_path);
      require_valid(c);
      Complex u = exact_overlap(c);
      emit_json(Json{{"re", u.real()}, {"im", u.imag()}, {"y", -u.imag()}, {"z", u.real()}});
    } else if (estimate->parsed()) {
      auto c = load_circuit(circuit_path);
      require_valid(c);
      auto plan = EstimationPlan::for_accuracy(eps, delta, seed);
      if (shots) plan.shots = shots;
      auto r = estimate_overlap(extract_overlap_problem(c), plan, threads);
      if (no_timing) r.seconds = 0.0;
      std::cerr << "estimate " << num(r.mean.real()) << (r.mean.imag() < 0 ? " - " : " + ")
                << num(std::abs(r.mean.imag())) << "i from " << r.shots << " shots\n";
      emit_json(to_json(r));
    } else if (buildc->parsed()) {
      auto built = build(spec_from_json(read_json_file(spec_path)));
      emit_json(Json{{"circuit", circuit_to_json(built.circuit)}, {"report", to_json(built.report)}});
    } else if (alphac->parsed()) {
      emit_json(to_json(attenuation(load_circuit(circuit_path))));
    } else if (samples->parsed()) {
      output = std::to_string(sample_complexity(eps, delta, alpha)) + "\n";
    } else if (scaling->parsed()) {
      ErrorRateRule r = rate == "constant" ? ErrorRateRule::constant(p)
                        : rate == "power"  ? ErrorRateRule::power_law(rate_a, rate_k)
                        : rate == "sqrtlog" ? ErrorRateRule::exp_sqrt_log()
                                            : throw DomainError("unknown --rate " + rate);
      GateCountRule g = count_rule == "constant" ? GateCountRule::constant(nv)
                        : count_rule == "sqrtlog" ? GateCountRule::sqrt_log()
                                                  : throw DomainError("unknown --count " + count_rule);
      if (min_exp < 0 || max_exp < min_exp || max_exp > 60) throw DomainError("need 0 <= min-exp <= max-exp <= 60");
      std::vector<double> ns;
      for (int e = min_exp; e <= max_exp; ++e) ns.push_back(std::ldexp(1.0, e));
      auto s = overhead_schedule(r, g, ns, eps, delta, extra);
      if (format == "json") {
        Json rows = Json::array();
        for (const auto& row : s.rows)
          rows.push_back({{"n", row.n}, {"p_n", row.p_n}, {"N_V", row.n_v}, {"alpha", row.alpha}, {"C_n", row.c_n}});
        emit_json(Json{{"rows", rows}, {"slope", s.slope}});
      } else if (format == "csv") {
        std::ostringstream csv;
        csv << "n,p_n,N_V,alpha,C_n\n";
        for (const auto& row : s.rows)
          csv << num(row.n) << "," << num(row.p_n) << "," << num(row.n_v) << "," << num(row.alpha) << ","
              << num(row.c_n) << "\n";
        output = csv.str();
      } else {
        throw DomainError("unknown --format " + format);
      }
      std::cerr << "fitted growth exponent (upper half of n): " << num(s.slope) << "\n";
    } else if (meas->parsed()) {
      auto r = direct_measure_scaling(n, p);
      output = num(r.p_correct) + "\n";
    } else if (check->parsed()) {
      GateMatrix m = gate.matrix();
      if (!axis.empty()) {
        auto r = check_controlled(Axis{axis[0], axis[1], axis[2]}, m);
        output = std::string(r.pass ? "pass" : "fail") + "; " + r.reason + "\n";
      } else {
        auto cert = certify_bias_preserving(m);
        if (cert.preserving()) {
          std::ostringstream s;
          s << "bias-preserving; permutation [";
          for (std::size_t i = 0; i < cert.certificate->perm.size(); ++i)
            s << (i ? "," : "") << cert.certificate->perm[i];
          s << "] phases [";
          for (std::size_t i = 0; i < cert.certificate->phases.size(); ++i)
            s << (i ? "," : "") << num(cert.certificate->phases[i]);
          s << "]\n";
          output = s.str();
        } else {
          bool hermitian = (m - m.adjoint()).cwiseAbs().maxCoeff() <= kCertifyTolerance;
          output = "NOT bias-preserving; counterexample " + cert.counterexample->describe(gate.symbol(), hermitian) + "\n";
        }
      }
    } else if (prop->parsed()) {
      XMask mask;
      for (unsigned q : mask_positions) mask.bits |= 1U << q;
      auto r = propagate_error(gate.matrix(), mask);
      Json j{{"x_type", r.x_type}, {"is_pauli", r.is_pauli}, {"off_diagonal", r.off_diagonal},
             {"table", complex_list_to_json(r.table)}};
      if (r.is_pauli) {
        std::vector<unsigned> outq;
        for (unsigned b = 0; b < 32; ++b)
          if (r.output.contains(b)) outq.push_back(b);
        j["output_mask"] = outq;
        j["phase"] = {r.phase.real(), r.phase.imag()};
      }
      emit_json(j);
    } else if (bench->parsed()) {
      auto c = load_circuit(circuit_path);
      require_valid(c);
      NoiseScenario scenario = PerfectBias{};
      if (!scenario_path.empty()) scenario = scenario_from_json(read_json_file(scenario_path));
      if (!scenario_inline.empty()) {
        try {
          scenario = scenario_from_json(Json::parse(scenario_inline));
        } catch (const nlohmann::json::exception& e) {
          throw DomainError(std::string("--scenario-json: ") + e.what());
        }
      }
      auto pred = predict(c);
      if (shots == 0) shots = 10 * sample_complexity(0.1, delta, pred.alpha);
      Backend be = backend == "dense" ? Backend::kDense
                   : backend == "sampled" ? Backend::kSampled
                                          : throw DomainError("unknown --backend " + backend);
      auto counts = simulate_experiment(c, scenario, shots, seed, be);
      std::optional<Diagnostics> diag;
      if (be == Backend::kDense) diag = diagnose(c, scenario);
      auto v = compare(counts, pred, delta, diag);
      std::cerr << scenario_name(scenario) << ": " << (v.consistent ? "consistent" : "inconsistent") << "\n";
      emit_json(to_json(v));
    }

    if (out_path.empty())
      std::cout << output;
    else
      write_text_file(out_path, output);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
