#include "xbias/fast_sim.hpp"

#include <chrono>
#include <cmath>
#include <string>
#include <thread>

#include "xbias/errors.hpp"

namespace xbias {

namespace {

inline unsigned get_bit(const std::vector<std::uint64_t>& w, Qubit q) {
  return static_cast<unsigned>((w[q >> 6] >> (q & 63U)) & 1U);
}

inline void set_bit(std::vector<std::uint64_t>& w, Qubit q, unsigned v) {
  const std::uint64_t m = std::uint64_t{1} << (q & 63U);
  w[q >> 6] = v ? (w[q >> 6] | m) : (w[q >> 6] & ~m);
}

struct Moments {
  double re = 0.0, im = 0.0, re2 = 0.0, im2 = 0.0;

  Moments operator+(const Moments& o) const { return {re + o.re, im + o.im, re2 + o.re2, im2 + o.im2}; }
};

Moments pairwise_sum(const std::vector<Moments>& v, std::size_t lo, std::size_t hi) {
  if (hi - lo == 0) return {};
  if (hi - lo == 1) return v[lo];
  std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

}  // namespace

DephasedInput dephase_prep(const std::vector<QubitPrep>& prep) {
  DephasedInput in;
  in.p_plus.reserve(prep.size());
  for (const auto& p : prep) in.p_plus.push_back(0.5 * (1.0 + std::sin(p.theta) * std::cos(p.phi)));
  return in;
}

std::uint64_t hoeffding_shots(double epsilon, double delta) {
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0,1)");
  return static_cast<std::uint64_t>(std::ceil(2.0 * std::log(2.0 / delta) / (epsilon * epsilon)));
}

EstimationPlan EstimationPlan::for_accuracy(double epsilon, double delta, std::uint64_t seed) {
  EstimationPlan p;
  p.epsilon = epsilon;
  p.delta = delta;
  p.shots = hoeffding_shots(epsilon, delta);
  p.seed = seed;
  return p;
}

void EstimationPlan::validate() const {
  if (!(epsilon > 0.0 && epsilon <= 2.0)) throw DomainError("epsilon must lie in (0,2]");
  auto need = hoeffding_shots(epsilon, delta);
  if (shots < need)
    throw DomainError("plan has " + std::to_string(shots) + " shots, Hoeffding needs " + std::to_string(need));
}

CompiledOverlap::CompiledOverlap(std::size_t qubits, const std::vector<LocalGate>& b_gates,
                                 const std::vector<LocalGate>& u_gates)
    : qubits_(qubits) {
  auto lower = [&](const LocalGate& g) {
    Op op;
    op.arity = static_cast<std::uint8_t>(g.arity());
    for (std::size_t j = 0; j < g.arity(); ++j) {
      if (g.support[j] >= qubits) throw DomainError("gate acts outside the data register");
      op.q[j] = g.support[j];
    }
    return op;
  };
  for (const auto& g : b_gates) {
    auto a = x_basis_action(g);
    if (a.diagonal()) continue;  // phases never reach the estimator
    Op op = lower(g);
    op.table = static_cast<std::uint32_t>(perms_.size());
    perms_.insert(perms_.end(), a.perm.begin(), a.perm.end());
    b_ops_.push_back(op);
  }
  for (const auto& g : u_gates) {
    auto a = x_basis_action(g);
    if (!a.diagonal()) throw DomainError(kind_name(g.kind) + " gate in U is not diagonal in the X basis");
    Op op = lower(g);
    op.table = static_cast<std::uint32_t>(lambdas_.size());
    lambdas_.insert(lambdas_.end(), a.phase.begin(), a.phase.end());
    u_ops_.push_back(op);
  }
}

Complex CompiledOverlap::evaluate(std::vector<std::uint64_t>& w) const {
  for (const auto& op : b_ops_) {
    unsigned l = 0;
    for (unsigned j = 0; j < op.arity; ++j) l |= get_bit(w, op.q[j]) << j;
    unsigned img = perms_[op.table + l];
    if (img == l) continue;
    for (unsigned j = 0; j < op.arity; ++j) set_bit(w, op.q[j], (img >> j) & 1U);
  }
  Complex acc(1.0, 0.0);
  for (const auto& op : u_ops_) {
    unsigned l = 0;
    for (unsigned j = 0; j < op.arity; ++j) l |= get_bit(w, op.q[j]) << j;
    acc *= lambdas_[op.table + l];
  }
  return acc;
}

EstimateResult estimate_overlap(const std::vector<LocalGate>& b_gates, const std::vector<LocalGate>& u_gates,
                                const DephasedInput& input, const EstimationPlan& plan, unsigned threads) {
  plan.validate();
  const std::size_t n = input.qubits();
  CompiledOverlap compiled(n, b_gates, u_gates);

  // Deterministic qubits are written once; only the others draw randomness.
  std::vector<std::uint64_t> base((n + 63) / 64, 0);
  std::vector<Qubit> random_qubits;
  std::vector<double> p_plus;
  for (std::size_t i = 0; i < n; ++i) {
    double p = input.p_plus[i];
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("dephased probability outside [0,1]");
    if (p == 0.0) set_bit(base, static_cast<Qubit>(i), 1);
    if (p > 0.0 && p < 1.0) {
      random_qubits.push_back(static_cast<Qubit>(i));
      p_plus.push_back(p);
    }
  }

  const std::uint64_t blocks = (plan.shots + kShotBlock - 1) / kShotBlock;
  std::vector<Moments> sums(blocks);
  auto run_block = [&](std::uint64_t b, std::vector<std::uint64_t>& w) {
    auto rng = make_stream(plan.seed, b);
    Moments m;
    const std::uint64_t end = std::min(plan.shots, (b + 1) * kShotBlock);
    for (std::uint64_t shot = b * kShotBlock; shot < end; ++shot) {
      w = base;
      for (std::size_t j = 0; j < random_qubits.size(); ++j)
        if (uniform01(rng) >= p_plus[j]) set_bit(w, random_qubits[j], 1);
      Complex v = compiled.evaluate(w);
      m.re += v.real();
      m.im += v.imag();
      m.re2 += v.real() * v.real();
      m.im2 += v.imag() * v.imag();
    }
    sums[b] = m;
  };

  const auto start = std::chrono::steady_clock::now();
  const unsigned workers = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::uint64_t>(blocks, 1))));
  if (workers == 1) {
    std::vector<std::uint64_t> w;
    for (std::uint64_t b = 0; b < blocks; ++b) run_block(b, w);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < workers; ++t)
      pool.emplace_back([&, t] {
        std::vector<std::uint64_t> w;
        for (std::uint64_t b = t; b < blocks; b += workers) run_block(b, w);
      });
    for (auto& th : pool) th.join();
  }
  const auto stop = std::chrono::steady_clock::now();

  Moments total = pairwise_sum(sums, 0, sums.size());
  const double N = static_cast<double>(plan.shots);
  EstimateResult r;
  r.shots = plan.shots;
  r.mean = Complex(total.re / N, total.im / N);
  if (plan.shots > 1) {
    double var_re = std::max(0.0, (total.re2 / N - r.mean.real() * r.mean.real()) * N / (N - 1));
    double var_im = std::max(0.0, (total.im2 / N - r.mean.imag() * r.mean.imag()) * N / (N - 1));
    r.stderr_re = std::sqrt(var_re / N);
    r.stderr_im = std::sqrt(var_im / N);
  }
  r.seconds = std::chrono::duration<double>(stop - start).count();
  return r;
}

EstimateResult estimate_overlap(const OverlapProblem& problem, const EstimationPlan& plan, unsigned threads) {
  return estimate_overlap(problem.b_gates, problem.u_gates, dephase_prep(problem.prep), plan, threads);
}

Complex exact_sum_small(const std::vector<LocalGate>& b_gates, const std::vector<LocalGate>& u_gates,
                        const DephasedInput& input) {
  const std::size_t n = input.qubits();
  if (n > 20) throw SizeError("exact sum supports at most 20 qubits, got " + std::to_string(n));
  CompiledOverlap compiled(n, b_gates, u_gates);
  Complex acc = 0.0;
  std::vector<std::uint64_t> w(1);
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
    double ps = 1.0;
    for (std::size_t i = 0; i < n && ps != 0.0; ++i)
      ps *= ((s >> i) & 1U) ? 1.0 - input.p_plus[i] : input.p_plus[i];
    if (ps == 0.0) continue;
    w[0] = s;
    acc += ps * compiled.evaluate(w);
  }
  return acc;
}

Complex exact_sum_small(const OverlapProblem& problem) {
  return exact_sum_small(problem.b_gates, problem.u_gates, dephase_prep(problem.prep));
}

}  // namespace xbias
