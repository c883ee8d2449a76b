#pragma once

// Seeded generators of random gates, noise channels and Hadamard-test specs.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

#include "xbias/builder.hpp"
#include "xbias/circuit.hpp"

namespace rnd {

using namespace xbias;

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline std::size_t below(std::mt19937_64& g, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(g);
}

inline std::vector<Qubit> distinct(std::mt19937_64& g, std::size_t n, std::size_t k) {
  std::vector<Qubit> all(n);
  std::iota(all.begin(), all.end(), 0);
  std::shuffle(all.begin(), all.end(), g);
  all.resize(k);
  return all;
}

inline std::vector<Complex> phases(std::mt19937_64& g, std::size_t k) {
  std::vector<Complex> t(std::size_t{1} << k);
  for (auto& z : t) z = std::polar(1.0, uniform(g, -std::numbers::pi, std::numbers::pi));
  return t;
}

inline std::vector<Complex> signs(std::mt19937_64& g, std::size_t k) {
  std::vector<Complex> t(std::size_t{1} << k);
  for (auto& z : t) z = below(g, 2) ? 1.0 : -1.0;
  return t;
}

inline LocalGate xdiag(std::mt19937_64& g, std::size_t n, std::size_t max_k = 3) {
  std::size_t k = 1 + below(g, std::min(n, max_k));
  return make_xdiag(distinct(g, n, k), phases(g, k));
}

inline LocalGate bias_perm(std::mt19937_64& g, std::size_t n) {
  std::size_t k = 1 + below(g, std::min<std::size_t>(n, 3));
  std::vector<std::uint32_t> perm(std::size_t{1} << k);
  std::iota(perm.begin(), perm.end(), 0U);
  std::shuffle(perm.begin(), perm.end(), g);
  std::vector<double> ph(perm.size());
  for (auto& p : ph) p = uniform(g, -std::numbers::pi, std::numbers::pi);
  return make_bias_perm(distinct(g, n, k), perm, ph);
}

// Any bias-preserving gate on n qubits.
inline LocalGate bias_gate(std::mt19937_64& g, std::size_t n) {
  for (;;) {
    switch (below(g, 5)) {
      case 0:
        if (n >= 2) {
          auto s = distinct(g, n, 2);
          return make_cnot(s[0], s[1]);
        }
        break;
      case 1:
        if (n >= 3) {
          auto s = distinct(g, n, 3);
          return make_toffoli_prime(s[0], s[1], s[2]);
        }
        break;
      case 2:
        if (n >= 2) {
          auto s = distinct(g, n, 2);
          return make_cxx(s[0], s[1]);
        }
        break;
      case 3:
        return bias_perm(g, n);
      default:
        return xdiag(g, n);
    }
  }
}

inline QubitPrep prep(std::mt19937_64& g) {
  return QubitPrep{uniform(g, 0.0, std::numbers::pi), uniform(g, 0.0, 2 * std::numbers::pi), 0.0};
}

// Random distribution over masks of an `arity`-qubit support. The total
// probability of masks containing position 0 is `p0` when given.
inline NoiseChannel noise(std::mt19937_64& g, std::size_t arity, double total_max, double p0 = -1.0) {
  NoiseChannel ch;
  const std::uint32_t masks = 1U << arity;
  std::vector<double> w(masks, 0.0);
  double other_budget = uniform(g, 0.0, total_max);
  if (p0 >= 0.0) {
    // split p0 over the masks containing position 0
    double left = p0;
    std::vector<std::uint32_t> with0;
    for (std::uint32_t m = 1; m < masks; ++m)
      if (m & 1U) with0.push_back(m);
    for (std::size_t i = 0; i < with0.size(); ++i) {
      double share = i + 1 == with0.size() ? left : left * uniform(g, 0.0, 1.0);
      w[with0[i]] += share;
      left -= share;
    }
    for (std::uint32_t m = 2; m < masks; m += 2) {
      double share = other_budget * uniform(g, 0.0, 1.0) / masks;
      w[m] += share;
    }
  } else {
    for (std::uint32_t m = 1; m < masks; ++m) w[m] = other_budget * uniform(g, 0.0, 1.0) / masks;
  }
  double rest = 1.0 - std::accumulate(w.begin() + 1, w.end(), 0.0);
  ch.terms.push_back({XMask{0}, rest});
  for (std::uint32_t m = 1; m < masks; ++m)
    if (w[m] > 0.0) ch.terms.push_back({XMask{m}, w[m]});
  return ch;
}

struct SpecLimits {
  std::size_t max_data = 5;
  std::size_t max_parallel = 3;
  std::size_t max_v = 4;
  std::size_t max_w = 6;
  std::size_t max_b = 6;
  double max_p = 0.3;
};

// Random spec with noise only at measured-qubit locations.
inline HadamardTestSpec spec(std::mt19937_64& g, const SpecLimits& lim = {}) {
  HadamardTestSpec s;
  s.data_qubits = 1 + below(g, lim.max_data);
  s.parallel_qubits = below(g, lim.max_parallel + 1);
  for (std::size_t i = 0; i < s.data_qubits; ++i) s.data_prep.push_back(prep(g));
  const std::size_t nb = below(g, lim.max_b + 1);
  for (std::size_t i = 0; i < nb; ++i) s.b_gates.push_back({bias_gate(g, s.data_qubits)});
  const std::size_t nv = below(g, lim.max_v + 1);
  for (std::size_t i = 0; i < nv; ++i) {
    LocalGate v = xdiag(g, s.data_qubits, 2);
    s.v_gates.push_back({v, noise(g, v.arity() + 1, 0.2, uniform(g, 0.0, lim.max_p))});
  }
  if (s.parallel_qubits > 0) {
    const std::size_t nw = below(g, lim.max_w + 1);
    for (std::size_t i = 0; i < nw; ++i) {
      std::size_t k = 1 + below(g, std::min<std::size_t>(s.data_qubits, 2));
      s.w_gates.push_back({make_xdiag(distinct(g, s.data_qubits, k), signs(g, k))});
    }
    s.entangler_noise = noise(g, 2, 0.2, uniform(g, 0.0, lim.max_p));
  }
  s.measured_prep_flip = uniform(g, 0.0, lim.max_p);
  s.measure_flip = uniform(g, 0.0, lim.max_p);
  s.basis = below(g, 2) ? Basis::kY : Basis::kZ;
  return s;
}

// Adds bit-flip noise (total up to `p_max`) to every gate that avoids the
// measured qubit, and prep flips on every other qubit.
inline Circuit with_background_noise(std::mt19937_64& g, Circuit c, double p_max) {
  for (auto& inst : c.gates) {
    const auto& s = inst.gate.support;
    if (std::find(s.begin(), s.end(), c.layout.measured()) != s.end()) continue;
    inst.noise = noise(g, s.size(), p_max);
  }
  for (std::size_t q = 1; q < c.qubits(); ++q) c.prep.qubits[q].flip = uniform(g, 0.0, std::min(p_max, 0.49));
  return c;
}

}  // namespace rnd
