#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "random_instances.hpp"
#include "xbias/builder.hpp"
#include "xbias/dense.hpp"
#include "xbias/errors.hpp"

using namespace xbias;

TEST_CASE("textbook states") {
  auto psi = product_state({QubitPrep::plus(), QubitPrep::zero()});
  CHECK(std::abs(psi(0) - 1 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(psi(1) - 1 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(psi(2)) < 1e-15);

  // cNOT from qubit 0 to 1 on |+0> gives a Bell pair
  apply_matrix(psi, dense::cnot(), {0, 1});
  CHECK(std::abs(psi(0) - 1 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(psi(3) - 1 / std::sqrt(2.0)) < 1e-15);
  auto r = reduce_qubit(psi, 0);
  CHECK(std::abs(r(0, 0) - 0.5) < 1e-15);
  CHECK(std::abs(r(0, 1)) < 1e-15);
}

TEST_CASE("bloch vectors of the axis states") {
  QubitPrep plus_i{std::numbers::pi / 2, std::numbers::pi / 2, 0.0};
  auto b = bloch_vector(reduce_qubit(product_state({plus_i}), 0));
  CHECK(std::abs(b.y - 1.0) < 1e-15);
  b = bloch_vector(reduce_qubit(product_state({QubitPrep::zero()}), 0));
  CHECK(std::abs(b.z - 1.0) < 1e-15);
  b = bloch_vector(reduce_qubit(product_state({QubitPrep::plus()}), 0));
  CHECK(std::abs(b.x - 1.0) < 1e-15);
}

TEST_CASE("density evolution matches the brute-force Kraus oracle") {
  std::mt19937_64 g(21);
  for (int i = 0; i < 30; ++i) {
    auto built = build(rnd::spec(g, {3, 2, 2, 3, 4, 0.3}));
    Circuit c = rnd::with_background_noise(g, built.circuit, 0.3);
    if (c.qubits() > 7) continue;
    auto fast = evolve_density(c);
    auto slow = oracle::density(c);
    CHECK(oracle::max_abs(fast - slow) < 1e-12);
    CHECK(oracle::max_abs(reduce_qubit(fast, 0) - oracle::partial_trace_keep(slow, 0)) < 1e-12);
  }
}

TEST_CASE("apply_matrix agrees with embedded full matrices on scattered supports") {
  std::mt19937_64 g(22);
  for (int i = 0; i < 50; ++i) {
    const std::size_t m = 5;
    std::vector<QubitPrep> prep;
    for (std::size_t q = 0; q < m; ++q) prep.push_back(rnd::prep(g));
    auto gate = rnd::bias_gate(g, m);
    auto psi = product_state(prep);
    oracle::Vec expect = oracle::embed(dense_matrix(gate), gate.support, m) * oracle::product(prep);
    apply_matrix(psi, dense_matrix(gate), gate.support);
    CHECK((psi - expect).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("pauli channel and x noise") {
  DensityMatrix rho = product_density({QubitPrep::zero()});
  apply_pauli_channel(rho, 0, 0.1, 0.0, 0.0);
  CHECK(std::abs(rho(1, 1) - 0.1) < 1e-15);
  rho = product_density({QubitPrep::plus()});
  apply_pauli_channel(rho, 0, 0.0, 0.0, 0.25);
  CHECK(std::abs(bloch_vector(rho).x - 0.5) < 1e-15);
  rho = product_density({QubitPrep::zero(), QubitPrep::zero()});
  apply_x_noise(rho, NoiseChannel{{{XMask{}, 0.7}, {XMask{3}, 0.3}}}, {0, 1});
  CHECK(std::abs(rho(3, 3) - 0.3) < 1e-15);
}

TEST_CASE("exact_overlap matches the oracle overlap") {
  std::mt19937_64 g(23);
  for (int i = 0; i < 30; ++i) {
    OverlapProblem p;
    p.qubits = 1 + rnd::below(g, 5);
    for (std::size_t q = 0; q < p.qubits; ++q) p.prep.push_back(rnd::prep(g));
    for (int k = 0; k < 5; ++k) p.b_gates.push_back(rnd::bias_gate(g, p.qubits));
    for (int k = 0; k < 3; ++k) p.u_gates.push_back(rnd::xdiag(g, p.qubits));
    CHECK(std::abs(exact_overlap(p) - oracle::overlap(p.qubits, p.prep, p.b_gates, p.u_gates)) < 1e-12);
  }
}

TEST_CASE("reduced form fit and trace distance") {
  auto r = reduced_form(0.5, 0.6, 0.8);
  auto s = fit_reduced_form(r, 0.6, 0.8);
  CHECK(std::abs(s.alpha - 0.5) < 1e-14);
  CHECK(s.residual < 1e-14);
  CHECK(std::abs(trace_distance(reduced_form(1, 0, 1), reduced_form(1, 0, -1)) - 1.0) < 1e-14);
}

TEST_CASE("size caps") {
  std::vector<QubitPrep> prep(kMaxDensityQubits + 1);
  CHECK_THROWS_AS(evolve_density(prep.size(), prep, {}), SizeError);
}

TEST_CASE("evolve_pure rejects noisy circuits unless told to ignore noise") {
  Circuit c = Circuit::empty(RegisterLayout{0, 1});
  c.gates.push_back({make_identity({1}), NoiseChannel::bit_flip(0, 0.1)});
  CHECK_THROWS_AS(evolve_pure(c, false), DomainError);
  CHECK_NOTHROW(evolve_pure(c));
}
