#pragma once

// Brute-force reference implementations used only by tests. They build full
// 2^m x 2^m operators from basis-state loops and share no code with the
// index-arithmetic kernels of the library.

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "xbias/circuit.hpp"
#include "xbias/gate_matrix.hpp"

namespace oracle {

using xbias::Complex;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline std::size_t local_index(std::size_t i, const std::vector<xbias::Qubit>& support) {
  std::size_t l = 0;
  for (std::size_t j = 0; j < support.size(); ++j) l |= ((i >> support[j]) & 1U) << j;
  return l;
}

inline std::size_t rest_bits(std::size_t i, const std::vector<xbias::Qubit>& support) {
  for (auto q : support) i &= ~(std::size_t{1} << q);
  return i;
}

// <i|G|j> = g(local i, local j) when the bits outside the support agree.
inline Mat embed(const Mat& g, const std::vector<xbias::Qubit>& support, std::size_t m) {
  const std::size_t dim = std::size_t{1} << m;
  Mat full = Mat::Zero(dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      if (rest_bits(i, support) == rest_bits(j, support))
        full(i, j) = g(local_index(i, support), local_index(j, support));
  return full;
}

inline Mat x_on(std::size_t qubit_mask, std::size_t m) {
  const std::size_t dim = std::size_t{1} << m;
  Mat full = Mat::Zero(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) full(i ^ qubit_mask, i) = 1.0;
  return full;
}

inline Vec product(const std::vector<xbias::QubitPrep>& prep) {
  const std::size_t m = prep.size();
  Vec psi(std::size_t{1} << m);
  for (std::size_t i = 0; i < (std::size_t{1} << m); ++i) {
    Complex a = 1.0;
    for (std::size_t q = 0; q < m; ++q) a *= prep[q].amplitudes()[(i >> q) & 1U];
    psi(i) = a;
  }
  return psi;
}

inline Mat density(const xbias::Circuit& c) {
  const std::size_t m = c.qubits();
  Vec psi = product(c.prep.qubits);
  Mat rho = psi * psi.adjoint();
  for (std::size_t q = 0; q < m; ++q) {
    double f = c.prep.qubits[q].flip;
    Mat x = x_on(std::size_t{1} << q, m);
    rho = (1 - f) * rho + f * x * rho * x;
  }
  for (const auto& g : c.gates) {
    Mat u = embed(xbias::dense_matrix(g.gate), g.gate.support, m);
    rho = u * rho * u.adjoint();
    Mat acc = Mat::Zero(rho.rows(), rho.cols());
    for (const auto& t : g.noise.terms) {
      std::size_t mask = 0;
      for (std::size_t j = 0; j < g.gate.support.size(); ++j)
        if (t.mask.contains(static_cast<unsigned>(j))) mask |= std::size_t{1} << g.gate.support[j];
      Mat x = x_on(mask, m);
      acc += t.p * x * rho * x;
    }
    rho = acc;
  }
  return rho;
}

inline Mat partial_trace_keep(const Mat& rho, xbias::Qubit q) {
  Mat r = Mat::Zero(2, 2);
  for (Eigen::Index i = 0; i < rho.rows(); ++i)
    for (Eigen::Index j = 0; j < rho.cols(); ++j)
      if ((static_cast<std::size_t>(i) & ~(std::size_t{1} << q)) == (static_cast<std::size_t>(j) & ~(std::size_t{1} << q)))
        r((i >> q) & 1, (j >> q) & 1) += rho(i, j);
  return r;
}

// <psi|U|psi> with every gate embedded as a full matrix.
inline Complex overlap(std::size_t n, const std::vector<xbias::QubitPrep>& prep,
                       const std::vector<xbias::LocalGate>& b, const std::vector<xbias::LocalGate>& u) {
  Vec psi = product(prep);
  for (const auto& g : b) psi = embed(xbias::dense_matrix(g), g.support, n) * psi;
  Vec upsi = psi;
  for (const auto& g : u) upsi = embed(xbias::dense_matrix(g), g.support, n) * upsi;
  return psi.dot(upsi);
}

inline double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace oracle
