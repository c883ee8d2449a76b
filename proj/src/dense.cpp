#include "xbias/dense.hpp"

#include <array>
#include <cmath>
#include <string>

#include "xbias/errors.hpp"

namespace xbias {

namespace {

void check_size(std::size_t qubits, std::size_t cap, const char* what) {
  if (qubits > cap)
    throw SizeError(std::string(what) + " supports at most " + std::to_string(cap) + " qubits, got " +
                    std::to_string(qubits));
}

// Applies a k-qubit matrix to the bits `positions` of a 2^nbits vector.
void apply_kernel(Complex* data, std::size_t nbits, const GateMatrix& m,
                  const std::vector<std::size_t>& positions) {
  const std::size_t k = positions.size();
  const std::size_t dim = std::size_t{1} << k;
  std::array<std::size_t, 8> offset{};
  std::size_t mask = 0;
  for (std::size_t l = 0; l < dim; ++l)
    for (std::size_t j = 0; j < k; ++j)
      if ((l >> j) & 1U) offset[l] |= std::size_t{1} << positions[j];
  for (auto p : positions) mask |= std::size_t{1} << p;

  std::array<Complex, 8> in{}, out{};
  const std::size_t size = std::size_t{1} << nbits;
  for (std::size_t i = 0; i < size; ++i) {
    if (i & mask) continue;
    for (std::size_t l = 0; l < dim; ++l) in[l] = data[i + offset[l]];
    for (std::size_t r = 0; r < dim; ++r) {
      Complex acc = 0.0;
      for (std::size_t c = 0; c < dim; ++c) acc += m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) * in[c];
      out[r] = acc;
    }
    for (std::size_t l = 0; l < dim; ++l) data[i + offset[l]] = out[l];
  }
}

std::size_t qubits_of(const DensityMatrix& rho) {
  std::size_t m = 0;
  while ((Eigen::Index{1} << m) < rho.rows()) ++m;
  return m;
}

std::size_t insert_bit(std::size_t rest, std::size_t q, std::size_t bit) {
  std::size_t low = rest & ((std::size_t{1} << q) - 1);
  return ((rest >> q) << (q + 1)) | (bit << q) | low;
}

GateMatrix single_prep_density(const QubitPrep& p) {
  auto a = p.amplitudes();
  GateMatrix pure(2, 2);
  pure << a[0] * std::conj(a[0]), a[0] * std::conj(a[1]), a[1] * std::conj(a[0]), a[1] * std::conj(a[1]);
  GateMatrix x = dense::pauli_x();
  return (1.0 - p.flip) * pure + p.flip * (x * pure * x);
}

bool carries_noise(const Circuit& c) {
  for (const auto& p : c.prep.qubits)
    if (p.flip != 0.0) return true;
  if (c.measure.flip != 0.0) return true;
  for (const auto& g : c.gates)
    if (!g.noise.trivial()) return true;
  return false;
}

}  // namespace

StateVector product_state(const std::vector<QubitPrep>& prep) {
  check_size(prep.size(), kMaxStateQubits, "statevector");
  StateVector psi = StateVector::Ones(1);
  for (const auto& p : prep) {
    auto a = p.amplitudes();
    StateVector next(psi.size() * 2);
    next.head(psi.size()) = a[0] * psi;
    next.tail(psi.size()) = a[1] * psi;
    psi = std::move(next);
  }
  return psi;
}

void apply_matrix(StateVector& psi, const GateMatrix& m, const std::vector<Qubit>& support) {
  std::size_t n = 0;
  while ((Eigen::Index{1} << n) < psi.size()) ++n;
  std::vector<std::size_t> pos(support.begin(), support.end());
  apply_kernel(psi.data(), n, m, pos);
}

DensityMatrix product_density(const std::vector<QubitPrep>& prep) {
  check_size(prep.size(), kMaxDensityQubits, "density matrix");
  DensityMatrix rho = DensityMatrix::Ones(1, 1);
  for (const auto& p : prep) rho = kron(single_prep_density(p), rho);
  return rho;
}

// Column-major storage makes entry (r, c) sit at index r + (c << m), so the
// matrix is a 2m-qubit vector: U acts on the row bits, conj(U) on the column bits.
void apply_unitary(DensityMatrix& rho, const GateMatrix& m, const std::vector<Qubit>& support) {
  const std::size_t n = qubits_of(rho);
  std::vector<std::size_t> rows(support.begin(), support.end()), cols;
  for (auto q : support) cols.push_back(q + n);
  apply_kernel(rho.data(), 2 * n, m, rows);
  apply_kernel(rho.data(), 2 * n, m.conjugate(), cols);
}

void apply_x_noise(DensityMatrix& rho, const NoiseChannel& noise, const std::vector<Qubit>& support) {
  if (noise.trivial()) return;
  const std::size_t n = qubits_of(rho);
  const std::size_t size = std::size_t{1} << (2 * n);
  DensityMatrix out = DensityMatrix::Zero(rho.rows(), rho.cols());
  const Complex* src = rho.data();
  Complex* dst = out.data();
  for (const auto& t : noise.terms) {
    if (t.p == 0.0) continue;
    std::size_t flip = 0;
    for (std::size_t j = 0; j < support.size(); ++j)
      if (t.mask.contains(static_cast<unsigned>(j))) flip |= std::size_t{1} << support[j];
    flip |= flip << n;
    for (std::size_t i = 0; i < size; ++i) dst[i] += t.p * src[i ^ flip];
  }
  rho = std::move(out);
}

void apply_pauli_channel(DensityMatrix& rho, Qubit q, double px, double py, double pz) {
  const std::size_t n = qubits_of(rho);
  const std::size_t size = std::size_t{1} << (2 * n);
  const std::size_t flip = (std::size_t{1} << q) | (std::size_t{1} << (q + n));
  DensityMatrix out(rho.rows(), rho.cols());
  const Complex* src = rho.data();
  Complex* dst = out.data();
  const double keep = 1.0 - px - py - pz;
  for (std::size_t i = 0; i < size; ++i) {
    // Z rho Z picks up (-1)^{row bit + column bit}; Y rho Y = X (Z rho Z) X.
    double sign = (((i >> q) ^ (i >> (q + n))) & 1U) ? -1.0 : 1.0;
    dst[i] = keep * src[i] + px * src[i ^ flip] + pz * sign * src[i] + py * sign * src[i ^ flip];
  }
  rho = std::move(out);
}

StateVector evolve_pure(std::size_t qubits, const std::vector<QubitPrep>& prep,
                        const std::vector<LocalGate>& gates) {
  check_size(qubits, kMaxStateQubits, "statevector");
  if (prep.size() != qubits) throw DomainError("prep size does not match qubit count");
  StateVector psi = product_state(prep);
  for (const auto& g : gates) apply_matrix(psi, dense_matrix(g), g.support);
  return psi;
}

StateVector evolve_pure(const Circuit& c, bool ignore_noise) {
  require_valid(c);
  if (!ignore_noise && carries_noise(c)) throw DomainError("circuit carries noise; use evolve_density");
  std::vector<LocalGate> gates;
  for (const auto& g : c.gates) gates.push_back(g.gate);
  return evolve_pure(c.qubits(), c.prep.qubits, gates);
}

DensityMatrix evolve_density(std::size_t qubits, const std::vector<QubitPrep>& prep,
                             const std::vector<GateInstance>& gates) {
  check_size(qubits, kMaxDensityQubits, "density matrix");
  if (prep.size() != qubits) throw DomainError("prep size does not match qubit count");
  DensityMatrix rho = product_density(prep);
  for (const auto& g : gates) {
    apply_unitary(rho, dense_matrix(g.gate), g.gate.support);
    apply_x_noise(rho, g.noise, g.gate.support);
  }
  return rho;
}

DensityMatrix evolve_density(const Circuit& c) {
  require_valid(c);
  return evolve_density(c.qubits(), c.prep.qubits, c.gates);
}

DensityMatrix reduce_qubit(const DensityMatrix& rho, Qubit q) {
  const std::size_t n = qubits_of(rho);
  if (q >= n) throw DomainError("qubit index out of range");
  DensityMatrix r = DensityMatrix::Zero(2, 2);
  const std::size_t rest = std::size_t{1} << (n - 1);
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b) {
      Complex acc = 0.0;
      for (std::size_t k = 0; k < rest; ++k)
        acc += rho(static_cast<Eigen::Index>(insert_bit(k, q, a)), static_cast<Eigen::Index>(insert_bit(k, q, b)));
      r(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = acc;
    }
  return r;
}

DensityMatrix reduce_qubit(const StateVector& psi, Qubit q) {
  std::size_t n = 0;
  while ((Eigen::Index{1} << n) < psi.size()) ++n;
  if (q >= n) throw DomainError("qubit index out of range");
  DensityMatrix r = DensityMatrix::Zero(2, 2);
  const std::size_t rest = std::size_t{1} << (n - 1);
  for (std::size_t k = 0; k < rest; ++k) {
    Complex v[2] = {psi(static_cast<Eigen::Index>(insert_bit(k, q, 0))),
                    psi(static_cast<Eigen::Index>(insert_bit(k, q, 1)))};
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) r(a, b) += v[a] * std::conj(v[b]);
  }
  return r;
}

Bloch bloch_vector(const DensityMatrix& r) {
  return Bloch{2.0 * r(0, 1).real(), -2.0 * r(0, 1).imag(), (r(0, 0) - r(1, 1)).real()};
}

Complex exact_overlap(const OverlapProblem& p) {
  check_size(p.qubits, kMaxOverlapQubits, "exact overlap");
  StateVector psi = evolve_pure(p.qubits, p.prep, p.b_gates);
  StateVector u_psi = psi;
  for (const auto& g : p.u_gates) apply_matrix(u_psi, dense_matrix(g), g.support);
  return psi.dot(u_psi);
}

Complex exact_overlap(const Circuit& c) { return exact_overlap(extract_overlap_problem(c)); }

DensityMatrix reduced_form(double alpha, double y, double z) {
  return 0.5 * (dense::identity(1) + alpha * (y * dense::pauli_y() + z * dense::pauli_z()));
}

ReducedStateSummary fit_reduced_form(const DensityMatrix& r, double y_exact, double z_exact) {
  const double norm2 = y_exact * y_exact + z_exact * z_exact;
  if (norm2 < 1e-24) throw DomainError("form not identifiable: (y, z) = (0, 0)");
  ReducedStateSummary s;
  s.bloch = bloch_vector(r);
  s.alpha = (s.bloch.y * y_exact + s.bloch.z * z_exact) / norm2;
  s.residual = (r - reduced_form(s.alpha, y_exact, z_exact)).norm();
  return s;
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  Eigen::SelfAdjointEigenSolver<DensityMatrix> es(a - b, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace xbias
