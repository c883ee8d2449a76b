#include "xbias/gate_matrix.hpp"

#include <cmath>
#include <numbers>
#include <variant>

#include "xbias/errors.hpp"

namespace xbias {

GateMatrix kron(const GateMatrix& high, const GateMatrix& low) {
  GateMatrix out(high.rows() * low.rows(), high.cols() * low.cols());
  for (Eigen::Index i = 0; i < high.rows(); ++i)
    for (Eigen::Index j = 0; j < high.cols(); ++j)
      out.block(i * low.rows(), j * low.cols(), low.rows(), low.cols()) = high(i, j) * low;
  return out;
}

GateMatrix hadamard_power(unsigned k) {
  GateMatrix h = GateMatrix::Identity(1, 1);
  for (unsigned j = 0; j < k; ++j) h = kron(dense::hadamard(), h);
  return h;
}

unsigned arity_of(const GateMatrix& m) {
  if (m.rows() != m.cols() || m.rows() < 2) throw DomainError("gate matrix must be square, 2^k x 2^k");
  unsigned k = 0;
  while ((Eigen::Index{1} << k) < m.rows()) ++k;
  if ((Eigen::Index{1} << k) != m.rows()) throw DomainError("gate matrix dimension is not a power of two");
  if (k > kMaxGateArity) throw DomainError("gate matrices are limited to 3 qubits");
  return k;
}

GateMatrix to_x_basis(const GateMatrix& m) {
  GateMatrix h = hadamard_power(arity_of(m));
  return h * m * h;
}

GateMatrix pauli_x_mask(unsigned k, XMask mask) {
  const Eigen::Index dim = Eigen::Index{1} << k;
  GateMatrix p = GateMatrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) p(i ^ mask.bits, i) = 1.0;
  return p;
}

double unitarity_defect(const GateMatrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  GateMatrix d = m.adjoint() * m - GateMatrix::Identity(m.rows(), m.cols());
  return d.cwiseAbs().maxCoeff();
}

bool is_unitary(const GateMatrix& m, double tol) { return unitarity_defect(m) <= tol; }

namespace dense {

GateMatrix identity(unsigned k) {
  const Eigen::Index dim = Eigen::Index{1} << k;
  return GateMatrix::Identity(dim, dim);
}

GateMatrix hadamard() {
  GateMatrix h(2, 2);
  const double r = 1.0 / std::numbers::sqrt2;
  h << r, r, r, -r;
  return h;
}

GateMatrix pauli_x() {
  GateMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

GateMatrix pauli_y() {
  GateMatrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

GateMatrix pauli_z() {
  GateMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

GateMatrix x_rotation(unsigned k, double angle) { return from_x_diagonal(x_rotation_table(k, angle)); }

GateMatrix cnot() {
  GateMatrix m = GateMatrix::Zero(4, 4);
  for (int col = 0; col < 4; ++col) {
    int c = col & 1;
    m(col ^ (c << 1), col) = 1.0;
  }
  return m;
}

GateMatrix toffoli() {
  GateMatrix m = GateMatrix::Zero(8, 8);
  for (int col = 0; col < 8; ++col) m((col & 3) == 3 ? col ^ 4 : col, col) = 1.0;
  return m;
}

GateMatrix toffoli_prime() {
  GateMatrix h = hadamard_power(3);
  return h * toffoli() * h;
}

GateMatrix cxx() { return controlled_x(pauli_x()); }

namespace {

GateMatrix projector(const GateMatrix& p, double sign) {
  return 0.5 * (GateMatrix::Identity(2, 2) + sign * p);
}

GateMatrix controlled_on(const GateMatrix& p, const GateMatrix& u) {
  GateMatrix id = GateMatrix::Identity(u.rows(), u.cols());
  return kron(id, projector(p, +1.0)) + kron(u, projector(p, -1.0));
}

}  // namespace

GateMatrix controlled_x(const GateMatrix& u) { return controlled_on(pauli_x(), u); }

GateMatrix controlled_z(const GateMatrix& u) { return controlled_on(pauli_z(), u); }

GateMatrix controlled_axis(double nx, double ny, double nz, const GateMatrix& u) {
  return controlled_on(nx * pauli_x() + ny * pauli_y() + nz * pauli_z(), u);
}

GateMatrix from_x_diagonal(const std::vector<Complex>& lambda) {
  Eigen::VectorXcd d(static_cast<Eigen::Index>(lambda.size()));
  for (std::size_t s = 0; s < lambda.size(); ++s) d(static_cast<Eigen::Index>(s)) = lambda[s];
  GateMatrix diag = d.asDiagonal();
  return to_x_basis(diag);
}

GateMatrix from_x_basis_action(const XBasisAction& action) {
  const auto dim = static_cast<Eigen::Index>(action.perm.size());
  GateMatrix p = GateMatrix::Zero(dim, dim);
  for (Eigen::Index s = 0; s < dim; ++s) p(action.perm[s], s) = action.phase[s];
  return to_x_basis(p);
}

}  // namespace dense

GateMatrix named_matrix(NamedGate g) {
  switch (g) {
    case NamedGate::kCnot:
      return dense::cnot();
    case NamedGate::kToffoliPrime:
      return dense::toffoli_prime();
    case NamedGate::kCxx:
      return dense::cxx();
    case NamedGate::kIdentity:
      return dense::identity(1);
  }
  return dense::identity(1);
}

GateMatrix dense_matrix(const LocalGate& gate) {
  const auto k = static_cast<unsigned>(gate.arity());
  if (auto* n = std::get_if<Named>(&gate.kind)) {
    if (n->which == NamedGate::kIdentity) return dense::identity(k);
    return named_matrix(n->which);
  }
  if (auto* x = std::get_if<CtrlX>(&gate.kind)) return dense::controlled_x(dense::from_x_diagonal(x->payload));
  if (auto* z = std::get_if<CtrlZ>(&gate.kind)) return dense::controlled_z(dense::from_x_diagonal(z->payload));
  return dense::from_x_basis_action(x_basis_action(gate));
}

}  // namespace xbias
