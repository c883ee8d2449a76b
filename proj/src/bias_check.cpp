#include "xbias/bias_check.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "xbias/errors.hpp"

namespace xbias {

namespace {

constexpr double kUnitaryTolerance = 1e-10;

void require_unitary(const GateMatrix& m) {
  arity_of(m);
  if (!is_unitary(m, kUnitaryTolerance)) throw DomainError("gate matrix is not unitary");
}

double max_off_diagonal(const GateMatrix& m, Eigen::Index* row = nullptr, Eigen::Index* col = nullptr) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (i != j && std::abs(m(i, j)) > best) {
        best = std::abs(m(i, j));
        if (row) *row = i;
        if (col) *col = j;
      }
  return best;
}

double wrap_phase(double a) {
  a = std::remainder(a, 2 * std::numbers::pi);
  if (a <= -std::numbers::pi) a += 2 * std::numbers::pi;
  return a;
}

GateMatrix pauli_string(unsigned k, unsigned code) {
  // code holds two bits per position: 0=I, 1=X, 2=Y, 3=Z
  GateMatrix out = GateMatrix::Identity(1, 1);
  for (unsigned j = 0; j < k; ++j) {
    unsigned c = (code >> (2 * j)) & 3U;
    GateMatrix p = c == 0 ? dense::identity(1) : c == 1 ? dense::pauli_x() : c == 2 ? dense::pauli_y() : dense::pauli_z();
    out = kron(p, out);
  }
  return out;
}

std::string mask_label(unsigned k, XMask mask) {
  std::string s;
  for (unsigned j = 0; j < k; ++j) s += mask.contains(j) ? 'X' : 'I';
  return s;
}

}  // namespace

bool is_x_type(const GateMatrix& m, double tol) {
  require_unitary(m);
  return max_off_diagonal(to_x_basis(m)) <= tol;
}

XBasisAction PermutationCertificate::action() const {
  XBasisAction a;
  a.perm = perm;
  a.phase.resize(phases.size());
  for (std::size_t s = 0; s < phases.size(); ++s) a.phase[s] = std::polar(1.0, global_phase + phases[s]);
  return a;
}

GateMatrix PermutationCertificate::reconstruct() const { return dense::from_x_basis_action(action()); }

std::optional<std::string> pauli_label(const GateMatrix& m, double tol) {
  const unsigned k = arity_of(m);
  const double dim = static_cast<double>(m.rows());
  for (unsigned code = 0; code < (1U << (2 * k)); ++code) {
    GateMatrix p = pauli_string(k, code);
    Complex c = (p.adjoint() * m).trace() / dim;
    if (std::abs(std::abs(c) - 1.0) > tol) continue;
    if ((m - c * p).cwiseAbs().maxCoeff() > tol) continue;
    std::string label;
    for (unsigned j = 0; j < k; ++j) label += "IXYZ"[(code >> (2 * j)) & 3U];
    std::string prefix;
    if (std::abs(c - Complex(-1, 0)) <= tol) prefix = "-";
    else if (std::abs(c - Complex(0, 1)) <= tol) prefix = "i";
    else if (std::abs(c - Complex(0, -1)) <= tol) prefix = "-i";
    else if (std::abs(c - Complex(1, 0)) > tol) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "e^{%.6gi}", std::arg(c));
      prefix = buf;
    }
    return prefix + label;
  }
  return std::nullopt;
}

std::string Counterexample::describe(const std::string& symbol, bool hermitian) const {
  std::string x = mask_label(arity, mask);
  if (arity > 1) x = "(" + x + ")";
  std::string lhs = symbol + x + (hermitian ? symbol : symbol + "†");
  if (auto label = pauli_label(conjugated)) return lhs + "=" + *label;
  char buf[160];
  std::snprintf(buf, sizeof buf, " is not X-type (X-basis entry [%u,%u] = %.6g%+.6gi)", row, col,
                entry.real(), entry.imag());
  return lhs + buf;
}

BiasCertificate certify_bias_preserving(const GateMatrix& m, double tol) {
  require_unitary(m);
  const unsigned k = arity_of(m);
  const GateMatrix mx = to_x_basis(m);
  const auto dim = mx.rows();

  PermutationCertificate cert;
  cert.perm.resize(dim);
  cert.phases.resize(dim);
  std::vector<bool> used(dim, false);
  bool ok = true;
  for (Eigen::Index s = 0; s < dim && ok; ++s) {
    Eigen::Index r = 0;
    mx.col(s).cwiseAbs().maxCoeff(&r);
    if (std::abs(mx(r, s)) < 1.0 - tol || used[r]) {
      ok = false;
      break;
    }
    for (Eigen::Index i = 0; i < dim; ++i)
      if (i != r && std::abs(mx(i, s)) > tol) ok = false;
    used[r] = true;
    cert.perm[s] = static_cast<std::uint32_t>(r);
    cert.phases[s] = std::arg(mx(r, s));
  }

  BiasCertificate out;
  if (ok) {
    cert.global_phase = cert.phases[0];
    for (auto& ph : cert.phases) ph = wrap_phase(ph - cert.global_phase);
    out.certificate = std::move(cert);
    return out;
  }

  // Not a generalized permutation: some X mask conjugates outside U^X.
  for (std::uint32_t bits = 1; bits < (1U << k); ++bits) {
    XMask mask{bits};
    GateMatrix conj = m * pauli_x_mask(k, mask) * m.adjoint();
    Eigen::Index row = 0, col = 0;
    double off = max_off_diagonal(to_x_basis(conj), &row, &col);
    if (off > tol) {
      Counterexample ce;
      ce.mask = mask;
      ce.arity = k;
      ce.row = static_cast<std::uint32_t>(row);
      ce.col = static_cast<std::uint32_t>(col);
      ce.entry = to_x_basis(conj)(row, col);
      ce.conjugated = conj;
      out.counterexample = std::move(ce);
      return out;
    }
  }
  throw std::logic_error("no counterexample found for a non-permutation gate");
}

ControlCheck check_controlled(Axis axis, const GateMatrix& u) {
  const double norm = std::sqrt(axis.x * axis.x + axis.y * axis.y + axis.z * axis.z);
  if (std::abs(norm - 1.0) > 1e-9) throw DomainError("control axis must be a unit vector");
  require_unitary(u);
  const double tol = kCertifyTolerance;
  const auto dim = u.rows();
  if ((u - GateMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff() <= tol)
    return {true, "payload is the identity"};
  if (!is_x_type(u, tol))
    return {false, "payload is not X-type, so X errors on the target reach the control"};
  if (std::abs(std::abs(axis.x) - 1.0) <= tol) return {true, "X-axis control with an X-type payload"};
  if (std::abs(axis.x) <= tol) {
    if ((u - u.adjoint()).cwiseAbs().maxCoeff() <= tol)
      return {true, "Y-Z plane control with a Hermitian X-type payload"};
    return {false, "Y-Z plane control needs a Hermitian payload"};
  }
  return {false, "control axis is neither X nor in the Y-Z plane"};
}

PropagationResult propagate_error(const GateMatrix& g, XMask e) {
  require_unitary(g);
  const unsigned k = arity_of(g);
  if ((e.bits >> k) != 0) throw DomainError("error mask outside gate support");
  PropagationResult r;
  r.input = e;
  GateMatrix cx = to_x_basis(g * pauli_x_mask(k, e) * g.adjoint());
  r.off_diagonal = max_off_diagonal(cx);
  r.x_type = r.off_diagonal <= kCertifyTolerance;
  r.table.resize(cx.rows());
  for (Eigen::Index s = 0; s < cx.rows(); ++s) r.table[s] = cx(s, s);
  if (!r.x_type) return r;
  // X_a has eigenvalue (-1)^{|a & s|} on |s>
  for (std::uint32_t a = 0; a < r.table.size(); ++a) {
    Complex phase = r.table[0];
    bool match = true;
    for (std::uint32_t s = 0; s < r.table.size() && match; ++s) {
      double sign = (std::popcount(a & s) % 2) ? -1.0 : 1.0;
      match = std::abs(r.table[s] - sign * phase) <= kCertifyTolerance;
    }
    if (match) {
      r.is_pauli = true;
      r.output = XMask{a};
      r.phase = phase;
      break;
    }
  }
  return r;
}

PropagationResult propagate_error(const LocalGate& g, XMask e) { return propagate_error(dense_matrix(g), e); }

}  // namespace xbias
