#pragma once

// Dense matrices of local gates (k <= 3). Local basis index bit j belongs to
// support position j, so kron(high, low) places `low` on the lower positions.

#include <Eigen/Dense>

#include "xbias/circuit.hpp"

namespace xbias {

using GateMatrix = Eigen::MatrixXcd;

GateMatrix kron(const GateMatrix& high, const GateMatrix& low);
GateMatrix hadamard_power(unsigned k);
// Change of basis: returns H^{(x)k} m H^{(x)k}, i.e. m in the X product basis.
GateMatrix to_x_basis(const GateMatrix& m);
GateMatrix pauli_x_mask(unsigned k, XMask mask);
// max |m^dagger m - I|
double unitarity_defect(const GateMatrix& m);
bool is_unitary(const GateMatrix& m, double tol = 1e-10);
unsigned arity_of(const GateMatrix& m);

namespace dense {

GateMatrix identity(unsigned k);
GateMatrix hadamard();
GateMatrix pauli_x();
GateMatrix pauli_y();
GateMatrix pauli_z();
GateMatrix x_rotation(unsigned k, double angle);  // exp(i angle X^{(x)k})
GateMatrix cnot();                                // control 0, target 1
GateMatrix toffoli();                             // controls 0,1, target 2
GateMatrix toffoli_prime();                       // H^{(x)3} Toffoli H^{(x)3}
GateMatrix cxx();                                 // c_X X, control 0

// |+><+| (x) I + |-><-| (x) U, control at position 0.
GateMatrix controlled_x(const GateMatrix& u);
// |0><0| (x) I + |1><1| (x) U, control at position 0.
GateMatrix controlled_z(const GateMatrix& u);
// c_P U = (I+P)/2 (x) I + (I-P)/2 (x) U with P = n.sigma, control at position 0.
GateMatrix controlled_axis(double nx, double ny, double nz, const GateMatrix& u);

GateMatrix from_x_diagonal(const std::vector<Complex>& lambda);
GateMatrix from_x_basis_action(const XBasisAction& action);

}  // namespace dense

GateMatrix named_matrix(NamedGate g);
GateMatrix dense_matrix(const LocalGate& gate);

}  // namespace xbias
