#pragma once

// Exact statevector and density-matrix simulation for small registers. This
// is the reference every other backend is checked against.

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "xbias/circuit.hpp"
#include "xbias/gate_matrix.hpp"

namespace xbias {

inline constexpr std::size_t kMaxStateQubits = 24;
inline constexpr std::size_t kMaxDensityQubits = 10;
inline constexpr std::size_t kMaxOverlapQubits = 20;

using StateVector = Eigen::VectorXcd;
using DensityMatrix = Eigen::MatrixXcd;

struct Bloch {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

struct ReducedStateSummary {
  Bloch bloch;
  double alpha = 0.0;
  double residual = 0.0;
};

// --- building blocks ------------------------------------------------------

StateVector product_state(const std::vector<QubitPrep>& prep);
void apply_matrix(StateVector& psi, const GateMatrix& m, const std::vector<Qubit>& support);

// Prep states followed by their bit-flip channels.
DensityMatrix product_density(const std::vector<QubitPrep>& prep);
void apply_unitary(DensityMatrix& rho, const GateMatrix& m, const std::vector<Qubit>& support);
// rho -> sum_a p_a X_a rho X_a, masks local to `support`.
void apply_x_noise(DensityMatrix& rho, const NoiseChannel& noise, const std::vector<Qubit>& support);
// rho -> (1-px-py-pz) rho + px X rho X + py Y rho Y + pz Z rho Z on qubit q.
void apply_pauli_channel(DensityMatrix& rho, Qubit q, double px, double py, double pz);

// --- circuits -------------------------------------------------------------

StateVector evolve_pure(std::size_t qubits, const std::vector<QubitPrep>& prep,
                        const std::vector<LocalGate>& gates);
// Noise is always dropped. With ignore_noise == false a circuit carrying any
// non-trivial noise (gates, prep or measurement) is rejected instead.
StateVector evolve_pure(const Circuit& c, bool ignore_noise = true);

DensityMatrix evolve_density(std::size_t qubits, const std::vector<QubitPrep>& prep,
                             const std::vector<GateInstance>& gates);
// Measurement flip is not applied; callers fold it into outcome statistics.
DensityMatrix evolve_density(const Circuit& c);

DensityMatrix reduce_qubit(const DensityMatrix& rho, Qubit q);
DensityMatrix reduce_qubit(const StateVector& psi, Qubit q);
Bloch bloch_vector(const DensityMatrix& r);

// <psi|U|psi> with |psi> = B (x)|phi_i>.
Complex exact_overlap(const OverlapProblem& p);
Complex exact_overlap(const Circuit& c);

// Least-squares fit of r to (I + alpha(yY + zZ))/2.
ReducedStateSummary fit_reduced_form(const DensityMatrix& r, double y_exact, double z_exact);

// (I + alpha(yY + zZ))/2
DensityMatrix reduced_form(double alpha, double y, double z);
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

}  // namespace xbias
