#pragma once

// Classical estimator of <psi|U|psi> for |psi> = B (x)|phi_i>, B made of
// bias-preserving gates and U of X-type gates: sample a sign string from the
// X-basis dephased input, push it through the permutations of B, and multiply
// the eigenvalues of U.

#include <array>
#include <cstdint>
#include <vector>

#include "xbias/circuit.hpp"
#include "xbias/rng.hpp"

namespace xbias {

struct DephasedInput {
  std::vector<double> p_plus;  // |<+|phi_i>|^2

  std::size_t qubits() const { return p_plus.size(); }
};

// Prep flips are ignored: X commutes with X-basis dephasing.
DephasedInput dephase_prep(const std::vector<QubitPrep>& prep);

// ceil(2 ln(2/delta) / eps^2)
std::uint64_t hoeffding_shots(double epsilon, double delta);

struct EstimationPlan {
  double epsilon = 0.05;
  double delta = 0.05;
  std::uint64_t shots = 0;
  std::uint64_t seed = kDefaultSeed;

  // Shots set to the Hoeffding count.
  static EstimationPlan for_accuracy(double epsilon, double delta, std::uint64_t seed = kDefaultSeed);
  // Throws DomainError unless 0<eps<=2, 0<delta<1 and shots >= the Hoeffding count.
  void validate() const;
};

struct EstimateResult {
  Complex mean;
  double stderr_re = 0.0;
  double stderr_im = 0.0;
  std::uint64_t shots = 0;
  double seconds = 0.0;  // sampling loop only
};

// B and U lowered to packed sign-string updates. Identity permutations are
// dropped from B; U gates must be diagonal in the X basis.
class CompiledOverlap {
 public:
  CompiledOverlap(std::size_t qubits, const std::vector<LocalGate>& b_gates,
                  const std::vector<LocalGate>& u_gates);

  std::size_t qubits() const { return qubits_; }
  // lambda_U(sigma_B(s)); `words` holds s and is overwritten with sigma_B(s).
  Complex evaluate(std::vector<std::uint64_t>& words) const;

 private:
  struct Op {
    std::array<Qubit, 3> q{};
    std::uint8_t arity = 0;
    std::uint32_t table = 0;  // offset into perms_ / lambdas_
  };

  std::size_t qubits_;
  std::vector<Op> b_ops_;
  std::vector<Op> u_ops_;
  std::vector<std::uint32_t> perms_;
  std::vector<Complex> lambdas_;
};

// Shots are cut into blocks of kShotBlock; block b draws from substream b and
// block sums are combined by fixed-order pairwise summation, so the result
// does not depend on `threads`.
inline constexpr std::uint64_t kShotBlock = 1024;

EstimateResult estimate_overlap(const std::vector<LocalGate>& b_gates, const std::vector<LocalGate>& u_gates,
                                const DephasedInput& input, const EstimationPlan& plan, unsigned threads = 1);
EstimateResult estimate_overlap(const OverlapProblem& problem, const EstimationPlan& plan, unsigned threads = 1);

// Full enumeration of sum_s p_s lambda_U(sigma_B(s)); n <= 20.
Complex exact_sum_small(const std::vector<LocalGate>& b_gates, const std::vector<LocalGate>& u_gates,
                        const DephasedInput& input);
Complex exact_sum_small(const OverlapProblem& problem);

}  // namespace xbias
