#ifndef QSEC_INFOBOUNDS_HPP
#define QSEC_INFOBOUNDS_HPP

#include <functional>
#include <optional>
#include <vector>

#include "qsec/qlinalg.hpp"

// Classical and quantum information measures, accessible-information bounds,
// a brute-force measurement-optimization oracle, and the
// information-vs-disturbance theorems.

namespace qsec {

/// Nonnegative table over up to a handful of discrete axes, summing to 1.
class DiscreteJoint {
public:
  DiscreteJoint(std::vector<int> dims, std::vector<double> table);

  const std::vector<int>& dims() const { return dims_; }
  double at(const std::vector<int>& idx) const { return table_[flat(idx)]; }
  const std::vector<double>& table() const { return table_; }
  std::size_t flat(const std::vector<int>& idx) const;

private:
  std::vector<int> dims_;
  std::vector<double> table_;
};

/// I(X;Y) for a two-axis joint.
double mutual_information(const DiscreteJoint& joint);

/// I(X;Y|Z) where xs/ys/zs partition a subset of the axes; axes outside the
/// three groups are marginalized.
double conditional_mi(const DiscreteJoint& joint, const std::vector<int>& xs,
                      const std::vector<int>& ys, const std::vector<int>& zs);

/// Three-axis shorthand: condition on the given axis, I of the other two.
double conditional_mi(const DiscreteJoint& joint3, int condition_axis);

struct QuantumSource {
  std::vector<std::pair<double, DensityMatrix>> items;

  QuantumSource(std::vector<std::pair<double, DensityMatrix>> it);
  int dim() const { return items.front().second.dim(); }
};

class Povm {
public:
  explicit Povm(std::vector<Mat> elements);
  const std::vector<Mat>& elements() const { return el_; }

  static Povm from_basis(const std::vector<Vec>& basis);

private:
  std::vector<Mat> el_;
};

double holevo_chi(const QuantumSource& src);

/// I(S;E) of the classical joint p_s * Tr(E_e rho_s).
double measured_info(const QuantumSource& src, const Povm& povm);

struct OracleBudget {
  int theta_steps = 721;    // qubit grid
  int phi_steps = 1441;
  int random_bases = 512;   // dim > 2
  bool refine = true;
};

/// Certified lower bound on accessible information: max of measured_info
/// over rank-1 projective bases (Bloch grid for qubits, seeded random bases
/// plus the difference eigenbases otherwise) with local refinement.
/// Deterministic. dim <= 4.
double accessible_info_oracle(const QuantumSource& src, const OracleBudget& budget = {});

/// Same family of witnesses without the dimension cap (valid lower bound at
/// any dim; used where ensembles live on larger purification spaces).
double info_witness(const QuantumSource& src, const OracleBudget& budget = {});

struct OneBitBounds {
  double lemma_bound;      // H(S) p(s=0) Tr|rho0 - rho1|, p0 >= p1
  double corollary_bound;  // H(S) Tr|rho0 - rho1|
};
OneBitBounds bound_one_bit(const QuantumSource& src);

struct ManyBounds {
  double lemma_bound;  // sum_s p_s log(1/p_s) Tr|rho_s - rhobar|
  std::optional<double> corollary_bound;  // uniform sources: log n * mean Tr|rho_s - rhobar|
};
/// Requires every p_s <= 1/2.
ManyBounds bound_many(const QuantumSource& src);

/// Attack on n message qubits: probe starts in |0>, U acts on
/// probe (x) message (probe factor most significant).
struct AttackUnitary {
  int n;
  int probe_dim;
  Mat u;

  AttackUnitary(int n_, int probe_dim_, Mat u_);
  int msg_dim() const { return 1 << n; }
};

/// Probe components E_{i,j} of the attack: E[i][j] is the unnormalized probe
/// vector when |i> goes in and Bob gets |j>.
std::vector<std::vector<Vec>> eve_components(const AttackUnitary& a);

/// Components of the same attack expressed in the Fourier (all-Hadamard)
/// basis, computed from the conjugated statevector.
std::vector<std::vector<Vec>> eve_components_fourier(const AttackUnitary& a);

struct DisturbanceReport {
  double p0;                 // proof formula
  double p0_direct;          // from the Fourier-conjugated statevector
  double p_error_fourier;    // 1 - p0
  double bound;              // 4 n sqrt(p_error_fourier)
  double purification_norm;  // <phibar_0|phibar_0>
  std::vector<DensityMatrix> ensemble;  // rho_i, uniformly weighted
};
DisturbanceReport info_vs_disturbance(const AttackUnitary& attack);

struct FunctionBoundReport {
  double bound;          // H(F(K)) 4 sqrt(P_e)
  double exact_witness;  // lower bound on I(F(M);E|A) by exhaustive announcements
  double h_fk;
};
/// f maps n-bit keys (indices 0..2^n-1) to arbitrary labels.
FunctionBoundReport function_security_bound(const AttackUnitary& attack, const std::vector<int>& f);

/// H(p') - (H(p')/p')|p - p'|, valid lower bound on H(p) for p' <= 1/2.
double linear_entropy_bound(double p, double pprime);
/// H(X') - sum log(1/p'_i)|p_i - p'_i| for all p'_i <= 1/2.
double linear_entropy_bound_multi(const Eigen::VectorXd& p, const Eigen::VectorXd& pprime);

struct WholeKeyReport {
  bool independent;           // marginal independence hypothesis
  double max_lemma_violation; // max_i I(A_i;E|A_<i) - I(A_i;E|A_!=i)
  double total_mi;            // I(A_1..A_m;E)
  double theorem_rhs;         // m * max_{i,a} I(A_i;E|A_!=i = a)
};
/// joint axes: (A_1, ..., A_m, E); E is the last axis.
WholeKeyReport whole_key_lemmas_check(const DiscreteJoint& joint);

}  // namespace qsec

#endif  // QSEC_INFOBOUNDS_HPP
