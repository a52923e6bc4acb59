#ifndef QSEC_QOTP_HPP
#define QSEC_QOTP_HPP

#include <optional>
#include <vector>

#include "qsec/qlinalg.hpp"

// Quantum one-time pad: encryption sets {p_k, U_k}, the discrete security
// condition, key-entropy lower bound, and superdense-coding key recovery.

namespace qsec {

/// Label of an n-qubit Pauli X^alpha Z^beta (bitmask per register).
struct PauliLabel {
  unsigned alpha = 0;
  unsigned beta = 0;
};

class EncryptionSet {
public:
  EncryptionSet(int n, std::vector<std::pair<double, Mat>> items,
                std::vector<PauliLabel> labels = {});

  int n() const { return n_; }
  int dim() const { return 1 << n_; }
  const std::vector<std::pair<double, Mat>>& items() const { return items_; }
  const std::vector<PauliLabel>& labels() const { return labels_; }  // empty when not Pauli-backed

private:
  int n_;
  std::vector<std::pair<double, Mat>> items_;
  std::vector<PauliLabel> labels_;
};

/// X^alpha Z^beta on n qubits.
Mat pauli_xz(int n, unsigned alpha, unsigned beta);

/// Uniform distribution over the 2^{2n} operators X^alpha Z^beta.
EncryptionSet pauli_pad(int n);

DensityMatrix encrypt_average(const DensityMatrix& rho, const EncryptionSet& set);
DensityMatrix encrypt_sample(const DensityMatrix& rho, const EncryptionSet& set, int key);
DensityMatrix decrypt(const DensityMatrix& rho_c, const EncryptionSet& set, int key);

struct SecurityReport {
  double max_defect = 0.0;  // worst operator-norm residual over all 2^{2n} conditions
  bool pass = false;
};
/// Evaluates sum_k p_k U_k X^a Z^b U_k^dag = delta_{a0} delta_{b0} I for all
/// (a, b).
SecurityReport is_secure(const EncryptionSet& set, double tol);

/// Uniform set {W X^alpha Z^beta W^dag}; stays an orthonormal unitary basis.
EncryptionSet conjugated_basis_set(const Mat& w, int n);

struct GramReport {
  int m = 0;                 // number of keys
  double key_entropy = 0.0;  // H(p_1..p_M)
  double ctc_defect = 0.0;   // || Ct^dag Ct - I/2^{2n} ||_max
  bool satisfies_min_entropy = false;  // key_entropy >= 2n - 1e-9
};
/// Requires a secure set (the lemma's hypothesis); tol is the is_secure gate.
GramReport gram_analysis(const EncryptionSet& set, double tol = 1e-8);

struct SuperdenseResult {
  unsigned alpha = 0;
  unsigned beta = 0;
  std::vector<int> bell_outcomes;  // per-pair Bell index
};
/// Simulates n singlets, X^alpha Z^beta on the travelling halves, Bell
/// measurement; recovery is deterministic and exact.
SuperdenseResult superdense_key_recovery(int n, unsigned alpha, unsigned beta);

}  // namespace qsec

#endif  // QSEC_QOTP_HPP
