#ifndef QSEC_MUB_HPP
#define QSEC_MUB_HPP

#include <optional>
#include <vector>

#include "qsec/gfpauli.hpp"
#include "qsec/qlinalg.hpp"

// Mutually unbiased bases for prime and prime-power dimensions, and the
// two-way conversion between MUB families and maximal commuting classes of
// orthogonal unitaries.

namespace qsec {

struct Basis {
  int dim = 0;
  std::vector<Vec> vectors;
};

struct MubFamily {
  int dim = 0;
  std::vector<Basis> bases;
};

/// d-1 commuting, pairwise orthogonal, non-identity unitaries. Labels are
/// kept when the class came from a Pauli construction.
struct CommutingClass {
  std::vector<Mat> ops;
  std::vector<PauliIndex> labels;  // empty when not label-backed
};

struct MubReport {
  double max_orthonormality_defect = 0.0;
  double max_unbiasedness_defect = 0.0;
  bool pass = false;
};

/// Scale each vector so its first nonzero amplitude is positive real, then
/// sort vectors lexicographically by amplitudes. Golden-file comparisons are
/// only well-defined on canonicalized bases.
Basis canonicalize(const Basis& b);
MubFamily canonicalize(const MubFamily& f);

/// d+1 bases for prime d: the Z_d eigenbasis plus the eigenbases of
/// X_d (Z_d)^k, k = 0..d-1.
MubFamily mub_prime(int p, bool canonical = true);

/// p^m + 1 bases from linear commuting Pauli classes; m = 2 uses the
/// irreducible-quadratic matrices (a b / b sa+tb).
MubFamily mub_prime_power(int p, int m, bool canonical = true);

MubReport verify_mub(const MubFamily& family, double tol);

/// The commuting classes C_j of symmetric matrices A_j that generate the
/// prime-power family, in family order (the (0|1) class first).
std::vector<CommutingClass> pauli_classes(const PrimePower& pp);

/// The m x m coefficient matrices A_j in class order (excluding the leading
/// (0|1) class).
std::vector<FpMat> mub_coefficient_matrices(const PrimePower& pp);

std::vector<CommutingClass> mub_to_classes(const MubFamily& family);
MubFamily classes_to_mub(const std::vector<CommutingClass>& classes, bool canonical = true);

/// Common eigenbasis of a set of commuting normal matrices, via a generic
/// Hermitian combination. Throws if two deterministic coefficient choices
/// both leave degenerate spectra.
std::vector<Vec> simultaneous_eigenbasis(const std::vector<Mat>& ops);

/// True when every vector of a matches some vector of b with |<u|v>| = 1
/// within tol (order- and phase-insensitive basis equality).
bool basis_equal_up_to_phase(const Basis& a, const Basis& b, double tol);

}  // namespace qsec

#endif  // QSEC_MUB_HPP
