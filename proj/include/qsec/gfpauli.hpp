#ifndef QSEC_GFPAULI_HPP
#define QSEC_GFPAULI_HPP

#include <cstdint>
#include <vector>

#include "qsec/qlinalg.hpp"

// Arithmetic over F_p and F_{p^m}, generalized Pauli operators X_d/Z_d, the
// (alpha|beta) labeling of the Pauli group, and the field-multiplication
// matrices used by the prime-power MUB construction.

namespace qsec {

bool is_prime(int p);

struct PrimePower {
  int p;  // prime
  int m;  // extension degree
  int d;  // p^m

  PrimePower(int p_, int m_);
};

using FpVec = std::vector<int>;  // coefficients in [0, p)

/// Polynomial arithmetic over F_p; coefficients ascending (c[0] + c[1] x + ...).
namespace fppoly {
FpVec trim(FpVec a);
FpVec add(const FpVec& a, const FpVec& b, int p);
FpVec sub(const FpVec& a, const FpVec& b, int p);
FpVec mul(const FpVec& a, const FpVec& b, int p);
FpVec mod(FpVec a, const FpVec& f, int p);
FpVec powmod(const FpVec& base, std::uint64_t e, const FpVec& f, int p);
FpVec gcd(FpVec a, FpVec b, int p);
int degree(const FpVec& a);
bool is_irreducible(const FpVec& f, int p);  // Rabin test
}  // namespace fppoly

/// Lexicographically-first monic irreducible polynomial of degree m over F_p
/// (ordered by the coefficient tuple (c_{m-1}, ..., c_0)). Returned ascending,
/// length m+1, leading coefficient 1.
FpVec modulus_polynomial(int p, int m);

/// Element of F_{p^m} relative to a fixed modulus polynomial.
class FieldElement {
public:
  FieldElement(FpVec coeffs, const FpVec& modulus, int p);

  const FpVec& coeffs() const { return c_; }
  int p() const { return p_; }
  int m() const { return static_cast<int>(c_.size()); }

  FieldElement operator+(const FieldElement& o) const;
  FieldElement operator-(const FieldElement& o) const;
  FieldElement operator*(const FieldElement& o) const;
  FieldElement inverse() const;
  bool is_zero() const;
  bool operator==(const FieldElement& o) const { return c_ == o.c_; }

  static FieldElement from_index(std::uint64_t idx, const FpVec& modulus, int p, int m);
  std::uint64_t index() const;  // sum c_i p^i

private:
  FpVec c_;
  FpVec mod_;
  int p_;
};

/// Label (alpha|beta) plus a phase exponent: omega^phase X_p(alpha) Z_p(beta).
struct PauliIndex {
  FpVec alpha;
  FpVec beta;
  int phase_exp = 0;

  bool operator==(const PauliIndex& o) const {
    return alpha == o.alpha && beta == o.beta && phase_exp == o.phase_exp;
  }
};

Mat build_xd(int d);
Mat build_zd(int d);

Mat pauli_matrix(const PauliIndex& idx, const PrimePower& pp);

bool commutes(const PauliIndex& a, const PauliIndex& b, int p);

/// Exponent e with B*A = omega^e A*B (first argument is A).
int commutation_phase(const PauliIndex& a, const PauliIndex& b, int p);

/// Composition a*b = omega^e X(alpha_a+alpha_b) Z(beta_a+beta_b) at the label
/// level; matches pauli_matrix(a) * pauli_matrix(b).
PauliIndex compose(const PauliIndex& a, const PauliIndex& b, int p);

cxd hs_inner(const Mat& a, const Mat& b);

/// Coefficients (s, t) with gamma^2 - t gamma - s irreducible over F_p;
/// deterministic choice (t scanned descending, s ascending) reproducing the
/// standard x^2+x+1 (p=2) and x^2+x+2 (p=3) polynomials.
std::pair<int, int> irreducible_quadratic(int p);

using FpMat = std::vector<FpVec>;  // row-major, entries in [0, p)

/// The m matrices B_l with gamma_i gamma_j = sum_l b_ij^l gamma_l for the
/// polynomial basis {1, gamma, ..., gamma^{m-1}}; each symmetric and every
/// nonzero F_p-combination nonsingular.
std::vector<FpMat> wootters_fields_matrices(const PrimePower& pp);

bool fpmat_is_symmetric(const FpMat& a, int p);
int fpmat_det(FpMat a, int p);  // determinant mod p
FpMat fpmat_combine(const std::vector<FpMat>& mats, const FpVec& coeffs, int p);
FpVec fpvec_mat_mul(const FpVec& x, const FpMat& a, int p);  // row vector times matrix

}  // namespace qsec

#endif  // QSEC_GFPAULI_HPP
