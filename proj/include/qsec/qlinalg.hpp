#ifndef QSEC_QLINALG_HPP
#define QSEC_QLINALG_HPP

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>

#include <Eigen/Dense>

// Dense complex linear algebra and quantum-state primitives. All state is
// immutable value types; every operation is a pure function. Dimensions are
// capped at 2^12 (dense double-precision algebra only).

namespace qsec {

using cxd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline constexpr int kMaxDim = 1 << 12;

// Tolerances used throughout: structural checks 1e-10, derived equalities
// 1e-9, eigenvalues within 1e-12 of zero are clamped before logs.
inline constexpr double kStructTol = 1e-10;
inline constexpr double kDerivedTol = 1e-9;
inline constexpr double kEigClampTol = 1e-12;

/// splitmix64-seeded wrapper around std::mt19937_64; explicit seeding
/// everywhere keeps runs reproducible.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix(seed)) {}

  double uniform();                            // [0,1)
  double normal();                             // N(0,1)
  std::uint64_t integer(std::uint64_t bound);  // [0, bound)
  bool bernoulli(double p) { return uniform() < p; }

  /// Independent child stream for trial i.
  Rng child(std::uint64_t i) const { return Rng(mix(seed_ ^ mix(i + 0x9e3779b97f4a7c15ULL))); }

  static std::uint64_t mix(std::uint64_t x);

private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// Normalized pure state on C^dim.
class Ket {
public:
  explicit Ket(Vec amplitudes, bool allow_unnormalized = false);

  int dim() const { return static_cast<int>(amp_.size()); }
  const Vec& amplitudes() const { return amp_; }
  cxd operator[](int i) const { return amp_(i); }

  /// |k><k|.
  Mat projector() const { return amp_ * amp_.adjoint(); }

  static Ket basis_state(int dim, int index);

private:
  Vec amp_;
};

/// Hermitian, unit-trace, positive semidefinite matrix.
class DensityMatrix {
public:
  explicit DensityMatrix(Mat entries);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Mat& entries() const { return m_; }

  static DensityMatrix pure(const Ket& k) { return DensityMatrix(k.projector()); }
  static DensityMatrix maximally_mixed(int dim);

private:
  Mat m_;
};

/// Splits a dim = d1*d2 space; index convention i = i1*d2 + i2
/// (first factor most significant).
struct BipartiteLabel {
  int d1;
  int d2;
  BipartiteLabel(int a, int b) : d1(a), d2(b) {
    if (a < 1 || b < 1) throw std::invalid_argument("BipartiteLabel: dims must be >= 1");
  }
  int dim() const { return d1 * d2; }
};

Mat tensor(const Mat& a, const Mat& b);
Vec tensor_vec(const Vec& a, const Vec& b);

/// Reduced density matrix of the kept subsystem (keep = 0 keeps the first
/// factor, keep = 1 the second).
DensityMatrix partial_trace(const DensityMatrix& rho, const BipartiteLabel& label, int keep);
Mat partial_trace_raw(const Mat& m, const BipartiteLabel& label, int keep);

/// Sum of absolute eigenvalues. Rejects inputs that are not Hermitian
/// within 1e-8.
double trace_norm(const Mat& a);

/// -sum p_i log2 p_i with the 0 log 0 = 0 convention. Entries must be
/// nonnegative and sum to 1 within 1e-10.
double shannon_entropy(const Eigen::VectorXd& p);
double binary_entropy(double x);

double von_neumann_entropy(const DensityMatrix& rho);

/// Tr(rho log2 rho) - Tr(rho log2 sigma); +infinity when support(rho) is not
/// contained in support(sigma).
double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Canonical purification sum_i sqrt(lambda_i) |e_i>|i> on C^{dim^2};
/// partial trace over the second factor recovers rho.
Ket purify(const DensityMatrix& rho);

bool is_hermitian(const Mat& m, double tol = kStructTol);
bool is_unitary(const Mat& m, double tol = kStructTol);

/// Eigenvalues of a Hermitian matrix, ascending.
Eigen::VectorXd hermitian_eigenvalues(const Mat& m);

// Deterministic generators for randomized property suites.
Vec random_ket_vec(int dim, Rng& rng);
DensityMatrix random_density(int dim, Rng& rng, int rank = 0);
Mat random_unitary(int dim, Rng& rng);

}  // namespace qsec

#endif  // QSEC_QLINALG_HPP
