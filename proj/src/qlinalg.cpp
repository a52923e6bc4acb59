#include "qsec/qlinalg.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace qsec {

namespace {

void check_dim(int dim) {
  if (dim < 1 || dim > kMaxDim)
    throw std::invalid_argument("dimension out of range (1.." + std::to_string(kMaxDim) + ")");
}

double clamped_p_log2_p(double p) {
  if (p <= 0.0) return 0.0;
  return p * std::log2(p);
}

}  // namespace

std::uint64_t Rng::mix(std::uint64_t x) {
  // splitmix64 finalizer
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double Rng::uniform() {
  return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
}

double Rng::normal() {
  return std::normal_distribution<double>(0.0, 1.0)(engine_);
}

std::uint64_t Rng::integer(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("Rng::integer: bound must be positive");
  return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(engine_);
}

Ket::Ket(Vec amplitudes, bool allow_unnormalized) : amp_(std::move(amplitudes)) {
  check_dim(static_cast<int>(amp_.size()));
  if (!allow_unnormalized) {
    double n = amp_.norm();
    if (std::abs(n - 1.0) > kStructTol)
      throw std::invalid_argument("Ket: norm " + std::to_string(n) + " != 1");
  }
}

Ket Ket::basis_state(int dim, int index) {
  check_dim(dim);
  if (index < 0 || index >= dim) throw std::invalid_argument("basis_state: index out of range");
  Vec v = Vec::Zero(dim);
  v(index) = 1.0;
  return Ket(std::move(v));
}

DensityMatrix::DensityMatrix(Mat entries) : m_(std::move(entries)) {
  if (m_.rows() != m_.cols()) throw std::invalid_argument("DensityMatrix: not square");
  check_dim(static_cast<int>(m_.rows()));
  if (!is_hermitian(m_, kStructTol)) throw std::invalid_argument("DensityMatrix: not Hermitian");
  double tr = m_.trace().real();
  if (std::abs(tr - 1.0) > kStructTol)
    throw std::invalid_argument("DensityMatrix: trace " + std::to_string(tr) + " != 1");
  Eigen::SelfAdjointEigenSolver<Mat> es(m_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kDerivedTol)
    throw std::invalid_argument("DensityMatrix: negative eigenvalue " +
                                std::to_string(es.eigenvalues().minCoeff()));
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  check_dim(dim);
  return DensityMatrix(Mat::Identity(dim, dim) / static_cast<double>(dim));
}

Mat tensor(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Vec tensor_vec(const Vec& a, const Vec& b) {
  Vec out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

Mat partial_trace_raw(const Mat& m, const BipartiteLabel& label, int keep) {
  if (m.rows() != label.dim() || m.cols() != label.dim())
    throw std::invalid_argument("partial_trace: dimension mismatch");
  if (keep != 0 && keep != 1) throw std::invalid_argument("partial_trace: keep must be 0 or 1");
  const int d1 = label.d1, d2 = label.d2;
  if (keep == 0) {
    Mat out = Mat::Zero(d1, d1);
    for (int i = 0; i < d1; ++i)
      for (int j = 0; j < d1; ++j)
        for (int k = 0; k < d2; ++k)
          out(i, j) += m(i * d2 + k, j * d2 + k);
    return out;
  }
  Mat out = Mat::Zero(d2, d2);
  for (int i = 0; i < d2; ++i)
    for (int j = 0; j < d2; ++j)
      for (int k = 0; k < d1; ++k)
        out(i, j) += m(k * d2 + i, k * d2 + j);
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const BipartiteLabel& label, int keep) {
  return DensityMatrix(partial_trace_raw(rho.entries(), label, keep));
}

bool is_hermitian(const Mat& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_unitary(const Mat& m, double tol) {
  if (m.rows() != m.cols()) return false;
  Mat d = m.adjoint() * m - Mat::Identity(m.rows(), m.cols());
  return d.cwiseAbs().maxCoeff() <= tol;
}

Eigen::VectorXd hermitian_eigenvalues(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double trace_norm(const Mat& a) {
  if (!is_hermitian(a, 1e-8)) throw std::invalid_argument("trace_norm: input not Hermitian");
  // Symmetrize away the sub-tolerance skew before the solver.
  Mat h = 0.5 * (a + a.adjoint());
  return hermitian_eigenvalues(h).cwiseAbs().sum();
}

double shannon_entropy(const Eigen::VectorXd& p) {
  double sum = 0.0, h = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p(i) < -kEigClampTol)
      throw std::invalid_argument("shannon_entropy: negative entry " + std::to_string(p(i)));
    double pi = std::max(p(i), 0.0);
    sum += pi;
    h -= clamped_p_log2_p(pi);
  }
  if (std::abs(sum - 1.0) > kStructTol)
    throw std::invalid_argument("shannon_entropy: probabilities sum to " + std::to_string(sum));
  return h;
}

double binary_entropy(double x) {
  if (x < 0.0 || x > 1.0) throw std::invalid_argument("binary_entropy: argument outside [0,1]");
  return -clamped_p_log2_p(x) - clamped_p_log2_p(1.0 - x);
}

double von_neumann_entropy(const DensityMatrix& rho) {
  Eigen::VectorXd ev = hermitian_eigenvalues(rho.entries());
  double h = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    double l = ev(i) <= kEigClampTol ? 0.0 : ev(i);
    h -= clamped_p_log2_p(l);
  }
  return h;
}

double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw std::invalid_argument("relative_entropy: dim mismatch");
  Eigen::SelfAdjointEigenSolver<Mat> es(sigma.entries());
  const Eigen::VectorXd& lam = es.eigenvalues();
  const Mat& v = es.eigenvectors();
  double cross = 0.0;  // Tr(rho log2 sigma)
  for (int i = 0; i < sigma.dim(); ++i) {
    double weight = (v.col(i).adjoint() * rho.entries() * v.col(i))(0, 0).real();
    if (lam(i) <= kEigClampTol) {
      // support(rho) escapes support(sigma)
      if (weight > kDerivedTol) return std::numeric_limits<double>::infinity();
      continue;
    }
    cross += weight * std::log2(lam(i));
  }
  Eigen::VectorXd evr = hermitian_eigenvalues(rho.entries());
  double self = 0.0;  // Tr(rho log2 rho)
  for (Eigen::Index i = 0; i < evr.size(); ++i) {
    double l = evr(i) <= kEigClampTol ? 0.0 : evr(i);
    self += clamped_p_log2_p(l);
  }
  return self - cross;
}

Ket purify(const DensityMatrix& rho) {
  const int d = rho.dim();
  Eigen::SelfAdjointEigenSolver<Mat> es(rho.entries());
  Vec out = Vec::Zero(static_cast<Eigen::Index>(d) * d);
  for (int i = 0; i < d; ++i) {
    double l = std::max(es.eigenvalues()(i), 0.0);
    if (l <= 0.0) continue;
    double s = std::sqrt(l);
    // |e_i> (x) |i>, first factor most significant
    for (int a = 0; a < d; ++a) out(static_cast<Eigen::Index>(a) * d + i) += s * es.eigenvectors()(a, i);
  }
  return Ket(std::move(out));
}

Vec random_ket_vec(int dim, Rng& rng) {
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v(i) = cxd(rng.normal(), rng.normal());
  v.normalize();
  return v;
}

DensityMatrix random_density(int dim, Rng& rng, int rank) {
  if (rank <= 0 || rank > dim) rank = dim;
  Mat m = Mat::Zero(dim, dim);
  double total = 0.0;
  std::vector<double> w(rank);
  for (int r = 0; r < rank; ++r) {
    w[r] = rng.uniform() + 1e-3;
    total += w[r];
  }
  for (int r = 0; r < rank; ++r) {
    Vec v = random_ket_vec(dim, rng);
    m += (w[r] / total) * (v * v.adjoint());
  }
  return DensityMatrix(0.5 * (m + m.adjoint()));
}

Mat random_unitary(int dim, Rng& rng) {
  // QR of a Ginibre matrix with the standard phase fix.
  Mat g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = cxd(rng.normal(), rng.normal());
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < dim; ++i) {
    cxd rii = r(i, i);
    cxd phase = std::abs(rii) > 0 ? rii / std::abs(rii) : cxd(1, 0);
    q.col(i) *= phase;
  }
  return q;
}

}  // namespace qsec
