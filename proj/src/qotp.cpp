#include "qsec/qotp.hpp"

#include <cmath>

namespace qsec {

namespace {

int parity(unsigned x) { return __builtin_parity(x); }

double spectral_norm(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

}  // namespace

Mat pauli_xz(int n, unsigned alpha, unsigned beta) {
  const int d = 1 << n;
  if (alpha >= static_cast<unsigned>(d) || beta >= static_cast<unsigned>(d))
    throw std::invalid_argument("pauli_xz: label out of range");
  Mat u = Mat::Zero(d, d);
  for (int a = 0; a < d; ++a)
    u(a ^ static_cast<int>(alpha), a) = parity(static_cast<unsigned>(a) & beta) ? -1.0 : 1.0;
  return u;
}

EncryptionSet::EncryptionSet(int n, std::vector<std::pair<double, Mat>> items,
                             std::vector<PauliLabel> labels)
    : n_(n), items_(std::move(items)), labels_(std::move(labels)) {
  if (n_ < 1 || n_ > 4) throw std::invalid_argument("EncryptionSet: n in 1..4 required");
  if (items_.empty()) throw std::invalid_argument("EncryptionSet: empty");
  if (!labels_.empty() && labels_.size() != items_.size())
    throw std::invalid_argument("EncryptionSet: label count mismatch");
  const int d = dim();
  double sum = 0.0;
  for (const auto& [p, u] : items_) {
    if (p < 0) throw std::invalid_argument("EncryptionSet: negative probability");
    if (u.rows() != d || u.cols() != d) throw std::invalid_argument("EncryptionSet: wrong op size");
    if (!is_unitary(u, kStructTol)) throw std::invalid_argument("EncryptionSet: op not unitary");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kStructTol)
    throw std::invalid_argument("EncryptionSet: probabilities sum to " + std::to_string(sum));
}

EncryptionSet pauli_pad(int n) {
  const int d = 1 << n;
  std::vector<std::pair<double, Mat>> items;
  std::vector<PauliLabel> labels;
  const double p = 1.0 / (static_cast<double>(d) * d);
  for (unsigned a = 0; a < static_cast<unsigned>(d); ++a)
    for (unsigned b = 0; b < static_cast<unsigned>(d); ++b) {
      items.emplace_back(p, pauli_xz(n, a, b));
      labels.push_back({a, b});
    }
  return EncryptionSet(n, std::move(items), std::move(labels));
}

DensityMatrix encrypt_average(const DensityMatrix& rho, const EncryptionSet& set) {
  if (rho.dim() != set.dim()) throw std::invalid_argument("encrypt_average: dim mismatch");
  Mat out = Mat::Zero(set.dim(), set.dim());
  for (const auto& [p, u] : set.items()) out += p * u * rho.entries() * u.adjoint();
  return DensityMatrix(0.5 * (out + out.adjoint()));
}

DensityMatrix encrypt_sample(const DensityMatrix& rho, const EncryptionSet& set, int key) {
  if (key < 0 || key >= static_cast<int>(set.items().size()))
    throw std::invalid_argument("encrypt_sample: unknown key index");
  const Mat& u = set.items()[key].second;
  return DensityMatrix(u * rho.entries() * u.adjoint());
}

DensityMatrix decrypt(const DensityMatrix& rho_c, const EncryptionSet& set, int key) {
  if (key < 0 || key >= static_cast<int>(set.items().size()))
    throw std::invalid_argument("decrypt: unknown key index");
  const Mat& u = set.items()[key].second;
  return DensityMatrix(u.adjoint() * rho_c.entries() * u);
}

SecurityReport is_secure(const EncryptionSet& set, double tol) {
  const int d = set.dim();
  SecurityReport rep;
  for (unsigned a = 0; a < static_cast<unsigned>(d); ++a)
    for (unsigned b = 0; b < static_cast<unsigned>(d); ++b) {
      Mat target = (a == 0 && b == 0) ? Mat(Mat::Identity(d, d)) : Mat(Mat::Zero(d, d));
      Mat pab = pauli_xz(set.n(), a, b);
      Mat acc = Mat::Zero(d, d);
      for (const auto& [p, u] : set.items()) acc += p * u * pab * u.adjoint();
      rep.max_defect = std::max(rep.max_defect, spectral_norm(acc - target));
    }
  rep.pass = rep.max_defect < tol;
  return rep;
}

EncryptionSet conjugated_basis_set(const Mat& w, int n) {
  const int d = 1 << n;
  if (w.rows() != d || w.cols() != d) throw std::invalid_argument("conjugated_basis_set: W size");
  if (!is_unitary(w, kStructTol)) throw std::invalid_argument("conjugated_basis_set: W not unitary");
  std::vector<std::pair<double, Mat>> items;
  const double p = 1.0 / (static_cast<double>(d) * d);
  for (unsigned a = 0; a < static_cast<unsigned>(d); ++a)
    for (unsigned b = 0; b < static_cast<unsigned>(d); ++b)
      items.emplace_back(p, w * pauli_xz(n, a, b) * w.adjoint());
  return EncryptionSet(n, std::move(items));
}

GramReport gram_analysis(const EncryptionSet& set, double tol) {
  SecurityReport sec = is_secure(set, tol);
  if (!sec.pass)
    throw std::invalid_argument("gram_analysis: set is not a secure encryption set (defect " +
                                std::to_string(sec.max_defect) + ")");
  const int n = set.n(), d = set.dim();
  const int nsq = d * d;  // 2^{2n}
  const int m = static_cast<int>(set.items().size());

  // Rows sqrt(p_k) * coefficients of U_k in the X^a Z^b basis.
  Mat ct(m, nsq);
  {
    std::vector<Mat> basis;
    basis.reserve(nsq);
    for (unsigned a = 0; a < static_cast<unsigned>(d); ++a)
      for (unsigned b = 0; b < static_cast<unsigned>(d); ++b) basis.push_back(pauli_xz(n, a, b));
    for (int k = 0; k < m; ++k) {
      const auto& [p, u] = set.items()[k];
      const double sp = std::sqrt(p);
      for (int col = 0; col < nsq; ++col)
        ct(k, col) = sp * (basis[col].adjoint() * u).trace() / static_cast<double>(d);
    }
  }
  Mat gram = ct.adjoint() * ct;
  Mat target = Mat::Identity(nsq, nsq) / static_cast<double>(nsq);

  GramReport rep;
  rep.m = m;
  rep.ctc_defect = (gram - target).cwiseAbs().maxCoeff();
  Eigen::VectorXd probs(m);
  for (int k = 0; k < m; ++k) probs(k) = set.items()[k].first;
  rep.key_entropy = shannon_entropy(probs);
  rep.satisfies_min_entropy = rep.key_entropy >= 2.0 * n - kDerivedTol;
  return rep;
}

SuperdenseResult superdense_key_recovery(int n, unsigned alpha, unsigned beta) {
  if (n < 1 || n > 3) throw std::invalid_argument("superdense_key_recovery: n in 1..3");
  if (alpha >= (1u << n) || beta >= (1u << n))
    throw std::invalid_argument("superdense_key_recovery: key out of range");

  // Per-pair statevector: singlet, X^a Z^b on the second half, Bell projection.
  const double s = 1.0 / std::sqrt(2.0);
  Vec singlet(4);
  singlet << 0.0, s, -s, 0.0;  // (|01> - |10>)/sqrt(2)
  std::vector<Vec> bell(4, Vec(4));
  bell[0] << s, 0, 0, s;   // Phi+
  bell[1] << s, 0, 0, -s;  // Phi-
  bell[2] << 0, s, s, 0;   // Psi+
  bell[3] << 0, s, -s, 0;  // Psi-

  SuperdenseResult res;
  for (int q = 0; q < n; ++q) {
    unsigned a = (alpha >> q) & 1u, b = (beta >> q) & 1u;
    Mat op = tensor(Mat::Identity(2, 2), pauli_xz(1, a, b));
    Vec transformed = op * singlet;
    int outcome = -1;
    for (int k = 0; k < 4; ++k) {
      double pr = std::norm(bell[k].dot(transformed));
      if (pr > 1.0 - kDerivedTol) outcome = k;
    }
    if (outcome < 0) throw std::logic_error("superdense_key_recovery: non-deterministic outcome");
    res.bell_outcomes.push_back(outcome);
    // Phi+ <- (1,1), Phi- <- (1,0), Psi+ <- (0,1), Psi- <- (0,0)
    static constexpr unsigned rec_a[4] = {1, 1, 0, 0};
    static constexpr unsigned rec_b[4] = {1, 0, 1, 0};
    res.alpha |= rec_a[outcome] << q;
    res.beta |= rec_b[outcome] << q;
  }
  return res;
}

}  // namespace qsec
