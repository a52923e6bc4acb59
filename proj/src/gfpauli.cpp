#include "qsec/gfpauli.hpp"

#include <cmath>
#include <numbers>

namespace qsec {

namespace {

int mod_pow(int base, std::uint64_t e, int p) {
  long long r = 1, b = ((base % p) + p) % p;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return static_cast<int>(r);
}

int mod_inv(int a, int p) { return mod_pow(a, static_cast<std::uint64_t>(p) - 2, p); }

cxd root_of_unity(int d, long long k) {
  double arg = 2.0 * std::numbers::pi * static_cast<double>(((k % d) + d) % d) / d;
  return cxd(std::cos(arg), std::sin(arg));
}

}  // namespace

bool is_prime(int p) {
  if (p < 2) return false;
  for (int q = 2; static_cast<long long>(q) * q <= p; ++q)
    if (p % q == 0) return false;
  return true;
}

PrimePower::PrimePower(int p_, int m_) : p(p_), m(m_) {
  if (!is_prime(p)) throw std::invalid_argument("PrimePower: p = " + std::to_string(p) + " not prime");
  if (m < 1) throw std::invalid_argument("PrimePower: m must be >= 1");
  long long dd = 1;
  for (int i = 0; i < m; ++i) {
    dd *= p;
    if (dd > kMaxDim) throw std::invalid_argument("PrimePower: p^m exceeds dimension cap");
  }
  d = static_cast<int>(dd);
}

namespace fppoly {

FpVec trim(FpVec a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
  return a;
}

int degree(const FpVec& a) { return static_cast<int>(a.size()) - 1; }

FpVec add(const FpVec& a, const FpVec& b, int p) {
  FpVec r(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < r.size(); ++i) {
    int v = (i < a.size() ? a[i] : 0) + (i < b.size() ? b[i] : 0);
    r[i] = v % p;
  }
  return trim(std::move(r));
}

FpVec sub(const FpVec& a, const FpVec& b, int p) {
  FpVec r(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < r.size(); ++i) {
    int v = (i < a.size() ? a[i] : 0) - (i < b.size() ? b[i] : 0);
    r[i] = ((v % p) + p) % p;
  }
  return trim(std::move(r));
}

FpVec mul(const FpVec& a, const FpVec& b, int p) {
  if (a.empty() || b.empty()) return {};
  FpVec r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  return trim(std::move(r));
}

FpVec mod(FpVec a, const FpVec& f, int p) {
  a = trim(std::move(a));
  const int df = degree(f);
  if (df < 0) throw std::invalid_argument("fppoly::mod: zero modulus");
  const int lead_inv = mod_inv(f.back(), p);
  while (degree(a) >= df) {
    int shift = degree(a) - df;
    int c = static_cast<int>(static_cast<long long>(a.back()) * lead_inv % p);
    for (int i = 0; i <= df; ++i) {
      int v = a[i + shift] - c * f[i] % p;
      a[i + shift] = ((v % p) + p) % p;
    }
    a = trim(std::move(a));
  }
  return a;
}

FpVec powmod(const FpVec& base, std::uint64_t e, const FpVec& f, int p) {
  FpVec r = {1};
  FpVec b = mod(base, f, p);
  while (e) {
    if (e & 1) r = mod(mul(r, b, p), f, p);
    b = mod(mul(b, b, p), f, p);
    e >>= 1;
  }
  return r;
}

FpVec gcd(FpVec a, FpVec b, int p) {
  a = trim(std::move(a));
  b = trim(std::move(b));
  while (!b.empty()) {
    FpVec r = mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    // make monic
    int inv = mod_inv(a.back(), p);
    for (auto& c : a) c = static_cast<int>(static_cast<long long>(c) * inv % p);
  }
  return a;
}

bool is_irreducible(const FpVec& f, int p) {
  const int m = degree(f);
  if (m < 1) return false;
  if (m == 1) return true;
  const FpVec x = {0, 1};
  // x^(p^m) == x mod f
  FpVec acc = x;
  for (int i = 0; i < m; ++i) acc = powmod(acc, static_cast<std::uint64_t>(p), f, p);
  if (trim(sub(acc, x, p)).size() != 0) return false;
  // gcd(x^(p^(m/q)) - x, f) == 1 for every prime divisor q of m
  for (int q = 2; q <= m; ++q) {
    if (m % q != 0 || !is_prime(q)) continue;
    FpVec acc2 = x;
    for (int i = 0; i < m / q; ++i) acc2 = powmod(acc2, static_cast<std::uint64_t>(p), f, p);
    FpVec g = gcd(sub(acc2, x, p), f, p);
    if (degree(g) != 0) return false;
  }
  return true;
}

}  // namespace fppoly

FpVec modulus_polynomial(int p, int m) {
  if (!is_prime(p)) throw std::invalid_argument("modulus_polynomial: p not prime");
  if (m < 1 || m > 12) throw std::invalid_argument("modulus_polynomial: m out of range");
  if (m == 1) return {0, 1};  // x itself; F_p needs no extension
  // Scan monic degree-m polynomials by the tuple (c_{m-1}, ..., c_0).
  long long count = 1;
  for (int i = 0; i < m; ++i) count *= p;
  for (long long code = 0; code < count; ++code) {
    FpVec f(m + 1, 0);
    f[m] = 1;
    long long c = code;
    for (int i = 0; i < m; ++i) {  // low digit of code = c_0
      f[i] = static_cast<int>(c % p);
      c /= p;
    }
    if (fppoly::is_irreducible(f, p)) return f;
  }
  throw std::logic_error("modulus_polynomial: none found");  // unreachable
}

FieldElement::FieldElement(FpVec coeffs, const FpVec& modulus, int p)
    : c_(std::move(coeffs)), mod_(modulus), p_(p) {
  const int m = fppoly::degree(mod_);
  if (static_cast<int>(c_.size()) != m)
    throw std::invalid_argument("FieldElement: coefficient length != m");
  for (int& v : c_) v = ((v % p) + p) % p;
}

bool FieldElement::is_zero() const {
  for (int v : c_)
    if (v) return false;
  return true;
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
  FpVec r(c_.size());
  for (size_t i = 0; i < c_.size(); ++i) r[i] = (c_[i] + o.c_[i]) % p_;
  return FieldElement(std::move(r), mod_, p_);
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
  FpVec r(c_.size());
  for (size_t i = 0; i < c_.size(); ++i) r[i] = ((c_[i] - o.c_[i]) % p_ + p_) % p_;
  return FieldElement(std::move(r), mod_, p_);
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
  FpVec r = fppoly::mod(fppoly::mul(c_, o.c_, p_), mod_, p_);
  r.resize(c_.size(), 0);
  return FieldElement(std::move(r), mod_, p_);
}

FieldElement FieldElement::inverse() const {
  if (is_zero()) throw std::domain_error("FieldElement::inverse of zero");
  // a^(q-2) with q = p^m
  std::uint64_t q = 1;
  for (size_t i = 0; i < c_.size(); ++i) q *= static_cast<std::uint64_t>(p_);
  FpVec r = fppoly::powmod(c_, q - 2, mod_, p_);
  r.resize(c_.size(), 0);
  return FieldElement(std::move(r), mod_, p_);
}

FieldElement FieldElement::from_index(std::uint64_t idx, const FpVec& modulus, int p, int m) {
  FpVec c(m, 0);
  for (int i = 0; i < m; ++i) {
    c[i] = static_cast<int>(idx % p);
    idx /= p;
  }
  return FieldElement(std::move(c), modulus, p);
}

std::uint64_t FieldElement::index() const {
  std::uint64_t idx = 0, mult = 1;
  for (size_t i = 0; i < c_.size(); ++i) {
    idx += mult * static_cast<std::uint64_t>(c_[i]);
    mult *= static_cast<std::uint64_t>(p_);
  }
  return idx;
}

Mat build_xd(int d) {
  if (d < 2) throw std::invalid_argument("build_xd: d >= 2 required");
  Mat x = Mat::Zero(d, d);
  for (int j = 0; j < d; ++j) x((j + 1) % d, j) = 1.0;
  return x;
}

Mat build_zd(int d) {
  if (d < 2) throw std::invalid_argument("build_zd: d >= 2 required");
  Mat z = Mat::Zero(d, d);
  for (int j = 0; j < d; ++j) z(j, j) = root_of_unity(d, j);
  return z;
}

namespace {

// F_p^m vector <-> standard-basis index, first component most significant.
int fp_vec_to_index(const FpVec& v, int p) {
  int idx = 0;
  for (int c : v) idx = idx * p + c;
  return idx;
}

int dot_mod(const FpVec& a, const FpVec& b, int p) {
  long long s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += static_cast<long long>(a[i]) * b[i];
  return static_cast<int>(((s % p) + p) % p);
}

FpVec add_mod(const FpVec& a, const FpVec& b, int p) {
  FpVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = (a[i] + b[i]) % p;
  return r;
}

void check_index(const PauliIndex& idx, const PrimePower& pp) {
  if (static_cast<int>(idx.alpha.size()) != pp.m || static_cast<int>(idx.beta.size()) != pp.m)
    throw std::invalid_argument("PauliIndex: vector length != m");
  for (int v : idx.alpha)
    if (v < 0 || v >= pp.p) throw std::invalid_argument("PauliIndex: alpha out of range");
  for (int v : idx.beta)
    if (v < 0 || v >= pp.p) throw std::invalid_argument("PauliIndex: beta out of range");
}

}  // namespace

Mat pauli_matrix(const PauliIndex& idx, const PrimePower& pp) {
  check_index(idx, pp);
  const int p = pp.p, m = pp.m, d = pp.d;
  Mat u = Mat::Zero(d, d);
  cxd phase = root_of_unity(p, idx.phase_exp);
  FpVec a(m, 0);
  for (int ai = 0; ai < d; ++ai) {
    // decode ai into the vector a (first component most significant)
    int t = ai;
    for (int i = m - 1; i >= 0; --i) {
      a[i] = t % p;
      t /= p;
    }
    int row = fp_vec_to_index(add_mod(a, idx.alpha, p), p);
    u(row, ai) = phase * root_of_unity(p, dot_mod(a, idx.beta, p));
  }
  return u;
}

bool commutes(const PauliIndex& a, const PauliIndex& b, int p) {
  return (dot_mod(a.alpha, b.beta, p) - dot_mod(b.alpha, a.beta, p)) % p == 0;
}

int commutation_phase(const PauliIndex& a, const PauliIndex& b, int p) {
  int e = dot_mod(a.alpha, b.beta, p) - dot_mod(b.alpha, a.beta, p);
  return ((e % p) + p) % p;
}

PauliIndex compose(const PauliIndex& a, const PauliIndex& b, int p) {
  // X(a)Z(b) X(a')Z(b') = omega^{b . a'} X(a+a')Z(b+b')
  PauliIndex r;
  r.alpha = add_mod(a.alpha, b.alpha, p);
  r.beta = add_mod(a.beta, b.beta, p);
  r.phase_exp = (a.phase_exp + b.phase_exp + dot_mod(a.beta, b.alpha, p)) % p;
  return r;
}

cxd hs_inner(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("hs_inner: dimension mismatch");
  return (a.adjoint() * b).trace();
}

std::pair<int, int> irreducible_quadratic(int p) {
  if (!is_prime(p)) throw std::invalid_argument("irreducible_quadratic: p not prime");
  // gamma^2 - t*gamma - s has a root iff it factors; scan t descending so the
  // standard textbook polynomials x^2+x+1 (p=2) and x^2+x+2 (p=3) come out.
  for (int t = p - 1; t >= 0; --t) {
    for (int s = 0; s < p; ++s) {
      bool has_root = false;
      for (int g = 0; g < p && !has_root; ++g)
        if ((g * g - t * g - s) % p == 0) has_root = true;
      if (!has_root) return {s, t};
    }
  }
  throw std::logic_error("irreducible_quadratic: none found");  // unreachable
}

bool fpmat_is_symmetric(const FpMat& a, int p) {
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a.size(); ++j)
      if (((a[i][j] - a[j][i]) % p + p) % p != 0) return false;
  return true;
}

int fpmat_det(FpMat a, int p) {
  const int n = static_cast<int>(a.size());
  long long det = 1;
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r)
      if (a[r][col] % p != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) return 0;
    if (pivot != col) {
      std::swap(a[pivot], a[col]);
      det = (p - det % p) % p;
    }
    det = det * a[col][col] % p;
    int inv = mod_inv(a[col][col], p);
    for (int r = col + 1; r < n; ++r) {
      int f = static_cast<int>(static_cast<long long>(a[r][col]) * inv % p);
      for (int c = col; c < n; ++c) a[r][c] = ((a[r][c] - f * a[col][c]) % p + p) % p;
    }
  }
  return static_cast<int>(((det % p) + p) % p);
}

FpMat fpmat_combine(const std::vector<FpMat>& mats, const FpVec& coeffs, int p) {
  if (mats.empty()) throw std::invalid_argument("fpmat_combine: empty");
  const size_t n = mats[0].size();
  FpMat r(n, FpVec(n, 0));
  for (size_t k = 0; k < mats.size(); ++k)
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) r[i][j] = (r[i][j] + coeffs[k] * mats[k][i][j]) % p;
  return r;
}

FpVec fpvec_mat_mul(const FpVec& x, const FpMat& a, int p) {
  const size_t n = a.size();
  FpVec r(n, 0);
  for (size_t j = 0; j < n; ++j) {
    long long s = 0;
    for (size_t i = 0; i < n; ++i) s += static_cast<long long>(x[i]) * a[i][j];
    r[j] = static_cast<int>(s % p);
  }
  return r;
}

std::vector<FpMat> wootters_fields_matrices(const PrimePower& pp) {
  const int p = pp.p, m = pp.m;
  if (m == 1) return {FpMat{{1}}};
  FpVec f = modulus_polynomial(p, m);
  // gamma_i = x^{i-1} in F_p[x]/(f); gamma_i gamma_j = sum_l b_ij^l gamma_l.
  std::vector<FpMat> b(m, FpMat(m, FpVec(m, 0)));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      FpVec prod(i + j + 1, 0);
      prod[i + j] = 1;  // x^{i+j}
      FpVec red = fppoly::mod(std::move(prod), f, p);
      red.resize(m, 0);
      for (int l = 0; l < m; ++l) b[l][i][j] = red[l];
    }
  }
  // Defining properties from the construction; must never fail.
  long long count = pp.d;
  for (long long code = 1; code < count; ++code) {
    FpVec coeffs(m);
    long long c = code;
    for (int i = 0; i < m; ++i) {
      coeffs[i] = static_cast<int>(c % p);
      c /= p;
    }
    FpMat comb = fpmat_combine(b, coeffs, p);
    if (!fpmat_is_symmetric(comb, p) || fpmat_det(comb, p) == 0)
      throw std::logic_error("wootters_fields_matrices: combination not symmetric nonsingular");
  }
  return b;
}

}  // namespace qsec
