#include "qsec/mub.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qsec {

namespace {

cxd unit_phase(int d, long long k) {
  double arg = 2.0 * std::numbers::pi * static_cast<double>(((k % d) + d) % d) / d;
  return cxd(std::cos(arg), std::sin(arg));
}

double round_tol(double x) { return std::round(x / 1e-9) * 1e-9; }

bool vec_less(const Vec& a, const Vec& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    double ar = round_tol(a(i).real()), br = round_tol(b(i).real());
    if (ar != br) return ar < br;
    double ai = round_tol(a(i).imag()), bi = round_tol(b(i).imag());
    if (ai != bi) return ai < bi;
  }
  return false;
}

}  // namespace

Basis canonicalize(const Basis& b) {
  Basis out;
  out.dim = b.dim;
  out.vectors.reserve(b.vectors.size());
  for (const Vec& v : b.vectors) {
    Vec w = v;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      if (std::abs(w(i)) > 1e-8) {
        w *= std::conj(w(i)) / std::abs(w(i));
        break;
      }
    }
    out.vectors.push_back(std::move(w));
  }
  std::sort(out.vectors.begin(), out.vectors.end(), vec_less);
  return out;
}

MubFamily canonicalize(const MubFamily& f) {
  MubFamily out;
  out.dim = f.dim;
  for (const Basis& b : f.bases) out.bases.push_back(canonicalize(b));
  return out;
}

MubFamily mub_prime(int p, bool canonical) {
  if (!is_prime(p)) throw std::invalid_argument("mub_prime: d must be prime");
  if (p > 101) throw std::invalid_argument("mub_prime: d > 101 not supported");
  const int d = p;
  MubFamily fam;
  fam.dim = d;

  Basis standard;
  standard.dim = d;
  for (int i = 0; i < d; ++i) standard.vectors.push_back(Ket::basis_state(d, i).amplitudes());
  fam.bases.push_back(standard);

  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));
  for (int k = 0; k < d; ++k) {
    Basis b;
    b.dim = d;
    if (d == 2 && k == 1) {
      // Eigenvectors of XZ are (|0> -+ i|1>)/sqrt(2); the d-th roots of unity
      // in the closed form cannot produce them (XZ has eigenvalues +-i).
      Vec v0(2), v1(2);
      v0 << inv_sqrt_d, cxd(0, 1) * inv_sqrt_d;
      v1 << inv_sqrt_d, cxd(0, -1) * inv_sqrt_d;
      b.vectors = {v0, v1};
    } else {
      for (int t = 0; t < d; ++t) {
        Vec v(d);
        long long s = 0;  // s_j = j + (j+1) + ... + (d-1), built backwards
        std::vector<long long> sj(d);
        for (int j = d - 1; j >= 0; --j) {
          s += j;
          sj[j] = s;
        }
        for (int j = 0; j < d; ++j)
          v(j) = inv_sqrt_d * unit_phase(d, static_cast<long long>(t) * (d - j) - k * sj[j]);
        b.vectors.push_back(std::move(v));
      }
    }
    fam.bases.push_back(std::move(b));
  }
  return canonical ? canonicalize(fam) : fam;
}

std::vector<FpMat> mub_coefficient_matrices(const PrimePower& pp) {
  const int p = pp.p, m = pp.m, d = pp.d;
  std::vector<FpMat> as;
  as.reserve(d);
  if (m == 2) {
    auto [s, t] = irreducible_quadratic(p);
    for (int a = 0; a < p; ++a)
      for (int b = 0; b < p; ++b)
        as.push_back(FpMat{{a, b}, {b, (s * a + t * b) % p}});
  } else {
    std::vector<FpMat> basis = wootters_fields_matrices(pp);
    for (int code = 0; code < d; ++code) {
      FpVec coeffs(m);
      int c = code;
      for (int i = 0; i < m; ++i) {
        coeffs[i] = c % p;
        c /= p;
      }
      as.push_back(fpmat_combine(basis, coeffs, p));
    }
  }
  // Thm 5.4.2 hypotheses; violation is a construction bug, never user input.
  for (size_t j = 0; j < as.size(); ++j) {
    if (!fpmat_is_symmetric(as[j], p)) throw std::logic_error("mub: A_j not symmetric");
    for (size_t k = j + 1; k < as.size(); ++k) {
      FpMat diff(m, FpVec(m));
      for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) diff[r][c] = ((as[j][r][c] - as[k][r][c]) % p + p) % p;
      if (fpmat_det(diff, p) == 0) throw std::logic_error("mub: det(A_j - A_k) = 0");
    }
  }
  return as;
}

std::vector<CommutingClass> pauli_classes(const PrimePower& pp) {
  const int p = pp.p, m = pp.m, d = pp.d;
  std::vector<CommutingClass> classes;

  auto append_class = [&](auto&& label_of) {
    CommutingClass cls;
    for (int code = 1; code < d; ++code) {
      FpVec x(m);
      int c = code;
      for (int i = 0; i < m; ++i) {
        x[i] = c % p;
        c /= p;
      }
      PauliIndex idx = label_of(x);
      cls.ops.push_back(pauli_matrix(idx, pp));
      cls.labels.push_back(std::move(idx));
    }
    classes.push_back(std::move(cls));
  };

  // (0_m | 1_m): the Z-type class, standard eigenbasis.
  append_class([&](const FpVec& x) { return PauliIndex{FpVec(m, 0), x, 0}; });
  for (const FpMat& a : mub_coefficient_matrices(pp))
    append_class([&](const FpVec& x) { return PauliIndex{x, fpvec_mat_mul(x, a, p), 0}; });
  return classes;
}

std::vector<Vec> simultaneous_eigenbasis(const std::vector<Mat>& ops) {
  if (ops.empty()) throw std::invalid_argument("simultaneous_eigenbasis: empty class");
  const int d = static_cast<int>(ops[0].rows());
  for (int attempt = 0; attempt < 2; ++attempt) {
    Mat combo = Mat::Zero(d, d);
    for (size_t t = 0; t < ops.size(); ++t) {
      double w = static_cast<double>(t + 1) + (attempt == 0 ? 0.0 : 0.61803398875);
      double ang = (attempt == 0 ? 0.73913 : 1.23407) * static_cast<double>(t + 1);
      combo += w * cxd(std::cos(ang), std::sin(ang)) * ops[t];
    }
    Mat h = combo + combo.adjoint();
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    bool degenerate = false;
    for (int i = 0; i + 1 < d; ++i)
      if (es.eigenvalues()(i + 1) - es.eigenvalues()(i) < 1e-8) degenerate = true;
    if (degenerate) continue;
    // Nondegenerate spectrum of a commuting Hermitian combination; each
    // eigenvector must diagonalize every class member.
    std::vector<Vec> basis;
    basis.reserve(d);
    bool ok = true;
    for (int i = 0; i < d && ok; ++i) {
      Vec v = es.eigenvectors().col(i);
      for (const Mat& u : ops) {
        Vec uv = u * v;
        cxd lambda = v.dot(uv);
        if ((uv - lambda * v).norm() > 1e-8) {
          ok = false;
          break;
        }
      }
      basis.push_back(std::move(v));
    }
    if (ok) return basis;
  }
  throw std::logic_error("simultaneous_eigenbasis: degenerate joint eigenspaces");
}

MubFamily mub_prime_power(int p, int m, bool canonical) {
  PrimePower pp(p, m);
  if (pp.d > 64) throw std::invalid_argument("mub_prime_power: p^m > 64 not supported");
  MubFamily fam;
  fam.dim = pp.d;

  Basis standard;
  standard.dim = pp.d;
  for (int i = 0; i < pp.d; ++i) standard.vectors.push_back(Ket::basis_state(pp.d, i).amplitudes());
  fam.bases.push_back(std::move(standard));

  std::vector<CommutingClass> classes = pauli_classes(pp);
  for (size_t j = 1; j < classes.size(); ++j) {
    Basis b;
    b.dim = pp.d;
    b.vectors = simultaneous_eigenbasis(classes[j].ops);
    fam.bases.push_back(std::move(b));
  }
  return canonical ? canonicalize(fam) : fam;
}

MubReport verify_mub(const MubFamily& family, double tol) {
  MubReport rep;
  const int d = family.dim;
  const double target = 1.0 / static_cast<double>(d);
  for (size_t j = 0; j < family.bases.size(); ++j) {
    const auto& bj = family.bases[j].vectors;
    if (static_cast<int>(bj.size()) != d) {
      rep.max_orthonormality_defect = 1.0;
      rep.pass = false;
      return rep;
    }
    for (int s = 0; s < d; ++s)
      for (int t = 0; t < d; ++t) {
        double want = s == t ? 1.0 : 0.0;
        double got = std::abs(bj[s].dot(bj[t]));
        rep.max_orthonormality_defect = std::max(rep.max_orthonormality_defect, std::abs(got - want));
      }
    for (size_t k = j + 1; k < family.bases.size(); ++k) {
      const auto& bk = family.bases[k].vectors;
      for (int s = 0; s < d; ++s)
        for (int t = 0; t < d; ++t) {
          double got = std::norm(bj[s].dot(bk[t]));
          rep.max_unbiasedness_defect = std::max(rep.max_unbiasedness_defect, std::abs(got - target));
        }
    }
  }
  rep.pass = rep.max_orthonormality_defect < tol && rep.max_unbiasedness_defect < tol;
  return rep;
}

std::vector<CommutingClass> mub_to_classes(const MubFamily& family) {
  MubReport rep = verify_mub(family, kDerivedTol * 10);
  if (!rep.pass) throw std::invalid_argument("mub_to_classes: family does not verify");
  const int d = family.dim;
  std::vector<CommutingClass> classes;
  for (const Basis& b : family.bases) {
    CommutingClass cls;
    for (int t = 1; t < d; ++t) {  // t = 0 is the identity, dropped
      Mat u = Mat::Zero(d, d);
      for (int k = 0; k < d; ++k)
        u += unit_phase(d, static_cast<long long>(t) * k) * (b.vectors[k] * b.vectors[k].adjoint());
      cls.ops.push_back(std::move(u));
    }
    classes.push_back(std::move(cls));
  }
  return classes;
}

MubFamily classes_to_mub(const std::vector<CommutingClass>& classes, bool canonical) {
  if (classes.empty()) throw std::invalid_argument("classes_to_mub: no classes");
  const int d = static_cast<int>(classes[0].ops[0].rows());
  for (const auto& cls : classes) {
    if (static_cast<int>(cls.ops.size()) != d - 1)
      throw std::invalid_argument("classes_to_mub: class size != d-1");
    for (size_t s = 0; s < cls.ops.size(); ++s) {
      if (std::abs(hs_inner(Mat::Identity(d, d), cls.ops[s])) > kDerivedTol * d)
        throw std::invalid_argument("classes_to_mub: class contains the identity");
      for (size_t t = s + 1; t < cls.ops.size(); ++t)
        if ((cls.ops[s] * cls.ops[t] - cls.ops[t] * cls.ops[s]).cwiseAbs().maxCoeff() > kDerivedTol)
          throw std::invalid_argument("classes_to_mub: class not commuting");
    }
  }
  // cross-class orthogonality
  for (size_t a = 0; a < classes.size(); ++a)
    for (size_t b = 0; b < classes.size(); ++b)
      for (size_t s = 0; s < classes[a].ops.size(); ++s)
        for (size_t t = 0; t < classes[b].ops.size(); ++t) {
          if (a == b && s == t) continue;
          if (std::abs(hs_inner(classes[a].ops[s], classes[b].ops[t])) > kDerivedTol * d)
            throw std::invalid_argument("classes_to_mub: operators not pairwise orthogonal");
        }
  MubFamily fam;
  fam.dim = d;
  for (const auto& cls : classes) {
    Basis b;
    b.dim = d;
    b.vectors = simultaneous_eigenbasis(cls.ops);
    fam.bases.push_back(std::move(b));
  }
  return canonical ? canonicalize(fam) : fam;
}

bool basis_equal_up_to_phase(const Basis& a, const Basis& b, double tol) {
  if (a.dim != b.dim || a.vectors.size() != b.vectors.size()) return false;
  std::vector<bool> used(b.vectors.size(), false);
  for (const Vec& u : a.vectors) {
    bool found = false;
    for (size_t j = 0; j < b.vectors.size(); ++j) {
      if (used[j]) continue;
      if (std::abs(std::abs(u.dot(b.vectors[j])) - 1.0) < tol) {
        used[j] = true;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace qsec
