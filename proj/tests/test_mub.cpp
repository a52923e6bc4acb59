#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "qsec/mub.hpp"

using namespace qsec;

namespace {

cxd omega(int d, long long k = 1) {
  double arg = 2.0 * std::numbers::pi * k / d;
  return cxd(std::cos(arg), std::sin(arg));
}

Vec make_vec(std::initializer_list<cxd> amps) {
  Vec v(static_cast<Eigen::Index>(amps.size()));
  Eigen::Index i = 0;
  for (cxd a : amps) v(i++) = a;
  return v;
}

// raw eq-5.3 eigenvector for the relation checks
Vec psi_tk(int d, int t, int k) {
  Vec v(d);
  std::vector<long long> sj(d);
  long long s = 0;
  for (int j = d - 1; j >= 0; --j) {
    s += j;
    sj[j] = s;
  }
  for (int j = 0; j < d; ++j) v(j) = omega(d, static_cast<long long>(t) * (d - j) - k * sj[j]);
  return v / std::sqrt(static_cast<double>(d));
}

bool label_set_equal(const CommutingClass& cls, std::set<std::pair<unsigned, unsigned>> want) {
  std::set<std::pair<unsigned, unsigned>> got;
  for (const PauliIndex& l : cls.labels) {
    unsigned a = 0, b = 0;
    for (size_t i = 0; i < l.alpha.size(); ++i) {
      a = a * 2 + static_cast<unsigned>(l.alpha[i]);
      b = b * 2 + static_cast<unsigned>(l.beta[i]);
    }
    got.insert({a, b});
  }
  return got == want;
}

}  // namespace

TEST_CASE("prime construction small cases") {
  // d = 2: z, x, y bases
  MubFamily f2 = mub_prime(2);
  REQUIRE(f2.bases.size() == 3);
  CHECK(verify_mub(f2, 1e-12).pass);
  const double s = 1.0 / std::sqrt(2.0);
  Basis z2{2, {make_vec({1, 0}), make_vec({0, 1})}};
  Basis x2{2, {make_vec({s, s}), make_vec({s, -s})}};
  Basis y2{2, {make_vec({s, cxd(0, 1) * s}), make_vec({s, cxd(0, -1) * s})}};
  CHECK(basis_equal_up_to_phase(f2.bases[0], z2, 1e-12));
  CHECK(basis_equal_up_to_phase(f2.bases[1], x2, 1e-12));
  CHECK(basis_equal_up_to_phase(f2.bases[2], y2, 1e-12));

  // d = 3: bases are eigenbases of Z, X, XZ, XZ^2
  MubFamily f3 = mub_prime(3);
  REQUIRE(f3.bases.size() == 4);
  CHECK(verify_mub(f3, 1e-12).pass);
  std::vector<Mat> ops = {build_zd(3), build_xd(3), build_xd(3) * build_zd(3),
                          build_xd(3) * build_zd(3) * build_zd(3)};
  // the listed d=3 matrices: X, XZ, XZ^2 written out explicitly
  Mat x3 = ops[1];
  CHECK(std::abs(x3(1, 0) - cxd(1, 0)) < 1e-15);
  Mat xz = ops[2];
  CHECK(std::abs(xz(0, 2) - omega(3, 2)) < 1e-12);
  CHECK(std::abs(xz(2, 1) - omega(3)) < 1e-12);
  for (size_t bi = 0; bi < ops.size(); ++bi) {
    for (const Vec& v : f3.bases[bi].vectors) {
      cxd lambda = v.dot(ops[bi] * v);
      CHECK((ops[bi] * v - lambda * v).norm() < 1e-10);
    }
  }

  MubFamily f5 = mub_prime(5);
  CHECK(f5.bases.size() == 6);
  MubReport rep = verify_mub(f5, 1e-10);
  CHECK(rep.pass);
  CHECK(rep.max_unbiasedness_defect < 1e-10);

  CHECK_THROWS(mub_prime(6));
}

TEST_CASE("eigenvector relation and cyclic shift") {
  // X_d (Z_d)^k |psi_t^k> = omega^t |psi_t^k> for odd d
  for (int d : {3, 5, 7}) {
    for (int k = 0; k < d; ++k)
      for (int t = 0; t < d; ++t) {
        Vec v = psi_tk(d, t, k);
        Mat op = build_xd(d);
        for (int i = 0; i < k; ++i) op = op * build_zd(d);
        CHECK((op * v - omega(d, t) * v).norm() < 1e-10);
      }
  }
  // d = 2: the family's bases are still eigenbases of X (Z)^k, with the
  // k = 1 eigenvalues on the unit circle (+-i rather than +-1)
  {
    MubFamily f2 = mub_prime(2, false);
    for (int k = 0; k < 2; ++k) {
      Mat op = build_xd(2);
      for (int i = 0; i < k; ++i) op = op * build_zd(2);
      for (const Vec& v : f2.bases[1 + k].vectors) {
        cxd lambda = v.dot(op * v);
        CHECK(std::abs(std::abs(lambda) - 1.0) < 1e-12);
        CHECK((op * v - lambda * v).norm() < 1e-10);
      }
    }
  }
  // cyclic shift: X (Z)^l maps psi_t^k to psi_{t+k-l}^k up to phase
  for (int d : {3, 5}) {
    for (int k = 0; k < d; ++k)
      for (int l = 0; l < d; ++l)
        for (int t = 0; t < d; ++t) {
          Mat op = build_xd(d);
          for (int i = 0; i < l; ++i) op = op * build_zd(d);
          Vec moved = op * psi_tk(d, t, k);
          Vec target = psi_tk(d, ((t + k - l) % d + d) % d, k);
          CHECK(std::abs(std::abs(moved.dot(target)) - 1.0) < 1e-10);
        }
  }
}

TEST_CASE("shift-eigenbasis pairs are unbiased") {
  // any orthonormal basis cyclically shifted by a unitary V is unbiased with
  // V's eigenbasis
  Rng rng(99);
  for (int d : {3, 4, 5}) {
    // V = permutation with random phases; B1 = standard basis shifted by V
    Mat v = Mat::Zero(d, d);
    for (int j = 0; j < d; ++j) {
      double arg = 2.0 * std::numbers::pi * rng.uniform();
      v((j + 1) % d, j) = cxd(std::cos(arg), std::sin(arg));
    }
    REQUIRE(is_unitary(v, 1e-12));
    Eigen::ComplexEigenSolver<Mat> es(v);
    for (int i = 0; i < d; ++i) {
      Vec eig = es.eigenvectors().col(i);
      for (int j = 0; j < d; ++j) {
        Vec basis_vec = Vec::Zero(d);
        basis_vec(j) = 1;  // B1 = standard basis, cyclically shifted by V
        CHECK(std::norm(eig.dot(basis_vec)) == doctest::Approx(1.0 / d).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("prime-power construction d = 4") {
  MubFamily f4 = mub_prime_power(2, 2);
  REQUIRE(f4.bases.size() == 5);
  CHECK(verify_mub(f4, 1e-9).pass);

  // class structure C0..C4 (Y = XZ labels: Y <-> alpha=1, beta=1)
  PrimePower pp(2, 2);
  auto classes = pauli_classes(pp);
  REQUIRE(classes.size() == 5);
  // C0 = {Z I, I Z, Z Z}; labels (alpha|beta) with alpha packed high-to-low
  std::set<std::pair<unsigned, unsigned>> c0{{0b00, 0b10}, {0b00, 0b01}, {0b00, 0b11}};
  std::set<std::pair<unsigned, unsigned>> c1{{0b10, 0b00}, {0b01, 0b00}, {0b11, 0b00}};
  std::set<std::pair<unsigned, unsigned>> c2{{0b10, 0b10}, {0b01, 0b01}, {0b11, 0b11}};
  std::set<std::pair<unsigned, unsigned>> c3{{0b10, 0b01}, {0b01, 0b11}, {0b11, 0b10}};
  std::set<std::pair<unsigned, unsigned>> c4{{0b10, 0b11}, {0b01, 0b10}, {0b11, 0b01}};
  std::vector<std::set<std::pair<unsigned, unsigned>>> expected{c0, c1, c2, c3, c4};
  std::vector<bool> matched(5, false);
  for (const auto& cls : classes) {
    bool found = false;
    for (size_t i = 0; i < expected.size(); ++i) {
      if (!matched[i] && label_set_equal(cls, expected[i])) {
        matched[i] = true;
        found = true;
        break;
      }
    }
    CHECK(found);
  }

  // explicit bases B1..B4 up to per-vector phase and ordering
  const double h = 0.5;
  const cxd i(0, 1);
  std::vector<Basis> paper = {
      Basis{4,
            {make_vec({h, h, h, h}), make_vec({h, -h, -h, h}), make_vec({h, h, -h, -h}),
             make_vec({h, -h, h, -h})}},
      Basis{4,
            {make_vec({h, i * h, i * h, -h}), make_vec({h, -i * h, -i * h, -h}),
             make_vec({h, i * h, -i * h, h}), make_vec({h, -i * h, i * h, h})}},
      Basis{4,
            {make_vec({h, h, -i * h, i * h}), make_vec({h, -h, i * h, i * h}),
             make_vec({h, h, i * h, -i * h}), make_vec({h, -h, -i * h, -i * h})}},
      Basis{4,
            {make_vec({h, -i * h, h, i * h}), make_vec({h, i * h, -h, i * h}),
             make_vec({h, i * h, h, -i * h}), make_vec({h, -i * h, -h, -i * h})}},
  };
  std::vector<bool> basis_matched(paper.size(), false);
  for (size_t bi = 1; bi < f4.bases.size(); ++bi) {  // skip the standard basis
    bool found = false;
    for (size_t pi = 0; pi < paper.size(); ++pi) {
      if (!basis_matched[pi] && basis_equal_up_to_phase(f4.bases[bi], paper[pi], 1e-9)) {
        basis_matched[pi] = true;
        found = true;
        break;
      }
    }
    CHECK(found);
  }
}

TEST_CASE("prime-power construction d = 9 and d = 8") {
  // d = 9 coefficient matrices have the (a b / b a+2b) shape
  PrimePower q9(3, 2);
  auto mats = mub_coefficient_matrices(q9);
  REQUIRE(mats.size() == 9);
  std::set<std::array<int, 4>> got, want;
  for (const auto& m : mats) got.insert({m[0][0], m[0][1], m[1][0], m[1][1]});
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) want.insert({a, b, b, (a + 2 * b) % 3});
  CHECK(got == want);

  MubFamily f9 = mub_prime_power(3, 2);
  CHECK(f9.bases.size() == 10);
  CHECK(verify_mub(f9, 1e-9).pass);

  MubFamily f8 = mub_prime_power(2, 3);
  CHECK(f8.bases.size() == 9);
  CHECK(verify_mub(f8, 1e-9).pass);
}

TEST_CASE("verify_mub reports defects") {
  MubFamily single;
  single.dim = 3;
  Basis b;
  b.dim = 3;
  for (int j = 0; j < 3; ++j) b.vectors.push_back(Ket::basis_state(3, j).amplitudes());
  single.bases.push_back(b);
  MubReport rep = verify_mub(single, 1e-12);
  CHECK(rep.max_unbiasedness_defect == 0.0);  // vacuous
  CHECK(rep.pass);

  MubFamily f2 = mub_prime(2);
  CHECK(verify_mub(f2, 1e-12).pass);

  // perturb one vector: fails at 1e-6
  MubFamily broken = f2;
  broken.bases[1].vectors[0](0) += 1e-3;
  broken.bases[1].vectors[0].normalize();
  CHECK_FALSE(verify_mub(broken, 1e-6).pass);
}

TEST_CASE("mub_to_classes") {
  // single-basis family: the standard basis generates the Z_d powers
  MubFamily zfam;
  zfam.dim = 3;
  Basis std3;
  std3.dim = 3;
  for (int j = 0; j < 3; ++j) std3.vectors.push_back(Ket::basis_state(3, j).amplitudes());
  zfam.bases.push_back(std3);
  auto zcls = mub_to_classes(zfam);
  REQUIRE(zcls.size() == 1);
  REQUIRE(zcls[0].ops.size() == 2);
  CHECK((zcls[0].ops[0] - build_zd(3)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((zcls[0].ops[1] - build_zd(3) * build_zd(3)).cwiseAbs().maxCoeff() < 1e-12);

  // d = 2 full family recovers sigma_z, sigma_x, sigma_y up to global phase
  MubFamily f2 = mub_prime(2);
  auto cls2 = mub_to_classes(f2);
  REQUIRE(cls2.size() == 3);
  Mat sz = build_zd(2), sx = build_xd(2), sy = build_xd(2) * build_zd(2);
  auto matches_up_to_phase = [](const Mat& a, const Mat& b) {
    cxd phase = 0;
    double amax = 0;
    for (int i = 0; i < a.rows(); ++i)
      for (int j = 0; j < a.cols(); ++j)
        if (std::abs(b(i, j)) > amax) {
          amax = std::abs(b(i, j));
          phase = a(i, j) / b(i, j);
        }
    return (a - phase * b).cwiseAbs().maxCoeff() < 1e-9 && std::abs(std::abs(phase) - 1) < 1e-9;
  };
  CHECK(matches_up_to_phase(cls2[0].ops[0], sz));
  CHECK(matches_up_to_phase(cls2[1].ops[0], sx));
  CHECK(matches_up_to_phase(cls2[2].ops[0], sy));

  // d = 3: 4 classes, 1 + 4*2 = 9 = d^2 orthogonal unitaries in total
  MubFamily f3 = mub_prime(3);
  auto cls3 = mub_to_classes(f3);
  REQUIRE(cls3.size() == 4);
  for (const auto& c : cls3) CHECK(c.ops.size() == 2);
  std::vector<Mat> all{Mat::Identity(3, 3)};
  for (const auto& c : cls3)
    for (const Mat& u : c.ops) all.push_back(u);
  CHECK(all.size() == 9);
  for (size_t i = 0; i < all.size(); ++i)
    for (size_t j = i + 1; j < all.size(); ++j)
      CHECK(std::abs(hs_inner(all[i], all[j])) < 1e-9);

  // unverified families are rejected
  MubFamily broken = f2;
  broken.bases[1] = broken.bases[0];
  CHECK_THROWS(mub_to_classes(broken));
}

TEST_CASE("classes_to_mub") {
  // single class of Z_d powers -> standard basis
  CommutingClass zc;
  zc.ops = {build_zd(3), build_zd(3) * build_zd(3)};
  MubFamily zf = classes_to_mub({zc});
  REQUIRE(zf.bases.size() == 1);
  Basis std3;
  std3.dim = 3;
  for (int j = 0; j < 3; ++j) std3.vectors.push_back(Ket::basis_state(3, j).amplitudes());
  CHECK(basis_equal_up_to_phase(zf.bases[0], std3, 1e-9));

  // d = 4 classes -> 5 MUBs
  auto classes4 = pauli_classes(PrimePower(2, 2));
  MubFamily f4 = classes_to_mub(classes4);
  CHECK(f4.bases.size() == 5);
  CHECK(verify_mub(f4, 1e-9).pass);

  // round trip at d = 3 reproduces the family up to phases/ordering
  MubFamily f3 = mub_prime(3);
  MubFamily back = classes_to_mub(mub_to_classes(f3));
  REQUIRE(back.bases.size() == f3.bases.size());
  std::vector<bool> used(f3.bases.size(), false);
  for (const Basis& b : back.bases) {
    bool found = false;
    for (size_t i = 0; i < f3.bases.size(); ++i)
      if (!used[i] && basis_equal_up_to_phase(b, f3.bases[i], 1e-9)) {
        used[i] = true;
        found = true;
        break;
      }
    CHECK(found);
  }

  // non-commuting class rejected
  CommutingClass badc;
  badc.ops = {build_xd(2)};
  CHECK_THROWS(classes_to_mub({badc, badc}));
}

TEST_CASE("family size matches the upper bound") {
  for (int d : {2, 3, 4, 5, 7, 8, 9}) {
    MubFamily f = is_prime(d) ? mub_prime(d) : [&] {
      for (int p = 2; p <= d; ++p)
        if (is_prime(p) && d % p == 0) {
          int m = 0;
          int x = 1;
          while (x < d) {
            x *= p;
            ++m;
          }
          return mub_prime_power(p, m);
        }
      throw std::logic_error("unreachable");
    }();
    CHECK(static_cast<int>(f.bases.size()) == d + 1);
  }
}
