#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qsec/gfpauli.hpp"
#include "qsec/qlinalg.hpp"

using namespace qsec;

namespace {

cxd omega(int p, int k = 1) {
  double arg = 2.0 * std::numbers::pi * k / p;
  return cxd(std::cos(arg), std::sin(arg));
}

PauliIndex idx1(int a, int b, int phase = 0) { return PauliIndex{{a}, {b}, phase}; }

}  // namespace

TEST_CASE("X_d and Z_d") {
  Mat x2 = build_xd(2);
  Mat sigma_x(2, 2);
  sigma_x << 0, 1, 1, 0;
  CHECK((x2 - sigma_x).cwiseAbs().maxCoeff() < 1e-15);

  Mat z3 = build_zd(3);
  CHECK(std::abs(z3(0, 0) - cxd(1, 0)) < 1e-12);
  CHECK(std::abs(z3(1, 1) - omega(3)) < 1e-12);
  CHECK(std::abs(z3(2, 2) - omega(3, 2)) < 1e-12);

  for (int p : {2, 3, 5}) {
    Mat x = build_xd(p), z = build_zd(p);
    CHECK(is_unitary(x, 1e-12));
    CHECK(is_unitary(z, 1e-12));
    CHECK((z * x - omega(p) * x * z).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("pauli_matrix") {
  PrimePower q2(2, 1);
  CHECK((pauli_matrix(idx1(0, 0), q2) - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-15);

  Mat xz = pauli_matrix(idx1(1, 1), q2);
  Mat want(2, 2);
  want << 0, -1, 1, 0;  // sigma_x sigma_z
  CHECK((xz - want).cwiseAbs().maxCoeff() < 1e-15);

  // m = 2: label (1,0 | 0,1) is X (x) Z
  PrimePower q4(2, 2);
  PauliIndex ix_z{{1, 0}, {0, 1}, 0};
  CHECK((pauli_matrix(ix_z, q4) - tensor(build_xd(2), build_zd(2))).cwiseAbs().maxCoeff() < 1e-12);

  for (int p : {2, 3}) {
    PrimePower pp(p, 1);
    for (int a = 0; a < p; ++a)
      for (int b = 0; b < p; ++b) CHECK(is_unitary(pauli_matrix(idx1(a, b), pp), 1e-12));
  }
}

TEST_CASE("commutation") {
  // (X(x)I, I(x)X) commute
  PauliIndex xi{{1, 0}, {0, 0}, 0}, ix{{0, 1}, {0, 0}, 0};
  CHECK(commutes(xi, ix, 2));
  // single-qudit X vs Z never commute
  CHECK_FALSE(commutes(idx1(1, 0), idx1(0, 1), 2));
  CHECK(commutation_phase(idx1(1, 0), idx1(0, 1), 2) == 1);

  // class C3 = {X(x)Z, Z(x)Y, Y(x)X} is internally commuting
  PauliIndex c3_a{{1, 0}, {0, 1}, 0};  // X Z
  PauliIndex c3_b{{0, 1}, {1, 1}, 0};  // Z Y
  PauliIndex c3_c{{1, 1}, {1, 0}, 0};  // Y X
  CHECK(commutes(c3_a, c3_b, 2));
  CHECK(commutes(c3_a, c3_c, 2));
  CHECK(commutes(c3_b, c3_c, 2));

  // phase exponent against the matrix product, p = 3 exhaustive
  PrimePower q3(3, 1);
  for (int a1 = 0; a1 < 3; ++a1)
    for (int b1 = 0; b1 < 3; ++b1)
      for (int a2 = 0; a2 < 3; ++a2)
        for (int b2 = 0; b2 < 3; ++b2) {
          PauliIndex u = idx1(a1, b1), v = idx1(a2, b2);
          Mat mu = pauli_matrix(u, q3), mv = pauli_matrix(v, q3);
          int e = commutation_phase(u, v, 3);
          CHECK((mv * mu - omega(3, e) * mu * mv).cwiseAbs().maxCoeff() < 1e-12);
          CHECK(commutes(u, v, 3) == (e == 0));
        }
}

TEST_CASE("label composition matches matrix products") {
  for (auto [p, m] : {std::pair{2, 1}, std::pair{3, 1}, std::pair{2, 2}}) {
    PrimePower pp(p, m);
    const int d = pp.d;
    std::vector<PauliIndex> labels;
    for (int code = 0; code < d * d; ++code) {
      FpVec a(m), b(m);
      int c = code;
      for (int i = 0; i < m; ++i) {
        a[i] = c % p;
        c /= p;
      }
      for (int i = 0; i < m; ++i) {
        b[i] = c % p;
        c /= p;
      }
      labels.push_back({a, b, 0});
    }
    for (const auto& u : labels)
      for (const auto& v : labels) {
        PauliIndex w = compose(u, v, p);
        Mat lhs = pauli_matrix(u, pp) * pauli_matrix(v, pp);
        CHECK((lhs - pauli_matrix(w, pp)).cwiseAbs().maxCoeff() < 1e-11);
      }
  }
}

TEST_CASE("Hilbert-Schmidt orthogonality") {
  CHECK(std::abs(hs_inner(Mat::Identity(5, 5), Mat::Identity(5, 5)) - cxd(5, 0)) < 1e-12);
  CHECK_THROWS(hs_inner(Mat::Identity(2, 2), Mat::Identity(3, 3)));

  // exhaustive: d = 4 Pauli labels satisfy <U,V> = d delta_{U,V}
  PrimePower q4(2, 2);
  std::vector<Mat> mats;
  for (int code = 0; code < 16; ++code) {
    FpVec a{code & 1, (code >> 1) & 1}, b{(code >> 2) & 1, (code >> 3) & 1};
    mats.push_back(pauli_matrix(PauliIndex{a, b, 0}, q4));
  }
  for (size_t i = 0; i < mats.size(); ++i)
    for (size_t j = 0; j < mats.size(); ++j) {
      cxd want = i == j ? cxd(4, 0) : cxd(0, 0);
      CHECK(std::abs(hs_inner(mats[i], mats[j]) - want) < 1e-10);
    }

  // orthogonality across d <= 9 (prime cases driven via m = 1 labels)
  for (int p : {3, 5, 7}) {
    PrimePower pp(p, 1);
    for (int a1 = 0; a1 < p; ++a1)
      for (int b1 = 0; b1 < p; ++b1)
        for (int a2 = 0; a2 < p; ++a2)
          for (int b2 = 0; b2 < p; ++b2) {
            if (a1 == a2 && b1 == b2) continue;
            CHECK(std::abs(hs_inner(pauli_matrix(idx1(a1, b1), pp),
                                    pauli_matrix(idx1(a2, b2), pp))) < 1e-10);
          }
  }
}

TEST_CASE("irreducible quadratics") {
  auto [s2, t2] = irreducible_quadratic(2);
  CHECK(t2 == 1);  // x^2 + x + 1
  CHECK(s2 == 1);
  auto [s3, t3] = irreducible_quadratic(3);
  CHECK(t3 == 2);  // gamma^2 - 2 gamma - 1 = x^2 + x + 2 mod 3
  CHECK(s3 == 1);

  for (int p : {2, 3, 5, 7, 11}) {
    auto [s, t] = irreducible_quadratic(p);
    for (int g = 0; g < p; ++g) CHECK(((g * g - t * g - s) % p + p) % p != 0);
  }
}

TEST_CASE("modulus polynomials and field axioms") {
  CHECK(modulus_polynomial(2, 2) == FpVec{1, 1, 1});     // x^2 + x + 1
  CHECK(modulus_polynomial(2, 4) == FpVec{1, 1, 0, 0, 1});  // x^4 + x + 1

  for (auto [p, m] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 2}, std::pair{3, 4},
                      std::pair{5, 2}}) {
    FpVec f = modulus_polynomial(p, m);
    CHECK(fppoly::is_irreducible(f, p));
    const std::uint64_t q = [&] {
      std::uint64_t x = 1;
      for (int i = 0; i < m; ++i) x *= p;
      return x;
    }();
    if (q <= 81) {
      // every nonzero element has an inverse (exhaustive)
      for (std::uint64_t i = 1; i < q; ++i) {
        FieldElement e = FieldElement::from_index(i, f, p, m);
        FieldElement one = FieldElement::from_index(1, f, p, m);
        CHECK((e * e.inverse()) == one);
      }
    }
    // associativity / commutativity / distributivity on random triples
    Rng rng(p * 100 + m);
    for (int t = 0; t < 50; ++t) {
      FieldElement a = FieldElement::from_index(rng.integer(q), f, p, m);
      FieldElement b = FieldElement::from_index(rng.integer(q), f, p, m);
      FieldElement c = FieldElement::from_index(rng.integer(q), f, p, m);
      CHECK(((a * b) * c) == (a * (b * c)));
      CHECK((a * b) == (b * a));
      CHECK((a * (b + c)) == (a * b + a * c));
    }
  }
}

TEST_CASE("field multiplication matrices") {
  PrimePower q2(2, 1);
  auto single = wootters_fields_matrices(q2);
  REQUIRE(single.size() == 1);
  CHECK(single[0] == FpMat{{1}});

  // p=2, m=3: three generators whose span gives the eight-matrix family;
  // symmetry plus pairwise-nonsingular-differences is the defining property
  PrimePower q8(2, 3);
  auto b8 = wootters_fields_matrices(q8);
  REQUIRE(b8.size() == 3);
  std::vector<FpMat> all;
  for (int code = 0; code < 8; ++code)
    all.push_back(fpmat_combine(b8, FpVec{code & 1, (code >> 1) & 1, (code >> 2) & 1}, 2));
  for (size_t i = 0; i < all.size(); ++i) {
    CHECK(fpmat_is_symmetric(all[i], 2));
    for (size_t j = i + 1; j < all.size(); ++j) {
      FpMat diff(3, FpVec(3));
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) diff[r][c] = (all[i][r][c] ^ all[j][r][c]);
      CHECK(fpmat_det(diff, 2) != 0);
    }
  }

  // p=3, m=2: all 8 nonzero combinations nonsingular
  PrimePower q9(3, 2);
  auto b9 = wootters_fields_matrices(q9);
  REQUIRE(b9.size() == 2);
  for (int c0 = 0; c0 < 3; ++c0)
    for (int c1 = 0; c1 < 3; ++c1) {
      if (c0 == 0 && c1 == 0) continue;
      FpMat comb = fpmat_combine(b9, FpVec{c0, c1}, 3);
      CHECK(fpmat_is_symmetric(comb, 3));
      CHECK(fpmat_det(comb, 3) != 0);
    }
}

TEST_CASE("PrimePower validation") {
  CHECK_THROWS(PrimePower(4, 1));
  CHECK_THROWS(PrimePower(2, 13));
  CHECK(PrimePower(2, 5).d == 32);
  CHECK(is_prime(101));
  CHECK_FALSE(is_prime(1));
  CHECK_FALSE(is_prime(91));
}
