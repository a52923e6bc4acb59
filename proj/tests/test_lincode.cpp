#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "qsec/lincode.hpp"

using namespace qsec;

namespace {

// [7,4] Hamming code, systematic form
BinaryLinearCode hamming74() {
  BinaryLinearCode c;
  c.n = 7;
  c.k = 4;
  // data bits 0..3, parity bits 4..6
  c.generator = {
      0b0110001,  // d0 + p{4,5}
      0b1010010,  // d1 + p{4,6}
      0b1100100,  // d2 + p{5,6}
      0b1111000,  // d3 + p{4,5,6}
  };
  c.parity_check = gf2::null_space(c.generator, 7);
  c.validate();
  return c;
}

BinaryLinearCode repetition(int n) {
  BinaryLinearCode c;
  c.n = n;
  c.k = 1;
  c.generator = {(word_t{1} << n) - 1};
  c.parity_check = gf2::null_space(c.generator, n);
  c.validate();
  return c;
}

// independent brute-force oracle over all codewords
int min_distance_oracle(const BinaryLinearCode& c) {
  int best = c.n + 1;
  for (word_t m = 1; m < (word_t{1} << c.k); ++m) {
    word_t w = 0;
    for (int i = 0; i < c.k; ++i)
      if ((m >> i) & 1) w ^= c.generator[i];
    if (w) best = std::min(best, gf2::weight(w));
  }
  return best;
}

}  // namespace

TEST_CASE("gf2 helpers") {
  CHECK(gf2::weight(0b1011) == 3);
  CHECK(gf2::dot(0b101, 0b110) == 1);
  CHECK(gf2::rank({0b11, 0b10, 0b01}, 2) == 2);
  auto ns = gf2::null_space({0b110}, 3);
  CHECK(ns.size() == 2);
  for (word_t v : ns) CHECK(gf2::dot(v, 0b110) == 0);
}

TEST_CASE("random codes are reproducible and consistent") {
  Rng a(42), b(42);
  BinaryLinearCode c1 = random_linear_code(8, 1, a);
  BinaryLinearCode c2 = random_linear_code(8, 1, b);
  CHECK(c1.generator == c2.generator);

  Rng rng(43);
  for (int trial = 0; trial < 30; ++trial) {
    BinaryLinearCode c = random_linear_code(12, 5, rng);
    for (word_t g : c.generator)
      for (word_t h : c.parity_check) CHECK(gf2::dot(g, h) == 0);
  }
}

TEST_CASE("minimum distance") {
  CHECK(min_distance(repetition(9)) == 9);
  CHECK(min_distance(hamming74()) == 3);

  Rng rng(47);
  for (int trial = 0; trial < 25; ++trial) {
    BinaryLinearCode c = random_linear_code(14, 6, rng);
    CHECK(min_distance(c) == min_distance_oracle(c));
    CHECK(min_distance_at_least(c, min_distance(c)));
    CHECK_FALSE(min_distance_at_least(c, min_distance(c) + 1));
  }
}

TEST_CASE("dual distance two ways") {
  Rng rng(53);
  for (int trial = 0; trial < 15; ++trial) {
    int n = 10 + static_cast<int>(rng.integer(11));  // up to 20
    int k = 3 + static_cast<int>(rng.integer(n - 6));
    BinaryLinearCode c = random_linear_code(n, k, rng);
    int direct = min_distance(dual(c));
    int via_macwilliams = dual_distance_macwilliams(c);
    CHECK(direct == via_macwilliams);
  }
}

TEST_CASE("syndrome decoding") {
  BinaryLinearCode ham = hamming74();
  word_t cw = ham.encode(0b1011);
  CHECK(ham.syndrome(cw) == 0);

  DecodeResult clean = syndrome_decode(cw, ham);
  CHECK(clean.ok);
  CHECK(clean.codeword == cw);

  for (int flip = 0; flip < 7; ++flip) {
    DecodeResult dec = syndrome_decode(cw ^ (word_t{1} << flip), ham);
    CHECK(dec.ok);
    CHECK(dec.codeword == cw);
    CHECK_FALSE(dec.tie);
  }

  // weight-2 errors exceed the guarantee. the Hamming code is perfect, so
  // radius-1 decoding still "succeeds" - onto the wrong codeword
  DecodeResult two = syndrome_decode(cw ^ 0b11, ham, 1);
  CHECK(two.ok);
  CHECK(two.codeword != cw);
  // a non-perfect code fails cleanly instead: repetition [5,1] at radius 1
  BinaryLinearCode rep5 = repetition(5);
  DecodeResult fail = syndrome_decode(0b00011, rep5, 1);
  CHECK_FALSE(fail.ok);

  // ties are flagged: the [4,1] repetition code at weight 2
  BinaryLinearCode rep4 = repetition(4);
  DecodeResult tie = syndrome_decode(0b0011, rep4);
  CHECK(tie.ok);
  CHECK(tie.tie);
  CHECK(tie.error == 0b0011);  // lexicographically smallest leader
}

TEST_CASE("nested code pairs and the coset channel") {
  // C2 = repetition inside C1 = Hamming [7,4]
  BinaryLinearCode c1 = hamming74();
  BinaryLinearCode c2 = repetition(7);
  // repetition codeword 1111111 must lie in the Hamming code
  REQUIRE(c1.syndrome((word_t{1} << 7) - 1) == 0);
  NestedCodePair pair(c1, c2);
  CHECK(pair.message_bits() == 3);

  // the message map is surjective with kernel exactly C2 (rank argument)
  std::set<word_t> images;
  for (word_t m = 0; m < 16; ++m) {
    word_t u = c1.encode(m);
    images.insert(pair.message_of(u));
  }
  CHECK(images.size() == 8);
  for (word_t m2 = 0; m2 < 2; ++m2) CHECK(pair.message_of(c2.encode(m2)) == 0);

  Rng rng(59);
  // single speaker, zero keys, zero noise
  {
    word_t u = coset_broadcast_encode(0b101, pair, rng);
    BroadcastDecodeResult dec = coset_broadcast_decode({u}, pair);
    CHECK(dec.ok);
    CHECK(dec.message == 0b101);
  }
  // random keys with planted error inside the radius
  for (int trial = 0; trial < 50; ++trial) {
    const int users = 4;
    std::vector<word_t> announced;
    word_t key_parity = 0;
    word_t msg = rng.integer(8);
    for (int u = 0; u < users; ++u) {
      word_t key = rng.integer(1 << 7);
      key_parity ^= key;
      word_t payload = u == 0 ? coset_broadcast_encode(msg, pair, rng)
                              : coset_broadcast_encode(0, pair, rng);
      announced.push_back(key ^ payload);
    }
    // make the keys xor to a weight-<=1 error
    word_t err = rng.bernoulli(0.5) ? word_t{1} << rng.integer(7) : 0;
    announced[0] ^= key_parity ^ err;
    BroadcastDecodeResult dec = coset_broadcast_decode(announced, pair, 1);
    CHECK(dec.ok);
    CHECK(dec.message == msg);
    CHECK(dec.corrected_error == err);
  }
  // two simultaneous speakers: output is the xor of messages
  for (int trial = 0; trial < 20; ++trial) {
    word_t ma = rng.integer(8), mb = rng.integer(8);
    word_t ua = coset_broadcast_encode(ma, pair, rng);
    word_t ub = coset_broadcast_encode(mb, pair, rng);
    BroadcastDecodeResult dec = coset_broadcast_decode({ua, ub}, pair);
    CHECK(dec.ok);
    CHECK(dec.message == (ma ^ mb));
  }

  CHECK_THROWS(NestedCodePair(repetition(7), hamming74()));  // not nested
}

TEST_CASE("pa distances") {
  // v inside the ECC span
  PaScheme in_span(6, {0b000111, 0b111000}, {0b101101});
  CHECK(pa_min_distance(in_span, 0b000111) == 0);

  // single parity string, disjoint support: distance is |v|
  PaScheme disjoint(8, {0b00001111}, {0b11110000});
  CHECK(pa_min_distance(disjoint, 0b11110000) == 4);

  // random schemes against an exhaustive oracle written independently
  Rng rng(61);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 10;
    std::vector<word_t> ecc, pa;
    std::vector<word_t> all;
    while (all.size() < 4) {
      word_t v = rng.integer(1 << n);
      all.push_back(v);
      if (gf2::rank(all, n) != static_cast<int>(all.size())) all.pop_back();
    }
    ecc = {all[0], all[1]};
    pa = {all[2], all[3]};
    PaScheme scheme(n, ecc, pa);
    for (word_t v : pa) {
      // oracle: enumerate the whole span of (ecc + other pa strings)
      std::vector<word_t> basis = ecc;
      for (word_t s : pa)
        if (s != v) basis.push_back(s);
      int best = gf2::weight(v);
      for (word_t mask = 1; mask < (word_t{1} << basis.size()); ++mask) {
        word_t w = 0;
        for (size_t i = 0; i < basis.size(); ++i)
          if ((mask >> i) & 1) w ^= basis[i];
        best = std::min(best, gf2::weight(v ^ w));
      }
      CHECK(pa_min_distance(scheme, v) == best);
      // the scheme-level quantity lower-bounds every per-string value
      CHECK(pa_scheme_min_distance(scheme) <= pa_min_distance(scheme, v));
    }
  }
}

TEST_CASE("binary entropy and the threshold") {
  CHECK(binary_entropy(0.5) == doctest::Approx(1.0));
  CHECK(binary_entropy(0.0) == doctest::Approx(0.0));
  CHECK(binary_entropy(1.0) == doctest::Approx(0.0));

  double p = threshold_solve();
  CHECK(p == doctest::Approx(0.0756).epsilon(7e-3));
  CHECK(std::abs(1.0 - binary_entropy(2 * p) - binary_entropy(p)) < 1e-7);

  // secret rate at p_a = 0.05
  double rate = 1.0 - binary_entropy(0.10) - binary_entropy(0.05);
  CHECK(rate == doctest::Approx(1.0 - 0.4690 - 0.2864).epsilon(1e-3));
}

TEST_CASE("rate region") {
  // p_a = 0, eps -> 0, n large: the secret rate approaches 1
  RateRegionReport ideal = rate_region_check(1e-9, 1e-9, 1e-9, 1000000, 1, 999900);
  CHECK(ideal.security_ok);

  // beyond the threshold no rate is admissible
  double p = 0.0756 + 0.01;
  bool any = false;
  for (int r = 1; r < 100; ++r)
    for (int m = 1; m < 100 - r; ++m) {
      RateRegionReport rep = rate_region_check(p, 1e-6, 1e-6, 100, r, m);
      if (rep.reliability_ok && rep.security_ok) any = true;
    }
  CHECK_FALSE(any);

  // p_a = 0.05 with small slacks: the admissible region is nonempty
  any = false;
  const int n = 10000;
  for (int r = 1; r < n && !any; r += 50)
    for (int m = 1; m < n - r && !any; m += 50) {
      RateRegionReport rep = rate_region_check(0.05, 0.005, 0.005, n, r, m);
      if (rep.reliability_ok && rep.security_ok) any = true;
    }
  CHECK(any);
}

TEST_CASE("random-code distance tail stays under the ensemble bound") {
  Rng rng(67);
  // quick version; the acceptance suite runs the full 10^4-sample check
  for (auto [n, r, delta] : {std::tuple{20, 10, 0.10}, std::tuple{20, 10, 0.05},
                             std::tuple{18, 9, 0.10}}) {
    const int samples = 800;
    int bad = 0;
    for (int t = 0; t < samples; ++t) {
      BinaryLinearCode c = random_linear_code(n, n - r, rng);
      if (static_cast<double>(min_distance(c)) / n < delta) ++bad;
    }
    double emp = static_cast<double>(bad) / samples;
    double bound = gallager_bound(n, r, delta);
    double sigma = std::sqrt(std::max(emp * (1 - emp), 1.0 / samples) / samples);
    CHECK(emp <= bound + 2 * sigma);
  }
}
