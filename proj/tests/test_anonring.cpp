#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "qsec/anonring.hpp"

using namespace qsec;
using namespace qsec::anonring;

namespace {

BinaryLinearCode hamming74() {
  BinaryLinearCode c;
  c.n = 7;
  c.k = 4;
  c.generator = {0b0110001, 0b1010010, 0b1100100, 0b1111000};
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

NestedCodePair hamming_pair() { return NestedCodePair(hamming74(), repetition(7)); }

// small pair for the QECC smoke tests: C1 = even-weight [3,2], C2 = {000,011}
NestedCodePair tiny_pair() {
  BinaryLinearCode c1;
  c1.n = 3;
  c1.k = 2;
  c1.generator = {0b011, 0b101};
  c1.parity_check = gf2::null_space(c1.generator, 3);
  c1.validate();
  BinaryLinearCode c2;
  c2.n = 3;
  c2.k = 1;
  c2.generator = {0b011};
  c2.parity_check = gf2::null_space(c2.generator, 3);
  c2.validate();
  return NestedCodePair(c1, c2);
}

anonring::RingConfig small_ring(int n) {
  RingConfig cfg;
  cfg.n_users = n;
  cfg.alpha = 1.0;
  cfg.gamma = 1.0;
  return cfg;
}

}  // namespace

TEST_CASE("round record enforces announcement order") {
  RoundRecord rec(3);
  rec.announce_step3(0, 1);
  rec.announce_step3(1, 0);
  CHECK_THROWS(rec.announce_step4(0, false));  // step 3 incomplete
  rec.announce_step3(2, 1);
  CHECK_THROWS(rec.announce_step5(0, "late", 0));  // step 4 incomplete
  rec.announce_step4(0, false);
  CHECK_THROWS(rec.announce_step3(1, 0));  // step 3 after step 4 started
  rec.announce_step4(1, true);
  rec.announce_step4(2, false);
  CHECK_NOTHROW(rec.announce_step5(1, "test_x_kept", 1));
}

TEST_CASE("parity identity: no testers") {
  // noiseless: xor of key bits is exactly zero
  for (int n : {3, 4, 5}) {
    for (int t = 0; t < 20; ++t) {
      RoundResult res = run_round(small_ring(n), 100 + t, word_t{0}, word_t{0}, word_t{0});
      REQUIRE(res.info_bit);
      CHECK(res.kprime_parity == 0);
    }
  }
  // planted sigma_z link errors accumulate in the parity
  Rng rng(7);
  for (int n : {3, 5, 7}) {
    for (int t = 0; t < 25; ++t) {
      word_t plant = rng.integer(word_t{1} << n);
      RoundResult res = run_round(small_ring(n), 200 + t, plant, word_t{0}, word_t{0});
      REQUIRE(res.info_bit);
      CHECK(res.kprime_parity == __builtin_parityll(plant));
    }
  }
  // sigma_x noise alone does not disturb the x-type key parity
  for (int t = 0; t < 20; ++t) {
    word_t plant = rng.integer(word_t{1} << 5);
    RoundResult res = run_round(small_ring(5), 300 + t, word_t{0}, plant, word_t{0});
    CHECK(res.kprime_parity == 0);
  }
}

TEST_CASE("single tester: arc consistency") {
  // with one tester, the tester's two x outcomes together with the announced
  // bell x bits close the ring: their total parity equals the z-error parity
  Rng rng(11);
  for (int n : {3, 5}) {
    for (int t = 0; t < 20; ++t) {
      word_t plant = rng.integer(word_t{1} << n);
      RingConfig cfg = small_ring(n);
      RoundResult res = run_round(cfg, 400 + t, plant, word_t{0}, word_t{1});  // user 0 tests
      REQUIRE_FALSE(res.info_bit);
      REQUIRE(res.tester[0]);
      int total = res.record.step3_value(0);  // tester's received-bit x outcome
      for (const auto& [user, kind, value] : res.record.step5_entries())
        if (kind == "test_x_kept" || kind == "bell_x") total ^= value;
      CHECK(total == __builtin_parityll(plant));
    }
  }
}

TEST_CASE("testing statistics") {
  RingConfig cfg = small_ring(8);
  TestStatistics st = test_statistics(cfg, 40000, 13);
  CHECK(std::abs(st.p_use_hat - st.p_use_formula) < 0.01);
  // channel l = 1 tested with frequency ~ alpha/N
  CHECK(st.channel_freq[0] == doctest::Approx(cfg.p_test()).epsilon(0.1));
  for (int l = 0; l + 1 < 7; ++l)
    CHECK(st.channel_freq[l] == doctest::Approx(st.channel_formula[l]).epsilon(0.15));

  // alpha -> 0: the channel is almost always used
  RingConfig quiet = small_ring(8);
  quiet.alpha = 0.05;
  CHECK(test_statistics(quiet, 20000, 17).p_use_hat > 0.9);
}

TEST_CASE("broadcast sessions") {
  NestedCodePair pair = hamming_pair();
  Rng rng(19);

  // zero keys, zero noise, single speaker
  {
    std::vector<word_t> kprime(4, 0);
    std::vector<std::optional<word_t>> msgs(4);
    msgs[2] = 0b110;
    BroadcastResult out = broadcast_session(pair, kprime, msgs, rng);
    CHECK(out.ok);
    CHECK(out.output == 0b110);
  }
  // zero speakers -> NULL output
  {
    std::vector<word_t> kprime(4, 0);
    std::vector<std::optional<word_t>> msgs(4);
    BroadcastResult out = broadcast_session(pair, kprime, msgs, rng);
    CHECK(out.ok);
    CHECK(out.output == 0);
  }
  // random keys with a planted in-radius error
  for (int t = 0; t < 40; ++t) {
    const int users = 5;
    std::vector<word_t> kprime(users);
    word_t acc = 0;
    for (int u = 0; u + 1 < users; ++u) {
      kprime[u] = rng.integer(1 << 7);
      acc ^= kprime[u];
    }
    word_t planted = rng.bernoulli(0.7) ? word_t{1} << rng.integer(7) : 0;
    kprime[users - 1] = acc ^ planted;
    std::vector<std::optional<word_t>> msgs(users);
    word_t msg = rng.integer(8);
    msgs[rng.integer(users)] = msg;
    BroadcastResult out = broadcast_session(pair, kprime, msgs, rng, 1);
    CHECK(out.ok);
    CHECK(out.output == msg);
    CHECK(out.corrected_error == planted);
  }
  // two speakers: the channel carries the xor
  {
    std::vector<word_t> kprime(4, 0);
    std::vector<std::optional<word_t>> msgs(4);
    msgs[0] = 0b101;
    msgs[3] = 0b011;
    BroadcastResult out = broadcast_session(pair, kprime, msgs, rng);
    CHECK(out.ok);
    CHECK(out.output == (0b101 ^ 0b011));
  }
}

TEST_CASE("collision retries terminate with a geometric tail") {
  NestedCodePair pair = hamming_pair();
  RingConfig cfg = small_ring(6);
  cfg.gamma = 2.0;  // p_speak = 1/3
  std::vector<int> sessions;
  for (int t = 0; t < 60; ++t) {
    CollisionStats st = simulate_collision_retries(cfg, pair, 700 + t);
    CHECK_FALSE(st.truncated);
    sessions.push_back(st.sessions_until_clear);
  }
  double mean = std::accumulate(sessions.begin(), sessions.end(), 0.0) / sessions.size();
  CHECK(mean > 1.0);
  CHECK(mean < 40.0);  // far below the truncation cap; geometric-scale mean
}

TEST_CASE("qecc round: clean run decodes the message xor") {
  RingConfig cfg = small_ring(4);
  NestedCodePair pair = tiny_pair();
  int decoded = 0, rounds = 0;
  for (int t = 0; t < 25; ++t) {
    std::vector<std::optional<word_t>> msgs(4);
    msgs[1] = 1;
    QeccResult res = qecc_round(cfg, pair, 2, 2, msgs, 900 + t, 0.0);  // nobody tests
    REQUIRE_FALSE(res.aborted);
    ++rounds;
    if (res.output_ok && res.output == 1) ++decoded;
    CHECK(res.x_test_errors == 0);
    CHECK(res.z_test_errors == 0);
  }
  CHECK(decoded == rounds);
}

TEST_CASE("qecc round: tester on a protected bit aborts") {
  RingConfig cfg = small_ring(4);
  NestedCodePair pair = tiny_pair();
  int aborted = 0, hit = 0;
  for (int t = 0; t < 30; ++t) {
    std::vector<std::optional<word_t>> msgs(4);
    QeccResult res = qecc_round(cfg, pair, 2, 2, msgs, 1200 + t, 0.5);
    if (res.tester_hit_protected_bit) {
      ++hit;
      CHECK(res.aborted);
    }
    if (res.aborted) ++aborted;
  }
  CHECK(hit > 0);  // with p = 0.5 per bit per user someone hits the code bits
  CHECK(aborted == hit);
}

TEST_CASE("qecc transcript distribution matches the bell-round announcements") {
  // both protocols announce uniformly random bits for the key-carrying
  // positions; compare the popcount distribution of matched-length samples
  RingConfig cfg = small_ring(4);
  NestedCodePair pair = tiny_pair();
  std::vector<int> qecc_counts, ring_counts;
  for (int t = 0; t < 120; ++t) {
    std::vector<std::optional<word_t>> msgs(4);
    QeccResult res = qecc_round(cfg, pair, 2, 2, msgs, 1500 + t, 0.0);
    REQUIRE_FALSE(res.aborted);
    int pop = 0;
    for (word_t kz : res.kz_announced) pop += __builtin_popcountll(kz & 0x7f);
    qecc_counts.push_back(pop);
  }
  Rng rng(23);
  for (int t = 0; t < 120; ++t) {
    // matched: 4 users x 7 announced bits per round position
    int pop = 0;
    for (int u = 0; u < 4; ++u) pop += __builtin_popcountll(rng.integer(1 << 7));
    ring_counts.push_back(pop);
  }
  std::sort(qecc_counts.begin(), qecc_counts.end());
  std::sort(ring_counts.begin(), ring_counts.end());
  double ks = 0;
  for (int v = 0; v <= 28; ++v) {
    double f1 = std::upper_bound(qecc_counts.begin(), qecc_counts.end(), v) - qecc_counts.begin();
    double f2 = std::upper_bound(ring_counts.begin(), ring_counts.end(), v) - ring_counts.begin();
    ks = std::max(ks, std::abs(f1 - f2) / 120.0);
  }
  const double crit = 1.628 * std::sqrt(2.0 / 120.0);  // alpha = 0.01
  CHECK(ks < crit);
}

TEST_CASE("two-sided bound") {
  // identity attack: unit fidelities, zero bound, zero information
  TwoSidedAttack ident(1, 2, Mat::Identity(4, 4), Mat::Identity(4, 4));
  TwoSidedReport rep = two_sided_bound(ident, {0, 1});
  CHECK(rep.f_u == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.f_uv == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.bound == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(rep.oracle == doctest::Approx(0.0).epsilon(1e-6));

  // z-copy before the user, nothing after: full z info, big disturbance
  Mat copy = Mat::Zero(4, 4);
  copy(0, 0) = 1;
  copy(3, 1) = 1;
  copy(2, 2) = 1;
  copy(1, 3) = 1;
  TwoSidedAttack zc(1, 2, copy, Mat::Identity(4, 4));
  TwoSidedReport zrep = two_sided_bound(zc, {0, 1});
  CHECK(zrep.oracle <= zrep.bound + 1e-9);
  CHECK(zrep.decomposed <= zrep.bound + 1e-9);

  Rng rng(29);
  for (int t = 0; t < 8; ++t) {
    TwoSidedAttack atk(1, 4, random_unitary(8, rng), random_unitary(8, rng));
    TwoSidedReport r = two_sided_bound(atk, {0, 1}, 96);
    CHECK(r.oracle <= r.bound + 1e-9);
    CHECK(r.decomposed <= r.bound + 1e-9);  // 4 sqrt(1-Fuv) + 4 sqrt2 sqrt(1-Fu) <= (4+4sqrt2) sqrt(1-Fmin)
  }
}

TEST_CASE("anonymity metric") {
  RingConfig cfg = small_ring(4);
  NestedCodePair pair = hamming_pair();
  AnonymityEstimate clean =
      anonymity_metric(cfg, pair, EveModel::kAnnouncementsOnly, 4000, 31);
  CHECK(std::abs(clean.corrected) < 0.01);
  CHECK(clean.p_value > 0.01);  // statistically indistinguishable from zero

  // a corrupt insider sees their own messages in the clear
  AnonymityEstimate leak = anonymity_metric(cfg, pair, EveModel::kCorruptInsider, 4000, 37, 0);
  CHECK(leak.corrected > 0.1);
  CHECK(leak.p_value <= 0.05);
}
