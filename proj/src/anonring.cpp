#include "qsec/anonring.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace qsec::anonring {

namespace {

int parity(word_t x) { return __builtin_parityll(x); }

/// Minimal dense statevector register; qubit q is bit q of the index.
class StateVec {
public:
  explicit StateVec(int nq) : nq_(nq), amp_(Vec::Zero(Eigen::Index{1} << nq)) {}

  int nq() const { return nq_; }
  Vec& amp() { return amp_; }

  void apply_x(int q) {
    const Eigen::Index bit = Eigen::Index{1} << q;
    for (Eigen::Index i = 0; i < amp_.size(); ++i)
      if (!(i & bit)) std::swap(amp_(i), amp_(i | bit));
  }
  void apply_z(int q) {
    const Eigen::Index bit = Eigen::Index{1} << q;
    for (Eigen::Index i = 0; i < amp_.size(); ++i)
      if (i & bit) amp_(i) = -amp_(i);
  }
  void apply_h(int q) {
    const Eigen::Index bit = Eigen::Index{1} << q;
    const double s = 1.0 / std::sqrt(2.0);
    for (Eigen::Index i = 0; i < amp_.size(); ++i)
      if (!(i & bit)) {
        cxd a = amp_(i), b = amp_(i | bit);
        amp_(i) = s * (a + b);
        amp_(i | bit) = s * (a - b);
      }
  }
  void apply_cnot(int control, int target) {
    const Eigen::Index cb = Eigen::Index{1} << control, tb = Eigen::Index{1} << target;
    for (Eigen::Index i = 0; i < amp_.size(); ++i)
      if ((i & cb) && !(i & tb)) std::swap(amp_(i), amp_(i | tb));
  }
  int measure_z(int q, Rng& rng) {
    const Eigen::Index bit = Eigen::Index{1} << q;
    double p1 = 0.0;
    for (Eigen::Index i = 0; i < amp_.size(); ++i)
      if (i & bit) p1 += std::norm(amp_(i));
    const int outcome = rng.uniform() < p1 ? 1 : 0;
    const double norm = 1.0 / std::sqrt(outcome ? p1 : 1.0 - p1);
    for (Eigen::Index i = 0; i < amp_.size(); ++i) {
      if (((i & bit) != 0) != (outcome != 0))
        amp_(i) = 0.0;
      else
        amp_(i) *= norm;
    }
    return outcome;
  }
  int measure_x(int q, Rng& rng) {
    apply_h(q);
    int out = measure_z(q, rng);
    apply_h(q);  // restore basis for any later use of the collapsed qubit
    return out;
  }
  /// Reset a just-x-measured qubit (collapsed to |+>/|->) to |+>.
  void fix_to_plus(int q, int outcome) {
    if (outcome) apply_z(q);
  }

private:
  int nq_;
  Vec amp_;
};

}  // namespace

void RingConfig::validate() const {
  if (n_users < 3) throw std::invalid_argument("RingConfig: N >= 3 required");
  if (alpha <= 0 || gamma <= 0) throw std::invalid_argument("RingConfig: alpha, gamma > 0");
  if (p_test() >= 1.0) throw std::invalid_argument("RingConfig: p_test must stay below 1");
  if (link_noise_x < 0 || link_noise_x > 1 || link_noise_z < 0 || link_noise_z > 1)
    throw std::invalid_argument("RingConfig: link noise in [0,1]");
}

RoundRecord::RoundRecord(int n_users) : n_(n_users), step3_(n_users), step4_(n_users) {}

void RoundRecord::announce_step3(int user, int value) {
  for (const auto& t : step4_)
    if (t.has_value())
      throw std::logic_error("RoundRecord: step-3 announcement after step 4 started");
  step3_.at(user) = value;
}

void RoundRecord::announce_step4(int user, bool tested) {
  if (!step3_complete())
    throw std::logic_error("RoundRecord: step 4 requires every step-3 announcement first");
  step4_.at(user) = tested;
}

void RoundRecord::announce_step5(int user, const std::string& kind, int value) {
  if (!step4_complete()) throw std::logic_error("RoundRecord: step 5 requires step 4 complete");
  step5_.emplace_back(user, kind, value);
}

bool RoundRecord::step3_complete() const {
  return std::all_of(step3_.begin(), step3_.end(), [](const auto& v) { return v.has_value(); });
}
bool RoundRecord::step4_complete() const {
  return std::all_of(step4_.begin(), step4_.end(), [](const auto& v) { return v.has_value(); });
}
int RoundRecord::step3_value(int user) const { return step3_.at(user).value(); }
bool RoundRecord::tested(int user) const { return step4_.at(user).value(); }

RoundResult run_round(const RingConfig& cfg, std::uint64_t seed, std::optional<word_t> plant_z,
                      std::optional<word_t> plant_x, std::optional<word_t> force_testers) {
  cfg.validate();
  const int n = cfg.n_users;
  if (n > 10) throw std::invalid_argument("run_round: N <= 10 for exact simulation");
  Rng rng(seed);

  // Pair i: qubit 2i stays with user i, qubit 2i+1 travels to user i+1.
  // User u measures (received, kept) = (2((u+n-1)%n)+1, 2u).
  StateVec sv(2 * n);
  {
    const double a = std::pow(0.5, 0.5 * n);
    for (int pattern = 0; pattern < (1 << n); ++pattern) {
      Eigen::Index idx = 0;
      for (int i = 0; i < n; ++i)
        if ((pattern >> i) & 1) idx |= (Eigen::Index{1} << (2 * i)) | (Eigen::Index{1} << (2 * i + 1));
      sv.amp()(idx) = a;
    }
  }

  RoundResult res{RoundRecord(n)};
  res.z_errors.assign(n, 0);
  res.x_errors.assign(n, 0);
  for (int i = 0; i < n; ++i) {
    const bool ez = plant_z ? ((*plant_z >> i) & 1) : rng.bernoulli(cfg.link_noise_z);
    const bool ex = plant_x ? ((*plant_x >> i) & 1) : rng.bernoulli(cfg.link_noise_x);
    if (ez) {
      sv.apply_z(2 * i + 1);
      res.z_errors[i] = 1;
    }
    if (ex) {
      sv.apply_x(2 * i + 1);
      res.x_errors[i] = 1;
    }
  }

  res.tester.assign(n, false);
  for (int u = 0; u < n; ++u)
    res.tester[u] = force_testers ? ((*force_testers >> u) & 1) : rng.bernoulli(cfg.p_test());

  // measurements; step-3 values collected first, in user order
  std::vector<int> received_x(n, -1), kept_x(n, -1), bell_z(n, -1), bell_x(n, -1);
  for (int u = 0; u < n; ++u) {
    const int received = 2 * ((u + n - 1) % n) + 1;
    const int kept = 2 * u;
    if (res.tester[u]) {
      received_x[u] = sv.measure_x(received, rng);
      kept_x[u] = sv.measure_x(kept, rng);
    } else {
      // Bell measurement: CNOT(received -> kept), H(received);
      // z-type (parity) bit on `kept`, x-type (phase) bit on `received`.
      sv.apply_cnot(received, kept);
      sv.apply_h(received);
      bell_x[u] = sv.measure_z(received, rng);
      bell_z[u] = sv.measure_z(kept, rng);
    }
  }

  for (int u = 0; u < n; ++u)
    res.record.announce_step3(u, res.tester[u] ? received_x[u] : bell_z[u]);
  for (int u = 0; u < n; ++u) res.record.announce_step4(u, res.tester[u]);

  res.info_bit = std::none_of(res.tester.begin(), res.tester.end(), [](bool t) { return t; });
  if (res.info_bit) {
    res.kprime.assign(n, 0);
    for (int u = 0; u < n; ++u) {
      res.kprime[u] = bell_x[u];
      res.kprime_parity ^= bell_x[u];
    }
  } else {
    for (int u = 0; u < n; ++u)
      res.record.announce_step5(u, res.tester[u] ? "test_x_kept" : "bell_x",
                                res.tester[u] ? kept_x[u] : bell_x[u]);
  }
  return res;
}

TestStatistics test_statistics(const RingConfig& cfg, int rounds, std::uint64_t seed) {
  cfg.validate();
  if (rounds < 1000) throw std::invalid_argument("test_statistics: rounds >= 1000");
  const int n = cfg.n_users;
  Rng rng(seed);
  TestStatistics st;
  st.channel_freq.assign(n - 1, 0.0);
  st.channel_formula.assign(n - 1, 0.0);
  const double p = cfg.p_test();
  for (int l = 1; l <= n - 1; ++l)
    st.channel_formula[l - 1] = std::pow(1.0 - p, l - 1) * p;
  st.p_use_formula = std::pow(1.0 - p, n);

  std::vector<bool> tester(n);
  long long use = 0;
  std::vector<long long> hits(n - 1, 0);
  for (int r = 0; r < rounds; ++r) {
    bool any = false;
    for (int u = 0; u < n; ++u) {
      tester[u] = rng.bernoulli(p);
      any = any || tester[u];
    }
    if (!any) {
      ++use;
      continue;
    }
    for (int u = 0; u < n; ++u)
      for (int l = 1; l <= n - 1; ++l)
        if (tester[(u + l) % n]) {
          ++hits[l - 1];
          break;
        }
  }
  st.p_use_hat = static_cast<double>(use) / rounds;
  for (int l = 0; l < n - 1; ++l)
    st.channel_freq[l] = static_cast<double>(hits[l]) / (static_cast<double>(rounds) * n);
  return st;
}

BroadcastResult broadcast_session(const NestedCodePair& pair, const std::vector<word_t>& kprime,
                                  const std::vector<std::optional<word_t>>& messages, Rng& rng,
                                  int correction_radius) {
  if (kprime.size() != messages.size())
    throw std::invalid_argument("broadcast_session: user count mismatch");
  std::vector<word_t> announced;
  for (size_t u = 0; u < kprime.size(); ++u) {
    const word_t m = messages[u].value_or(0);  // NULL is the all-zero message
    announced.push_back(kprime[u] ^ coset_broadcast_encode(m, pair, rng));
  }
  BroadcastDecodeResult dec = coset_broadcast_decode(announced, pair, correction_radius);
  return BroadcastResult{dec.message, dec.ok, dec.corrected_error};
}

CollisionStats simulate_collision_retries(const RingConfig& cfg, const NestedCodePair& pair,
                                          std::uint64_t seed) {
  cfg.validate();
  Rng rng(seed);
  const int n = cfg.n_users;
  const word_t msg_a = 1, msg_b = (pair.message_bits() > 1) ? 2 : 1;
  bool want_a = true, want_b = true;
  CollisionStats st;
  const int cap = 1000;
  for (int session = 1; session <= cap; ++session) {
    st.sessions_until_clear = session;
    // first session: both collide deliberately; later: retry w.p. gamma/N
    bool send_a = want_a && (session == 1 || rng.bernoulli(cfg.p_speak()));
    bool send_b = want_b && (session == 1 || rng.bernoulli(cfg.p_speak()));
    std::vector<word_t> kprime(n, 0);
    word_t acc = 0;
    for (int u = 0; u + 1 < n; ++u) {
      kprime[u] = rng.integer(word_t{1} << pair.c1.n);
      acc ^= kprime[u];
    }
    kprime[n - 1] = acc;  // noiseless round: keys xor to zero
    std::vector<std::optional<word_t>> msgs(n);
    if (send_a) msgs[0] = msg_a;
    if (send_b) msgs[1] = msg_b;
    BroadcastResult out = broadcast_session(pair, kprime, msgs, rng);
    if (send_a && out.ok && out.output == msg_a) want_a = false;
    if (send_b && out.ok && out.output == msg_b) want_b = false;
    if (!want_a && !want_b) return st;
  }
  st.truncated = true;
  return st;
}

QeccResult qecc_round(const RingConfig& cfg, const NestedCodePair& css, int l_x, int l_z,
                      const std::vector<std::optional<word_t>>& messages, std::uint64_t seed,
                      double p_test_x) {
  cfg.validate();
  const int n_users = cfg.n_users;
  const int nc = css.c1.n;
  const int nq = nc + l_z + l_x;
  if (nq > 12) throw std::invalid_argument("qecc_round: n + l_x + l_z <= 12");
  if (static_cast<int>(messages.size()) != n_users)
    throw std::invalid_argument("qecc_round: one message slot per user");
  if (p_test_x < 0) p_test_x = cfg.p_test();
  Rng rng(seed);

  // Unpermuted layout: [0, nc) code bits, [nc, nc+l_z) z-tests, rest x-tests.
  std::vector<int> perm(nq);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = nq - 1; i > 0; --i)
    std::swap(perm[i], perm[rng.integer(static_cast<std::uint64_t>(i) + 1)]);
  // perm[logical] = physical wire position seen by the ring

  StateVec sv(nq);
  {  // |0_L> on the code bits: uniform superposition over C2
    const word_t total = word_t{1} << css.c2.k;
    const double a = std::pow(0.5, 0.5 * css.c2.k);
    for (word_t m = 0; m < total; ++m) {
      word_t w = css.c2.encode(m);
      Eigen::Index idx = 0;
      for (int b = 0; b < nc; ++b)
        if ((w >> b) & 1) idx |= Eigen::Index{1} << perm[b];
      sv.amp()(idx) = a;
    }
  }
  for (int b = 0; b < l_x; ++b) sv.apply_h(perm[nc + l_z + b]);  // |0_x> test bits

  QeccResult res;
  std::vector<word_t> kz(n_users, 0), kx(n_users, 0);
  std::vector<std::vector<std::pair<int, int>>> tested_bits(n_users);  // (wire, outcome)
  std::vector<word_t> reset_mask(n_users, 0);

  auto encrypt = [&](int user) {
    kz[user] = rng.integer(word_t{1} << nq);
    kx[user] = rng.integer(word_t{1} << nq);
    for (int q = 0; q < nq; ++q) {
      if ((kz[user] >> q) & 1) sv.apply_z(q);
      if ((kx[user] >> q) & 1) sv.apply_x(q);
    }
  };

  encrypt(0);  // U_0 encrypts before sending
  for (int u = 1; u < n_users; ++u) {
    // link noise between u-1 and u
    for (int q = 0; q < nq; ++q) {
      if (rng.bernoulli(cfg.link_noise_z)) sv.apply_z(q);
      if (rng.bernoulli(cfg.link_noise_x)) sv.apply_x(q);
    }
    for (int q = 0; q < nq; ++q) {
      if (rng.bernoulli(p_test_x)) {
        int out = sv.measure_x(q, rng);
        sv.fix_to_plus(q, out);  // replace the measured bit with |0_x>
        tested_bits[u].push_back({q, out});
        reset_mask[u] |= word_t{1} << q;
      }
    }
    encrypt(u);
  }
  for (int q = 0; q < nq; ++q) {  // last link back to U_0
    if (rng.bernoulli(cfg.link_noise_z)) sv.apply_z(q);
    if (rng.bernoulli(cfg.link_noise_x)) sv.apply_x(q);
  }

  // Step 6: U_0 measures the test registers (outcomes still key-masked).
  std::vector<int> x_test_out(l_x, -1), z_test_out(l_z, -1);
  for (int b = 0; b < l_x; ++b) x_test_out[b] = sv.measure_x(perm[nc + l_z + b], rng);
  for (int b = 0; b < l_z; ++b) z_test_out[b] = sv.measure_z(perm[nc + b], rng);

  // Steps 7-8: announcements; abort if a user tested a code or z-test wire.
  res.kz_announced = kz;
  for (int u = 1; u < n_users; ++u)
    for (const auto& [wire, out] : tested_bits[u]) {
      bool protected_bit = false;
      for (int b = 0; b < nc + l_z; ++b)
        if (perm[b] == wire) protected_bit = true;
      if (protected_bit) {
        res.tester_hit_protected_bit = true;
        res.aborted = true;
        res.abort_reason = "tester hit a code or z-basis test bit";
      }
    }
  if (res.aborted) return res;

  // Central x-fidelity bookkeeping: an x-test outcome should equal the xor of
  // the z keys applied since the last reset of that wire (all announced).
  for (int b = 0; b < l_x; ++b) {
    const int wire = perm[nc + l_z + b];
    int expect = 0;
    int last_reset = 0;
    for (int u = 1; u < n_users; ++u)
      if ((reset_mask[u] >> wire) & 1) last_reset = u;
    // testers saw xor of z-keys applied before them since the previous reset
    for (int u = 1; u < n_users; ++u)
      if ((reset_mask[u] >> wire) & 1) {
        int seen = 0;
        int prev = 0;
        for (int v = 1; v < u; ++v)
          if ((reset_mask[v] >> wire) & 1) prev = v;
        for (int v = prev; v < u; ++v) seen ^= static_cast<int>((kz[v] >> wire) & 1);
        int outcome = -1;
        for (const auto& [w2, o2] : tested_bits[u])
          if (w2 == wire) outcome = o2;
        if (outcome != seen) ++res.x_test_errors;
      }
    for (int v = last_reset; v < n_users; ++v) expect ^= static_cast<int>((kz[v] >> wire) & 1);
    if (x_test_out[b] != expect) ++res.x_test_errors;
  }
  // Step 9: z-test fidelity: outcome should equal xor of all x keys.
  for (int b = 0; b < l_z; ++b) {
    const int wire = perm[nc + b];
    int expect = 0;
    for (int u = 0; u < n_users; ++u) expect ^= static_cast<int>((kx[u] >> wire) & 1);
    if (z_test_out[b] != expect) ++res.z_test_errors;
  }

  // Steps 10-11: announcements a_u = k'_ux xor m_u on the code bits; U_0
  // measures the code register and decodes.
  word_t acc = 0;
  for (int u = 0; u < n_users; ++u) {
    word_t kux = 0;
    for (int b = 0; b < nc; ++b)
      if ((kx[u] >> perm[b]) & 1) kux |= word_t{1} << b;
    const word_t mu = css.encode_message(messages[u].value_or(0), &rng);
    acc ^= kux ^ mu;
  }
  word_t y = 0;
  for (int b = 0; b < nc; ++b)
    if (sv.measure_z(perm[b], rng)) y |= word_t{1} << b;
  DecodeResult dec = syndrome_decode(y ^ acc, css.c1);
  res.output_ok = dec.ok;
  if (dec.ok) res.output = css.message_of(dec.codeword);
  return res;
}

TwoSidedAttack::TwoSidedAttack(int n_, int probe_dim_, Mat u_, Mat v_)
    : n(n_), probe_dim(probe_dim_), u(std::move(u_)), v(std::move(v_)) {
  if (n < 1 || n > 2) throw std::invalid_argument("TwoSidedAttack: n in 1..2");
  const Eigen::Index want = static_cast<Eigen::Index>(probe_dim) << n;
  if (u.rows() != want || v.rows() != want || u.cols() != want || v.cols() != want)
    throw std::invalid_argument("TwoSidedAttack: operators must act on probe (x) message");
  if (!is_unitary(u, kStructTol) || !is_unitary(v, kStructTol))
    throw std::invalid_argument("TwoSidedAttack: not unitary");
}

TwoSidedReport two_sided_bound(const TwoSidedAttack& attack, const std::vector<int>& f,
                               int witness_bases) {
  const int n = attack.n, md = 1 << n;
  if (static_cast<int>(f.size()) != md) throw std::invalid_argument("two_sided_bound: f size");

  AttackUnitary first(n, attack.probe_dim, attack.u);
  auto e = eve_components(first);

  // F_U = sum_{a,x} 2^{-2n} sum_j <E_{x, j xor a} | E_{x xor a, j}>
  cxd fu_c = 0.0;
  for (int a = 0; a < md; ++a)
    for (int x = 0; x < md; ++x)
      for (int j = 0; j < md; ++j) fu_c += e[x][j ^ a].dot(e[x ^ a][j]);
  const double f_u = std::min(fu_c.real() / (static_cast<double>(md) * md), 1.0);

  // F_UV: Fourier no-error probability of the combined one-sided attack V U.
  AttackUnitary combined(n, attack.probe_dim, attack.v * attack.u);
  const double f_uv = std::min(info_vs_disturbance(combined).p0, 1.0);

  std::map<int, double> q;
  for (int k = 0; k < md; ++k) q[f[k]] += 1.0 / md;
  Eigen::VectorXd qv(q.size());
  {
    int i = 0;
    for (const auto& [val, prob] : q) qv(i++) = prob;
  }
  const double h_fk = shannon_entropy(qv);

  TwoSidedReport rep;
  rep.f_u = f_u;
  rep.f_uv = f_uv;
  rep.f_min = std::min(f_u, f_uv);
  rep.h_fk = h_fk;
  const double s2 = std::sqrt(2.0);
  rep.bound = (4.0 + 4.0 * s2) * h_fk * std::sqrt(std::max(1.0 - rep.f_min, 0.0));
  rep.decomposed = h_fk * (4.0 * std::sqrt(std::max(1.0 - f_uv, 0.0)) +
                           4.0 * s2 * std::sqrt(std::max(1.0 - f_u, 0.0)));

  // Witness: psi_{x,k} = V (I (x) X^k) U |0>|x>, rho = trace out the message.
  rep.oracle = 0.0;
  if (h_fk > 0) {
    std::vector<std::vector<Mat>> rho(md, std::vector<Mat>(md));
    for (int x = 0; x < md; ++x)
      for (int k = 0; k < md; ++k) {
        Vec psi = Vec::Zero(attack.u.rows());
        // (I (x) X^k) U |0>|x>: probe block pe, message j -> j xor k
        for (int pe = 0; pe < attack.probe_dim; ++pe)
          for (int j = 0; j < md; ++j)
            psi(static_cast<Eigen::Index>(pe) * md + (j ^ k)) =
                attack.u(static_cast<Eigen::Index>(pe) * md + j, x);
        psi = attack.v * psi;
        Mat full = psi * psi.adjoint();
        rho[x][k] = partial_trace_raw(full, BipartiteLabel(attack.probe_dim, md), 0);
      }
    OracleBudget budget;
    budget.random_bases = witness_bases;
    for (int a = 0; a < md; ++a)
      for (int x = 0; x < md; ++x) {
        std::vector<std::pair<double, DensityMatrix>> items;
        for (const auto& [val, prob] : q) {
          Mat sigma = Mat::Zero(attack.probe_dim, attack.probe_dim);
          for (int k = 0; k < md; ++k)
            if (f[a ^ k] == val) sigma += (1.0 / (md * prob)) * rho[x][k];
          items.emplace_back(prob, DensityMatrix(0.5 * (sigma + sigma.adjoint())));
        }
        rep.oracle += (1.0 / (static_cast<double>(md) * md)) *
                      info_witness(QuantumSource(std::move(items)), budget);
      }
  }
  return rep;
}

AnonymityEstimate anonymity_metric(const RingConfig& cfg, const NestedCodePair& pair,
                                   EveModel model, int sessions, std::uint64_t seed, int insider) {
  cfg.validate();
  if (sessions < 100) throw std::invalid_argument("anonymity_metric: sessions >= 100");
  const int n = cfg.n_users;
  Rng rng(seed);

  // Observable: the low announcement bit of every user (plus the insider's
  // decoded nonzero-message flag). Keys are uniform, so announcements carry
  // no speaker information by construction.
  std::vector<int> speakers(sessions);
  std::vector<int> observables(sessions);
  for (int s = 0; s < sessions; ++s) {
    const int speaker = static_cast<int>(rng.integer(n));
    std::vector<word_t> kprime(n, 0);
    word_t acc = 0;
    for (int u = 0; u + 1 < n; ++u) {
      kprime[u] = rng.integer(word_t{1} << pair.c1.n);
      acc ^= kprime[u];
    }
    kprime[n - 1] = acc;
    std::vector<std::optional<word_t>> msgs(n);
    msgs[speaker] = 1;
    std::vector<word_t> announced(n);
    for (int u = 0; u < n; ++u)
      announced[u] = kprime[u] ^ coset_broadcast_encode(msgs[u].value_or(0), pair, rng);
    int obs = 0;
    for (int u = 0; u < n; ++u) obs |= static_cast<int>(announced[u] & 1) << u;
    if (model == EveModel::kCorruptInsider) {
      const word_t m_ins = pair.message_of(announced[insider] ^ kprime[insider]);
      obs = (obs << 1) | (m_ins != 0 ? 1 : 0);
    }
    speakers[s] = speaker;
    observables[s] = obs;
  }

  auto plugin_mi = [&](const std::vector<int>& sp) {
    std::map<std::pair<int, int>, double> joint;
    std::map<int, double> ps, po;
    const double w = 1.0 / sessions;
    for (int s = 0; s < sessions; ++s) {
      joint[{sp[s], observables[s]}] += w;
      ps[sp[s]] += w;
      po[observables[s]] += w;
    }
    double mi = 0.0;
    for (const auto& [k, p] : joint) mi += p * std::log2(p / (ps[k.first] * po[k.second]));
    return std::max(mi, 0.0);
  };

  AnonymityEstimate est;
  est.plugin = plugin_mi(speakers);
  const int perms = 50;
  std::vector<int> shuffled = speakers;
  int ge = 0;
  double null_sum = 0.0;
  for (int b = 0; b < perms; ++b) {
    for (int i = sessions - 1; i > 0; --i)
      std::swap(shuffled[i], shuffled[rng.integer(static_cast<std::uint64_t>(i) + 1)]);
    double v = plugin_mi(shuffled);
    null_sum += v;
    if (v >= est.plugin) ++ge;
  }
  est.null_mean = null_sum / perms;
  est.corrected = est.plugin - est.null_mean;
  est.p_value = static_cast<double>(ge + 1) / (perms + 1);
  return est;
}

}  // namespace qsec::anonring
