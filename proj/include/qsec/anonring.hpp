#ifndef QSEC_ANONRING_HPP
#define QSEC_ANONRING_HPP

#include <optional>
#include <string>
#include <vector>

#include "qsec/infobounds.hpp"
#include "qsec/lincode.hpp"
#include "qsec/qlinalg.hpp"

// N-participant anonymous-broadcast ring: Bell-pair/teleportation rounds,
// classical post-processing over a nested code pair, the QECC variant, and
// the two-sided-attack security bound.

namespace qsec::anonring {

struct RingConfig {
  int n_users = 5;   // N >= 3
  double alpha = 1.0;  // p_test = alpha / N
  double gamma = 1.0;  // p_speak = gamma / N
  double link_noise_z = 0.0;  // per transmitted qubit
  double link_noise_x = 0.0;

  void validate() const;
  double p_test() const { return alpha / n_users; }
  double p_speak() const { return gamma / n_users; }
};

/// Announcement log with the protocol's ordering enforced structurally:
/// step-4 entries cannot be appended before every step-3 entry exists, and
/// step-5 entries require step 4 to be complete.
class RoundRecord {
public:
  explicit RoundRecord(int n_users);

  void announce_step3(int user, int value);
  void announce_step4(int user, bool tested);
  void announce_step5(int user, const std::string& kind, int value);

  int n_users() const { return n_; }
  bool step3_complete() const;
  bool step4_complete() const;
  int step3_value(int user) const;
  bool tested(int user) const;
  const std::vector<std::tuple<int, std::string, int>>& step5_entries() const { return step5_; }

private:
  int n_;
  std::vector<std::optional<int>> step3_;
  std::vector<std::optional<bool>> step4_;
  std::vector<std::tuple<int, std::string, int>> step5_;
};

struct RoundResult {
  RoundRecord record;
  bool info_bit = false;             // no user tested
  std::vector<int> kprime;           // per-user x-type Bell bit (valid when info_bit)
  std::vector<bool> tester;
  std::vector<int> z_errors;         // sampled/planted sigma_z per link
  std::vector<int> x_errors;
  int kprime_parity = 0;             // xor of kprime (info rounds)
};

/// One protocol round on a 2N-qubit statevector. Optional planted error
/// masks override the sampled link noise (bit i = link from user i).
RoundResult run_round(const RingConfig& cfg, std::uint64_t seed,
                      std::optional<word_t> plant_z = std::nullopt,
                      std::optional<word_t> plant_x = std::nullopt,
                      std::optional<word_t> force_testers = std::nullopt);

struct TestStatistics {
  double p_use_hat = 0.0;
  double p_use_formula = 0.0;          // (1 - alpha/N)^N
  std::vector<double> channel_freq;    // empirical P_test(C_l^+), l = 1..N-1
  std::vector<double> channel_formula;
};
/// Classical sampling of the testing pattern only.
TestStatistics test_statistics(const RingConfig& cfg, int rounds, std::uint64_t seed);

struct BroadcastResult {
  word_t output = 0;
  bool ok = false;
  word_t corrected_error = 0;
};
/// Classical post-processing: user i announces a_i = kprime_i xor u_i with
/// u_i encoding message_i (NULL encodes 0); decode recovers xor of messages.
BroadcastResult broadcast_session(const NestedCodePair& pair, const std::vector<word_t>& kprime,
                                  const std::vector<std::optional<word_t>>& messages, Rng& rng,
                                  int correction_radius = -1);

struct CollisionStats {
  int sessions_until_clear = 0;  // sessions until both colliding speakers got through
  bool truncated = false;
};
/// Two users collide, then retry independently with probability gamma/N per
/// session; retries capped at 10^3.
CollisionStats simulate_collision_retries(const RingConfig& cfg, const NestedCodePair& pair,
                                          std::uint64_t seed);

struct QeccResult {
  bool aborted = false;
  std::string abort_reason;
  bool tester_hit_protected_bit = false;
  word_t output = 0;      // xor of messages (valid when !aborted)
  bool output_ok = false;
  int x_test_errors = 0;  // central fidelity bookkeeping from the public log
  int z_test_errors = 0;
  std::vector<word_t> kz_announced;  // classical transcript sample (z keys)
};
/// QECC-variant round (steps 1-11) on an (n + l_x + l_z)-qubit statevector;
/// n + l_x + l_z <= 12.
QeccResult qecc_round(const RingConfig& cfg, const NestedCodePair& css, int l_x, int l_z,
                      const std::vector<std::optional<word_t>>& messages, std::uint64_t seed,
                      double p_test_x = -1.0);

struct TwoSidedAttack {
  int n;          // message qubits, n <= 2
  int probe_dim;  // shared ancilla for both stages
  Mat u;          // before the user, on probe (x) message
  Mat v;          // after the user, on probe (x) message

  TwoSidedAttack(int n_, int probe_dim_, Mat u_, Mat v_);
};

struct TwoSidedReport {
  double f_u;         // x-basis no-error probability of U alone
  double f_uv;        // Fourier no-error probability of V U
  double f_min;
  double bound;       // (4 + 4 sqrt 2) H(F(K)) sqrt(1 - F_min)
  double decomposed;  // H(F(K)) (4 sqrt(1-F_UV) + 4 sqrt2 sqrt(1-F_U))
  double oracle;      // witness lower bound on I(F(M);E|A,X)
  double h_fk;
};
TwoSidedReport two_sided_bound(const TwoSidedAttack& attack, const std::vector<int>& f,
                               int witness_bases = 160);

enum class EveModel { kAnnouncementsOnly, kCorruptInsider };

struct AnonymityEstimate {
  double plugin = 0.0;     // plug-in MI(speaker; observable)
  double null_mean = 0.0;  // permutation-null bias estimate
  double corrected = 0.0;  // plugin - null_mean
  double p_value = 1.0;
};
/// Sessions with exactly one (uniform) speaker; observable is the low bit of
/// every user's announcement, plus the insider's decoded message flag under
/// kCorruptInsider.
AnonymityEstimate anonymity_metric(const RingConfig& cfg, const NestedCodePair& pair,
                                   EveModel model, int sessions, std::uint64_t seed,
                                   int insider = 0);

}  // namespace qsec::anonring

#endif  // QSEC_ANONRING_HPP
