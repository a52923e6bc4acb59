#ifndef QSEC_BB84_HPP
#define QSEC_BB84_HPP

#include <optional>
#include <vector>

#include "qsec/infobounds.hpp"
#include "qsec/lincode.hpp"
#include "qsec/qlinalg.hpp"

// Used-bits-BB84 simulator: pluggable attacks, the 0/1 symmetrization
// transform, Eve-state purification spectra, the tight and loose
// distinguishability bounds, the sampling lemma, and the end-to-end
// security-criterion estimate.

namespace qsec::bb84 {

/// Bit string of arbitrary length (the protocol runs up to 2n = 512 bits).
class BitString {
public:
  BitString() = default;
  explicit BitString(int nbits) : n_(nbits), w_((nbits + 63) / 64, 0) {}
  BitString(int nbits, word_t low) : BitString(nbits) {
    if (nbits > 0) w_[0] = low & mask_low(nbits);
  }

  int size() const { return n_; }
  bool get(int i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
  void set(int i, bool v) {
    word_t bit = word_t{1} << (i & 63);
    if (v)
      w_[i >> 6] |= bit;
    else
      w_[i >> 6] &= ~bit;
  }
  int weight() const;
  BitString operator^(const BitString& o) const;
  bool operator==(const BitString& o) const { return n_ == o.n_ && w_ == o.w_; }
  word_t low_word() const { return w_.empty() ? 0 : w_[0]; }

  static BitString random(int nbits, Rng& rng);
  /// Exactly `ones` one-bits placed uniformly at random.
  static BitString random_balanced(int nbits, int ones, Rng& rng);

private:
  static word_t mask_low(int nbits) {
    return nbits >= 64 ? ~word_t{0} : (word_t{1} << nbits) - 1;
  }
  int n_ = 0;
  std::vector<word_t> w_;
};

enum class DistancePolicy { kConservative, kRlc };
enum class AttackKind { kNone, kInterceptResend, kSwap, kHalfSwap, kCustom };

struct Attack {
  AttackKind kind = AttackKind::kNone;
  std::optional<AttackUnitary> custom;  // acts on all 2n qubits; 2n <= 4

  static Attack none() { return {}; }
  static Attack intercept_resend() { return {AttackKind::kInterceptResend, std::nullopt}; }
  static Attack swap() { return {AttackKind::kSwap, std::nullopt}; }
  static Attack half_swap() { return {AttackKind::kHalfSwap, std::nullopt}; }
};

/// One ECC+PA block covering `bits` consecutive info-bit positions.
struct SchemeBlock {
  int offset = 0;
  int bits = 0;
  PaScheme scheme;
  BinaryLinearCode ecc_code;  // code cut out by the ECC parity strings
  int correction_radius = 0;
  int vhat = 0;
};

struct ProtocolConfig {
  int n = 16;               // info/test bits per side; the round uses 2n qubits
  double p_allowed = 0.05;
  double eps_rel = 0.01;
  double eps_sec = 0.01;
  DistancePolicy policy = DistancePolicy::kConservative;
  double noise_flip = 0.0;  // iid channel bit-flip rate, attributed to Eve
  int block_bits = 16;      // scheme blocking for n > 24

  void validate() const;
};

/// Seeded scheme generation meeting the distance constraints per block;
/// rejection-sampled, with the rejection count reported.
struct GeneratedScheme {
  std::vector<SchemeBlock> blocks;
  int rejections = 0;
  int key_bits = 0;  // one PA string per block
};
GeneratedScheme make_scheme(const ProtocolConfig& cfg, Rng& rng);

struct RoundTranscript {
  BitString i, b, s, j;  // 2n-bit; s bit set = information position
  BitString i_t, j_t, c_t, i_i, j_i;  // n-bit, packed in position order
  double p_test = 0.0;
  bool pass = false;
  std::vector<word_t> ecc_parities;  // per block, announced
  word_t alice_key = 0, bob_key = 0;
  bool decode_failed = false;
  int scheme_rejections = 0;
};

RoundTranscript run_protocol(const ProtocolConfig& cfg, const Attack& attack, std::uint64_t seed);

/// 0/1 symmetrization: probe gains one |+> ancilla per message qubit,
/// conjugated by controlled-(sigma_x sigma_z). Message register size must
/// stay materializable (<= 4 qubits, probe after symmetrization <= 8 qubits).
AttackUnitary symmetrize(const AttackUnitary& u);

/// Probe components of an attack when Alice encodes and Bob measures in the
/// bases given by bmask (bit l set = x basis on message bit l).
std::vector<std::vector<Vec>> components_in_basis(const AttackUnitary& a, word_t bmask);

struct EveContext {
  std::vector<double> d_sq;   // indexed by the info error string l
  std::vector<Vec> phi;       // purifications |phi_i>, normalized per context
  double p_jt = 0.0;          // p(j_T | i_T, b, s)
  int n_info = 0;
};

/// Spectrum d_l^2 for the given test data; attack must be symmetrized.
/// Positions with s-bit set are information bits; i_t/j_t are packed in
/// ascending position order.
EveContext eve_spectrum(const AttackUnitary& sym, word_t i_t, word_t j_t, word_t bmask, word_t smask,
                        int total_bits);

/// max_c | P(c_I | conjugate bases) - d_{c_I}^2 |, both sides computed
/// independently.
double conjugate_error_check(const AttackUnitary& sym, word_t i_t, word_t j_t, word_t bmask,
                             word_t smask, int total_bits);

struct SdBounds {
  double tight;  // Eq. alpha + tail/alpha
  double loose;  // 2^r * tight form
  double alpha;
  double tail;
};
SdBounds sd_bounds(const std::vector<double>& d_sq, int vhat, int r,
                   std::optional<double> alpha = std::nullopt);

struct SdExact {
  double half_trace_norm;
  double oracle_info;
};
SdExact sd_exact(const Mat& rho0, const Mat& rho1);

struct HoeffdingReport {
  double empirical;
  double bound;  // e^{-n eps^2 / 2}
  double sigma;  // binomial std error of the empirical frequency
};
HoeffdingReport hoeffding_check(int n, double p_a, double eps, int trials, std::uint64_t seed);

struct SecurityEstimate {
  double lhs;            // sum_ctx P(pass, ctx) * I_bound(ctx)
  double rhs;            // 2 m sqrt(h), h exact for the attack
  double h;              // P[(|c_I| >= vhat/2) and (|c_T| <= p_a n)]
  double hoeffding_h;    // e^{-n eps^2/2} when eps = vhat/2n - p_a > 0
  double criterion_lhs;  // P[pass and I_bound >= I'] with I' = sqrt(rhs)
  double criterion_rhs;  // I'
  int key_bits;
};

/// Exhaustive context enumeration at 2n <= 4 for custom symmetrized attacks.
SecurityEstimate security_estimate(const ProtocolConfig& cfg, const AttackUnitary& sym,
                                   const PaScheme& scheme);

/// Analytic enumeration for the half-swap attack at small n.
SecurityEstimate security_estimate_half_swap(int n, double p_a, const PaScheme& scheme);

struct ReductionResult {
  bool aborted = false;
  double match_fraction = 0.0;
  BitString i, b;  // the retained 2n-bit instance
};
/// Original-BB84 sifting with n'' = ceil((4 + delta_num) n) transmissions.
ReductionResult full_bb84_reduction(int n, double delta_num, std::uint64_t seed);

}  // namespace qsec::bb84

#endif  // QSEC_BB84_HPP
