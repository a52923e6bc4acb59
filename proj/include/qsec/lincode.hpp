#ifndef QSEC_LINCODE_HPP
#define QSEC_LINCODE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "qsec/qlinalg.hpp"

// Binary linear codes at desk scale: random generation, exact minimum
// distance, syndrome decoding, nested pairs for the coset broadcast channel,
// parity-amplification distances, and the rate/threshold formulas.

namespace qsec {

using word_t = std::uint64_t;  // packed bit string, explicit length elsewhere

namespace gf2 {
int weight(word_t w);
int dot(word_t a, word_t b);  // parity of a & b
/// Row-reduce in place; returns rank. Rows are packed words of length ncols.
int rank(std::vector<word_t> rows, int ncols);
/// Basis of the null space {x : rows . x = 0 for all rows} (each row a parity).
std::vector<word_t> null_space(const std::vector<word_t>& rows, int ncols);
}  // namespace gf2

struct BinaryLinearCode {
  int n = 0;
  int k = 0;
  std::vector<word_t> generator;     // k rows
  std::vector<word_t> parity_check;  // n-k rows
  mutable std::optional<int> cached_min_distance;

  void validate() const;  // G full rank, H full rank, G.H^T = 0
  word_t encode(word_t message) const;  // message has k bits
  word_t syndrome(word_t word) const;   // n-k bits
};

BinaryLinearCode random_linear_code(int n, int k, Rng& rng);

/// Code generated by the parity-check matrix of `code`.
BinaryLinearCode dual(const BinaryLinearCode& code);

/// Exact minimum weight over nonzero codewords; k <= 24.
int min_distance(const BinaryLinearCode& code);

/// Early-exit check min_distance(code) >= d; cheap on rejects.
bool min_distance_at_least(const BinaryLinearCode& code, int d);

/// Smallest nonzero weight via the MacWilliams transform of the primal weight
/// enumerator; independent route to min_distance(dual(code)).
int dual_distance_macwilliams(const BinaryLinearCode& code);

struct DecodeResult {
  word_t codeword = 0;
  word_t error = 0;
  bool ok = false;
  bool tie = false;  // minimal-weight leader was ambiguous; lexicographic pick
};
/// Nearest-codeword decoding: coset-leader table for n <= 20, bounded-radius
/// search for n <= 28.
DecodeResult syndrome_decode(word_t word, const BinaryLinearCode& code, int max_weight = -1);

struct NestedCodePair {
  BinaryLinearCode c1;
  BinaryLinearCode c2;  // subset of c1

  NestedCodePair(BinaryLinearCode outer, BinaryLinearCode inner);
  int message_bits() const { return c1.k - c2.k; }

  /// Linear isomorphism between C1/C2 cosets and message strings.
  word_t message_of(word_t codeword) const;
  /// Some u in C1 with message_of(u) = m; a random C2 word is added for key
  /// freshness when an rng is supplied.
  word_t encode_message(word_t m, Rng* rng = nullptr) const;

private:
  std::vector<int> pivot_cols_;       // of H2 restricted to C1
  std::vector<word_t> msg_codeword_;  // per message unit vector
  void build_message_map();
};

word_t coset_broadcast_encode(word_t message, const NestedCodePair& pair, Rng& rng);

struct BroadcastDecodeResult {
  word_t message = 0;
  word_t corrected_error = 0;
  bool ok = false;
};
BroadcastDecodeResult coset_broadcast_decode(const std::vector<word_t>& announced,
                                             const NestedCodePair& pair, int max_weight = -1);

/// ECC parity strings v_1..v_r plus PA strings v_{r+1}..v_{r+m}, all length n;
/// combined strings linearly independent.
struct PaScheme {
  int n = 0;
  std::vector<word_t> ecc;
  std::vector<word_t> pa;

  PaScheme(int n_, std::vector<word_t> ecc_, std::vector<word_t> pa_);
  int r() const { return static_cast<int>(ecc.size()); }
  int m() const { return static_cast<int>(pa.size()); }
};

/// Per-string quantity: min over w in span(ECC plus the other PA strings) of
/// |v xor w| (the zero string included, so |v| itself counts).
int pa_min_distance(const PaScheme& scheme, word_t v);

/// Scheme-level quantity: min weight over elements of span(ECC u PA) whose PA
/// component is nonzero. Lower-bounds every per-string value.
int pa_scheme_min_distance(const PaScheme& scheme);

/// Root of 1 - H2(2p) - H2(p) = 0 by bisection to 1e-8.
double threshold_solve();

struct RateRegionReport {
  bool reliability_ok = false;  // H2(p_a + eps_rel + 1/n) < r/n
  bool security_ok = false;     // H2(2p_a + 2eps_sec) + H2(...) < 1 - m/n
  double reliability_slack = 0.0;
  double security_slack = 0.0;
};
RateRegionReport rate_region_check(double p_a, double eps_rel, double eps_sec, int n, int r, int m);

/// c(delta)/sqrt(n) * 2^{n (H2(delta) - r/n)} with
/// c(delta) = 1/(1-2 delta) sqrt((1-delta)/(2 pi delta)).
double gallager_bound(int n, int r, double delta);

}  // namespace qsec

#endif  // QSEC_LINCODE_HPP
