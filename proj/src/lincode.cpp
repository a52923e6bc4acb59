#include "qsec/lincode.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qsec {

namespace gf2 {

int weight(word_t w) { return __builtin_popcountll(w); }
int dot(word_t a, word_t b) { return __builtin_parityll(a & b); }

int rank(std::vector<word_t> rows, int ncols) {
  int r = 0;
  for (int col = 0; col < ncols && r < static_cast<int>(rows.size()); ++col) {
    const word_t bit = word_t{1} << col;
    int pivot = -1;
    for (int i = r; i < static_cast<int>(rows.size()); ++i)
      if (rows[i] & bit) {
        pivot = i;
        break;
      }
    if (pivot < 0) continue;
    std::swap(rows[r], rows[pivot]);
    for (int i = 0; i < static_cast<int>(rows.size()); ++i)
      if (i != r && (rows[i] & bit)) rows[i] ^= rows[r];
    ++r;
  }
  return r;
}

std::vector<word_t> null_space(const std::vector<word_t>& rows_in, int ncols) {
  std::vector<word_t> rows = rows_in;
  std::vector<int> pivot_col;
  int r = 0;
  for (int col = 0; col < ncols && r < static_cast<int>(rows.size()); ++col) {
    const word_t bit = word_t{1} << col;
    int pivot = -1;
    for (int i = r; i < static_cast<int>(rows.size()); ++i)
      if (rows[i] & bit) {
        pivot = i;
        break;
      }
    if (pivot < 0) continue;
    std::swap(rows[r], rows[pivot]);
    for (int i = 0; i < static_cast<int>(rows.size()); ++i)
      if (i != r && (rows[i] & bit)) rows[i] ^= rows[r];
    pivot_col.push_back(col);
    ++r;
  }
  std::vector<bool> is_pivot(ncols, false);
  for (int c : pivot_col) is_pivot[c] = true;
  std::vector<word_t> basis;
  for (int free_col = 0; free_col < ncols; ++free_col) {
    if (is_pivot[free_col]) continue;
    word_t v = word_t{1} << free_col;
    for (int i = 0; i < r; ++i)
      if (rows[i] & (word_t{1} << free_col)) v |= word_t{1} << pivot_col[i];
    basis.push_back(v);
  }
  return basis;
}

}  // namespace gf2

void BinaryLinearCode::validate() const {
  if (n < 1 || n > 63 || k < 1 || k >= n) throw std::invalid_argument("code: bad (n, k)");
  if (static_cast<int>(generator.size()) != k ||
      static_cast<int>(parity_check.size()) != n - k)
    throw std::invalid_argument("code: wrong matrix shapes");
  if (gf2::rank(generator, n) != k) throw std::invalid_argument("code: G not full rank");
  if (gf2::rank(parity_check, n) != n - k) throw std::invalid_argument("code: H not full rank");
  for (word_t g : generator)
    for (word_t h : parity_check)
      if (gf2::dot(g, h)) throw std::invalid_argument("code: G.H^T != 0");
}

word_t BinaryLinearCode::encode(word_t message) const {
  word_t w = 0;
  for (int i = 0; i < k; ++i)
    if (message & (word_t{1} << i)) w ^= generator[i];
  return w;
}

word_t BinaryLinearCode::syndrome(word_t word) const {
  word_t s = 0;
  for (size_t i = 0; i < parity_check.size(); ++i)
    if (gf2::dot(parity_check[i], word)) s |= word_t{1} << i;
  return s;
}

BinaryLinearCode random_linear_code(int n, int k, Rng& rng) {
  if (n < 2 || n > 63 || k < 1 || k >= n) throw std::invalid_argument("random_linear_code: bad (n, k)");
  const word_t mask = (n == 63) ? ~word_t{0} >> 1 : (word_t{1} << n) - 1;
  BinaryLinearCode code;
  code.n = n;
  code.k = k;
  while (true) {  // resample until full rank
    code.generator.clear();
    for (int i = 0; i < k; ++i) {
      code.generator.push_back(rng.integer(word_t{1} << n) & mask);
    }
    if (gf2::rank(code.generator, n) == k) break;
  }
  code.parity_check = gf2::null_space(code.generator, n);
  code.validate();
  return code;
}

BinaryLinearCode dual(const BinaryLinearCode& code) {
  BinaryLinearCode d;
  d.n = code.n;
  d.k = code.n - code.k;
  d.generator = code.parity_check;
  d.parity_check = code.generator;
  d.validate();
  return d;
}

int min_distance(const BinaryLinearCode& code) {
  if (code.cached_min_distance) return *code.cached_min_distance;
  if (code.k > 24) throw std::invalid_argument("min_distance: k > 24");
  int best = code.n + 1;
  word_t cw = 0;
  const word_t total = word_t{1} << code.k;
  for (word_t m = 1; m < total; ++m) {
    // Gray-code step: flip the generator row of the changed bit.
    word_t gray_prev = (m - 1) ^ ((m - 1) >> 1);
    word_t gray = m ^ (m >> 1);
    cw ^= code.generator[__builtin_ctzll(gray ^ gray_prev)];
    if (cw) best = std::min(best, gf2::weight(cw));
  }
  code.cached_min_distance = best;
  return best;
}

bool min_distance_at_least(const BinaryLinearCode& code, int d) {
  if (code.cached_min_distance) return *code.cached_min_distance >= d;
  if (code.k > 24) throw std::invalid_argument("min_distance_at_least: k > 24");
  word_t cw = 0;
  const word_t total = word_t{1} << code.k;
  for (word_t m = 1; m < total; ++m) {
    word_t gray_prev = (m - 1) ^ ((m - 1) >> 1);
    word_t gray = m ^ (m >> 1);
    cw ^= code.generator[__builtin_ctzll(gray ^ gray_prev)];
    if (cw && gf2::weight(cw) < d) return false;
  }
  return true;
}

int dual_distance_macwilliams(const BinaryLinearCode& code) {
  if (code.k > 24) throw std::invalid_argument("dual_distance_macwilliams: k > 24");
  const int n = code.n;
  std::vector<double> a(n + 1, 0.0);  // primal weight enumerator
  word_t cw = 0;
  a[0] = 1.0;
  const word_t total = word_t{1} << code.k;
  for (word_t m = 1; m < total; ++m) {
    word_t gray_prev = (m - 1) ^ ((m - 1) >> 1);
    word_t gray = m ^ (m >> 1);
    cw ^= code.generator[__builtin_ctzll(gray ^ gray_prev)];
    a[gf2::weight(cw)] += 1.0;
  }
  // B_j = (1/|C|) sum_i A_i K_j(i) with Krawtchouk K_j(i).
  std::vector<double> b(n + 1, 0.0);
  for (int j = 0; j <= n; ++j) {
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
      if (a[i] == 0.0) continue;
      // K_j(i) = sum_l (-1)^l C(i,l) C(n-i, j-l)
      double kji = 0.0;
      for (int l = std::max(0, j - (n - i)); l <= std::min(i, j); ++l) {
        double c1 = 1.0, c2 = 1.0;
        for (int t = 0; t < l; ++t) c1 = c1 * (i - t) / (t + 1);
        for (int t = 0; t < j - l; ++t) c2 = c2 * (n - i - t) / (t + 1);
        kji += (l % 2 ? -1.0 : 1.0) * c1 * c2;
      }
      sum += a[i] * kji;
    }
    b[j] = sum / static_cast<double>(total);
  }
  for (int j = 1; j <= n; ++j)
    if (b[j] > 0.5) return j;
  return n + 1;
}

DecodeResult syndrome_decode(word_t word, const BinaryLinearCode& code, int max_weight) {
  if (code.n > 28) throw std::invalid_argument("syndrome_decode: n > 28");
  const word_t target = code.syndrome(word);
  if (max_weight < 0) max_weight = code.n;

  DecodeResult res;
  if (target == 0) {
    res.codeword = word;
    res.ok = true;
    return res;
  }
  // Error patterns scanned by weight, lexicographically within a weight, so
  // the first hit is the deterministic coset leader; a second hit at the same
  // weight flags a tie.
  for (int w = 1; w <= max_weight; ++w) {
    word_t found = 0;
    bool have = false, tie = false;
    // enumerate n-bit masks of weight w in increasing value
    word_t e = (word_t{1} << w) - 1;
    const word_t limit = word_t{1} << code.n;
    while (e < limit) {
      if (code.syndrome(e) == target) {
        if (!have) {
          have = true;
          found = e;
        } else {
          tie = true;
          break;
        }
      }
      word_t c = e & (~e + 1);
      word_t r = e + c;
      e = (((r ^ e) >> 2) / c) | r;
    }
    if (have) {
      res.error = found;
      res.codeword = word ^ found;
      res.ok = true;
      res.tie = tie;
      return res;
    }
  }
  return res;  // ok = false
}

NestedCodePair::NestedCodePair(BinaryLinearCode outer, BinaryLinearCode inner)
    : c1(std::move(outer)), c2(std::move(inner)) {
  c1.validate();
  c2.validate();
  if (c1.n != c2.n) throw std::invalid_argument("NestedCodePair: lengths differ");
  if (c2.k >= c1.k) throw std::invalid_argument("NestedCodePair: need dim C2 < dim C1");
  for (word_t g : c2.generator)
    if (c1.syndrome(g) != 0) throw std::invalid_argument("NestedCodePair: C2 not inside C1");
  build_message_map();
}

void NestedCodePair::build_message_map() {
  const int mb = message_bits();
  const int h2_rows = c2.n - c2.k;
  // Rows s_i = H2 . (G1 row i) as bit strings of length h2_rows; paired with
  // the generating combination so solutions come out as codewords.
  std::vector<std::pair<word_t, word_t>> rows;  // (syndrome bits, c1 codeword)
  for (int i = 0; i < c1.k; ++i) rows.push_back({c2.syndrome(c1.generator[i]), c1.generator[i]});

  pivot_cols_.clear();
  int r = 0;
  for (int col = 0; col < h2_rows && r < static_cast<int>(rows.size()); ++col) {
    const word_t bit = word_t{1} << col;
    int pivot = -1;
    for (int i = r; i < static_cast<int>(rows.size()); ++i)
      if (rows[i].first & bit) {
        pivot = i;
        break;
      }
    if (pivot < 0) continue;
    std::swap(rows[r], rows[pivot]);
    for (int i = 0; i < static_cast<int>(rows.size()); ++i)
      if (i != r && (rows[i].first & bit)) {
        rows[i].first ^= rows[r].first;
        rows[i].second ^= rows[r].second;
      }
    pivot_cols_.push_back(col);
    ++r;
  }
  if (r != mb) throw std::logic_error("NestedCodePair: message map rank mismatch");
  msg_codeword_.assign(mb, 0);
  for (int j = 0; j < mb; ++j) msg_codeword_[j] = rows[j].second;
}

word_t NestedCodePair::message_of(word_t codeword) const {
  word_t syn = c2.syndrome(codeword);
  word_t m = 0;
  for (size_t j = 0; j < pivot_cols_.size(); ++j)
    if (syn & (word_t{1} << pivot_cols_[j])) m |= word_t{1} << j;
  return m;
}

word_t NestedCodePair::encode_message(word_t m, Rng* rng) const {
  word_t u = 0;
  for (size_t j = 0; j < msg_codeword_.size(); ++j)
    if (m & (word_t{1} << j)) u ^= msg_codeword_[j];
  if (rng)  // fresh C2 word; message_of is constant on the coset
    for (word_t g : c2.generator)
      if (rng->bernoulli(0.5)) u ^= g;
  return u;
}

word_t coset_broadcast_encode(word_t message, const NestedCodePair& pair, Rng& rng) {
  if (message >> pair.message_bits())
    throw std::invalid_argument("coset_broadcast_encode: message too long");
  word_t u = pair.encode_message(message, &rng);
  if (pair.message_of(u) != message) throw std::logic_error("coset_broadcast_encode: map mismatch");
  return u;
}

BroadcastDecodeResult coset_broadcast_decode(const std::vector<word_t>& announced,
                                             const NestedCodePair& pair, int max_weight) {
  word_t x = 0;
  for (word_t a : announced) x ^= a;
  DecodeResult dec = syndrome_decode(x, pair.c1, max_weight);
  BroadcastDecodeResult out;
  if (!dec.ok) return out;
  out.ok = true;
  out.corrected_error = dec.error;
  out.message = pair.message_of(dec.codeword);
  return out;
}

PaScheme::PaScheme(int n_, std::vector<word_t> ecc_, std::vector<word_t> pa_)
    : n(n_), ecc(std::move(ecc_)), pa(std::move(pa_)) {
  if (n < 1 || n > 63) throw std::invalid_argument("PaScheme: bad n");
  if (pa.empty()) throw std::invalid_argument("PaScheme: no PA strings");
  std::vector<word_t> all = ecc;
  all.insert(all.end(), pa.begin(), pa.end());
  if (static_cast<int>(all.size()) > 24)
    throw std::invalid_argument("PaScheme: r + m > 24, span not enumerable");
  if (gf2::rank(all, n) != static_cast<int>(all.size()))
    throw std::invalid_argument("PaScheme: strings not linearly independent");
}

namespace {

// min over the span of `basis` of |v xor w|, zero word included.
int min_dist_to_span(const std::vector<word_t>& basis, word_t v) {
  int best = gf2::weight(v);
  word_t w = 0;
  const word_t total = word_t{1} << basis.size();
  for (word_t m = 1; m < total; ++m) {
    word_t gray_prev = (m - 1) ^ ((m - 1) >> 1);
    word_t gray = m ^ (m >> 1);
    w ^= basis[__builtin_ctzll(gray ^ gray_prev)];
    best = std::min(best, gf2::weight(v ^ w));
  }
  return best;
}

}  // namespace

int pa_min_distance(const PaScheme& scheme, word_t v) {
  std::vector<word_t> basis = scheme.ecc;
  for (word_t s : scheme.pa)
    if (s != v) basis.push_back(s);
  // if v is dependent on the basis the distance degenerates to 0; allowed
  return min_dist_to_span(basis, v);
}

int pa_scheme_min_distance(const PaScheme& scheme) {
  // elements of span(ECC u PA) with nonzero PA coefficients
  const int r = scheme.r(), m = scheme.m();
  int best = scheme.n + 1;
  const word_t total = word_t{1} << (r + m);
  for (word_t coeff = 1; coeff < total; ++coeff) {
    if ((coeff >> r) == 0) continue;  // PA part zero
    word_t w = 0;
    for (int i = 0; i < r; ++i)
      if (coeff & (word_t{1} << i)) w ^= scheme.ecc[i];
    for (int j = 0; j < m; ++j)
      if (coeff & (word_t{1} << (r + j))) w ^= scheme.pa[j];
    best = std::min(best, gf2::weight(w));
  }
  return best;
}

double threshold_solve() {
  auto f = [](double p) { return 1.0 - binary_entropy(2.0 * p) - binary_entropy(p); };
  double lo = 1e-9, hi = 0.25;
  while (hi - lo > 1e-8) {
    double mid = 0.5 * (lo + hi);
    if (f(mid) > 0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

RateRegionReport rate_region_check(double p_a, double eps_rel, double eps_sec, int n, int r, int m) {
  if (n < 1 || r < 0 || m < 0) throw std::invalid_argument("rate_region_check: bad sizes");
  auto h2c = [](double x) { return binary_entropy(std::min(std::max(x, 0.0), 1.0)); };
  const double h_rel = h2c(p_a + eps_rel + 1.0 / n);
  const double h_sec = h2c(2.0 * p_a + 2.0 * eps_sec);
  RateRegionReport rep;
  rep.reliability_slack = static_cast<double>(r) / n - h_rel;
  rep.security_slack = 1.0 - static_cast<double>(m) / n - h_sec - h_rel;
  rep.reliability_ok = rep.reliability_slack > 0;
  rep.security_ok = rep.security_slack > 0;
  return rep;
}

double gallager_bound(int n, int r, double delta) {
  if (delta <= 0.0 || delta >= 0.5) throw std::invalid_argument("gallager_bound: delta in (0, 1/2)");
  const double c = 1.0 / (1.0 - 2.0 * delta) * std::sqrt((1.0 - delta) / (2.0 * std::numbers::pi * delta));
  return c / std::sqrt(static_cast<double>(n)) *
         std::pow(2.0, n * (binary_entropy(delta) - static_cast<double>(r) / n));
}

}  // namespace qsec
