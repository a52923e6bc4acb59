#include "qsec/bb84.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace qsec::bb84 {

namespace {

int parity(word_t x) { return __builtin_parityll(x); }

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

double h_entry(word_t v, word_t w, word_t bmask, int nbits) {
  // <v| H_b |w> on an nbits-qubit register
  if ((v & ~bmask) != (w & ~bmask)) return 0.0;
  int nb = __builtin_popcountll(bmask);
  double scale = std::pow(0.5, 0.5 * nb);
  return parity(v & w & bmask) ? -scale : scale;
}

}  // namespace

int BitString::weight() const {
  int w = 0;
  for (word_t x : w_) w += __builtin_popcountll(x);
  return w;
}

BitString BitString::operator^(const BitString& o) const {
  if (n_ != o.n_) throw std::invalid_argument("BitString: xor length mismatch");
  BitString r(n_);
  for (size_t i = 0; i < w_.size(); ++i) r.w_[i] = w_[i] ^ o.w_[i];
  return r;
}

BitString BitString::random(int nbits, Rng& rng) {
  BitString r(nbits);
  for (int i = 0; i < nbits; ++i) r.set(i, rng.bernoulli(0.5));
  return r;
}

BitString BitString::random_balanced(int nbits, int ones, Rng& rng) {
  if (ones < 0 || ones > nbits) throw std::invalid_argument("random_balanced: bad ones count");
  std::vector<int> idx(nbits);
  std::iota(idx.begin(), idx.end(), 0);
  for (int i = nbits - 1; i > 0; --i)
    std::swap(idx[i], idx[rng.integer(static_cast<std::uint64_t>(i) + 1)]);
  BitString r(nbits);
  for (int i = 0; i < ones; ++i) r.set(idx[i], true);
  return r;
}

void ProtocolConfig::validate() const {
  if (n < 1) throw std::invalid_argument("ProtocolConfig: n >= 1 required");
  if (p_allowed < 0 || p_allowed >= 0.5) throw std::invalid_argument("ProtocolConfig: p_allowed");
  if (eps_rel <= 0 || eps_sec <= 0) throw std::invalid_argument("ProtocolConfig: eps must be positive");
  if (p_allowed + eps_sec >= 0.5)
    throw std::invalid_argument("ProtocolConfig: p_allowed + eps_sec must stay below 1/2");
  if (block_bits < 2 || block_bits > 24) throw std::invalid_argument("ProtocolConfig: block_bits in 2..24");
}

GeneratedScheme make_scheme(const ProtocolConfig& cfg, Rng& rng) {
  cfg.validate();
  GeneratedScheme out;
  int done = 0;
  while (done < cfg.n) {
    const int nb = std::min(cfg.block_bits, cfg.n - done);
    if (nb < 2) throw std::invalid_argument("make_scheme: trailing block too small");
    const int t_req = static_cast<int>(std::ceil((cfg.p_allowed + cfg.eps_rel) * nb - 1e-12));
    const int d_req =
        cfg.policy == DistancePolicy::kConservative ? 2 * t_req + 1 : t_req + 1;
    const int vhat_req =
        std::max(1, static_cast<int>(std::ceil(2.0 * (cfg.p_allowed + cfg.eps_sec) * nb - 1e-12)));

    // number of PA (key) strings per block from the rate region, at least 1
    const double region =
        1.0 - binary_entropy(std::min(2.0 * (cfg.p_allowed + cfg.eps_sec), 1.0)) -
        binary_entropy(std::min(cfg.p_allowed + cfg.eps_rel + 1.0 / nb, 1.0));
    const int m_b = std::max(1, static_cast<int>(std::floor(region * nb)));

    // Hamming-bound starting point for the parity string count
    int r_start = 0;
    if (t_req > 0) {
      double vol = 0.0;
      for (int w = 0; w <= (d_req - 1) / 2; ++w) vol += binom(nb, w);
      r_start = std::max(1, static_cast<int>(std::ceil(std::log2(vol))));
    }

    bool placed = false;
    for (int r = r_start; r + m_b <= nb && r <= nb - 1 && !placed; ++r) {
      if (t_req > 0 && r == 0) continue;  // correction demanded but no parity strings
      const int attempts = 400;
      for (int a = 0; a < attempts && !placed; ++a) {
        std::vector<word_t> ecc, pa;
        const word_t mask = (word_t{1} << nb) - 1;
        for (int i = 0; i < r; ++i) ecc.push_back(rng.integer(word_t{1} << nb) & mask);
        for (int i = 0; i < m_b; ++i) pa.push_back(rng.integer(word_t{1} << nb) & mask);
        std::vector<word_t> all = ecc;
        all.insert(all.end(), pa.begin(), pa.end());
        if (gf2::rank(all, nb) != r + m_b) {
          ++out.rejections;
          continue;
        }
        std::optional<BinaryLinearCode> code;
        int d = nb;  // r = 0: no parity constraints, no correction power
        if (r >= 1) {
          BinaryLinearCode c;
          c.n = nb;
          c.k = nb - r;
          c.parity_check = ecc;
          c.generator = gf2::null_space(ecc, nb);
          if (static_cast<int>(c.generator.size()) != c.k ||
              !min_distance_at_least(c, d_req)) {
            ++out.rejections;
            continue;
          }
          d = min_distance(c);
          code = std::move(c);
        }
        PaScheme scheme(nb, ecc, pa);
        int vhat = pa_scheme_min_distance(scheme);
        if (vhat < vhat_req) {
          ++out.rejections;
          continue;
        }
        SchemeBlock blk{done, nb, std::move(scheme), std::move(code).value_or(BinaryLinearCode{}),
                        0, vhat};
        blk.correction_radius = r == 0 ? 0
                                : cfg.policy == DistancePolicy::kConservative ? (d - 1) / 2
                                                                              : d - 1;
        out.blocks.push_back(std::move(blk));
        placed = true;
      }
    }
    if (!placed)
      throw std::runtime_error("make_scheme: no block scheme satisfies the distance constraints");
    done += nb;
  }
  for (const SchemeBlock& blk : out.blocks) out.key_bits += blk.scheme.m();
  return out;
}

std::vector<std::vector<Vec>> components_in_basis(const AttackUnitary& a, word_t bmask) {
  const int md = a.msg_dim();
  // Columns of U (I (x) H_b) with probe input |0>, then (I (x) H_b) on the left.
  std::vector<Vec> cols(md, Vec::Zero(a.u.rows()));
  for (int i = 0; i < md; ++i) {
    for (int w = 0; w < md; ++w) {
      double h = h_entry(static_cast<word_t>(w), static_cast<word_t>(i), bmask, a.n);
      if (h != 0.0) cols[i] += h * a.u.col(w);
    }
  }
  std::vector<std::vector<Vec>> e(md, std::vector<Vec>(md, Vec::Zero(a.probe_dim)));
  for (int i = 0; i < md; ++i)
    for (int j = 0; j < md; ++j)
      for (int pe = 0; pe < a.probe_dim; ++pe) {
        cxd amp = 0.0;
        for (int jp = 0; jp < md; ++jp) {
          double h = h_entry(static_cast<word_t>(j), static_cast<word_t>(jp), bmask, a.n);
          if (h != 0.0) amp += h * cols[i](static_cast<Eigen::Index>(pe) * md + jp);
        }
        e[i][j](pe) = amp;
      }
  return e;
}

AttackUnitary symmetrize(const AttackUnitary& a) {
  const int md = a.msg_dim();
  const Eigen::Index total = static_cast<Eigen::Index>(md) * a.probe_dim * md;
  if (total > 1024) throw std::invalid_argument("symmetrize: attack too large to materialize");

  // Column for basis input (m, pe, v):
  //   P:     (m, pe, v)      -> (-1)^{v.m} (m, pe, v^m)
  //   I(x)U: |m> (x) U e_{(pe, v^m)}
  //   Pinv:  amplitude at (m, pe', j') picks (-1)^{j'.m} from (m, pe', j'^m)
  Mat out = Mat::Zero(total, total);
  for (int m = 0; m < md; ++m) {
    for (int pe = 0; pe < a.probe_dim; ++pe) {
      for (int v = 0; v < md; ++v) {
        const Eigen::Index col = (static_cast<Eigen::Index>(m) * a.probe_dim + pe) * md + v;
        const double sign_in = parity(static_cast<word_t>(v) & static_cast<word_t>(m)) ? -1.0 : 1.0;
        const Eigen::Index ucol = static_cast<Eigen::Index>(pe) * md + (v ^ m);
        for (int pe2 = 0; pe2 < a.probe_dim; ++pe2)
          for (int j = 0; j < md; ++j) {
            cxd amp = a.u(static_cast<Eigen::Index>(pe2) * md + j, ucol);
            if (amp == cxd(0.0, 0.0)) continue;
            const int jp = j ^ m;
            const double sign_out =
                parity(static_cast<word_t>(jp) & static_cast<word_t>(m)) ? -1.0 : 1.0;
            out((static_cast<Eigen::Index>(m) * a.probe_dim + pe2) * md + jp, col) +=
                sign_in * sign_out * amp;
          }
      }
    }
  }
  // The attack convention fixes the probe input to |0>, but the ancillas must
  // start in |+>^{2n}: rotate the ancilla input basis so |0> means |+>^{2n}.
  // (out * (H_anc (x) I)) computed blockwise to stay O(md * total^2 / md).
  Mat rotated = Mat::Zero(total, total);
  const double scale = std::pow(0.5, 0.5 * a.n);
  const Eigen::Index block = static_cast<Eigen::Index>(a.probe_dim) * md;
  for (int m2 = 0; m2 < md; ++m2)
    for (int m = 0; m < md; ++m) {
      double h = scale * (parity(static_cast<word_t>(m) & static_cast<word_t>(m2)) ? -1.0 : 1.0);
      rotated.middleCols(m2 * block, block) += h * out.middleCols(m * block, block);
    }
  return AttackUnitary(a.n, md * a.probe_dim, std::move(rotated));
}

RoundTranscript run_protocol(const ProtocolConfig& cfg, const Attack& attack, std::uint64_t seed) {
  cfg.validate();
  Rng rng(seed);
  const int n = cfg.n, total = 2 * n;

  RoundTranscript tr;
  tr.i = BitString::random(total, rng);
  tr.b = BitString::random(total, rng);
  tr.s = BitString::random_balanced(total, n, rng);  // set bit = information position

  // channel + attack: produce Bob's measured string j
  tr.j = BitString(total);
  switch (attack.kind) {
    case AttackKind::kNone:
      tr.j = tr.i;
      break;
    case AttackKind::kInterceptResend:
      for (int l = 0; l < total; ++l) {
        bool eve_basis = rng.bernoulli(0.5);
        if (eve_basis == tr.b.get(l))
          tr.j.set(l, tr.i.get(l));
        else
          tr.j.set(l, rng.bernoulli(0.5));
      }
      break;
    case AttackKind::kSwap:
      tr.j = BitString::random(total, rng);
      break;
    case AttackKind::kHalfSwap:
      tr.j = rng.bernoulli(0.5) ? BitString::random(total, rng) : tr.i;
      break;
    case AttackKind::kCustom: {
      if (!attack.custom) throw std::invalid_argument("run_protocol: custom attack missing");
      if (total > 4) throw std::invalid_argument("run_protocol: custom attacks capped at 2n <= 4");
      if (attack.custom->n != total)
        throw std::invalid_argument("run_protocol: custom attack must act on all 2n qubits");
      auto e = components_in_basis(*attack.custom, tr.b.low_word());
      const int md = 1 << total;
      const word_t iw = tr.i.low_word();
      std::vector<double> pj(md);
      double acc = 0.0;
      for (int j = 0; j < md; ++j) {
        pj[j] = e[iw][j].squaredNorm();
        acc += pj[j];
      }
      double u = rng.uniform() * acc;
      int picked = md - 1;
      for (int j = 0; j < md; ++j) {
        if (u < pj[j]) {
          picked = j;
          break;
        }
        u -= pj[j];
      }
      tr.j = BitString(total, static_cast<word_t>(picked));
      break;
    }
  }
  if (cfg.noise_flip > 0.0 && attack.kind != AttackKind::kCustom)
    for (int l = 0; l < total; ++l)
      if (rng.bernoulli(cfg.noise_flip)) tr.j.set(l, !tr.j.get(l));

  // split by s into test / information, packed in ascending position order
  tr.i_t = BitString(n);
  tr.j_t = BitString(n);
  tr.i_i = BitString(n);
  tr.j_i = BitString(n);
  {
    int ti = 0, ii = 0;
    for (int l = 0; l < total; ++l) {
      if (tr.s.get(l)) {
        tr.i_i.set(ii, tr.i.get(l));
        tr.j_i.set(ii, tr.j.get(l));
        ++ii;
      } else {
        tr.i_t.set(ti, tr.i.get(l));
        tr.j_t.set(ti, tr.j.get(l));
        ++ti;
      }
    }
  }
  tr.c_t = tr.i_t ^ tr.j_t;
  tr.p_test = static_cast<double>(tr.c_t.weight()) / n;
  tr.pass = tr.p_test <= cfg.p_allowed + 1e-15;
  if (!tr.pass) return tr;

  // ECC + PA on the information bits (lazy scheme generation from the seed)
  GeneratedScheme scheme = make_scheme(cfg, rng);
  tr.scheme_rejections = scheme.rejections;
  int key_bit = 0;
  for (const SchemeBlock& blk : scheme.blocks) {
    word_t ai = 0, bj = 0;
    for (int l = 0; l < blk.bits; ++l) {
      if (tr.i_i.get(blk.offset + l)) ai |= word_t{1} << l;
      if (tr.j_i.get(blk.offset + l)) bj |= word_t{1} << l;
    }
    word_t parities = 0;
    word_t corrected = bj;
    if (blk.scheme.r() > 0) {
      for (int si = 0; si < blk.scheme.r(); ++si)
        if (gf2::dot(blk.scheme.ecc[si], ai)) parities |= word_t{1} << si;
      // Bob: coset-leader correction toward Alice's announced parities
      word_t diff_syndrome = 0;
      for (int si = 0; si < blk.scheme.r(); ++si)
        if (gf2::dot(blk.scheme.ecc[si], bj) != ((parities >> si) & 1)) diff_syndrome |= word_t{1} << si;
      if (diff_syndrome != 0) {
        // decode the (virtual) word bj against the coset of ai
        DecodeResult dec = syndrome_decode(ai ^ bj, blk.ecc_code, blk.correction_radius);
        if (dec.ok && dec.codeword == 0)
          corrected = bj ^ dec.error;
        else if (dec.ok)
          corrected = bj ^ dec.error;  // corrected into the right coset; equality not guaranteed
        else
          tr.decode_failed = true;
      }
    }
    tr.ecc_parities.push_back(parities);
    for (const word_t v : blk.scheme.pa) {
      if (gf2::dot(v, ai)) tr.alice_key |= word_t{1} << key_bit;
      if (gf2::dot(v, corrected)) tr.bob_key |= word_t{1} << key_bit;
      ++key_bit;
    }
  }
  return tr;
}

namespace {

struct SplitMasks {
  std::vector<int> test_pos, info_pos;
};

SplitMasks split_positions(word_t smask, int total_bits) {
  SplitMasks sm;
  for (int l = 0; l < total_bits; ++l)
    if ((smask >> l) & 1)
      sm.info_pos.push_back(l);
    else
      sm.test_pos.push_back(l);
  return sm;
}

word_t interleave(word_t test_bits, word_t info_bits, const SplitMasks& sm) {
  word_t full = 0;
  for (size_t k = 0; k < sm.test_pos.size(); ++k)
    if ((test_bits >> k) & 1) full |= word_t{1} << sm.test_pos[k];
  for (size_t k = 0; k < sm.info_pos.size(); ++k)
    if ((info_bits >> k) & 1) full |= word_t{1} << sm.info_pos[k];
  return full;
}

word_t extract(word_t full, const std::vector<int>& pos) {
  word_t out = 0;
  for (size_t k = 0; k < pos.size(); ++k)
    if ((full >> pos[k]) & 1) out |= word_t{1} << k;
  return out;
}

}  // namespace

EveContext eve_spectrum(const AttackUnitary& sym, word_t i_t, word_t j_t, word_t bmask, word_t smask,
                        int total_bits) {
  if (sym.n != total_bits) throw std::invalid_argument("eve_spectrum: attack size mismatch");
  const SplitMasks sm = split_positions(smask, total_bits);
  const int n_info = static_cast<int>(sm.info_pos.size());
  if (n_info < 1 || n_info > 2) throw std::invalid_argument("eve_spectrum: info bits capped at 2");
  const int ni = 1 << n_info;

  auto e = components_in_basis(sym, bmask);
  double p_jt = 0.0;
  for (int ii = 0; ii < ni; ++ii)
    for (int ji = 0; ji < ni; ++ji)
      p_jt += e[interleave(i_t, static_cast<word_t>(ii), sm)]
               [interleave(j_t, static_cast<word_t>(ji), sm)]
                   .squaredNorm();
  p_jt /= ni;  // average over (uniform) i_I; equals each term after symmetrization

  EveContext ctx;
  ctx.n_info = n_info;
  ctx.p_jt = p_jt;
  if (p_jt < 1e-300) throw std::domain_error("eve_spectrum: context has probability zero");
  const double norm = 1.0 / std::sqrt(p_jt);

  const Eigen::Index phidim = static_cast<Eigen::Index>(sym.probe_dim) * ni;
  ctx.phi.assign(ni, Vec::Zero(phidim));
  for (int ii = 0; ii < ni; ++ii)
    for (int ji = 0; ji < ni; ++ji) {
      const Vec& comp =
          e[interleave(i_t, static_cast<word_t>(ii), sm)][interleave(j_t, static_cast<word_t>(ji), sm)];
      ctx.phi[ii].segment(static_cast<Eigen::Index>(ii ^ ji) * sym.probe_dim, sym.probe_dim) +=
          norm * comp;
    }
  ctx.d_sq.assign(ni, 0.0);
  for (int c = 0; c < ni; ++c) {
    Vec eta = Vec::Zero(phidim);
    for (int l = 0; l < ni; ++l)
      eta += (parity(static_cast<word_t>(c & l)) ? -1.0 : 1.0) * ctx.phi[l];
    eta /= static_cast<double>(ni);
    ctx.d_sq[c] = eta.squaredNorm();
  }
  return ctx;
}

double conjugate_error_check(const AttackUnitary& sym, word_t i_t, word_t j_t, word_t bmask,
                             word_t smask, int total_bits) {
  EveContext ctx = eve_spectrum(sym, i_t, j_t, bmask, smask, total_bits);
  const SplitMasks sm = split_positions(smask, total_bits);
  const int ni = 1 << static_cast<int>(sm.info_pos.size());

  // Direct route: re-express the attack with the information bases flipped.
  auto eo = components_in_basis(sym, bmask ^ smask);
  double p_jt = 0.0;
  std::vector<double> pc(ni, 0.0);
  for (int ii = 0; ii < ni; ++ii)
    for (int ji = 0; ji < ni; ++ji) {
      double w = eo[interleave(i_t, static_cast<word_t>(ii), sm)]
                   [interleave(j_t, static_cast<word_t>(ji), sm)]
                       .squaredNorm();
      p_jt += w;
      pc[ii ^ ji] += w;
    }
  if (p_jt < 1e-300) throw std::domain_error("conjugate_error_check: zero-probability context");
  double max_diff = 0.0;
  for (int c = 0; c < ni; ++c) max_diff = std::max(max_diff, std::abs(pc[c] / p_jt - ctx.d_sq[c]));
  return max_diff;
}

SdBounds sd_bounds(const std::vector<double>& d_sq, int vhat, int r, std::optional<double> alpha) {
  if (vhat < 1) throw std::invalid_argument("sd_bounds: vhat >= 1 required");
  double tail = 0.0;
  for (size_t l = 0; l < d_sq.size(); ++l)
    if (__builtin_popcountll(l) >= 0.5 * vhat - 1e-12) tail += d_sq[l];
  double a = alpha ? *alpha : std::sqrt(tail);
  SdBounds out;
  out.alpha = a;
  out.tail = tail;
  out.tight = a > 0 ? a + tail / a : 0.0;
  out.loose = std::pow(2.0, r) * out.tight;
  return out;
}

SdExact sd_exact(const Mat& rho0, const Mat& rho1) {
  if (rho0.rows() != rho1.rows() || rho0.rows() > 16)
    throw std::invalid_argument("sd_exact: equal dims <= 16 required");
  SdExact out;
  out.half_trace_norm = 0.5 * trace_norm(rho0 - rho1);
  QuantumSource src({{0.5, DensityMatrix(0.5 * (rho0 + rho0.adjoint()))},
                     {0.5, DensityMatrix(0.5 * (rho1 + rho1.adjoint()))}});
  out.oracle_info = info_witness(src);
  return out;
}

HoeffdingReport hoeffding_check(int n, double p_a, double eps, int trials, std::uint64_t seed) {
  if (trials < 1000) throw std::invalid_argument("hoeffding_check: trials >= 1000");
  Rng rng(seed);
  const int total = 2 * n;
  const int planted = static_cast<int>(std::llround(p_a * total));
  int hits = 0;
  for (int t = 0; t < trials; ++t) {
    BitString c = BitString::random_balanced(total, planted, rng);
    BitString s = BitString::random_balanced(total, n, rng);
    int wi = 0, wt = 0;
    for (int l = 0; l < total; ++l) {
      if (c.get(l)) (s.get(l) ? wi : wt) += 1;
    }
    if (static_cast<double>(wi) / n >= static_cast<double>(wt) / n + eps - 1e-15) ++hits;
  }
  HoeffdingReport rep;
  rep.empirical = static_cast<double>(hits) / trials;
  rep.bound = std::exp(-0.5 * n * eps * eps);
  rep.sigma = std::sqrt(std::max(rep.empirical * (1.0 - rep.empirical), 1.0 / trials) / trials);
  return rep;
}

namespace {

// Trace norm of sum_i c_i |phi_i><phi_i| through the Gram span (rank <= #phi).
double low_rank_trace_norm(const std::vector<Vec>& phis, const std::vector<double>& coeff) {
  const int k = static_cast<int>(phis.size());
  Mat basis(phis[0].size(), k);
  for (int i = 0; i < k; ++i) basis.col(i) = phis[i];
  Eigen::HouseholderQR<Mat> qr(basis);
  Mat q = qr.householderQ() * Mat::Identity(basis.rows(), std::min<Eigen::Index>(k, basis.rows()));
  Mat small = Mat::Zero(q.cols(), q.cols());
  for (int i = 0; i < k; ++i) {
    Vec proj = q.adjoint() * phis[i];
    small += coeff[i] * (proj * proj.adjoint());
  }
  return hermitian_eigenvalues(0.5 * (small + small.adjoint())).cwiseAbs().sum();
}

}  // namespace

SecurityEstimate security_estimate(const ProtocolConfig& cfg, const AttackUnitary& sym,
                                   const PaScheme& scheme) {
  const int n = cfg.n, total = 2 * n;
  if (total > 4) throw std::invalid_argument("security_estimate: 2n <= 4 required");
  if (sym.n != total) throw std::invalid_argument("security_estimate: attack size mismatch");
  if (scheme.n != n) throw std::invalid_argument("security_estimate: scheme length != n");
  const int m = scheme.m();
  const int r = scheme.r();
  const int nb = 1 << total;
  const int nt = 1 << n;

  // all smasks with exactly n info bits
  std::vector<word_t> smasks;
  for (word_t sm = 0; sm < static_cast<word_t>(nb); ++sm)
    if (__builtin_popcountll(sm) == n) smasks.push_back(sm);
  const double p_s = 1.0 / static_cast<double>(smasks.size());
  const double p_b = 1.0 / static_cast<double>(nb);

  std::map<word_t, std::vector<std::vector<Vec>>> comp_cache;
  auto components = [&](word_t bmask) -> const std::vector<std::vector<Vec>>& {
    auto it = comp_cache.find(bmask);
    if (it == comp_cache.end()) it = comp_cache.emplace(bmask, components_in_basis(sym, bmask)).first;
    return it->second;
  };

  // vhat per PA string (ECC plus the other PA strings span)
  std::vector<int> vhats;
  for (word_t v : scheme.pa) vhats.push_back(pa_min_distance(scheme, v));
  const int vhat = *std::min_element(vhats.begin(), vhats.end());

  SecurityEstimate est{};
  est.key_bits = m;

  struct CtxItem {
    double p_pass;
    double info_bound;
  };
  std::vector<CtxItem> contexts;

  double h = 0.0;
  for (word_t bmask = 0; bmask < static_cast<word_t>(nb); ++bmask) {
    for (word_t smask : smasks) {
      const SplitMasks sm = split_positions(smask, total);
      // exact h term: error distribution in the conjugate basis
      {
        const auto& eo = components(bmask ^ smask);
        for (int c = 0; c < nb; ++c) {
          double pc = 0.0;
          for (int i = 0; i < nb; ++i) pc += eo[i][i ^ c].squaredNorm();
          pc /= nb;
          const int wi = __builtin_popcountll(extract(static_cast<word_t>(c), sm.info_pos));
          const int wt = __builtin_popcountll(extract(static_cast<word_t>(c), sm.test_pos));
          if (wi >= 0.5 * vhat - 1e-12 && wt <= cfg.p_allowed * n + 1e-12) h += p_b * p_s * pc;
        }
      }
      for (word_t i_t = 0; i_t < static_cast<word_t>(nt); ++i_t) {
        for (word_t j_t = 0; j_t < static_cast<word_t>(nt); ++j_t) {
          const int wt = __builtin_popcountll(i_t ^ j_t);
          if (static_cast<double>(wt) > cfg.p_allowed * n + 1e-12) continue;  // aborts
          EveContext ctx;
          try {
            ctx = eve_spectrum(sym, i_t, j_t, bmask, smask, total);
          } catch (const std::domain_error&) {
            continue;  // zero-probability branch
          }
          const double p_ctx = p_b * p_s * (1.0 / nt) * ctx.p_jt;
          if (p_ctx <= 0) continue;
          const int ni = 1 << ctx.n_info;
          // Worst single-bit SD over the PA strings, with the ECC syndrome and
          // the other key bits all given to Eve (the augmented-code picture).
          double worst = 0.0;
          for (int vi = 0; vi < m; ++vi) {
            const word_t v = scheme.pa[vi];
            std::vector<word_t> aug = scheme.ecc;
            for (int vj = 0; vj < m; ++vj)
              if (vj != vi) aug.push_back(scheme.pa[vj]);
            const int na = static_cast<int>(aug.size());
            for (word_t xi = 0; xi < (word_t{1} << na); ++xi) {
              std::vector<double> coeff(ni, 0.0);
              int cnt0 = 0, cnt1 = 0;
              for (int ii = 0; ii < ni; ++ii) {
                word_t syn = 0;
                for (int si = 0; si < na; ++si)
                  if (gf2::dot(aug[si], static_cast<word_t>(ii))) syn |= word_t{1} << si;
                if (syn != xi) continue;
                (gf2::dot(v, static_cast<word_t>(ii)) ? cnt1 : cnt0) += 1;
              }
              if (cnt0 == 0 || cnt1 == 0) continue;
              for (int ii = 0; ii < ni; ++ii) {
                word_t syn = 0;
                for (int si = 0; si < na; ++si)
                  if (gf2::dot(aug[si], static_cast<word_t>(ii))) syn |= word_t{1} << si;
                if (syn != xi) continue;
                coeff[ii] = gf2::dot(v, static_cast<word_t>(ii)) ? -1.0 / cnt1 : 1.0 / cnt0;
              }
              worst = std::max(worst, 0.5 * low_rank_trace_norm(ctx.phi, coeff));
            }
          }
          contexts.push_back({p_ctx, m * worst});
        }
      }
    }
  }
  est.h = h;
  est.rhs = 2.0 * m * std::sqrt(std::max(h, 0.0));
  double lhs = 0.0;
  for (const CtxItem& c : contexts) lhs += c.p_pass * c.info_bound;
  est.lhs = lhs;
  const double eps = static_cast<double>(vhat) / (2.0 * n) - cfg.p_allowed;
  est.hoeffding_h = eps > 0 ? std::exp(-0.5 * n * eps * eps) : 1.0;
  est.criterion_rhs = std::sqrt(est.rhs);
  double crit = 0.0;
  for (const CtxItem& c : contexts)
    if (c.info_bound >= est.criterion_rhs) crit += c.p_pass;
  est.criterion_lhs = crit;
  return est;
}

SecurityEstimate security_estimate_half_swap(int n, double p_a, const PaScheme& scheme) {
  if (scheme.n != n) throw std::invalid_argument("security_estimate_half_swap: scheme length");
  const int m = scheme.m();
  std::vector<int> vhats;
  for (word_t v : scheme.pa) vhats.push_back(pa_min_distance(scheme, v));
  const int vhat = *std::min_element(vhats.begin(), vhats.end());

  // P_unif[|c_T| <= p_a n] and P_unif[|c_I| >= vhat/2] for uniform n-bit strings
  double p_pass_T = 0.0, p_tail_I = 0.0;
  for (int w = 0; w <= n; ++w) {
    const double pw = binom(n, w) * std::pow(0.5, n);
    if (w <= p_a * n + 1e-12) p_pass_T += pw;
    if (w >= 0.5 * vhat - 1e-12) p_tail_I += pw;
  }
  SecurityEstimate est{};
  est.key_bits = m;
  // swap branch: Eve knows the key exactly; none branch: nothing
  est.lhs = m * 0.5 * p_pass_T;
  est.h = 0.5 * p_tail_I * p_pass_T;
  est.rhs = 2.0 * m * std::sqrt(est.h);
  const double eps = static_cast<double>(vhat) / (2.0 * n) - p_a;
  est.hoeffding_h = eps > 0 ? std::exp(-0.5 * n * eps * eps) : 1.0;
  est.criterion_rhs = std::sqrt(est.rhs);
  // contexts with nonzero information are exactly the swap-branch passes
  est.criterion_lhs = (m >= est.criterion_rhs) ? 0.5 * p_pass_T : 0.0;
  return est;
}

ReductionResult full_bb84_reduction(int n, double delta_num, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("full_bb84_reduction: n >= 1");
  if (delta_num * std::sqrt(2.0 * n) < 1.0) {
    // advisory condition delta_num >> 1/sqrt(2n); proceed, abort rate reports the cost
  }
  Rng rng(seed);
  const int nqq = static_cast<int>(std::ceil((4.0 + delta_num) * n));
  ReductionResult res;
  std::vector<std::pair<bool, bool>> kept;  // (value, basis) where bases matched
  int matches = 0;
  for (int t = 0; t < nqq; ++t) {
    bool ba = rng.bernoulli(0.5), bb = rng.bernoulli(0.5), val = rng.bernoulli(0.5);
    if (ba == bb) {
      ++matches;
      kept.push_back({val, ba});
    }
  }
  res.match_fraction = static_cast<double>(matches) / nqq;
  if (matches < 2 * n) {
    res.aborted = true;
    return res;
  }
  res.i = BitString(2 * n);
  res.b = BitString(2 * n);
  for (int l = 0; l < 2 * n; ++l) {
    res.i.set(l, kept[l].first);
    res.b.set(l, kept[l].second);
  }
  return res;
}

}  // namespace qsec::bb84
