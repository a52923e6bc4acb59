#include "qsec/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>

#include "qsec/anonring.hpp"
#include "qsec/bb84.hpp"
#include "qsec/infobounds.hpp"
#include "qsec/lincode.hpp"
#include "qsec/mub.hpp"
#include "qsec/qotp.hpp"
#include "qsec/serialize.hpp"

namespace qsec::experiments {

using nlohmann::json;

namespace {

std::uint64_t seed_of(const json& params) {
  return params.value("seed", std::uint64_t{12345});
}

json header(const std::string& command, const json& params) {
  return json{{"version", kVersion},
              {"command", command},
              {"seed", seed_of(params)},
              {"params_hash", params_hash(params)}};
}

void require_keys(const json& params, const std::vector<std::string>& allowed) {
  for (const auto& [key, value] : params.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw InvalidParams("unknown parameter '" + key + "'");
  }
}

MubFamily build_mub(int d) {
  if (d < 2) throw InvalidParams("mub: d >= 2 required");
  if (is_prime(d)) return mub_prime(d);
  for (int p = 2; p <= d; ++p) {
    if (!is_prime(p) || d % p != 0) continue;
    int m = 0;
    long long x = 1;
    while (x < d) {
      x *= p;
      ++m;
    }
    if (x == d) return mub_prime_power(p, m);
    break;
  }
  throw InvalidParams("mub: d must be a prime power (got " + std::to_string(d) + ")");
}

json cmd_mub_gen(const json& params) {
  require_keys(params, {"d", "seed", "tol"});
  const int d = params.value("d", 2);
  const double tol = params.value("tol", 1e-9);
  MubFamily fam = build_mub(d);
  MubReport rep = verify_mub(fam, tol);
  json out;
  out["family"] = mub_family_to_json(fam);
  out["text"] = mub_family_to_text(fam);
  out["report"] = json{{"bases", fam.bases.size()},
                       {"max_orthonormality_defect", round12(rep.max_orthonormality_defect)},
                       {"max_unbiasedness_defect", round12(rep.max_unbiasedness_defect)},
                       {"pass", rep.pass}};
  return out;
}

json cmd_mub_verify(const json& params) {
  require_keys(params, {"family", "tol", "seed"});
  if (!params.contains("family")) throw InvalidParams("mub.verify: 'family' required");
  MubFamily fam = mub_family_from_json(params.at("family"));
  MubReport rep = verify_mub(fam, params.value("tol", 1e-9));
  return json{{"bases", fam.bases.size()},
              {"max_orthonormality_defect", round12(rep.max_orthonormality_defect)},
              {"max_unbiasedness_defect", round12(rep.max_unbiasedness_defect)},
              {"pass", rep.pass}};
}

json cmd_qotp_check(const json& params) {
  require_keys(params, {"set", "pauli_n", "tol", "seed"});
  const double tol = params.value("tol", 1e-8);
  EncryptionSet set =
      params.contains("set") ? encryption_set_from_json(params.at("set"))
                             : pauli_pad(params.value("pauli_n", 1));
  SecurityReport sec = is_secure(set, tol);
  json out{{"n", set.n()},
           {"keys", set.items().size()},
           {"secure", sec.pass},
           {"max_defect", round12(sec.max_defect)}};
  if (sec.pass) {
    GramReport gram = gram_analysis(set, tol);
    out["gram"] = json{{"m", gram.m},
                       {"key_entropy", round12(gram.key_entropy)},
                       {"ctc_defect", round12(gram.ctc_defect)},
                       {"satisfies_min_entropy", gram.satisfies_min_entropy}};
  }
  return out;
}

json cmd_codes_threshold(const json& params) {
  require_keys(params, {"p_a", "n", "seed"});
  const double p_star = threshold_solve();
  json out{{"p_star", round12(p_star)}};
  if (params.contains("p_a")) {
    const double p_a = params.at("p_a").get<double>();
    const int n = params.value("n", 10000);
    json region = json::array();
    for (int r = 1; r < n; r += std::max(1, n / 64)) {
      // smallest m with both inequalities satisfied, if any
      RateRegionReport rel = rate_region_check(p_a, 0.0, 0.0, n, r, 1);
      if (!rel.reliability_ok) continue;
      int m_max = 0;
      for (int m = 1; m < n - r; ++m) {
        RateRegionReport rep = rate_region_check(p_a, 0.0, 0.0, n, r, m);
        if (rep.security_ok)
          m_max = m;
        else
          break;
      }
      if (m_max > 0)
        region.push_back(json{{"r_over_n", round12(static_cast<double>(r) / n)},
                              {"m_over_n", round12(static_cast<double>(m_max) / n)}});
    }
    out["p_a"] = p_a;
    out["admissible_region"] = std::move(region);
    out["rate_limit"] = round12(1.0 - binary_entropy(std::min(2 * p_a, 1.0)) - binary_entropy(p_a));
  }
  return out;
}

bb84::Attack parse_attack(const std::string& name) {
  if (name == "none") return bb84::Attack::none();
  if (name == "intercept_resend" || name == "intercept") return bb84::Attack::intercept_resend();
  if (name == "swap") return bb84::Attack::swap();
  if (name == "half_swap") return bb84::Attack::half_swap();
  throw InvalidParams("bb84: unknown attack '" + name + "'");
}

struct TrialStats {
  long long rounds = 0, passes = 0, mismatches = 0, decode_failures = 0;
  long long info_bits = 0, info_errors = 0;
  int key_bits = 0;
};

TrialStats run_trials(const bb84::ProtocolConfig& cfg, const bb84::Attack& attack, int trials,
                      std::uint64_t seed) {
  TrialStats st;
  Rng base(seed);
  for (int t = 0; t < trials; ++t) {
    Rng child = base.child(t);
    bb84::RoundTranscript tr =
        bb84::run_protocol(cfg, attack, Rng::mix(seed ^ Rng::mix(t + 1)));
    ++st.rounds;
    st.info_bits += cfg.n;
    st.info_errors += (tr.i_i ^ tr.j_i).weight();
    if (tr.pass) {
      ++st.passes;
      if (tr.alice_key != tr.bob_key) ++st.mismatches;
      if (tr.decode_failed) ++st.decode_failures;
    }
    (void)child;
  }
  return st;
}

json cmd_bb84_run(const json& params) {
  require_keys(params, {"n", "p_allowed", "eps_rel", "eps_sec", "attack", "noise", "trials",
                        "seed", "policy", "block_bits"});
  bb84::ProtocolConfig cfg;
  cfg.n = params.value("n", 16);
  cfg.p_allowed = params.value("p_allowed", 0.05);
  cfg.eps_rel = params.value("eps_rel", 0.01);
  cfg.eps_sec = params.value("eps_sec", 0.01);
  cfg.noise_flip = params.value("noise", 0.0);
  cfg.block_bits = params.value("block_bits", 16);
  if (params.value("policy", "conservative") == std::string("rlc"))
    cfg.policy = bb84::DistancePolicy::kRlc;
  cfg.validate();
  const int trials = params.value("trials", 100);
  if (trials < 1) throw InvalidParams("bb84.run: trials >= 1");
  bb84::Attack attack = parse_attack(params.value("attack", "none"));

  TrialStats st = run_trials(cfg, attack, trials, seed_of(params));
  json out;
  out["rounds"] = st.rounds;
  out["pass_rate"] = round12(static_cast<double>(st.passes) / st.rounds);
  out["abort_rate"] = round12(1.0 - static_cast<double>(st.passes) / st.rounds);
  out["info_bit_error_rate"] = round12(static_cast<double>(st.info_errors) / st.info_bits);
  out["key_mismatch_rate"] =
      st.passes ? round12(static_cast<double>(st.mismatches) / st.passes) : 0.0;
  out["decode_failure_rate"] =
      st.passes ? round12(static_cast<double>(st.decode_failures) / st.passes) : 0.0;
  return out;
}

json cmd_bb84_sweep(const json& params) {
  require_keys(params, {"n", "p_allowed_values", "eps_rel", "eps_sec", "attack", "noise",
                        "trials", "seed", "policy", "block_bits"});
  bb84::ProtocolConfig cfg;
  cfg.n = params.value("n", 16);
  cfg.eps_rel = params.value("eps_rel", 0.01);
  cfg.eps_sec = params.value("eps_sec", 0.01);
  cfg.noise_flip = params.value("noise", 0.0);
  cfg.block_bits = params.value("block_bits", 16);
  if (params.value("policy", "conservative") == std::string("rlc"))
    cfg.policy = bb84::DistancePolicy::kRlc;
  const int trials = params.value("trials", 200);
  bb84::Attack attack = parse_attack(params.value("attack", "none"));
  std::vector<double> pas = params.value("p_allowed_values", std::vector<double>{0.02, 0.05, 0.08});

  json rows = json::array();
  for (double pa : pas) {
    cfg.p_allowed = pa;
    cfg.validate();
    TrialStats st = run_trials(cfg, attack, trials, seed_of(params));
    // scheme-derived security guardrail: rhs = 2 m sqrt(e^{-n eps^2 / 2}),
    // eps from the worst block's vhat; lhs = the attack's known information
    // weighted by its pass probability (analytic for the classical attacks).
    Rng srng(Rng::mix(seed_of(params) ^ 0x5eed));
    bb84::GeneratedScheme scheme = bb84::make_scheme(cfg, srng);
    double eps = 1.0;
    for (const auto& blk : scheme.blocks)
      eps = std::min(eps, static_cast<double>(blk.vhat) / (2.0 * blk.bits) - pa);
    const int m = scheme.key_bits;
    const double h = eps > 0 ? std::exp(-0.5 * cfg.n * eps * eps) : 1.0;
    const double rhs = 2.0 * m * std::sqrt(h);
    double known = 0.0;  // information the attack hands Eve on a pass
    if (attack.kind == bb84::AttackKind::kSwap) known = m;
    if (attack.kind == bb84::AttackKind::kHalfSwap) known = 0.5 * m;
    const double pass_rate = static_cast<double>(st.passes) / st.rounds;
    json row;
    row["p_allowed"] = round12(pa);
    row["pass_rate"] = round12(pass_rate);
    row["key_rate"] =
        round12(pass_rate * static_cast<double>(m) / cfg.n);
    row["mismatch_rate"] =
        st.passes ? round12(static_cast<double>(st.mismatches) / st.passes) : 0.0;
    row["bound_lhs"] = round12(known * pass_rate);
    row["bound_rhs"] = round12(rhs);
    rows.push_back(std::move(row));
  }
  return json{{"columns",
               json::array({"p_allowed", "pass_rate", "key_rate", "mismatch_rate", "bound_lhs",
                            "bound_rhs"})},
              {"rows", std::move(rows)}};
}

json cmd_bounds_verify(const json& params) {
  require_keys(params, {"seed", "trials"});
  const std::uint64_t seed = seed_of(params);
  const int trials = params.value("trials", 60);
  Rng rng(seed);
  json entries = json::array();
  bool all_pass = true;
  auto add = [&](const std::string& name, const std::string& ref, double lhs, double rhs,
                 bool pass) {
    entries.push_back(json{{"name", name},
                           {"ref", ref},
                           {"lhs", round12(lhs)},
                           {"rhs", round12(rhs)},
                           {"margin", round12(rhs - lhs)},
                           {"pass", pass}});
    all_pass = all_pass && pass;
  };

  OracleBudget budget;
  budget.theta_steps = 181;
  budget.phi_steps = 361;

  {  // two-state bounds vs oracle
    double worst = std::numeric_limits<double>::infinity();
    double worst_oracle = 0;
    for (int t = 0; t < trials; ++t) {
      Rng r = rng.child(t);
      double p0 = 0.5 + 0.49 * r.uniform();
      QuantumSource src({{p0, random_density(2, r)}, {1 - p0, random_density(2, r)}});
      OneBitBounds b = bound_one_bit(src);
      double oracle = accessible_info_oracle(src, budget);
      if (b.lemma_bound - oracle < worst - worst_oracle) {
        worst = b.lemma_bound;
        worst_oracle = oracle;
      }
      if (oracle > b.lemma_bound + 1e-6 || oracle > b.corollary_bound + 1e-6) all_pass = false;
    }
    add("Lemma 2.1.3", "one-bit source bound", worst_oracle, worst, worst_oracle <= worst + 1e-6);
  }
  {  // many-state bounds vs oracle
    double worst_margin = std::numeric_limits<double>::infinity();
    double wl = 0, wo = 0;
    for (int t = 0; t < trials; ++t) {
      Rng r = rng.child(1000 + t);
      const int k = 2 + static_cast<int>(r.integer(3));
      std::vector<std::pair<double, DensityMatrix>> items;
      for (int i = 0; i < k; ++i) items.emplace_back(1.0 / k, random_density(2, r));
      QuantumSource src(std::move(items));
      ManyBounds b = bound_many(src);
      double oracle = accessible_info_oracle(src, budget);
      if (b.lemma_bound - oracle < worst_margin) {
        worst_margin = b.lemma_bound - oracle;
        wl = b.lemma_bound;
        wo = oracle;
      }
    }
    add("Lemma 2.2.3", "many-outcome source bound", wo, wl, worst_margin >= -1e-6);
    add("Cor 2.2.1", "uniform-source form", wo, wl, worst_margin >= -1e-6);
  }
  {  // info vs disturbance, n = 1
    double worst_margin = std::numeric_limits<double>::infinity();
    double wb = 0, wo = 0;
    double purification_defect = 0;
    for (int t = 0; t < trials; ++t) {
      Rng r = rng.child(2000 + t);
      AttackUnitary atk(1, 4, random_unitary(8, r));
      DisturbanceReport rep = info_vs_disturbance(atk);
      std::vector<std::pair<double, DensityMatrix>> items;
      for (const auto& rho : rep.ensemble) items.emplace_back(0.5, rho);
      double oracle = info_witness(QuantumSource(std::move(items)), budget);
      purification_defect = std::max(
          purification_defect, std::abs(rep.purification_norm - 2.0 * rep.p0));
      if (rep.bound - oracle < worst_margin) {
        worst_margin = rep.bound - oracle;
        wb = rep.bound;
        wo = oracle;
      }
    }
    add("Thm 2.4.1", "information vs disturbance", wo, wb, worst_margin >= -1e-6);
    add("Thm 2.4.1 purification", "<phibar0|phibar0> = 2^n P(0)", purification_defect, 1e-10,
        purification_defect < 1e-10);
  }
  {  // function-of-message bound, n = 2 parity
    Rng r = rng.child(3000);
    AttackUnitary atk(2, 4, random_unitary(16, r));
    FunctionBoundReport rep = function_security_bound(atk, {0, 1, 1, 0});
    add("Thm 2.4.2", "functions of messages", rep.exact_witness, rep.bound,
        rep.exact_witness <= rep.bound + 1e-6);
  }
  {  // Holevo
    double worst = -1;
    for (int t = 0; t < 20; ++t) {
      Rng r = rng.child(4000 + t);
      QuantumSource src({{0.5, random_density(2, r)}, {0.5, random_density(2, r)}});
      Mat u = random_unitary(2, r);
      std::vector<Vec> basis{u.col(0), u.col(1)};
      double mi = measured_info(src, Povm::from_basis(basis));
      double chi = holevo_chi(src);
      worst = std::max(worst, mi - chi);
    }
    add("Def 1.3.3", "measured information <= Holevo chi", worst, 0.0, worst <= 1e-9);
  }
  json out{{"entries", std::move(entries)}, {"pass", all_pass}};
  if (!all_pass) throw VerificationFailure("bounds.verify: " + out.dump());
  return out;
}

json cmd_anonring_run(const json& params) {
  require_keys(params, {"n_users", "alpha", "gamma", "rounds", "sessions", "seed", "noise_z",
                        "noise_x", "quantum_rounds"});
  anonring::RingConfig cfg;
  cfg.n_users = params.value("n_users", 5);
  cfg.alpha = params.value("alpha", 1.0);
  cfg.gamma = params.value("gamma", 1.0);
  cfg.link_noise_z = params.value("noise_z", 0.0);
  cfg.link_noise_x = params.value("noise_x", 0.0);
  cfg.validate();
  const int rounds = params.value("rounds", 10000);
  const int sessions = params.value("sessions", 400);
  const std::uint64_t seed = seed_of(params);

  anonring::TestStatistics st = anonring::test_statistics(cfg, rounds, seed);
  json out;
  out["p_use_hat"] = round12(st.p_use_hat);
  out["p_use_formula"] = round12(st.p_use_formula);
  json freq = json::array(), formula = json::array();
  for (double v : st.channel_freq) freq.push_back(round12(v));
  for (double v : st.channel_formula) formula.push_back(round12(v));
  out["per_channel_test_freq"] = std::move(freq);
  out["per_channel_test_formula"] = std::move(formula);

  // quantum parity validation on a small ring
  if (cfg.n_users <= 10) {
    const int qrounds = params.value("quantum_rounds", 50);
    Rng rng(Rng::mix(seed ^ 0xa0a0));
    int parity_ok = 0, info_rounds = 0;
    for (int t = 0; t < qrounds; ++t) {
      auto res = anonring::run_round(cfg, Rng::mix(seed ^ Rng::mix(t)), std::nullopt, std::nullopt,
                                     word_t{0});  // no testers: every round is an info round
      ++info_rounds;
      int ez = 0;
      for (int v : res.z_errors) ez ^= v;
      if (res.kprime_parity == ez) ++parity_ok;
    }
    out["parity_identity_ok"] = parity_ok;
    out["parity_identity_rounds"] = info_rounds;
    (void)rng;
  }

  // decode success over coset broadcast sessions with sampled noise
  {
    Rng rng(Rng::mix(seed ^ 0xdec0deULL));
    BinaryLinearCode c1;
    c1.n = 7, c1.k = 4;
    c1.generator = {0b1110000, 0b1001100, 0b0101010, 0b1101001};
    c1.parity_check = gf2::null_space(c1.generator, 7);
    BinaryLinearCode c2;
    c2.n = 7, c2.k = 1;
    c2.generator = {0b1110000};
    c2.parity_check = gf2::null_space(c2.generator, 7);
    NestedCodePair pair(c1, c2);
    int ok = 0;
    for (int s = 0; s < sessions; ++s) {
      std::vector<word_t> kprime(cfg.n_users, 0);
      word_t acc = 0;
      for (int u = 0; u + 1 < cfg.n_users; ++u) {
        kprime[u] = rng.integer(word_t{1} << 7);
        acc ^= kprime[u];
      }
      word_t e = 0;  // one planted z error inside the correction radius
      if (rng.bernoulli(0.5)) e = word_t{1} << rng.integer(7);
      kprime[cfg.n_users - 1] = acc ^ e;
      std::vector<std::optional<word_t>> msgs(cfg.n_users);
      const word_t msg = rng.integer(word_t{1} << pair.message_bits());
      msgs[rng.integer(cfg.n_users)] = msg;
      auto res = anonring::broadcast_session(pair, kprime, msgs, rng, 1);
      if (res.ok && res.output == msg) ++ok;
    }
    out["decode_success_rate"] = round12(static_cast<double>(ok) / sessions);
    auto est = anonring::anonymity_metric(cfg, pair, anonring::EveModel::kAnnouncementsOnly,
                                          std::max(sessions, 500), Rng::mix(seed ^ 0xa11));
    out["anonymity_estimate"] = round12(est.corrected);
    out["anonymity_p_value"] = round12(est.p_value);
  }
  return out;
}

json cmd_verify_all(const json& params);

using Handler = json (*)(const json&);

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> h{
      {"mub.gen", cmd_mub_gen},
      {"mub.verify", cmd_mub_verify},
      {"qotp.check", cmd_qotp_check},
      {"bounds.verify", cmd_bounds_verify},
      {"bb84.run", cmd_bb84_run},
      {"bb84.sweep", cmd_bb84_sweep},
      {"codes.threshold", cmd_codes_threshold},
      {"anonring.run", cmd_anonring_run},
      {"verify.all", cmd_verify_all},
  };
  return h;
}

json cmd_verify_all(const json& params) {
  require_keys(params, {"seed", "trials"});
  const std::uint64_t seed = seed_of(params);
  Rng rng(seed);
  json entries = json::array();
  bool all_pass = true;
  auto add = [&](const std::string& name, const std::string& ref, double lhs, double rhs,
                 bool pass) {
    entries.push_back(json{{"name", name},
                           {"ref", ref},
                           {"lhs", round12(lhs)},
                           {"rhs", round12(rhs)},
                           {"margin", round12(rhs - lhs)},
                           {"pass", pass}});
    all_pass = all_pass && pass;
  };

  {  // entropy toolbox
    Rng r = rng.child(1);
    DensityMatrix rho = random_density(4, r);
    BipartiteLabel lbl(2, 2);
    double sa = von_neumann_entropy(partial_trace(rho, lbl, 0));
    double sb = von_neumann_entropy(partial_trace(rho, lbl, 1));
    double sab = von_neumann_entropy(rho);
    add("Thm 1.3.1", "relative entropy positivity / subadditivity", sab, sa + sb,
        sa + sb >= sab - 1e-9);
  }
  {  // Ch. 2 suites (delegated)
    json sub = cmd_bounds_verify(json{{"seed", seed}, {"trials", 30}});
    for (const auto& e : sub.at("entries")) {
      entries.push_back(e);
      all_pass = all_pass && e.at("pass").get<bool>();
    }
  }
  {  // Lemma 3.3.1 conjugate-basis identity, one random symmetrized attack
    Rng r = rng.child(2);
    AttackUnitary base(2, 2, random_unitary(8, r));
    AttackUnitary sym = bb84::symmetrize(base);
    double defect = 0;
    defect = std::max(defect, bb84::conjugate_error_check(sym, 0, 1, 0b01, 0b10, 2));
    defect = std::max(defect, bb84::conjugate_error_check(sym, 1, 1, 0b11, 0b01, 2));
    add("Lemma 3.3.1", "conjugate-basis error identity", defect, 1e-9, defect < 1e-9);
  }
  {  // SD chain on one seeded context
    Rng r = rng.child(3);
    AttackUnitary base(2, 2, random_unitary(8, r));
    AttackUnitary sym = bb84::symmetrize(base);
    bb84::EveContext ctx = bb84::eve_spectrum(sym, 0, 0, 0b00, 0b01, 2);
    bb84::SdBounds sd = bb84::sd_bounds(ctx.d_sq, 1, 0);
    std::vector<double> coeff{1.0, -1.0};
    // single info bit: rho_b = |phi_b><phi_b|
    Mat basis(ctx.phi[0].size(), 2);
    basis.col(0) = ctx.phi[0];
    basis.col(1) = ctx.phi[1];
    Mat gram = basis.adjoint() * basis;
    // half trace norm of phi0 phi0^+ - phi1 phi1^+ in the 2-dim span
    Eigen::SelfAdjointEigenSolver<Mat> es(gram);
    double htn = 0;
    {
      Eigen::HouseholderQR<Mat> qr(basis);
      Mat q = qr.householderQ() * Mat::Identity(basis.rows(), 2);
      Mat small = Mat::Zero(2, 2);
      Vec p0 = q.adjoint() * ctx.phi[0], p1 = q.adjoint() * ctx.phi[1];
      small = p0 * p0.adjoint() - p1 * p1.adjoint();
      htn = 0.5 * hermitian_eigenvalues(0.5 * (small + small.adjoint())).cwiseAbs().sum();
    }
    add("Eq 3.14", "tight distinguishability bound", htn, sd.tight, htn <= sd.tight + 1e-9);
    add("Eq 3.25", "loose bound dominates tight", sd.tight, sd.loose, sd.tight <= sd.loose + 1e-12);
  }
  {  // Hoeffding sampling
    bb84::HoeffdingReport rep = bb84::hoeffding_check(200, 0.05, 0.1, 4000, rng.child(4).integer(1u << 30));
    add("Lemma 3.4.5", "sampling tail", rep.empirical, rep.bound + 3 * rep.sigma,
        rep.empirical <= rep.bound + 3 * rep.sigma);
  }
  {  // Gallager ensemble bound, quick
    Rng r = rng.child(5);
    const int n = 20, rr = 10;
    const double delta = 0.1;
    int bad = 0;
    const int samples = 400;
    for (int t = 0; t < samples; ++t) {
      BinaryLinearCode c = random_linear_code(n, n - rr, r);
      if (static_cast<double>(min_distance(c)) / n < delta) ++bad;
    }
    double emp = static_cast<double>(bad) / samples;
    double bound = gallager_bound(n, rr, delta);
    double sigma = std::sqrt(std::max(emp * (1 - emp), 1.0 / samples) / samples);
    add("Eq 3.36", "random-code distance tail", emp, bound + 2 * sigma, emp <= bound + 2 * sigma);
  }
  {  // threshold
    double p = threshold_solve();
    add("Sec 3.11 threshold", "1 - H2(2p) - H2(p) root", std::abs(p - 0.0756), 5e-4,
        std::abs(p - 0.0756) < 5e-4);
  }
  {  // QOTP
    Rng r = rng.child(6);
    EncryptionSet pad = pauli_pad(1);
    double defect = 0;
    for (int t = 0; t < 10; ++t) {
      DensityMatrix rho = random_density(2, r);
      defect = std::max(defect, (encrypt_average(rho, pad).entries() - Mat::Identity(2, 2) / 2.0)
                                    .cwiseAbs()
                                    .maxCoeff());
    }
    add("Eq 4.1", "pad maps every state to I/2^n", defect, 1e-10, defect < 1e-10);
    SecurityReport sec = is_secure(pad, 1e-10);
    add("Eq 4.4", "discrete security condition", sec.max_defect, 1e-10, sec.pass);
    GramReport gram = gram_analysis(pad);
    add("Thm 4.5.3", "key entropy >= 2n", 2.0 * pad.n(), gram.key_entropy,
        gram.key_entropy >= 2.0 * pad.n() - 1e-9);
  }
  {  // MUB constructions
    double worst = 0;
    for (int d : {2, 3, 4, 5, 7, 8, 9}) {
      MubFamily fam = build_mub(d);
      MubReport rep = verify_mub(fam, 1e-9);
      worst = std::max(worst, std::max(rep.max_unbiasedness_defect, rep.max_orthonormality_defect));
      if (static_cast<int>(fam.bases.size()) != d + 1) all_pass = false;
    }
    add("Thm 5.4.2", "d+1 mutually unbiased bases, prime powers", worst, 1e-9, worst < 1e-9);
  }
  {  // Pauli orthogonality / commutation phases
    PrimePower pp(3, 1);
    double worst = 0;
    for (int a1 = 0; a1 < 3; ++a1)
      for (int b1 = 0; b1 < 3; ++b1)
        for (int a2 = 0; a2 < 3; ++a2)
          for (int b2 = 0; b2 < 3; ++b2) {
            PauliIndex u{{a1}, {b1}, 0}, v{{a2}, {b2}, 0};
            if (!(u == v))
              worst = std::max(worst, std::abs(hs_inner(pauli_matrix(u, pp), pauli_matrix(v, pp))));
            Mat mu = pauli_matrix(u, pp), mv = pauli_matrix(v, pp);
            int e = commutation_phase(u, v, 3);
            cxd omega = std::exp(cxd(0, 2 * std::numbers::pi * e / 3.0));
            worst = std::max(worst, (mv * mu - omega * mu * mv).cwiseAbs().maxCoeff());
          }
    add("Thm 5.4.1", "distinct labels orthogonal", worst, 1e-10, worst < 1e-10);
    add("Eq 5.7", "commutation phase", worst, 1e-10, worst < 1e-10);
  }
  {  // ring: parity identity + channel statistics
    anonring::RingConfig cfg;
    cfg.n_users = 5;
    int ok = 0;
    const int rounds = 30;
    for (int t = 0; t < rounds; ++t) {
      word_t plant = static_cast<word_t>(rng.child(7000 + t).integer(1 << 5));
      auto res = anonring::run_round(cfg, Rng::mix(seed ^ Rng::mix(t + 99)), plant, std::nullopt,
                                     word_t{0});
      int ez = 0;
      for (int v : res.z_errors) ez ^= v;
      if (res.kprime_parity == ez) ++ok;
    }
    add("Eq 6.2", "ring parity identity", rounds - ok, 0, ok == rounds);
    auto st = anonring::test_statistics(cfg, 20000, Rng::mix(seed ^ 0x51ULL));
    double diff = std::abs(st.p_use_hat - st.p_use_formula);
    add("Eq 6.1", "testing statistics", diff, 0.02, diff < 0.02);
  }
  {  // two-sided attack bound
    Rng r = rng.child(8);
    anonring::TwoSidedAttack atk(1, 4, random_unitary(8, r), random_unitary(8, r));
    anonring::TwoSidedReport rep = anonring::two_sided_bound(atk, {0, 1});
    add("Thm 6.5.1", "two-sided attack bound", rep.oracle, rep.bound,
        rep.oracle <= rep.bound + 1e-9);
  }

  json out{{"entries", std::move(entries)}, {"pass", all_pass}};
  if (!all_pass) throw VerificationFailure("verify.all failed: " + out.dump());
  return out;
}

}  // namespace

json run(const std::string& command, const json& params) {
  auto it = handlers().find(command);
  if (it == handlers().end()) throw InvalidParams("unknown command '" + command + "'");
  if (!params.is_object()) throw InvalidParams("params must be a JSON object");
  json result;
  try {
    result = it->second(params);
  } catch (const InvalidParams&) {
    throw;
  } catch (const VerificationFailure&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw InvalidParams(e.what());
  }
  json out;
  out["header"] = header(command, params);
  out["result"] = std::move(result);
  return out;
}

std::string to_csv(const json& result) {
  const json& r = result.contains("result") ? result.at("result") : result;
  std::string csv;
  if (r.contains("rows") && r.contains("columns")) {
    for (size_t i = 0; i < r.at("columns").size(); ++i) {
      if (i) csv += ",";
      csv += r.at("columns").at(i).get<std::string>();
    }
    csv += "\n";
    for (const auto& row : r.at("rows")) {
      bool first = true;
      for (const auto& col : r.at("columns")) {
        if (!first) csv += ",";
        first = false;
        const json& v = row.at(col.get<std::string>());
        if (v.is_number()) {
          char buf[40];
          std::snprintf(buf, sizeof buf, "%.12g", v.get<double>());
          csv += buf;
        } else {
          csv += v.dump();
        }
      }
      csv += "\n";
    }
    return csv;
  }
  // flat objects: two-row CSV
  std::string head, body;
  bool first = true;
  for (const auto& [k, v] : r.items()) {
    if (!v.is_number() && !v.is_boolean()) continue;
    if (!first) {
      head += ",";
      body += ",";
    }
    first = false;
    head += k;
    if (v.is_number()) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.12g", v.get<double>());
      body += buf;
    } else {
      body += v.get<bool>() ? "1" : "0";
    }
  }
  return head + "\n" + body + "\n";
}

}  // namespace qsec::experiments
