// Command-line front end; talks to the core exclusively through the C API in
// qsec/qsec.h. Subcommands mirror the experiment commands:
//
//   qsec mub gen --d 5 --out mub5.json
//   qsec mub verify --in mub5.json
//   qsec qotp check --pauli-n 2
//   qsec bounds verify --seed 7
//   qsec bb84 run --n 64 --p-allowed 0.05 --attack intercept --trials 100
//   qsec bb84 sweep --n 24 --trials 200 --out sweep.csv --format csv
//   qsec codes threshold [--p-a 0.05]
//   qsec anonring run --n-users 6 --alpha 1 --rounds 20000 --out ring.json
//   qsec verify all --seed 7
//
// Exit codes: 0 success, 2 parameter validation error, 3 verification-suite
// assertion failure. Results are written atomically (temp file + rename).

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qsec/qsec.h"

namespace {

using nlohmann::json;

int log_level() {
  const char* lv = std::getenv("QSEC_LOG");
  if (!lv) return 1;
  if (!std::strcmp(lv, "debug")) return 2;
  if (!std::strcmp(lv, "quiet")) return 0;
  return 1;
}

void log_info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "qsec: " << msg << "\n";
}

bool atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) return false;
    os << content;
    if (!os.flush()) return false;
  }
  return std::rename(tmp.c_str(), path.c_str()) == 0;
}

// simple key = value config files; command-line flags win on conflict
json load_config(const std::string& path) {
  json out = json::object();
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read config file " + path);
  std::string line;
  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const char* ws = " \t\r";
      s.erase(0, s.find_first_not_of(ws));
      const auto last = s.find_last_not_of(ws);
      s.erase(last == std::string::npos ? 0 : last + 1);
      return s;
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) continue;
    json parsed = json::parse(val, nullptr, false);
    out[key] = parsed.is_discarded() ? json(val) : parsed;
  }
  return out;
}

struct Common {
  std::uint64_t seed = 12345;
  int trials = -1;
  int threads = 0;  // 0 = library default; experiments are single-threaded per call
  std::string out_path;
  std::string format = "json";
  std::string config_path;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "RNG seed (results are reproducible per seed)");
  cmd->add_option("--trials", c.trials, "number of trials/rounds where applicable");
  cmd->add_option("--threads", c.threads, "worker cap (reserved; experiments run inline)");
  cmd->add_option("--out", c.out_path, "output path (written atomically)");
  cmd->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--config", c.config_path, "key=value config file; flags win on conflict");
}

int run_command(const std::string& command, json params, const Common& c) {
  if (!c.config_path.empty()) {
    json cfg = load_config(c.config_path);
    for (const auto& [k, v] : cfg.items())
      if (!params.contains(k)) params[k] = v;
  }
  params["seed"] = c.seed;
  if (c.trials > 0) params["trials"] = c.trials;

  qsec_ctx* ctx = qsec_ctx_new();
  char* result = nullptr;
  const qsec_status st = qsec_run(ctx, command.c_str(), params.dump().c_str(), &result);
  int code = static_cast<int>(st);
  std::string payload;
  if (result) {
    payload = result;
    qsec_string_free(result);
  }
  if (st != QSEC_OK) {
    std::cerr << "qsec: error (" << code << "): " << qsec_last_error(ctx) << "\n";
    qsec_ctx_free(ctx);
    return code;
  }
  if (c.format == "csv") {
    char* csv = nullptr;
    if (qsec_result_to_csv(ctx, payload.c_str(), &csv) == QSEC_OK && csv) {
      payload = csv;
      qsec_string_free(csv);
    }
  }
  qsec_ctx_free(ctx);

  if (!c.out_path.empty()) {
    if (!atomic_write(c.out_path, payload)) {
      std::cerr << "qsec: cannot write " << c.out_path << "\n";
      return 2;
    }
    log_info("wrote " + c.out_path);
  } else {
    std::cout << payload << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(qsec_version()) + " - quantum information security laboratory"};
  app.require_subcommand(1);

  // mub
  auto* mub = app.add_subcommand("mub", "mutually unbiased bases");
  mub->require_subcommand(1);
  Common mgc;
  int mub_d = 5;
  auto* mub_gen = mub->add_subcommand("gen", "construct the d+1 MUB family for prime-power d");
  mub_gen->add_option("--d", mub_d, "dimension (prime power)")->required();
  add_common(mub_gen, mgc);
  mub_gen->callback([&] {
    std::exit(run_command("mub.gen", json{{"d", mub_d}}, mgc));
  });
  Common mvc;
  std::string mub_in;
  auto* mub_verify = mub->add_subcommand("verify", "verify a family from a JSON file");
  mub_verify->add_option("--in", mub_in, "family JSON (as produced by mub gen)")->required();
  add_common(mub_verify, mvc);
  mub_verify->callback([&] {
    std::ifstream is(mub_in);
    if (!is) {
      std::cerr << "qsec: cannot read " << mub_in << "\n";
      std::exit(2);
    }
    json j = json::parse(is, nullptr, false);
    if (j.is_discarded()) {
      std::cerr << "qsec: " << mub_in << " is not JSON\n";
      std::exit(2);
    }
    const json fam = j.contains("result") ? j["result"]["family"] : j;
    std::exit(run_command("mub.verify", json{{"family", fam}}, mvc));
  });

  // qotp
  auto* qotp = app.add_subcommand("qotp", "quantum one-time pad");
  qotp->require_subcommand(1);
  Common qcc;
  int pauli_n = 1;
  std::string set_path;
  auto* qotp_check = qotp->add_subcommand("check", "security + key-entropy analysis of a set");
  qotp_check->add_option("--pauli-n", pauli_n, "check the uniform Pauli pad on n qubits");
  qotp_check->add_option("--set", set_path, "encryption-set JSON file");
  add_common(qotp_check, qcc);
  qotp_check->callback([&] {
    json params;
    if (!set_path.empty()) {
      std::ifstream is(set_path);
      if (!is) {
        std::cerr << "qsec: cannot read " << set_path << "\n";
        std::exit(2);
      }
      params["set"] = json::parse(is);
    } else {
      params["pauli_n"] = pauli_n;
    }
    std::exit(run_command("qotp.check", params, qcc));
  });

  // bounds
  auto* bounds = app.add_subcommand("bounds", "information bounds");
  bounds->require_subcommand(1);
  Common bvc;
  auto* bounds_verify = bounds->add_subcommand("verify", "run every bound-vs-oracle suite");
  add_common(bounds_verify, bvc);
  bounds_verify->callback([&] { std::exit(run_command("bounds.verify", json::object(), bvc)); });

  // bb84
  auto* bb = app.add_subcommand("bb84", "used-bits BB84 protocol");
  bb->require_subcommand(1);
  Common brc;
  int bb_n = 16;
  double bb_pa = 0.05, bb_eps_rel = 0.01, bb_eps_sec = 0.01, bb_noise = 0.0;
  std::string bb_attack = "none", bb_policy = "conservative";
  auto* bb_run = bb->add_subcommand("run", "simulate rounds and report rates");
  bb_run->add_option("--n", bb_n, "info/test bits per side (2n qubits)");
  bb_run->add_option("--p-allowed", bb_pa, "test error-rate threshold");
  bb_run->add_option("--eps-rel", bb_eps_rel, "reliability slack");
  bb_run->add_option("--eps-sec", bb_eps_sec, "security slack");
  bb_run->add_option("--noise", bb_noise, "iid channel flip rate");
  bb_run->add_option("--attack", bb_attack, "none|intercept|swap|half_swap");
  bb_run->add_option("--policy", bb_policy, "conservative|rlc distance policy");
  add_common(bb_run, brc);
  bb_run->callback([&] {
    std::exit(run_command("bb84.run",
                          json{{"n", bb_n},
                               {"p_allowed", bb_pa},
                               {"eps_rel", bb_eps_rel},
                               {"eps_sec", bb_eps_sec},
                               {"noise", bb_noise},
                               {"attack", bb_attack},
                               {"policy", bb_policy}},
                          brc));
  });
  Common bsc;
  int bs_n = 16;
  double bs_eps_rel = 0.01, bs_eps_sec = 0.01, bs_noise = 0.0;
  std::string bs_attack = "none";
  std::vector<double> bs_pas;
  auto* bb_sweep = bb->add_subcommand("sweep", "sweep p_allowed; CSV-friendly rows");
  bb_sweep->add_option("--n", bs_n, "info/test bits per side");
  bb_sweep->add_option("--p-allowed", bs_pas, "threshold values to sweep");
  bb_sweep->add_option("--eps-rel", bs_eps_rel, "reliability slack");
  bb_sweep->add_option("--eps-sec", bs_eps_sec, "security slack");
  bb_sweep->add_option("--noise", bs_noise, "iid channel flip rate");
  bb_sweep->add_option("--attack", bs_attack, "none|intercept|swap|half_swap");
  add_common(bb_sweep, bsc);
  bb_sweep->callback([&] {
    json params{{"n", bs_n},
                {"eps_rel", bs_eps_rel},
                {"eps_sec", bs_eps_sec},
                {"noise", bs_noise},
                {"attack", bs_attack}};
    if (!bs_pas.empty()) params["p_allowed_values"] = bs_pas;
    std::exit(run_command("bb84.sweep", params, bsc));
  });

  // codes
  auto* codes = app.add_subcommand("codes", "linear-code rate region");
  codes->require_subcommand(1);
  Common ctc;
  double codes_pa = -1.0;
  int codes_n = 10000;
  auto* codes_threshold = codes->add_subcommand("threshold", "p* and the admissible rate region");
  codes_threshold->add_option("--p-a", codes_pa, "allowed error rate for the region scan");
  codes_threshold->add_option("--n", codes_n, "block length for the region scan");
  add_common(codes_threshold, ctc);
  codes_threshold->callback([&] {
    json params{{"n", codes_n}};
    if (codes_pa >= 0) params["p_a"] = codes_pa;
    std::exit(run_command("codes.threshold", params, ctc));
  });

  // anonring
  auto* ring = app.add_subcommand("anonring", "anonymous broadcast ring");
  ring->require_subcommand(1);
  Common arc;
  int ring_users = 5, ring_rounds = 20000, ring_sessions = 400;
  double ring_alpha = 1.0, ring_gamma = 1.0, ring_nz = 0.0, ring_nx = 0.0;
  auto* ring_run = ring->add_subcommand("run", "testing statistics, decode rate, anonymity");
  ring_run->add_option("--n-users", ring_users, "participants (N >= 3)");
  ring_run->add_option("--alpha", ring_alpha, "test intensity (p_test = alpha/N)");
  ring_run->add_option("--gamma", ring_gamma, "speak intensity (p_speak = gamma/N)");
  ring_run->add_option("--rounds", ring_rounds, "classical sampling rounds");
  ring_run->add_option("--sessions", ring_sessions, "broadcast sessions");
  ring_run->add_option("--noise-z", ring_nz, "per-link sigma_z probability");
  ring_run->add_option("--noise-x", ring_nx, "per-link sigma_x probability");
  add_common(ring_run, arc);
  ring_run->callback([&] {
    std::exit(run_command("anonring.run",
                          json{{"n_users", ring_users},
                               {"alpha", ring_alpha},
                               {"gamma", ring_gamma},
                               {"rounds", ring_rounds},
                               {"sessions", ring_sessions},
                               {"noise_z", ring_nz},
                               {"noise_x", ring_nx}},
                          arc));
  });

  // verify
  auto* verify = app.add_subcommand("verify", "verification suites");
  verify->require_subcommand(1);
  Common vac;
  auto* verify_all = verify->add_subcommand("all", "every named inequality, one record each");
  add_common(verify_all, vac);
  verify_all->callback([&] { std::exit(run_command("verify.all", json::object(), vac)); });

  CLI11_PARSE(app, argc, argv);
  return 0;
}
