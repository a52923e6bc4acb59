// Exercises the shared library strictly through the public C header.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>

#include "qsec/qsec.h"

namespace {

struct Ctx {
  qsec_ctx* p = qsec_ctx_new();
  ~Ctx() { qsec_ctx_free(p); }
};

std::string run_ok(qsec_ctx* ctx, const char* cmd, const char* params) {
  char* out = nullptr;
  REQUIRE(qsec_run(ctx, cmd, params, &out) == QSEC_OK);
  REQUIRE(out != nullptr);
  std::string s = out;
  qsec_string_free(out);
  return s;
}

}  // namespace

TEST_CASE("version and context lifecycle") {
  CHECK(std::string(qsec_version()).find("qseclab") != std::string::npos);
  Ctx ctx;
  REQUIRE(ctx.p != nullptr);
  CHECK(std::string(qsec_last_error(ctx.p)).empty());
}

TEST_CASE("unknown commands and bad params report QSEC_ERR_INVALID") {
  Ctx ctx;
  char* out = nullptr;
  CHECK(qsec_run(ctx.p, "no.such.command", "{}", &out) == QSEC_ERR_INVALID);
  CHECK(out == nullptr);
  CHECK(std::string(qsec_last_error(ctx.p)).find("unknown command") != std::string::npos);

  CHECK(qsec_run(ctx.p, "mub.gen", "[1,2,3]", &out) == QSEC_ERR_INVALID);
  CHECK(qsec_run(ctx.p, "mub.gen", "{\"d\": 6}", &out) == QSEC_ERR_INVALID);  // not a prime power
  CHECK(qsec_run(ctx.p, "mub.gen", "{\"d\": 5, \"bogus\": 1}", &out) == QSEC_ERR_INVALID);
  CHECK(qsec_run(nullptr, "mub.gen", "{}", &out) == QSEC_ERR_INVALID);
}

TEST_CASE("mub.gen through the C surface") {
  Ctx ctx;
  std::string out = run_ok(ctx.p, "mub.gen", "{\"d\": 5}");
  CHECK(out.find("\"pass\": true") != std::string::npos);
  CHECK(out.find("\"bases\"") != std::string::npos);
}

TEST_CASE("determinism: identical runs are byte-identical") {
  Ctx ctx;
  const char* params = "{\"n\": 8, \"trials\": 20, \"seed\": 99, \"attack\": \"intercept\"}";
  std::string a = run_ok(ctx.p, "bb84.run", params);
  std::string b = run_ok(ctx.p, "bb84.run", params);
  CHECK(a == b);

  std::string c = run_ok(ctx.p, "bb84.run",
                         "{\"n\": 8, \"trials\": 20, \"seed\": 100, \"attack\": \"intercept\"}");
  CHECK(a != c);  // the seed is live
}

TEST_CASE("csv rendering") {
  Ctx ctx;
  std::string sweep = run_ok(
      ctx.p, "bb84.sweep",
      "{\"n\": 8, \"trials\": 10, \"seed\": 3, \"p_allowed_values\": [0.05, 0.1]}");
  char* csv = nullptr;
  REQUIRE(qsec_result_to_csv(ctx.p, sweep.c_str(), &csv) == QSEC_OK);
  std::string s = csv;
  qsec_string_free(csv);
  CHECK(s.rfind("p_allowed,pass_rate,key_rate,mismatch_rate,bound_lhs,bound_rhs\n", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == 3);
}

TEST_CASE("threshold helper") {
  Ctx ctx;
  double p = 0;
  REQUIRE(qsec_threshold(ctx.p, &p) == QSEC_OK);
  CHECK(std::abs(p - 0.0756) < 5e-4);
}

TEST_CASE("codes.threshold command") {
  Ctx ctx;
  std::string out = run_ok(ctx.p, "codes.threshold", "{\"p_a\": 0.05, \"n\": 2000}");
  CHECK(out.find("p_star") != std::string::npos);
  CHECK(out.find("admissible_region") != std::string::npos);
}
