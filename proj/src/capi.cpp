#include "qsec/qsec.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "qsec/experiments.hpp"
#include "qsec/lincode.hpp"

struct qsec_ctx {
  std::string last_error;
};

namespace {

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

qsec_status set_error(qsec_ctx* ctx, qsec_status st, const std::string& msg) {
  if (ctx) ctx->last_error = msg;
  return st;
}

}  // namespace

extern "C" {

const char* qsec_version(void) { return qsec::experiments::kVersion; }

qsec_ctx* qsec_ctx_new(void) { return new (std::nothrow) qsec_ctx{}; }

void qsec_ctx_free(qsec_ctx* ctx) { delete ctx; }

const char* qsec_last_error(const qsec_ctx* ctx) {
  return ctx ? ctx->last_error.c_str() : "null context";
}

qsec_status qsec_run(qsec_ctx* ctx, const char* command, const char* params_json,
                     char** result_json) {
  if (!ctx || !command || !result_json)
    return set_error(ctx, QSEC_ERR_INVALID, "null argument");
  *result_json = nullptr;
  nlohmann::json params = nlohmann::json::object();
  if (params_json && *params_json) {
    params = nlohmann::json::parse(params_json, nullptr, false);
    if (params.is_discarded() || !params.is_object())
      return set_error(ctx, QSEC_ERR_INVALID, "params_json is not a JSON object");
  }
  try {
    nlohmann::json out = qsec::experiments::run(command, params);
    *result_json = dup_string(out.dump(2));
    ctx->last_error.clear();
    return QSEC_OK;
  } catch (const qsec::experiments::InvalidParams& e) {
    return set_error(ctx, QSEC_ERR_INVALID, e.what());
  } catch (const qsec::experiments::VerificationFailure& e) {
    // the failure report is part of the message; surface it to the caller
    *result_json = dup_string(e.what());
    return set_error(ctx, QSEC_ERR_VERIFICATION, e.what());
  } catch (const std::exception& e) {
    return set_error(ctx, QSEC_ERR_INTERNAL, e.what());
  }
}

qsec_status qsec_result_to_csv(qsec_ctx* ctx, const char* result_json, char** csv_out) {
  if (!ctx || !result_json || !csv_out)
    return set_error(ctx, QSEC_ERR_INVALID, "null argument");
  *csv_out = nullptr;
  nlohmann::json parsed = nlohmann::json::parse(result_json, nullptr, false);
  if (parsed.is_discarded())
    return set_error(ctx, QSEC_ERR_INVALID, "result_json does not parse");
  try {
    *csv_out = dup_string(qsec::experiments::to_csv(parsed));
    return QSEC_OK;
  } catch (const std::exception& e) {
    return set_error(ctx, QSEC_ERR_INTERNAL, e.what());
  }
}

qsec_status qsec_threshold(qsec_ctx* ctx, double* p_star) {
  if (!ctx || !p_star) return set_error(ctx, QSEC_ERR_INVALID, "null argument");
  *p_star = qsec::threshold_solve();
  return QSEC_OK;
}

void qsec_string_free(char* s) { std::free(s); }

}  // extern "C"
