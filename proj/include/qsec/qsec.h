/* Public C interface to the qseclab shared library.
 *
 * Usage: create a context, run experiment commands with JSON parameters,
 * read JSON results, free strings with qsec_string_free. All functions are
 * thread-compatible (one context per thread); a context stores only the last
 * error message.
 *
 * Commands: "mub.gen", "mub.verify", "qotp.check", "bounds.verify",
 * "bb84.run", "bb84.sweep", "codes.threshold", "anonring.run", "verify.all".
 * Identical command + params produce byte-identical result strings.
 */
#ifndef QSEC_QSEC_H
#define QSEC_QSEC_H

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define QSEC_API __declspec(dllexport)
#else
#define QSEC_API __attribute__((visibility("default")))
#endif

typedef struct qsec_ctx qsec_ctx;

typedef enum qsec_status {
  QSEC_OK = 0,
  QSEC_ERR_INVALID = 2,      /* malformed command or parameters */
  QSEC_ERR_VERIFICATION = 3, /* a verification suite failed its assertions */
  QSEC_ERR_INTERNAL = 4
} qsec_status;

QSEC_API const char* qsec_version(void);

QSEC_API qsec_ctx* qsec_ctx_new(void);
QSEC_API void qsec_ctx_free(qsec_ctx* ctx);

/* Last error message for this context; owned by the context, valid until the
 * next call on it. Never NULL. */
QSEC_API const char* qsec_last_error(const qsec_ctx* ctx);

/* Run one experiment command. params_json may be NULL or "" for defaults.
 * On QSEC_OK (and on QSEC_ERR_VERIFICATION, where a report exists),
 * *result_json receives a malloc'd JSON string owned by the caller. */
QSEC_API qsec_status qsec_run(qsec_ctx* ctx, const char* command, const char* params_json,
                              char** result_json);

/* Convenience: CSV rendering of a result produced by qsec_run. */
QSEC_API qsec_status qsec_result_to_csv(qsec_ctx* ctx, const char* result_json, char** csv_out);

/* Convenience: the error-rate threshold p* solving 1 - H2(2p) - H2(p) = 0. */
QSEC_API qsec_status qsec_threshold(qsec_ctx* ctx, double* p_star);

QSEC_API void qsec_string_free(char* s);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* QSEC_QSEC_H */
