#ifndef QSEC_EXPERIMENTS_HPP
#define QSEC_EXPERIMENTS_HPP

#include <string>

#include <json.hpp>

// Experiment-level entry points behind the C API and the CLI. Every command
// takes a JSON parameter object (validated against a per-command schema) and
// returns a JSON result with a deterministic header
//   {version, command, seed, params_hash}.
// Identical command + params + seed produce byte-identical dumps.

namespace qsec::experiments {

inline constexpr const char* kVersion = "qseclab 0.1.0";

/// Thrown for malformed parameters; maps to exit/status code 2.
struct InvalidParams : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
/// Thrown when a verification suite fails; maps to exit/status code 3.
struct VerificationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Commands: mub.gen, mub.verify, qotp.check, bounds.verify, bb84.run,
/// bb84.sweep, codes.threshold, anonring.run, verify.all.
nlohmann::json run(const std::string& command, const nlohmann::json& params);

/// CSV rendering for row-shaped results (bb84.sweep, anonring.run); 12
/// significant digits, fixed column order.
std::string to_csv(const nlohmann::json& result);

}  // namespace qsec::experiments

#endif  // QSEC_EXPERIMENTS_HPP
