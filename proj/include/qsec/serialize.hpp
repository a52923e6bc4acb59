#ifndef QSEC_SERIALIZE_HPP
#define QSEC_SERIALIZE_HPP

#include <string>

#include <json.hpp>

#include "qsec/gfpauli.hpp"
#include "qsec/lincode.hpp"
#include "qsec/mub.hpp"
#include "qsec/qlinalg.hpp"
#include "qsec/qotp.hpp"

// JSON schemas shared by fixtures, the CLI and the C API. Floats are rounded
// to 12 significant digits before serialization so identical runs produce
// byte-identical output.

namespace qsec {

/// Round-trip a double through "%.12g".
double round12(double x);

nlohmann::json matrix_to_json(const Mat& m);          // {dim, re[][], im[][]}
Mat matrix_from_json(const nlohmann::json& j);

nlohmann::json pauli_index_to_json(const PauliIndex& idx, int p, int m);
PauliIndex pauli_index_from_json(const nlohmann::json& j);

nlohmann::json fpmat_to_json(const FpMat& a);
FpMat fpmat_from_json(const nlohmann::json& j);

nlohmann::json mub_family_to_json(const MubFamily& f);  // {d, bases[][]: {re, im}}
MubFamily mub_family_from_json(const nlohmann::json& j);

/// Plain-text dump, one matrix block per basis (rows are basis vectors).
std::string mub_family_to_text(const MubFamily& f);

nlohmann::json code_to_json(const BinaryLinearCode& c);  // {n, k, generator_rows_hex[]}
BinaryLinearCode code_from_json(const nlohmann::json& j);

nlohmann::json encryption_set_to_json(const EncryptionSet& s);
EncryptionSet encryption_set_from_json(const nlohmann::json& j);

nlohmann::json bound_report(const std::string& name, double value, double oracle_value);

/// FNV-1a of a canonical JSON dump, hex string; embedded in output headers.
std::string params_hash(const nlohmann::json& j);

}  // namespace qsec

#endif  // QSEC_SERIALIZE_HPP
