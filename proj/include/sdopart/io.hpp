#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "sdopart/partition.hpp"

namespace sdopart {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

/// Shortest decimal string that parses back to the same double ("nan", "inf" allowed).
std::string format_real(double x);
/// Accepts a decimal string or a JSON number.
double parse_real(const Json& j);

Json problem_to_json(const ParametricSDO& prob);
/// Throws DataError on schema violations; the result has passed validate().
ParametricSDO problem_from_json(const Json& j);

Json settings_to_json(const PartitionSettings& s);
PartitionSettings settings_from_json(const Json& j);

Json report_to_json(const PartitionReport& rep);
PartitionReport report_from_json(const Json& j);

/// Two-space indented document with a trailing newline.
std::string dump(const Json& j);
Json parse_document(const std::string& text);

std::string read_text(const std::string& path);
/// Throws Error when the file exists and overwrite is false, or on I/O failure.
void write_text(const std::string& path, const std::string& text, bool overwrite = true);

ParametricSDO read_problem_file(const std::string& path);
void write_problem_file(const std::string& path, const ParametricSDO& prob, bool overwrite);
PartitionReport read_report_file(const std::string& path);
void write_report_file(const std::string& path, const PartitionReport& rep);

/// Columns eps, v, min_eig_X, min_eig_S, jac_min_sv with v the objective value.
void write_samples_csv(std::ostream& os, const std::vector<Sample>& samples);

}  // namespace sdopart
