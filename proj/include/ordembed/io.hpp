/// @file  io.hpp
/// @brief File formats (configuration CSV/JSON, rank CSV, triple CSV,
///        transform JSON), run manifests, and report serialization.

#pragma once

#include <ordembed/harness.hpp>
#include <ordembed/rankings.hpp>
#include <ordembed/solvers.hpp>
#include <ordembed/types.hpp>

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace ordembed::io {

using json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "ordembed 0.1.0";

/// 17 significant digits: round-trips doubles exactly through text.
std::string format_double(double v);

Configuration read_configuration_csv(const std::filesystem::path& path);
void write_configuration_csv(const Configuration& c, const std::filesystem::path& path);

json configuration_to_json(const Configuration& c);
Configuration configuration_from_json(const json& j);

RankMatrix read_rank_matrix_csv(const std::filesystem::path& path);
void write_rank_matrix_csv(const RankMatrix& R, const std::filesystem::path& path);

TripleSet read_triples_csv(const std::filesystem::path& path);
void write_triples_csv(const TripleSet& T, const std::filesystem::path& path);

json similarity_to_json(const SimilarityTransform& T);
SimilarityTransform similarity_from_json(const json& j);
json gauge_to_json(const GaugePair& G);

/// FNV-1a 64-bit content hash, hex-encoded.
std::string fnv1a64_hex(const std::string& bytes);
std::string hash_file(const std::filesystem::path& path);

/// Manifest embedded in every output JSON: the command, input files with
/// content hashes, the seed, the tool version and a timestamp. The
/// timestamp honors SOURCE_DATE_EPOCH and otherwise falls back to the epoch
/// so that outputs are byte-reproducible by default.
json make_manifest(const std::string& command,
                   const std::vector<std::filesystem::path>& inputs,
                   std::uint64_t seed);

json solver_options_to_json(const SolverOptions& o);
SolverOptions solver_options_from_json(const json& j);

json solve_result_to_json(const SolveResult& r);

ExperimentSpec experiment_spec_from_json(const json& j);
json experiment_spec_to_json(const ExperimentSpec& spec);
json experiment_report_to_json(const ExperimentReport& report);

json counterexample_report_to_json(const CounterexampleReport& r);

/// Static log-log SVG of median residual and recovery error against size.
void write_report_svg(const ExperimentReport& report, const std::filesystem::path& path);

void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace ordembed::io
