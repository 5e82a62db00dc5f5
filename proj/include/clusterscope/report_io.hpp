#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "clusterscope/pipeline.hpp"

namespace clusterscope {

inline constexpr const char* kSchema = "clusterscope/1";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kClustererName =
    "incremental k-means (k-means++ center insertion warm start + k-means++ restarts)";

using Json = nlohmann::ordered_json;

struct InputRecord {
    std::string role;
    std::string path;
    std::string sha256;
};

/// Resolved parameters of one run. Contains no timestamps or host data, so
/// replaying it reproduces the outputs byte for byte.
struct RunManifest {
    std::string command;
    std::string tool_version = kToolVersion;
    std::vector<InputRecord> inputs;
    Json parameters = Json::object();
    /// Output role -> path as given on the command line.
    Json outputs = Json::object();
};

std::string sha256_hex(const std::filesystem::path& path);

Json to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const Json& j);

/// 17 significant digits; infinities become the tokens "inf" / "-inf".
std::string format_number(double v);
/// A JSON number, or the "inf" / "-inf" string token.
Json json_number(double v);

Json analysis_json(const AnalysisReport& report, const RunManifest& manifest);
Json sweep_json(const SweepReport& report, const RunManifest& manifest);

/// k,compactness,separability_raw,separability_scaled,t_raw,t_scaled
std::string decision_csv(const SweepReport& report);
/// k,T_k,S_av,DB,XB,Dn,CH (CH unscaled)
std::string table_csv(const SweepReport& report);
/// Header row of cluster ids, then one row per cluster.
std::string margin_csv(const MarginMatrix& margins, bool scaled);
/// filter,cluster,size,retained,epsilon,rungs,radius,mean_radius,unshelled,compactness
std::string clusters_csv(const AnalysisReport& report);
/// filter,k,C_k,s_k,distribution_margin,total_margin_raw,total_margin_scaled,N_k,N_bar_k
std::string summary_csv(const AnalysisReport& report);
/// point,label,adjacent,adjacent_to   (adjacent_to: ';'-separated cluster ids)
std::string adjacency_csv(const Partition& partition, const MarginMatrix& margins);

/// Decision space scatter over [0,1] x [-1,1]; the manifest is embedded as metadata.
std::string decision_svg(const SweepReport& report, const RunManifest& manifest);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace clusterscope
