#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "tergm/degeneracy.hpp"
#include "tergm/estimator.hpp"
#include "tergm/evaluation.hpp"
#include "tergm/inference.hpp"

namespace tergm {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.3.0";

Json to_json(const FitResult& fit, const StatisticSet& stats);
Json to_json(const FitConfig& config);
Json to_json(const GAConfig& config);
Json to_json(const TestResult& result, const StatisticSet& null_stats, const StatisticSet& alt_stats);
Json to_json(const ClassificationResult& result, const StatisticSet& stats, const NodeAttributeTable& labels,
             const NetworkSeries& series);
Json to_json(const RecoveryReport& report);
Json to_json(const FitAssessment& assessment);
Json to_json(const DegeneracyReport& report);

/// Unknown keys are rejected so that typos do not silently fall back to defaults.
void apply_json(FitConfig& config, const Json& j);
void apply_json(GAConfig& config, const Json& j);

std::string recovery_csv(const RecoveryReport& report);
std::string assessment_csv(const FitAssessment& assessment);

/// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::string& path);

/// Provenance block embedded in every report.
class RunManifest {
 public:
  RunManifest(std::string command, std::uint64_t seed);
  void add_input(const std::string& path);
  void set_config(Json config) { config_ = std::move(config); }
  Json to_json() const;

 private:
  std::string command_;
  std::uint64_t seed_;
  Json config_ = Json::object();
  std::map<std::string, std::string> inputs_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace tergm
