#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hyperwalk/casson.hpp"
#include "hyperwalk/chain.hpp"
#include "hyperwalk/report.hpp"
#include "hyperwalk/stats.hpp"
#include "hyperwalk/walker.hpp"

namespace hyperwalk {

/// Invalid configuration (exit status 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An estimator could not produce a result (exit status 3).
class EstimatorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A certificate or domination check failed (exit status 4).
class CertificateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "1.0.0";

enum class ValueType { Integer, Number, Boolean, Text, IntegerList };

struct ConfigKey {
  std::string name;
  ValueType type;
  /// Kinds accepting the key; empty means all kinds.
  std::vector<std::string> kinds;
  std::string help;
  /// Smallest accepted value for numeric keys.
  std::optional<double> min;
};

/// The flat configuration schema.
const std::vector<ConfigKey>& config_schema();
const std::vector<std::string>& experiment_kinds();

/// Validated flat configuration. Execution settings (workers, out) are kept
/// apart from `values`, which alone determines every reported number.
struct ExperimentConfig {
  nlohmann::json values = nlohmann::json::object();
  unsigned workers = 1;
  std::string out;

  std::string kind() const { return values.at("kind").get<std::string>(); }
  bool has(const std::string& key) const { return values.contains(key); }
  std::int64_t integer(const std::string& key, std::int64_t fallback) const;
  double number(const std::string& key, double fallback) const;
  bool boolean(const std::string& key, bool fallback) const;
  std::string text(const std::string& key, const std::string& fallback) const;
  std::vector<int> integers(const std::string& key, const std::vector<int>& fallback) const;
};

/// Parses a JSON document (empty text is an error). Throws ConfigError with
/// every schema problem listed.
nlohmann::json parse_config_text(const std::string& text);

/// Merges a config document with flag overrides (flag text converted with
/// the schema type) and validates the result. Without a document,
/// schema_version defaults to the current version. Throws ConfigError.
ExperimentConfig build_config(const std::optional<nlohmann::json>& document,
                              const std::map<std::string, std::string>& flags);

/// In-memory artifacts of a run: file name -> contents.
struct RunArtifacts {
  std::map<std::string, std::string> files;
  std::string summary;
  /// Text printed on standard output; the summary when empty.
  std::string console;
  nlohmann::json results = nlohmann::json::object();
  /// 0, or 3 / 4 when a stage failed; partial artifacts are kept.
  int status = 0;
  std::string failure;
};

/// Runs one experiment. Invalid parameters throw ConfigError; a failed
/// stage sets status and failure instead of throwing.
RunArtifacts run_experiment(const ExperimentConfig& config);

/// Full manifest document for a run.
nlohmann::json make_manifest(const ExperimentConfig& config, const RunArtifacts& artifacts);

/// Writes manifest.json, summary.txt and the data files into `dir`.
void write_artifacts(const std::filesystem::path& dir, const ExperimentConfig& config, const RunArtifacts& artifacts);

/// Empirical CDF of the phi process against the chain at one time.
struct CdfComparison {
  int n = 0;
  /// max over states of (empirical lower bound - chain CDF); <= 0 passes.
  double worst_excess = 0.0;
  bool passed = false;
};

struct PipelineResult {
  CalibrationResult calibration;
  ChainParams chain;
  CheckReport kernel_check;
  std::vector<CdfComparison> cdf;
  CheckReport certificate;
  double rho_bound = 0.0;
  double rho_estimate = 0.0;
  SplittingReport splitting;
  double fitted_k = 0.0;
  double fitted_c = 0.0;
  int threshold_n = 0;
  GenusThreshold thresholds;
  double c0 = 0.0;
  std::int64_t first_crossover = 0;
  std::int64_t n_star = 0;
  std::string verdict;
  RunArtifacts artifacts;
};

/// The pipeline: calibrate, domination, certificate, splitting fit,
/// thresholds, c0 and crossover. Stops at the first failing stage with
/// artifacts.status set (3 estimator, 4 certificate or domination).
PipelineResult run_pipeline(const ExperimentConfig& config);

/// Runs with exit-status mapping: 0 success, 2 configuration, 3 estimator,
/// 4 certificate. Messages go to `err`.
/// Artifacts are written to `out` when it is nonempty.
int run_and_report(const std::optional<nlohmann::json>& document, const std::map<std::string, std::string>& flags,
                   unsigned workers, const std::string& out, std::ostream& log, std::ostream& err);

/// Prints the summary of an existing output directory; 2 when the manifest
/// or a listed artifact is missing.
int report_run(const std::filesystem::path& dir, std::ostream& log, std::ostream& err);

}  // namespace hyperwalk
