// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace cq {

inline constexpr const char* kToolVersion = "cqverify 0.1.0";

struct IdentityResidual {
  std::string name;
  int samples = 0;
  int skipped = 0;
  double max_res = 0.0;  ///< NaN when no sample contributed
  double mean_res = 0.0;
  double tol = 0.0;
  bool pass = false;

  bool operator==(const IdentityResidual&) const = default;
};

/// Running max/mean of one residual.  Merging is associative, so per-thread
/// accumulators can be combined in any grouping.
class ResidualAccumulator {
 public:
  ResidualAccumulator(std::string name, double tol) : name_(std::move(name)), tol_(tol) {}

  void add(double residual);
  void skip(int count = 1) { skipped_ += count; }
  void merge(const ResidualAccumulator& other);

  const std::string& name() const { return name_; }
  int samples() const { return samples_; }
  double max() const { return max_; }
  IdentityResidual finish() const;

 private:
  std::string name_;
  double tol_;
  int samples_ = 0;
  int skipped_ = 0;
  double max_ = 0.0;
  double sum_ = 0.0;
  bool nan_ = false;
};

/// A recorded quantity that is not a residual: a lower bound that must hold
/// (gating) or a value kept for the record (non-gating).
struct Observation {
  std::string name;
  double value = 0.0;
  std::string relation;  ///< ">", ">=", "<=", or "info"
  double bound = 0.0;
  bool pass = true;
  bool gating = true;

  bool operator==(const Observation&) const = default;
};

Observation observe(std::string name, double value, std::string relation, double bound, bool gating = true);

struct ReportDocument {
  std::string tool_version = kToolVersion;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  nlohmann::ordered_json conventions = nlohmann::ordered_json::object();
  std::vector<IdentityResidual> residuals;
  std::vector<Observation> observations;
  bool overall_pass = true;
  double duration_s = 0.0;

  /// Sets overall_pass from the residuals and gating observations.
  void finalize();
  bool operator==(const ReportDocument& other) const;
};

nlohmann::ordered_json default_conventions();

enum class ReportFormat { json, csv };

std::string emit(const ReportDocument& report, ReportFormat format);
ReportDocument parse_report_json(std::string_view text);

}  // namespace cq
