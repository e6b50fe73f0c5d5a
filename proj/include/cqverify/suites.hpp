// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cqverify/report.hpp"

namespace cq {

struct RunConfig {
  std::string suite;
  std::string model;
  std::optional<std::string> immersion;
  int samples = 200;
  std::uint64_t seed = 42;
  /// Replaces every residual tolerance when set.
  std::optional<double> tol;
  double step = 1e-4;
  std::optional<std::string> out;
  ReportFormat format = ReportFormat::json;
};

const std::vector<std::string>& suite_names();

/// Throws UsageError for an unknown suite, unparsable model or immersion,
/// samples < 1, or a step outside [1e-6, 1e-3].
void validate(const RunConfig& config);

/// Runs the suite.  Domain and degeneracy failures at individual samples are
/// counted as skips.  Deterministic in (config, seed) regardless of thread count.
ReportDocument run(const RunConfig& config);

enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitUsage = 2, kExitIo = 3 };

/// Worker count: hardware concurrency, capped by VERIFY_THREADS when set.
int worker_count();

/// Independent per-sample seed.
std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace cq
