#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sparsecut::cli {

struct SuiteRow {
  std::string id;
  int n = 0;
  std::optional<double> opt;
  std::optional<double> spectral;
  std::optional<double> lr;
  std::optional<double> sdp;
  std::optional<double> rounded;
  std::optional<double> bound;
  bool bound_holds = true;
  std::string note;  ///< printed to stdout only
};

struct SuiteConfig {
  std::uint64_t seed = 0;
  int count = 0;  ///< 0 selects the suite default
};

/// Runs one named suite; rows come back sorted by id.
std::vector<SuiteRow> run_suite(const std::string& name, const SuiteConfig& config);

std::string suite_csv(const std::vector<SuiteRow>& rows);

}  // namespace sparsecut::cli
