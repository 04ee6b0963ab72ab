#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace frachs::cli {

enum ExitCode : int { kSuccess = 0, kFailure = 1, kConfigError = 2, kDivergence = 3 };

/// Every setting of a run after the config file and the flags are merged.
/// Serialized verbatim into each report.
struct RunConfig {
  std::string command;
  int n = 2;
  double alpha = 1.5;
  double p = 2.0;
  std::uint64_t samples = 200000;
  std::uint64_t seed = 12345;
  double eps = 1e-2;
  double delta = 1e-9;
  std::string method = "mc";
  bool low_discrepancy = true;
  int batches = 32;
  std::string suite = "all";
  /// standard, profiles, all, or a comma separated list of field labels.
  std::string corpus = "standard";
  std::string start = "off_center";
  int k_max = 10;
  double tol = 1e-3;
  int cells = 0;
  std::string R_grid = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9";
  int lambda_points = 999;
  std::uint64_t a1_samples = 0;
  bool check_corpus = false;
  std::string config_path;
  std::string out_path;
  std::string table_path;
  std::string trace_path;
  std::string export_profile;
  std::string profile_path;
};

/// Parses and runs one command. The report goes to --out or to `out`;
/// diagnostics go to `err`. Returns an ExitCode.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_hardy(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_symmetrize(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_bound(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace frachs::cli
