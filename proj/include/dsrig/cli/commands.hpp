#pragma once
//
// The four subcommands. Each returns the process exit code:
//   0  every selected check passed
//   1  at least one check failed
//   2  invalid input or a violated hypothesis (nothing meaningful to check)

#include "dsrig/cli/config.hpp"
#include "dsrig/symfun.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dsrig::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitInvalid = 2;

struct CommonOptions {
  std::string config_path;
  std::optional<std::pair<int, int>> quad;
  std::vector<std::string> tol_overrides;  ///< NAME=VALUE
  std::string report_path;
  std::optional<unsigned> seed;
};

/// "identity N", "zero N", "diag a b ...", or rows "a b; c d". Throws
/// ParseError, or InvalidOperator for asymmetric input.
SymOperator parse_matrix(const std::string& text);

/// Config file plus command-line overrides.
ExperimentConfig resolve_config(const CommonOptions& opts);

int cmd_check_cone(const std::vector<std::string>& matrices, int random_count, const CommonOptions& opts,
                   std::ostream& out, std::ostream& err);
int cmd_geometry(const CommonOptions& opts, std::ostream& out, std::ostream& err);
int cmd_verify_identities(const CommonOptions& opts, std::ostream& out, std::ostream& err);
int cmd_rigidity(const CommonOptions& opts, std::ostream& out, std::ostream& err);

/// Full command-line entry point (argument parsing and dispatch).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dsrig::cli
