#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "causal/grassmann_groups.hpp"
#include "causal/lorentz_quadric.hpp"
#include "causal/makarevic_spaces.hpp"
#include "json.hpp"

namespace causal {

using json = nlohmann::json;

// Exit codes of `run`.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitUsage = 2;

struct CommandRequest {
  std::string command;  // classify, verify-tables, wedge, gh-probe, cayley, involutions
  std::optional<std::string> family;
  std::optional<int> size;
  std::optional<std::string> involution;
  std::optional<int> sign;
  std::uint64_t seed = 1;
  std::optional<int> samples;
  std::optional<std::string> json_path;
  std::optional<double> tol_algebra;
  std::optional<double> tol_exp;
  int max_rank = 3;
  std::string region = "ads-wedge";
  int d = 3;
  double eps = 0.3;
  std::optional<int> p;  // signature of the form for `cayley` over C
};

struct CommandResult {
  int exit_code = kExitOk;
  json report;
};

// Validates the request, dispatches and returns the JSON report. Invalid
// requests give kExitUsage with {"error": {...}}; failed checks kExitFailed.
CommandResult run(const CommandRequest& req);

// Parses argv, runs, prints the report to `out` (and to --json <path>).
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

// Expected dimension and modularity columns of the classification tables,
// keyed by family, size and involution name.
struct ExpectedRow {
  std::string family;
  int size = 0;
  std::string involution;
  std::string type;
  int dim_plus = 0;   // dim g^(alpha)
  int dim_minus = 0;  // dim g^(-alpha)
  int dim_h = 0;      // dim h^(alpha)
  bool modular = false;
};

inline constexpr int kTableVersion = 1;
std::vector<ExpectedRow> expected_table(int max_rank);

json to_json(const GHProbeReport& r);
json to_json(const FormSpace& s);
json to_json(const CMat& m);
json to_json(const Vec& v);

}  // namespace causal
