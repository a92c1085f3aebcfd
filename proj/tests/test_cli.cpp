#include <cstdio>
#include <fstream>
#include <sstream>

#include "causal/cli.hpp"
#include "doctest.h"

using namespace causal;

namespace {

CommandRequest request(const std::string& command) {
  CommandRequest r;
  r.command = command;
  return r;
}

int run_args(std::vector<std::string> args, json* report = nullptr) {
  args.insert(args.begin(), "causal");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (report && !out.str().empty()) *report = json::parse(out.str());
  return code;
}

}  // namespace

TEST_CASE("classify SymR(4) finds the modular Pierce involution") {
  auto req = request("classify");
  req.family = "SymR";
  req.size = 4;
  req.samples = 5;
  CommandResult res = run(req);
  CHECK(res.exit_code == kExitOk);
  bool found = false;
  for (const auto& e : res.report["involutions"]) {
    if (e["kind"] == "Pierce(2)") {
      found = true;
      CHECK(e["modular"] == true);
      CHECK(e.contains("witness"));
    }
    if (e["kind"] == "Pierce(1)") CHECK(e["modular"] == false);
    CHECK(e["cone_class"]["+"] == "Elliptic");
    CHECK(e["cone_class"]["-"] == "Hyperbolic");
    CHECK(e["dim_fixed"]["+"] == e["dim_fixed"]["-"]);
  }
  CHECK(found);
}

TEST_CASE("single verdict form") {
  auto req = request("classify");
  req.family = "HermC";
  req.size = 2;
  req.involution = "S1";
  req.sign = -1;
  req.samples = 5;
  CommandResult res = run(req);
  CHECK(res.exit_code == kExitOk);
  for (const char* k : {"family", "size", "involution", "sign", "dim_fixed",
                        "cone_class", "modular"})
    CHECK(res.report.contains(k));
  CHECK(res.report["cone_class"] == "Hyperbolic");
  CHECK(res.report["dim_fixed"] == 6);  // so*(4)
}

TEST_CASE("verify-tables has an empty diff") {
  auto req = request("verify-tables");
  req.max_rank = 2;
  CommandResult res = run(req);
  CHECK(res.exit_code == kExitOk);
  CHECK(res.report["diff"].empty());
  CHECK(res.report["rows_checked"].get<int>() > 0);
  // Every expected row in scope is produced.
  CHECK(res.report["rows_checked"].get<size_t>() == expected_table(2).size());
}

TEST_CASE("expected table sanity") {
  // Independent of the formulas: the flip row is the whole conformal algebra,
  // whose dimension follows from dim g = dim V + dim g_0 + dim V.
  for (const auto& row : expected_table(4)) {
    if (row.involution != "Flip") continue;
    const Algebra a = make_algebra(parse_family(row.family), row.size);
    auto m = matrix_model(a);
    CHECK(row.dim_plus == m->derived_dim());
  }
}

TEST_CASE("gh-probe example") {
  auto req = request("gh-probe");
  req.region = "ads-wedge";
  req.d = 3;
  req.eps = 0.3;
  req.samples = 10000;
  CommandResult res = run(req);
  CHECK(res.exit_code == kExitOk);
  CHECK(res.report["escape_detected"] == true);
  CHECK(res.report["min_boundary_distance"].get<double>() < kEscapeThreshold);
  for (const char* k : {"region", "a", "b", "samples", "min_boundary_distance"})
    CHECK(res.report.contains(k));
  req.region = "ds-wedge";
  res = run(req);
  CHECK(res.exit_code == kExitOk);
  CHECK(res.report["escape_detected"] == false);
}

TEST_CASE("deterministic under a fixed seed") {
  auto req = request("wedge");
  req.region = "ads-wedge";
  req.d = 3;
  req.samples = 2000;
  req.seed = 42;
  CHECK(run(req).report == run(req).report);
  json a, b;
  CHECK(run_args({"cayley", "--family", "HermH", "--size", "2", "--seed", "7"}, &a) == 0);
  CHECK(run_args({"cayley", "--family", "HermH", "--size", "2", "--seed", "7"}, &b) == 0);
  CHECK(a == b);
  CHECK(a["form_space"]["field"] == "H");
}

TEST_CASE("wedge and cayley commands") {
  auto req = request("wedge");
  req.region = "ads-wedge";
  req.d = 4;
  req.samples = 4000;
  CommandResult res = run(req);
  CHECK(res.exit_code == kExitOk);
  CHECK(res.report["component_count"] == 2);
  CHECK(res.report["disagreements"] == 0);
  req.region = "ds-wedge";
  res = run(req);
  CHECK(res.exit_code == kExitOk);
  CHECK(res.report["disagreements"] == 0);

  auto c = request("cayley");
  c.family = "HermC";
  c.size = 2;
  c.p = 1;
  res = run(c);
  CHECK(res.exit_code == kExitOk);
  CHECK(res.report["group_check_failed"] == 0);
  CHECK(res.report["form_space"]["p"] == 1);
}

TEST_CASE("involutions lists the catalog") {
  json r;
  CHECK(run_args({"involutions", "--family", "SpinFactor", "--size", "4"}, &r) == 0);
  // Identity, three reflections, flip.
  CHECK(r["involutions"].size() == 5);
}

TEST_CASE("exit codes") {
  json r;
  CHECK(run_args({"classify"}, &r) == kExitUsage);
  CHECK(r.contains("error"));
  CHECK(run_args({"frobnicate"}) == kExitUsage);
  CHECK(run_args({"classify", "--size", "x"}) == kExitUsage);
  CHECK(run_args({"classify", "--family", "HermO", "--size", "3"}) == kExitUsage);
  CHECK(run_args({"classify", "--family", "SymR", "--size", "2", "--sign", "3"}) ==
        kExitUsage);
  CHECK(run_args({"cayley", "--family", "SymR", "--size", "3"}, &r) == kExitUsage);
  CHECK(r["error"]["kind"] == "InvalidSize");
  CHECK(run_args({"gh-probe", "--region", "nowhere"}) == kExitUsage);
  CHECK(run_args({"gh-probe", "--region", "ds-wedge", "--eps", "1.5"}) == kExitUsage);
  CHECK(run_args({"verify-tables", "--max-rank", "9"}) == kExitUsage);
  CHECK(run_args({"--help"}) == 0);
  // A single sample cannot reach the boundary: the expected escape is missed.
  CHECK(run_args({"gh-probe", "--region", "ads-wedge", "--samples", "1"}, &r) == kExitFailed);
  CHECK(r["escape_detected"] == false);
  CHECK(r["passed"] == false);
}

TEST_CASE("tolerance flags are scoped to the invocation") {
  const double before = tolerances().algebra;
  auto req = request("involutions");
  req.family = "SymR";
  req.size = 2;
  req.tol_algebra = 1e-6;
  CHECK(run(req).exit_code == kExitOk);
  CHECK(tolerances().algebra == before);
  req.tol_algebra = -1;
  CHECK(run(req).exit_code == kExitUsage);
}

TEST_CASE("json output file") {
  const std::string path = "cli_test_output.json";
  CHECK(run_args({"involutions", "--family", "HermC", "--size", "2", "--json", path}) == 0);
  std::ifstream f(path);
  REQUIRE(f.good());
  json r = json::parse(f);
  CHECK(r["family"] == "HermC");
  std::remove(path.c_str());
}
