#include "causal/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <tuple>

#include "CLI11.hpp"

namespace causal {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const std::set<std::string> kCommands = {"classify", "verify-tables", "wedge",
                                         "gh-probe", "cayley", "involutions"};

bool is_usage_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::UnsupportedFamily:
    case ErrorCode::InvalidSize:
    case ErrorCode::IndexOutOfRange:
    case ErrorCode::IncompatibleKind:
    case ErrorCode::OutsideChartDomain:
    case ErrorCode::NotCausallyRelated:
    case ErrorCode::SizeMismatch: return true;
    default: return false;
  }
}

json error_report(const std::string& command, const std::string& kind,
                  const std::string& message) {
  return {{"command", command},
          {"passed", false},
          {"error", {{"kind", kind}, {"message", message}}}};
}

Algebra require_algebra(const CommandRequest& req) {
  if (!req.family) throw UsageError("--family is required");
  if (!req.size) throw UsageError("--size is required");
  const Family f = parse_family(*req.family);
  if (f == Family::HermO || f == Family::DirectSum)
    throw UsageError("family " + *req.family + " is not supported here");
  return make_algebra(f, *req.size);
}

int require_sign(const std::optional<int>& s) {
  if (s && *s != 1 && *s != -1) throw UsageError("--sign must be +1 or -1");
  return s.value_or(1);
}

int samples_or(const CommandRequest& req, int fallback) {
  const int n = req.samples.value_or(fallback);
  if (n < 1) throw UsageError("--samples must be positive");
  return n;
}

Vec unit(int n, int k) { return Vec::Unit(n, k); }

// ---------------------------------------------------------------- classify

json involution_entry(const InvolutionSpec& s, int samples, Rng& rng,
                      std::optional<int> only_sign) {
  json e = {{"kind", s.name()}, {"type", s.type_tag()}};
  json dims = json::object(), cones = json::object();
  for (int sign : {1, -1}) {
    if (only_sign && *only_sign != sign) continue;
    const std::string key = sign > 0 ? "+" : "-";
    FixedAlgebraReport fa = fixed_algebra(s, sign);
    dims[key] = fa.dim;
    if (sign > 0) e["dim_h"] = fa.h_part_dim;
    ConeVerdict cv = cone_classification(s, sign, samples, rng);
    cones[key] = spectrum_class_name(cv.verdict);
  }
  e["dim_fixed"] = dims;
  e["cone_class"] = cones;
  ModularityReport mr = modularity_check(s);
  e["modular"] = mr.modular;
  e["method"] = mr.method;
  if (mr.witness) e["witness"] = to_json(*mr.witness);
  return e;
}

// Expected cone verdicts: elliptic for C^(alpha), hyperbolic for C^(-alpha).
bool cones_ok(const json& entry) {
  const json& c = entry["cone_class"];
  if (c.contains("+") && c["+"] != spectrum_class_name(SpectrumClass::Elliptic))
    return false;
  if (c.contains("-") && c["-"] != spectrum_class_name(SpectrumClass::Hyperbolic))
    return false;
  return true;
}

CommandResult classify(const CommandRequest& req) {
  Algebra a = require_algebra(req);
  const int n = samples_or(req, 20);
  Rng rng(req.seed);
  std::vector<InvolutionSpec> specs;
  if (req.involution) {
    auto [kind, j] = parse_involution(*req.involution);
    Algebra target = kind == InvolutionKind::Flip ? make_direct_sum(a) : a;
    specs.push_back(make_involution(target, kind, j));
  } else {
    specs = involution_catalog(a);
  }
  const std::optional<int> only_sign =
      req.sign ? std::optional<int>(require_sign(req.sign)) : std::nullopt;
  CommandResult res;
  bool ok = true;
  if (req.involution && only_sign) {
    // Single verdict.
    json e = involution_entry(specs.front(), n, rng, only_sign);
    const std::string key = *only_sign > 0 ? "+" : "-";
    res.report = {{"command", "classify"},
                  {"family", family_name(a->family)},
                  {"size", a->size},
                  {"involution", e["kind"]},
                  {"sign", *only_sign},
                  {"dim_fixed", e["dim_fixed"][key]},
                  {"cone_class", e["cone_class"][key]},
                  {"modular", e["modular"]},
                  {"method", e["method"]}};
    if (e.contains("witness")) res.report["witness"] = e["witness"];
    ok = cones_ok(e);
  } else {
    json list = json::array();
    for (const auto& s : specs) {
      json e = involution_entry(s, n, rng, only_sign);
      ok = ok && cones_ok(e);
      list.push_back(e);
    }
    res.report = {{"command", "classify"},
                  {"family", family_name(a->family)},
                  {"size", a->size},
                  {"samples", n},
                  {"involutions", list}};
  }
  res.report["passed"] = ok;
  res.exit_code = ok ? kExitOk : kExitFailed;
  return res;
}

// ----------------------------------------------------------- verify-tables

struct TableKey {
  std::string family;
  int size;
  std::string involution;
  bool operator<(const TableKey& o) const {
    return std::tie(family, size, involution) <
           std::tie(o.family, o.size, o.involution);
  }
};

std::vector<Algebra> table_algebras(const CommandRequest& req) {
  std::vector<Algebra> out;
  std::optional<Family> only;
  if (req.family) only = parse_family(*req.family);
  auto wanted = [&](Family f, int size) {
    return (!only || *only == f) && (!req.size || *req.size == size);
  };
  for (Family f : {Family::SymR, Family::HermC, Family::HermH})
    for (int r = 1; r <= req.max_rank; ++r)
      if (wanted(f, r)) out.push_back(make_algebra(f, r));
  if (req.max_rank >= 2)
    for (int d = 3; d <= 6; ++d)
      if (wanted(Family::SpinFactor, d))
        out.push_back(make_algebra(Family::SpinFactor, d));
  return out;
}

CommandResult verify_tables(const CommandRequest& req) {
  if (req.max_rank < 1 || req.max_rank > 4)
    throw UsageError("--max-rank must lie in [1, 4]");
  std::map<TableKey, ExpectedRow> expected;
  for (const auto& row : expected_table(req.max_rank))
    expected[{row.family, row.size, row.involution}] = row;

  json rows = json::array(), diff = json::array();
  std::set<TableKey> seen;
  for (const auto& a : table_algebras(req)) {
    for (const auto& s : involution_catalog(a)) {
      TableKey key{family_name(a->family), a->size, s.name()};
      seen.insert(key);
      FixedAlgebraReport plus = fixed_algebra(s, 1);
      FixedAlgebraReport minus = fixed_algebra(s, -1);
      const bool modular = modularity_check(s).modular;
      json computed = {{"type", s.type_tag()},
                       {"dim_plus", plus.dim},
                       {"dim_minus", minus.dim},
                       {"dim_h", plus.h_part_dim},
                       {"modular", modular}};
      rows.push_back({{"family", key.family},
                      {"size", key.size},
                      {"involution", key.involution},
                      {"computed", computed}});
      auto it = expected.find(key);
      if (it == expected.end()) {
        diff.push_back({{"family", key.family},
                        {"size", key.size},
                        {"involution", key.involution},
                        {"field", "row"},
                        {"computed", computed},
                        {"expected", nullptr}});
        continue;
      }
      const ExpectedRow& e = it->second;
      json want = {{"type", e.type},
                   {"dim_plus", e.dim_plus},
                   {"dim_minus", e.dim_minus},
                   {"dim_h", e.dim_h},
                   {"modular", e.modular}};
      for (const auto& [field, value] : want.items()) {
        if (computed[field] != value)
          diff.push_back({{"family", key.family},
                          {"size", key.size},
                          {"involution", key.involution},
                          {"field", field},
                          {"computed", computed[field]},
                          {"expected", value}});
      }
    }
  }
  // Expected rows in scope that were never produced.
  const auto algebras = table_algebras(req);
  for (const auto& [key, row] : expected) {
    bool in_scope = false;
    for (const auto& a : algebras)
      in_scope = in_scope || (family_name(a->family) == key.family && a->size == key.size);
    if (in_scope && !seen.count(key))
      diff.push_back({{"family", key.family},
                      {"size", key.size},
                      {"involution", key.involution},
                      {"field", "row"},
                      {"computed", nullptr},
                      {"expected", "present"}});
  }
  CommandResult res;
  res.report = {{"command", "verify-tables"},
                {"table_version", kTableVersion},
                {"max_rank", req.max_rank},
                {"rows_checked", rows.size()},
                {"rows", rows},
                {"diff", diff},
                {"passed", diff.empty()}};
  res.exit_code = diff.empty() ? kExitOk : kExitFailed;
  return res;
}

// -------------------------------------------------------------------- wedge

Vec uniform_vec(int n, Rng& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = u(rng);
  return v;
}

CommandResult wedge(const CommandRequest& req) {
  const GHRegion region = parse_gh_region(req.region);
  if (region != GHRegion::DeSitterWedge && region != GHRegion::AdSWedge)
    throw UsageError("wedge expects --region ds-wedge or ads-wedge");
  const int d = req.d;
  if (d < 2 || d > 8) throw UsageError("--d must lie in [2, 8]");
  const int n = samples_or(req, 10000);
  Rng rng(req.seed);
  std::uniform_real_distribution<double> target(-3.0, 0.0);
  auto mink = make_algebra(Family::SpinFactor, d);
  int members = 0, checked = 0, disagreements = 0;
  std::map<std::string, int> components;
  json first_disagreement;
  for (int i = 0; i < n; ++i) {
    // Stratified in scale; for AdS every other sample is a chart wedge point
    // rescaled to beta in (-3, 0) so both components are represented.
    Vec v = uniform_vec(d, rng, 1.0 + 2.0 * (i % 4));
    if (region == GHRegion::AdSWedge && i % 2 == 0 && v(d - 1) > std::abs(v(0)))
      v *= std::sqrt(target(rng) / minkowski(v, v));
    const double b = minkowski(v, v);
    bool model, oracle;
    std::optional<WedgeComponent> comp;
    if (region == GHRegion::DeSitterWedge) {
      const double margin = std::min(1 - v(0) - v.tail(d - 1).norm(),
                                     1 + v(0) - v.tail(d - 1).norm());
      if (std::abs(b - 1) < 1e-8 || std::abs(margin) < 1e-8) continue;
      model = wedge_regions(stereo_forward(Chart::DeSitter, v), WedgeKind::DeSitter).member;
      oracle = double_cone_membership(*mink, unit(d, 0), -unit(d, 0), v);
    } else {
      if (std::abs(b + 1) < 1e-8 || std::abs(v(d - 1) - std::abs(v(0))) < 1e-8) continue;
      WedgeMembership m =
          wedge_regions(stereo_forward(Chart::AntiDeSitter, v), WedgeKind::AntiDeSitter);
      model = m.member;
      comp = m.component;
      oracle = v(d - 1) > std::abs(v(0));
    }
    ++checked;
    members += model;
    if (comp) ++components[wedge_component_name(*comp)];
    if (model != oracle) {
      if (disagreements == 0)
        first_disagreement = {{"v", to_json(v)}, {"wedge", model}, {"oracle", oracle}};
      ++disagreements;
    }
  }
  CommandResult res;
  res.report = {{"command", "wedge"},
                {"region", gh_region_name(region)},
                {"d", d},
                {"samples", n},
                {"checked", checked},
                {"members", members},
                {"oracle", region == GHRegion::DeSitterWedge
                               ? "double-cone(e0, -e0)"
                               : "rindler-wedge"},
                {"disagreements", disagreements},
                {"passed", disagreements == 0}};
  if (region == GHRegion::AdSWedge) {
    res.report["components"] = components;
    res.report["component_count"] = components.size();
  }
  if (disagreements) res.report["first_disagreement"] = first_disagreement;
  res.exit_code = disagreements == 0 ? kExitOk : kExitFailed;
  return res;
}

// ----------------------------------------------------------------- gh-probe

CommandResult gh_probe_command(const CommandRequest& req) {
  const GHRegion region = parse_gh_region(req.region);
  const int d = req.d;
  if (d < 2 || d > 8) throw UsageError("--d must lie in [2, 8]");
  if (!(req.eps > 0)) throw UsageError("--eps must be positive");
  const int n = samples_or(req, 10000);
  Vec a, b;
  const Vec e0 = unit(d, 0);
  switch (region) {
    case GHRegion::AdSWedge:
      a = unit(d, d - 1) + req.eps * e0;
      b = unit(d, d - 1) - req.eps * e0;
      break;
    case GHRegion::DeSitterWedge:
      if (req.eps >= 1) throw UsageError("ds-wedge needs --eps < 1");
      a = req.eps * e0;
      b = -req.eps * e0;
      break;
    case GHRegion::PositiveCone:
      a = (1 + req.eps) * e0;
      b = e0;
      break;
    case GHRegion::FlipWedge:
      a = Vec(2 * d);
      b = Vec(2 * d);
      a << (1 + req.eps) * e0, -(1 + req.eps) * e0;
      b << e0, -e0;
      break;
  }
  Rng rng(req.seed);
  GHProbeReport rep = gh_probe(region, a, b, n, rng);
  const bool expected = region == GHRegion::AdSWedge;
  CommandResult res;
  res.report = to_json(rep);
  res.report["command"] = "gh-probe";
  res.report["d"] = d;
  res.report["eps"] = req.eps;
  res.report["threshold"] = kEscapeThreshold;
  res.report["expected_escape"] = expected;
  res.report["passed"] = rep.escape_detected == expected;
  res.exit_code = rep.escape_detected == expected ? kExitOk : kExitFailed;
  return res;
}

// ------------------------------------------------------------------- cayley

CommandResult cayley(const CommandRequest& req) {
  if (!req.family) throw UsageError("--family is required");
  if (!req.size) throw UsageError("--size is required");
  const Family f = parse_family(*req.family);
  BaseField field;
  switch (f) {
    case Family::SymR: field = BaseField::Real; break;
    case Family::HermC: field = BaseField::Complex; break;
    case Family::HermH: field = BaseField::Quaternion; break;
    default: throw UsageError("cayley expects SymR, HermC or HermH");
  }
  FormSpace space = make_form_space(field, *req.size, req.p.value_or(-1));
  const bool definite =
      field == BaseField::Quaternion ||
      (field == BaseField::Complex && (space.p == 0 || space.p == space.r));
  const int n = samples_or(req, 200);
  Rng rng(req.seed);
  int passed = 0, failed = 0, singular = 0;
  json first_failure;
  for (int i = 0; i < n; ++i) {
    CMat z = random_hermitian(space, rng);
    auto c = group_cayley(z, space);
    if (!c) {
      ++singular;
      continue;
    }
    if (unitary_and_cone_check(*c, space, CheckMode::Group)) {
      ++passed;
    } else {
      if (failed == 0) first_failure = {{"z", to_json(z)}, {"cayley", to_json(*c)}};
      ++failed;
    }
  }
  const bool ok = failed == 0 && (!definite || singular == 0);
  CommandResult res;
  res.report = {{"command", "cayley"},
                {"form_space", to_json(space)},
                {"samples", n},
                {"group_check_passed", passed},
                {"group_check_failed", failed},
                {"singular", singular},
                {"definite", definite},
                {"passed", ok}};
  if (failed) res.report["first_failure"] = first_failure;
  res.exit_code = ok ? kExitOk : kExitFailed;
  return res;
}

// -------------------------------------------------------------- involutions

CommandResult involutions(const CommandRequest& req) {
  Algebra a = require_algebra(req);
  json list = json::array();
  for (const auto& s : involution_catalog(a)) {
    list.push_back({{"name", s.name()},
                    {"kind", involution_kind_name(s.kind)},
                    {"j", s.j},
                    {"type", s.type_tag()},
                    {"lie_conjugate", s.lie_conjugate}});
  }
  CommandResult res;
  res.report = {{"command", "involutions"},
                {"family", family_name(a->family)},
                {"size", a->size},
                {"involutions", list},
                {"passed", true}};
  return res;
}

}  // namespace

json to_json(const Vec& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

json to_json(const CMat& m) {
  json re = json::array(), im = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json rr = json::array(), ri = json::array();
    for (int j = 0; j < m.cols(); ++j) {
      rr.push_back(m(i, j).real());
      ri.push_back(m(i, j).imag());
    }
    re.push_back(rr);
    im.push_back(ri);
  }
  return {{"re", re}, {"im", im}};
}

json to_json(const GHProbeReport& r) {
  return {{"region", gh_region_name(r.region)},
          {"a", to_json(r.a)},
          {"b", to_json(r.b)},
          {"samples", r.samples},
          {"interval_samples", r.interval_samples},
          {"min_boundary_distance", r.min_boundary_distance},
          {"escape_detected", r.escape_detected}};
}

json to_json(const FormSpace& s) {
  json j = {{"field", base_field_name(s.field)}, {"r", s.r}};
  if (s.field == BaseField::Complex) j["p"] = s.p;
  // Real J for R; the complex (2x2 image for H) matrix otherwise.
  if (s.field == BaseField::Real) {
    json rows = json::array();
    for (int i = 0; i < s.J.rows(); ++i) {
      json row = json::array();
      for (int k = 0; k < s.J.cols(); ++k) row.push_back(s.J(i, k).real());
      rows.push_back(row);
    }
    j["J"] = rows;
  } else {
    j["J"] = to_json(s.J);
  }
  return j;
}

std::vector<ExpectedRow> expected_table(int max_rank) {
  std::vector<ExpectedRow> out;
  auto add = [&](const std::string& fam, int size, const std::string& inv,
                 const std::string& type, int gp, int gm, int h, bool mod) {
    out.push_back({fam, size, inv, type, gp, gm, h, mod});
  };
  for (int r = 1; r <= max_rank; ++r) {
    // Sym_r(R): sp_{2r}(R).
    add("SymR", r, "Identity", "Id", r * r, r * r, r * (r - 1) / 2, false);
    for (int j = 1; j < r; ++j)
      add("SymR", r, "Pierce(" + std::to_string(j) + ")", "P", r * r, r * r,
          r * (r - 1) / 2, r == 2 * j);
    if (r % 2 == 0)
      add("SymR", r, "NonSplitNS1", "NS1", r * (r + 1), r * (r + 1), r * (r + 1) / 2, true);
    add("SymR", r, "Flip", "C", r * (2 * r + 1), r * (2 * r + 1), r * r, true);

    // Herm_r(C): su_{r,r}.
    add("HermC", r, "Identity", "Id", 2 * r * r - 1, 2 * r * r - 1, r * r - 1, false);
    for (int j = 1; j < r; ++j)
      add("HermC", r, "Pierce(" + std::to_string(j) + ")", "P", 2 * r * r - 1,
          2 * r * r - 1, r * r - 1, r == 2 * j);
    add("HermC", r, "SplitS1", "S1", r * (2 * r - 1), r * (2 * r - 1), r * (r - 1),
        r % 2 == 0);
    if (r % 2 == 0) {
      const int s = r / 2;
      add("HermC", r, "NonSplitNS2", "NS2", 2 * s * (4 * s + 1), 2 * s * (4 * s + 1),
          2 * s * (2 * s + 1), true);
    }
    add("HermC", r, "Flip", "C", 4 * r * r - 1, 4 * r * r - 1, 2 * r * r - 1, true);

    // Herm_r(H): so*(4r).
    add("HermH", r, "Identity", "Id", 4 * r * r, 4 * r * r, r * (2 * r + 1), false);
    for (int j = 1; j < r; ++j)
      add("HermH", r, "Pierce(" + std::to_string(j) + ")", "P", 4 * r * r, 4 * r * r,
          r * (2 * r + 1), r == 2 * j);
    add("HermH", r, "SplitS2", "S2", 2 * r * (2 * r - 1), 2 * r * (2 * r - 1),
        r * (2 * r - 1), r % 2 == 0);
    add("HermH", r, "Flip", "C", 2 * r * (4 * r - 1), 2 * r * (4 * r - 1), 4 * r * r, true);
  }
  if (max_rank >= 2) {
    // R^{1,d-1}: so_{2,d}; r_j gives so_{2,j} + so_{d-j} and h = so_{1,j} + so_{d-j-1}.
    auto so = [](int n) { return n * (n - 1) / 2; };
    for (int d = 3; d <= 6; ++d) {
      add("SpinFactor", d, "Identity", "Id", so(2) + so(d), so(2) + so(d), so(d - 1), false);
      for (int j = 1; j < d; ++j) {
        const std::string type = j == d - 1 ? "NS3" : j == d - 2 ? "P" : "S4";
        const int g = so(j + 2) + so(d - j);
        add("SpinFactor", d, "MinkowskiReflection(" + std::to_string(j) + ")", type, g, g,
            so(j + 1) + so(d - j - 1), true);
      }
      add("SpinFactor", d, "Flip", "C", so(d + 2), so(d + 2), 1 + so(d), true);
    }
  }
  return out;
}

CommandResult run(const CommandRequest& req) {
  auto saved = tolerances();
  CommandResult res;
  try {
    if (!kCommands.count(req.command)) throw UsageError("unknown command '" + req.command + "'");
    if (req.tol_algebra) {
      if (!(*req.tol_algebra > 0)) throw UsageError("--tol-algebra must be positive");
      tolerances().algebra = *req.tol_algebra;
    }
    if (req.tol_exp) {
      if (!(*req.tol_exp > 0)) throw UsageError("--tol-exp must be positive");
      tolerances().exp = *req.tol_exp;
    }
    if (req.command == "classify") res = classify(req);
    else if (req.command == "verify-tables") res = verify_tables(req);
    else if (req.command == "wedge") res = wedge(req);
    else if (req.command == "gh-probe") res = gh_probe_command(req);
    else if (req.command == "cayley") res = cayley(req);
    else res = involutions(req);
    res.report["seed"] = req.seed;
  } catch (const UsageError& e) {
    res = {kExitUsage, error_report(req.command, "usage", e.what())};
  } catch (const Error& e) {
    const bool usage = is_usage_code(e.code());
    res = {usage ? kExitUsage : kExitFailed,
           error_report(req.command, error_code_name(e.code()), e.what())};
  }
  tolerances() = saved;
  return res;
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Causal Makarevic spaces: verification suites and probes"};
  CommandRequest req;
  app.add_option("command", req.command, "classify | verify-tables | wedge | gh-probe | cayley | involutions")
      ->required()
      ->check(CLI::IsMember(kCommands));
  app.add_option("--family", req.family, "SymR, HermC, HermH or SpinFactor");
  app.add_option("--size", req.size, "rank r, or d for SpinFactor");
  app.add_option("--involution", req.involution, "e.g. Pierce(2), SplitS1, Flip, R(1)");
  app.add_option("--sign", req.sign, "+1 or -1");
  app.add_option("--seed", req.seed, "RNG seed");
  app.add_option("--samples", req.samples, "number of random samples");
  app.add_option("--json", req.json_path, "also write the report to this path");
  app.add_option("--tol-algebra", req.tol_algebra, "tolerance for algebraic identities");
  app.add_option("--tol-exp", req.tol_exp, "tolerance for exponentials");
  app.add_option("--max-rank", req.max_rank, "verify-tables: largest rank");
  app.add_option("--region", req.region, "ds-wedge, ads-wedge, positive-cone, flip-wedge");
  app.add_option("--d", req.d, "Minkowski dimension");
  app.add_option("--eps", req.eps, "gh-probe endpoint offset");
  app.add_option("--p", req.p, "cayley: signature p of the form over C");
  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    json r = error_report(req.command, "usage", e.what());
    out << r.dump(2) << "\n";
    return kExitUsage;
  }
  CommandResult res = run(req);
  const std::string text = res.report.dump(2);
  out << text << "\n";
  if (req.json_path) {
    std::ofstream f(*req.json_path);
    if (!f) {
      err << "cannot write " << *req.json_path << "\n";
      return kExitUsage;
    }
    f << text << "\n";
  }
  return res.exit_code;
}

}  // namespace causal
