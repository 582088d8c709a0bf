#include "sbox/cli.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "sbox/closed_form.hpp"
#include "sbox/poly_solver.hpp"

namespace sbox {

using U64 = std::uint64_t;

std::string RunConfig::canonical() const {
  nlohmann::json j = {{"operation", operation}, {"field", field},         {"map", map},
                      {"csv", csv_path},        {"json", json_path},      {"threads", threads},
                      {"max_elements", max_elements}, {"params", params}};
  return j.dump();
}

RunConfig parse_run_config(const std::string& canonical) {
  try {
    const auto j = nlohmann::json::parse(canonical);
    RunConfig c;
    c.operation = j.at("operation").get<std::string>();
    c.field = j.at("field").get<std::string>();
    c.map = j.at("map").get<std::string>();
    c.csv_path = j.at("csv").get<std::string>();
    c.json_path = j.at("json").get<std::string>();
    c.threads = j.at("threads").get<unsigned>();
    c.max_elements = j.at("max_elements").get<U64>();
    c.params = j.at("params").get<std::map<std::string, std::string>>();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("bad run config: ") + e.what());
  }
}

TableMap load_table_map(const Field& field, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open table file " + path.string());
  TableMap map;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    try {
      const Elem e = parse_element(field, line);
      if (!field.contains(e)) throw Error(ErrorCode::UnparsableElement, "not a field element");
      map.images.push_back(e);
    } catch (const Error& e) {
      throw Error(ErrorCode::UnparsableElement,
                  path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (map.images.size() != field.size()) {
    throw Error(ErrorCode::WrongLength, path.string() + " has " +
                                            std::to_string(map.images.size()) + " entries, need " +
                                            std::to_string(field.size()));
  }
  return map;
}

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const std::string& param(const RunConfig& c, const std::string& key) {
  auto it = c.params.find(key);
  if (it == c.params.end()) throw UsageError("missing --" + key);
  return it->second;
}

bool flag(const RunConfig& c, const std::string& key) {
  auto it = c.params.find(key);
  return it != c.params.end() && it->second == "1";
}

U64 param_uint(const RunConfig& c, const std::string& key) {
  const auto& s = param(c, key);
  U64 v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw UsageError("--" + key + " expects a non-negative integer, got '" + s + "'");
  }
  return v;
}

unsigned effective_threads(unsigned t) {
  if (t != 0) return t;
  return std::max(1u, std::thread::hardware_concurrency());
}

Field config_field(const RunConfig& c) {
  if (c.field.empty()) throw UsageError("missing --field");
  return parse_field_spec(c.field, c.max_elements);
}

MapSpec config_map(const RunConfig& c, const Field& field) {
  if (c.map.starts_with("power:")) {
    U64 d = 0;
    const std::string s = c.map.substr(6);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), d);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw UsageError("bad --power " + s);
    return PowerMap{d};
  }
  if (c.map.starts_with("table:")) return load_table_map(field, c.map.substr(6));
  throw UsageError("one of --power or --table is required");
}

// Writes to `path`, or to `fallback` when the path is empty or "-".
template <class Fn>
void emit(const std::string& path, std::ostream& fallback, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(fallback);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::ParseError, "cannot write " + path);
  fn(f);
}

void emit_json(const RunConfig& c, std::ostream& out, const nlohmann::json& j) {
  emit(c.json_path, out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

std::vector<Elem> parse_element_list(const Field& field, const std::string& text) {
  // Elements are separated by ';'. Without any ';', commas separate hex words
  // (p = 2) or single-digit prime-field elements.
  std::vector<std::string> parts;
  const char sep = text.find(';') != std::string::npos ? ';' : ',';
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, sep);) parts.push_back(part);
  std::vector<Elem> out;
  for (const auto& p : parts) out.push_back(parse_element(field, p));
  return out;
}

nlohmann::json roots_to_json(const Field& field, const RootResult& r) {
  static const char* kinds[] = {"none", "unique", "distinct", "subspace"};
  nlohmann::json roots = nlohmann::json::array();
  for (Elem e : r.roots) roots.push_back(format_element(field, e));
  nlohmann::json j = {{"kind", kinds[static_cast<int>(r.kind)]}, {"count", r.count}, {"roots", roots}};
  if (r.kind != RootKind::NoRoots) j["representative"] = format_element(field, r.representative);
  if (r.kind == RootKind::Subspace) j["direction"] = format_element(field, r.direction);
  return j;
}

int run_field_info(const RunConfig& c, std::ostream& out) {
  const Field field = config_field(c);
  emit_json(c, out,
            {{"field", field.spec_string()},
             {"p", field.characteristic()},
             {"n", field.degree()},
             {"size", field.size()},
             {"modulus", field.modulus()}});
  return kExitOk;
}

int run_solve(const RunConfig& c, std::ostream& out) {
  const Field field = config_field(c);
  const std::string which = c.operation.substr(6);
  nlohmann::json j = {{"field", field.spec_string()}};
  if (which == "trinomial") {
    const U64 k = param_uint(c, "k");
    const Elem a = parse_element(field, param(c, "a"));
    const Elem b = parse_element(field, param(c, "b"));
    j["k"] = k;
    j["result"] = roots_to_json(
        field, solve_linearized_trinomial(field, static_cast<std::uint32_t>(k), a, b, flag(c, "enumerate")));
  } else if (which == "affine") {
    const LinearizedCoeffs L{parse_element_list(field, param(c, "coeffs"))};
    const Elem b = parse_element(field, param(c, "b"));
    const Matrix A = build_AL(field, L);
    j["rank"] = matrix_rank(field, A);
    j["count"] = affine_root_count(field, L, b);
  } else if (which == "quadratic") {
    const Elem a2 = parse_element(field, param(c, "a2"));
    const Elem a1 = parse_element(field, param(c, "a1"));
    const Elem a0 = parse_element(field, param(c, "a0"));
    j["result"] = roots_to_json(field, solve_quadratic(field, a2, a1, a0));
  } else {
    throw UsageError("unknown solver " + which);
  }
  emit_json(c, out, j);
  return kExitOk;
}

int run_spectra(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const Field field = config_field(c);
  const std::string which = c.operation.substr(8);
  TableKind kind;
  if (which == "ddt") {
    kind = TableKind::DDT;
  } else if (which == "fbct" || which == "sozd") {
    kind = TableKind::SOZD;
    if (which == "fbct" && field.characteristic() != 2) {
      throw UsageError("fbct needs p = 2; use sozd for odd characteristic");
    }
  } else {
    throw UsageError("unknown table kind " + which);
  }
  const bool check = flag(c, "check-properties");
  if (check && (kind != TableKind::SOZD || field.characteristic() != 2)) {
    throw UsageError("--check-properties applies to fbct tables only");
  }
  const SBox f(field, config_map(c, field));
  const ComputeOptions opts{effective_threads(c.threads),
                            flag(c, "brute-force") ? Method::BruteForce : Method::Auto};

  nlohmann::json report = {{"field", field.spec_string()},
                           {"map", map_label(f.map())},
                           {"table", table_label(kind, field)}};
  int code = kExitOk;

  if (flag(c, "row")) {
    if (check) throw UsageError("--check-properties needs --full");
    const auto row = kind == TableKind::DDT ? ddt_row_power(f) : sozd_row_power(f);
    if (!c.csv_path.empty()) {
      emit(c.csv_path, out, [&](std::ostream& os) {
        os << table_label(kind, field) << ',' << field.characteristic() << ',' << field.degree()
           << ',' << map_label(f.map()) << '\n';
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
        os << '\n';
      });
    }
    report["summary"] = summary_to_json(summarize_power_row(field, kind, row));
  } else {
    const SpectrumTable table = kind == TableKind::DDT ? ddt_table(f, opts) : sozd_table(f, opts);
    if (!c.csv_path.empty()) emit(c.csv_path, out, [&](std::ostream& os) { write_csv(os, table); });
    report["summary"] = summary_to_json(kind == TableKind::DDT ? differential_uniformity(table)
                                                               : sozd_uniformity(table));
    if (check) {
      const PropertyReport pr = fbct_property_check(table);
      report["properties"] = property_report_to_json(field, pr);
      if (!pr.ok()) {
        err << "property check: " << pr.total_violations << " violations\n";
        code = kExitMismatch;
      }
    }
  }
  // The CSV owns stdout when it is written there.
  if (c.csv_path == "-" && c.json_path.empty()) return code;
  emit_json(c, out, report);
  return code;
}

void print_theorem_table(std::ostream& err, const VerificationReport& r) {
  err << "theorem " << theorem_name(r.theorem) << "  x^" << r.exponent << "  " << r.field_spec << '\n'
      << "  pairs checked        " << r.pairs_checked << '\n'
      << "  matches              " << r.matches << '\n'
      << "  mismatches           " << r.mismatch_count << '\n';
  for (const auto& g : r.mismatch_groups) {
    err << "    case " << g.condition << ": predicted " << g.predicted << ", actual " << g.actual
        << " (" << g.count << " pairs)\n";
  }
  if (r.flagged_pairs) err << "  flagged pairs        " << r.flagged_pairs << '\n';
  if (r.theorem == TheoremId::T3) {
    err << "  condition            " << r.condition << '\n'
        << "  stated vs expanded   " << r.condition_discrepancies << " differing pairs\n";
  }
  if (r.theorem == TheoremId::T4) err << "  row check failures   " << r.row_check_failures << '\n';
  err << "  uniformity claimed   " << r.uniformity_claimed << '\n'
      << "  uniformity actual    " << r.uniformity_actual
      << (r.uniformity_agrees ? "  (agrees)" : "  (DISAGREES)") << '\n'
      << "  result               " << (r.passed() ? "PASS" : "FAIL") << '\n';
}

int run_verify_theorem(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto id = parse_theorem_id(param(c, "theorem"));
  if (!id) throw UsageError("--theorem must be one of t1, t2, t3, t4");
  TheoremParams tp;
  if (*id == TheoremId::T1 || *id == TheoremId::T2) tp.m = static_cast<std::uint32_t>(param_uint(c, "m"));
  if (*id == TheoremId::T3) {
    tp.p = static_cast<std::uint32_t>(param_uint(c, "p"));
    tp.k = static_cast<std::uint32_t>(param_uint(c, "k"));
  }
  if (*id == TheoremId::T3 || *id == TheoremId::T4) tp.n = static_cast<std::uint32_t>(param_uint(c, "n"));
  if (auto it = c.params.find("condition"); it != c.params.end()) {
    if (it->second == "expanded") {
      tp.condition = Pk1Condition::Expanded;
    } else if (it->second == "stated") {
      tp.condition = Pk1Condition::Stated;
    } else {
      throw UsageError("--condition must be expanded or stated");
    }
  }
  VerifyOptions vo;
  vo.compute = {effective_threads(c.threads), flag(c, "brute-force") ? Method::BruteForce : Method::Auto};
  vo.max_elements = c.max_elements;
  if (c.params.contains("max-listed")) vo.max_listed_mismatches = param_uint(c, "max-listed");

  const VerificationReport r = verify_theorem(*id, tp, vo);
  emit_json(c, out, report_to_json(r));
  print_theorem_table(err, r);
  return r.passed() ? kExitOk : kExitMismatch;
}

int run_verify_registry(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const U64 bound = c.params.contains("max-size") ? param_uint(c, "max-size") : 1024;
  const RegistryReport r = verify_registry(std::min(bound, c.max_elements), effective_threads(c.threads));
  emit_json(c, out, registry_report_to_json(r));
  const auto& entries = registry_cases();
  err << "row  pattern                 p   n   k   d          expected      actual  match\n";
  for (const auto& res : r.results) {
    const auto& in = res.instance;
    std::string expected;
    for (U64 v : in.expected) expected += (expected.empty() ? "" : "|") + std::to_string(v);
    err << std::left << std::setw(5) << in.row << std::setw(24) << entries[in.row - 1].exponent
        << std::setw(4) << in.p << std::setw(4) << in.n << std::setw(4)
        << (in.k ? std::to_string(*in.k) : "-") << std::setw(11) << in.d << std::setw(14) << expected
        << std::setw(8) << res.actual << (res.match ? "yes" : "NO") << '\n';
  }
  err << "matched " << r.matched << ", mismatched " << r.mismatched;
  if (!r.skipped_rows.empty()) {
    err << ", skipped rows";
    for (int row : r.skipped_rows) err << ' ' << row;
  }
  err << '\n';
  return r.passed() ? kExitOk : kExitMismatch;
}

int run_registry(const RunConfig& c, std::ostream& out) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& e : registry_cases()) {
    rows.push_back({{"row", e.row},
                    {"exponent", e.exponent},
                    {"conditions", e.conditions},
                    {"claimed", e.claimed},
                    {"from_this_work", e.from_this_work}});
  }
  nlohmann::json j = {{"rows", rows}};
  if (c.params.contains("max-size")) {
    nlohmann::json inst = nlohmann::json::array();
    for (const auto& in : registry_instances(param_uint(c, "max-size"))) {
      nlohmann::json item = {{"row", in.row}, {"p", in.p}, {"n", in.n}, {"d", in.d}, {"expected", in.expected}};
      if (in.k) item["k"] = *in.k;
      inst.push_back(std::move(item));
    }
    j["instances"] = inst;
  }
  emit_json(c, out, j);
  return kExitOk;
}

}  // namespace

int execute(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    if (c.operation == "field-info") return run_field_info(c, out);
    if (c.operation.starts_with("solve ")) return run_solve(c, out);
    if (c.operation.starts_with("spectra ")) return run_spectra(c, out, err);
    if (c.operation == "verify theorem") return run_verify_theorem(c, out, err);
    if (c.operation == "verify registry") return run_verify_registry(c, out, err);
    if (c.operation == "registry") return run_registry(c, out);
    err << "error: unknown operation '" << c.operation << "'\n";
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitUsage;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Differential spectra of functions over finite fields", "sbox-spectra"};
  app.require_subcommand(1);

  RunConfig c;
  std::string field_text, table_path, max_size_text;
  std::optional<U64> power;
  unsigned threads = 1;

  auto add_field = [&](CLI::App* sub) {
    sub->add_option("--field", field_text, "field spec p=<int>;n=<int>[;mod=<c0,...,cn>]")->required();
  };
  auto add_threads = [&](CLI::App* sub) {
    sub->add_option("--threads,-j", threads, "worker threads (0 = all cores)")->capture_default_str();
  };
  auto add_json = [&](CLI::App* sub) {
    sub->add_option("--json", c.json_path, "write the JSON report here instead of stdout");
  };
  auto add_param = [&](CLI::App* sub, const std::string& name, const std::string& help, bool required) {
    auto* opt = sub->add_option_function<std::string>(
        "--" + name, [&c, name](const std::string& v) { c.params[name] = v; }, help);
    if (required) opt->required();
  };
  auto add_flag = [&](CLI::App* sub, const std::string& name, const std::string& help) {
    return sub->add_flag_callback("--" + name, [&c, name] { c.params[name] = "1"; }, help);
  };

  auto* info = app.add_subcommand("field-info", "print the field's size and modulus");
  add_field(info);
  add_json(info);

  auto* solve = app.add_subcommand("solve", "solve polynomial equations over the field");
  solve->require_subcommand(1);
  auto* tri = solve->add_subcommand("trinomial", "x^{2^k} + a x + b = 0 over F_{2^n}");
  add_field(tri);
  add_param(tri, "k", "exponent index k", true);
  add_param(tri, "a", "coefficient a", true);
  add_param(tri, "b", "constant b", true);
  add_flag(tri, "enumerate", "list every root of a subspace solution set");
  add_json(tri);
  auto* aff = solve->add_subcommand("affine", "count roots of sum a_i x^{2^i} + b over F_{2^n}");
  add_field(aff);
  add_param(aff, "coeffs", "n coefficients a_0..a_{n-1}, separated by ';' (or ',' for hex words)", true);
  add_param(aff, "b", "constant b", true);
  add_json(aff);
  auto* quad = solve->add_subcommand("quadratic", "a2 x^2 + a1 x + a0 = 0, p odd");
  add_field(quad);
  add_param(quad, "a2", "x^2 coefficient", true);
  add_param(quad, "a1", "x coefficient", true);
  add_param(quad, "a0", "constant", true);
  add_json(quad);

  auto* spectra = app.add_subcommand("spectra", "compute a DDT or second-order zero differential table");
  std::string kind_text;
  spectra->add_option("kind", kind_text, "ddt, fbct (p = 2) or sozd")
      ->required()
      ->check(CLI::IsMember({"ddt", "fbct", "sozd"}));
  add_field(spectra);
  auto* power_opt = spectra->add_option("--power", power, "power map x^d");
  auto* table_opt = spectra->add_option("--table", table_path, "lookup table file, one image per line");
  power_opt->excludes(table_opt);
  auto* full = add_flag(spectra, "full", "compute the full table (default)");
  auto* row = add_flag(spectra, "row", "compute only the a = 1 row of a power map");
  full->excludes(row);
  spectra->add_option("--csv", c.csv_path, "write the table as CSV ('-' for stdout)");
  add_flag(spectra, "check-properties", "check the structural FBCT identities");
  add_flag(spectra, "brute-force", "count every entry directly");
  add_threads(spectra);
  add_json(spectra);

  auto* verify = app.add_subcommand("verify", "diff closed-form predictions against exhaustive tables");
  add_param(verify, "theorem", "t1 (x^{2^m+3}), t2 (x^{2^m+5}), t3 (x^{p^k+1}), t4 (DDT of x^4 over F_{3^n})", false);
  add_param(verify, "m", "n = 2m for t1, t2", false);
  add_param(verify, "p", "odd characteristic for t3", false);
  add_param(verify, "k", "k for t3", false);
  add_param(verify, "n", "field degree for t3, t4", false);
  add_param(verify, "condition", "t3 predictor: expanded or stated", false);
  add_param(verify, "max-listed", "mismatches listed in the report", false);
  auto* reg_flag = add_flag(verify, "registry", "check the table of known uniformities");
  add_param(verify, "max-size", "largest p^n instantiated by --registry (default 1024)", false);
  add_flag(verify, "brute-force", "count every entry directly");
  add_threads(verify);
  add_json(verify);

  auto* registry = app.add_subcommand("registry", "list the table of known uniformities");
  add_param(registry, "max-size", "also list the instances with p^n up to this bound", false);
  add_json(registry);

  std::vector<const char*> argv{"sbox-spectra"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    c.max_elements = max_elements_from_env();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  c.threads = threads;
  auto canonical_field = [&]() -> bool {
    try {
      c.field = parse_field_spec(field_text, c.max_elements).spec_string();
      return true;
    } catch (const Error& e) {
      err << "error: " << e.what() << '\n';
      return false;
    }
  };

  if (*info) {
    c.operation = "field-info";
  } else if (*solve) {
    c.operation = *tri ? "solve trinomial" : *aff ? "solve affine" : "solve quadratic";
  } else if (*spectra) {
    c.operation = "spectra " + kind_text;
    if (power) c.map = "power:" + std::to_string(*power);
    else if (!table_path.empty()) c.map = "table:" + table_path;
    else {
      err << "error: one of --power or --table is required\n";
      return kExitUsage;
    }
  } else if (*verify) {
    if (reg_flag->count() > 0) {
      if (c.params.contains("theorem")) {
        err << "error: --registry and --theorem are exclusive\n";
        return kExitUsage;
      }
      c.operation = "verify registry";
      c.params.erase("registry");
    } else if (c.params.contains("theorem")) {
      c.operation = "verify theorem";
    } else {
      err << "error: verify needs --theorem or --registry\n";
      return kExitUsage;
    }
  } else {
    c.operation = "registry";
  }
  if (!field_text.empty() && !canonical_field()) return kExitUsage;
  return execute(c, out, err);
}

}  // namespace sbox
