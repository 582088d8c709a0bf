// Acceptance suite. Prints one PASS/FAIL line per criterion, followed by
// indented detail lines. `--criterion N` runs a single criterion; the exit
// status is nonzero when any selected criterion fails.

#include <array>
#include <chrono>
#include <cstring>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "sbox/closed_form.hpp"
#include "sbox/poly_solver.hpp"
#include "sbox/spectra.hpp"

using namespace sbox;
using U64 = std::uint64_t;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;

  void require(bool cond, const std::string& what) {
    if (!cond) pass = false;
    details.push_back(std::string(cond ? "ok   " : "FAIL ") + what);
  }
  void note(const std::string& what) { details.push_back("     " + what); }
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt_seconds(double s) {
  std::ostringstream os;
  os.precision(3);
  os << std::fixed << s << " s";
  return os.str();
}

std::string hist_text(const Histogram& h) {
  std::string out;
  for (const auto& [v, c] : h) out += (out.empty() ? "" : ", ") + std::to_string(v) + ":" + std::to_string(c);
  return "{" + out + "}";
}

void describe(Outcome& o, const VerificationReport& r) {
  o.note("x^" + std::to_string(r.exponent) + " over " + r.field_spec + ": " + std::to_string(r.matches) + "/" +
         std::to_string(r.pairs_checked) + " pairs match");
  for (const auto& g : r.mismatch_groups) {
    o.note("  case '" + g.condition + "': predicted " + g.predicted + ", actual " + std::to_string(g.actual) +
           " on " + std::to_string(g.count) + " pairs");
  }
  o.note("uniformity claimed " + std::to_string(r.uniformity_claimed) + ", actual " +
         std::to_string(r.uniformity_actual));
  o.note("spectrum " + hist_text(r.summary.histogram));
}

// Pair counts per predicted value.
std::map<U64, U64> predicted_classes(const Field& f, auto&& predictor) {
  std::map<U64, U64> out;
  for (Elem a : f.elements())
    for (Elem b : f.elements()) ++out[predictor(a, b).value];
  return out;
}

std::map<U64, U64> value_classes(const SpectrumTable& t) {
  std::map<U64, U64> out;
  for (U64 v : t.entries) ++out[v];
  return out;
}

std::string classes_text(const std::map<U64, U64>& m) {
  return hist_text(Histogram(m.begin(), m.end()));
}

// Criterion 1: x^11 over F_{2^6}, brute force, against the 2^m + 3 predictor.
Outcome criterion1() {
  Outcome o;
  const Field f = Field::make(2, 6);
  Stopwatch sw;
  const SpectrumTable t = sozd_table(SBox(f, PowerMap{11}), {1, Method::BruteForce});
  const auto r = verify_theorem_against(TheoremId::T1, {.m = 3}, t);
  const double elapsed = sw.seconds();
  describe(o, r);
  const auto predicted = predicted_classes(f, [&](Elem a, Elem b) { return predict_fbct_2m3(f, 3, a, b); });
  o.require(predicted == std::map<U64, U64>{{64, 190}, {8, 378}, {4, 3528}},
            "predicted pair classes 64/8/4 have sizes 190/378/3528: " + classes_text(predicted));
  o.require(r.mismatch_count == 0, "all 4096 brute-force entries equal the prediction (" +
                                       std::to_string(r.mismatch_count) + " mismatches)");
  o.require(value_classes(t) == std::map<U64, U64>{{64, 190}, {8, 378}, {4, 3528}},
            "table values are exactly 64/8/4 on 190/378/3528 pairs: " + classes_text(value_classes(t)));
  o.require(elapsed < 1.0, "runtime " + fmt_seconds(elapsed) + " < 1 s");
  return o;
}

// Criterion 2: x^19 over F_{2^8}, fast path against a brute-force oracle.
Outcome criterion2() {
  Outcome o;
  const Field f = Field::make(2, 8);
  const SBox s(f, PowerMap{19});
  Stopwatch fast_sw;
  const SpectrumTable fast = sozd_table(s, {1, Method::PowerRow});
  const auto r = verify_theorem_against(TheoremId::T1, {.m = 4}, fast);
  const double fast_s = fast_sw.seconds();
  Stopwatch oracle_sw;
  const SpectrumTable oracle = sozd_table(s, {1, Method::BruteForce});
  const double oracle_s = oracle_sw.seconds();
  describe(o, r);
  o.require(fast.entries == oracle.entries, "fast path equals brute-force table on all 65536 pairs");
  std::map<U64, U64> values = value_classes(oracle);
  o.require(r.mismatch_count == 0, "all pairs equal the prediction 256/16/4 (" + std::to_string(r.mismatch_count) +
                                       " mismatches)");
  o.require(values.size() == 3 && values.contains(256) && values.contains(16) && values.contains(4),
            "table values are exactly {256, 16, 4}: " + classes_text(values));
  o.require(fast_s < 1.0, "fast path " + fmt_seconds(fast_s) + " < 1 s");
  o.require(oracle_s < 30.0, "oracle path " + fmt_seconds(oracle_s) + " < 30 s");
  return o;
}

// Criterion 3: the 2^m + 5 examples at m = 4 and m = 5.
Outcome criterion3() {
  Outcome o;
  Stopwatch sw;
  const Field f8 = Field::make(2, 8);
  const SpectrumTable t4 = sozd_table(SBox(f8, PowerMap{21}), {1, Method::PowerRow});
  const auto r4 = verify_theorem_against(TheoremId::T2, {.m = 4}, t4);
  describe(o, r4);
  const auto v4 = value_classes(t4);
  o.require(r4.mismatch_count == 0, "m = 4: all pairs equal the prediction (" + std::to_string(r4.mismatch_count) +
                                        " mismatches)");
  std::set<U64> keys4;
  for (const auto& [v, c] : v4) keys4.insert(v);
  o.require(keys4 == std::set<U64>{256, 16, 0},
            "m = 4: table values are exactly {256, 16, 0}: " + classes_text(v4));

  const Field f10 = Field::make(2, 10);
  const SpectrumTable t5 = sozd_table(SBox(f10, PowerMap{37}), {1, Method::PowerRow});
  const auto r5 = verify_theorem_against(TheoremId::T2, {.m = 5}, t5);
  describe(o, r5);
  const auto v5 = value_classes(t5);
  std::set<U64> keys5;
  for (const auto& [v, c] : v5) keys5.insert(v);
  o.require(r5.mismatch_count == 0, "m = 5: all pairs equal the prediction (" + std::to_string(r5.mismatch_count) +
                                        " mismatches)");
  o.require(keys5 == std::set<U64>{1024, 32, 16, 4},
            "m = 5: table values are exactly {1024, 32, 16, 4}: " + classes_text(v5));
  const double elapsed = sw.seconds();
  o.require(elapsed < 10.0, "runtime " + fmt_seconds(elapsed) + " < 10 s");
  return o;
}

// Criterion 4: record the m = 3 spectrum of x^13 and flag the claim.
Outcome criterion4() {
  Outcome o;
  const Field f = Field::make(2, 6);
  const SBox s(f, PowerMap{13});
  const SpectrumTable brute = sozd_table(s, {1, Method::BruteForce});
  const SpectrumTable fast = sozd_table(s, {1, Method::PowerRow});
  const auto r = verify_theorem_against(TheoremId::T2, {.m = 3}, brute);
  describe(o, r);
  o.note("domain histogram (" + r.summary.domain + ") " + hist_text(r.summary.domain_histogram));
  o.note("flagged generic-case pairs (interval [0,16]): " + std::to_string(r.flagged_pairs));
  o.note(std::string("claimed 2^m = 8 ") + (r.uniformity_agrees ? "AGREES" : "DISAGREES") +
         " with the exhaustive maximum " + std::to_string(r.uniformity_actual));
  o.require(brute.entries == fast.entries, "recorded table is the same from both computation paths");
  o.require(r.uniformity_claimed == 8 && r.uniformity_actual == sozd_uniformity(brute).uniformity,
            "report states the actual maximum over the domain and the agreement flag");
  return o;
}

// Criterion 5: x^{p^k+1} against the expanded condition.
Outcome criterion5() {
  Outcome o;
  Stopwatch sw;
  const std::vector<std::array<std::uint32_t, 3>> cases = {{3, 1, 2}, {3, 1, 3}, {3, 2, 4},
                                                          {5, 1, 2}, {5, 1, 3}, {7, 1, 2}};
  for (auto [p, k, n] : cases) {
    const std::string name = "(p,k,n)=(" + std::to_string(p) + "," + std::to_string(k) + "," + std::to_string(n) + ")";
    TheoremParams params{.p = p, .n = n, .k = k, .condition = Pk1Condition::Expanded};
    VerifyOptions brute;
    brute.compute.method = Method::BruteForce;
    const auto r = verify_theorem(TheoremId::T3, params, brute);
    const U64 q = Field::make(p, n).size();
    bool two_valued = true;
    for (const auto& [v, c] : r.summary.histogram) two_valued = two_valued && (v == 0 || v == q);
    o.require(two_valued && r.mismatch_count == 0,
              name + ": every entry is p^n or 0 and equals the expanded condition (" +
                  std::to_string(r.mismatch_count) + " mismatches)");
    o.note(name + ": stated-condition discrepancy set has " + std::to_string(r.condition_discrepancies) +
           " pairs; claimed uniformity " + std::to_string(r.uniformity_claimed) + ", actual " +
           std::to_string(r.uniformity_actual));
    std::string listed;
    for (std::size_t i = 0; i < std::min<std::size_t>(r.discrepancy_pairs.size(), 4); ++i) {
      const Field f = Field::make(p, n);
      listed += " (" + format_element(f, r.discrepancy_pairs[i].first) + " | " +
                format_element(f, r.discrepancy_pairs[i].second) + ")";
    }
    if (!listed.empty()) o.note("  first discrepancies:" + listed);
  }
  const double elapsed = sw.seconds();
  o.require(elapsed < 5.0, "runtime " + fmt_seconds(elapsed) + " < 5 s");
  return o;
}

// Criterion 6: DDT of x^4 over F_{3^n}.
Outcome criterion6() {
  Outcome o;
  Stopwatch sw;
  for (std::uint32_t n = 1; n <= 5; ++n) {
    VerifyOptions brute;
    brute.compute.method = Method::BruteForce;
    const auto r = verify_theorem(TheoremId::T4, {.n = n}, brute);
    const U64 expected = n % 2 ? 1 : 3;
    o.require(r.uniformity_actual == expected && r.passed(),
              "n = " + std::to_string(n) + ": uniformity " + std::to_string(r.uniformity_actual) + " (expected " +
                  std::to_string(expected) + "), " + std::to_string(r.row_check_failures) + " row failures, " +
                  std::to_string(r.mismatch_count) + " entry mismatches");
  }
  const double elapsed = sw.seconds();
  o.require(elapsed < 5.0, "runtime " + fmt_seconds(elapsed) + " < 5 s");
  return o;
}

// Criterion 7: the registry of known uniformities.
Outcome criterion7() {
  Outcome o;
  Stopwatch sw;
  const RegistryReport r = verify_registry(1024, 4);
  const auto& rows = registry_cases();
  o.note(std::to_string(r.results.size()) + " instances with p^n <= 1024: " + std::to_string(r.matched) +
         " match, " + std::to_string(r.mismatched) + " differ");
  std::set<int> matched_rows;
  for (const auto& res : r.results) {
    if (res.match) {
      matched_rows.insert(res.instance.row);
      continue;
    }
    std::string expected;
    for (U64 v : res.instance.expected) expected += (expected.empty() ? "" : " or ") + std::to_string(v);
    o.note("  row " + std::to_string(res.instance.row) + " (" + rows[res.instance.row - 1].exponent + ") x^" +
           std::to_string(res.instance.d) + " over F_" + std::to_string(res.instance.p) + "^" +
           std::to_string(res.instance.n) + ": expected " + expected + ", computed " + std::to_string(res.actual));
  }
  if (!r.skipped_rows.empty()) {
    std::string s;
    for (int row : r.skipped_rows) s += " " + std::to_string(row);
    o.note("rows with no instance under the bound (skipped):" + s);
  }
  o.require(matched_rows.size() >= 8,
            std::to_string(matched_rows.size()) + " rows have at least one matching instance (need >= 8)");

  struct Named {
    int row;
    std::uint32_t p, n;
    U64 d, expected;
    const char* label;
  };
  const Named named[] = {
      {1, 2, 5, 30, 2, "x^{2^n-2}, n = 5"},  {1, 2, 6, 62, 4, "x^{2^n-2}, n = 6"},
      {2, 2, 6, 5, 64, "x^{2^k+1}, (n,k) = (6,2)"}, {8, 2, 6, 7, 4, "x^7 over F_{2^6}"},
      {10, 3, 3, 7, 3, "x^7 over F_{3^3}"},   {15, 5, 2, 5, 3, "x^5 over F_{5^2}"},
      {16, 5, 2, 3, 1, "x^3 over F_{5^2}"},   {20, 5, 2, 4, 2, "x^4 over F_{5^2}"},
  };
  for (const auto& nm : named) {
    RegistryInstance inst{nm.row, nm.p, nm.n, std::nullopt, nm.d, {nm.expected}};
    const U64 actual = registry_uniformity(inst);
    o.require(actual == nm.expected, std::string(nm.label) + ": expected " + std::to_string(nm.expected) +
                                         ", computed " + std::to_string(actual));
  }
  const double elapsed = sw.seconds();
  o.require(elapsed < 60.0, "runtime " + fmt_seconds(elapsed) + " < 60 s");
  return o;
}

// Criterion 8: solvers against exhaustive evaluation.
Outcome criterion8() {
  Outcome o;
  Stopwatch sw;
  U64 tri_instances = 0, tri_bad = 0;
  for (std::uint32_t n = 2; n <= 8; ++n) {
    const Field f = Field::make(2, n);
    for (std::uint32_t k = 0; k < n; ++k) {
      for (Elem a : f.elements()) {
        if (a.is_zero()) continue;
        std::vector<U64> count(f.size(), 0);
        for (Elem x : f.elements()) ++count[f.add(f.frobenius(x, k), f.mul(a, x)).v];
        for (Elem b : f.elements()) {
          ++tri_instances;
          const RootResult r = solve_linearized_trinomial(f, k, a, b);
          bool ok = r.count == count[b.v];
          if (ok && r.kind != RootKind::NoRoots) {
            ok = f.add(f.add(f.frobenius(r.representative, k), f.mul(a, r.representative)), b).is_zero();
          }
          tri_bad += !ok;
        }
      }
    }
  }
  o.require(tri_bad == 0, "linearized trinomial, n = 2..8, all k < n, a != 0, all b: " +
                              std::to_string(tri_instances) + " instances, " + std::to_string(tri_bad) + " disagree");

  std::mt19937 rng(20240601);
  U64 aff_instances = 0, aff_bad = 0;
  for (std::uint32_t n = 2; n <= 6; ++n) {
    const Field f = Field::make(2, n);
    std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(f.size() - 1));
    std::bernoulli_distribution zero(0.4);
    for (int i = 0; i < 250; ++i) {
      LinearizedCoeffs L;
      for (std::uint32_t j = 0; j < n; ++j) L.a.push_back(zero(rng) ? Elem{0} : Elem{pick(rng)});
      const Elem b{i % 4 == 0 ? 0u : pick(rng)};
      U64 roots = 0;
      for (Elem x : f.elements()) roots += eval_affine(f, L, b, x).is_zero();
      ++aff_instances;
      aff_bad += affine_root_count(f, L, b) != roots;
    }
  }
  o.require(aff_instances >= 1000 && aff_bad == 0, "affine root count, n = 2..6: " + std::to_string(aff_instances) +
                                                       " random instances, " + std::to_string(aff_bad) + " disagree");

  U64 quad_instances = 0, quad_bad = 0;
  std::vector<Field> fields;
  for (std::uint32_t n = 1; n <= 4; ++n) fields.push_back(Field::make(3, n));
  fields.push_back(Field::make(5, 2));
  for (const Field& f : fields) {
    for (Elem a2 : f.elements()) {
      if (a2.is_zero()) continue;
      for (Elem a1 : f.elements()) {
        // Values of a2 x^2 + a1 x for every x; roots of the full quadratic are
        // the x with value -a0.
        std::vector<U64> hits(f.size(), 0);
        for (Elem x : f.elements()) ++hits[f.mul(f.add(f.mul(a2, x), a1), x).v];
        for (Elem a0 : f.elements()) {
          ++quad_instances;
          const RootResult r = solve_quadratic(f, a2, a1, a0);
          bool ok = r.count == hits[f.neg(a0).v] && r.roots.size() == r.count;
          for (Elem root : r.roots) {
            ok = ok && f.add(f.mul(f.add(f.mul(a2, root), a1), root), a0).is_zero();
          }
          quad_bad += !ok;
        }
      }
    }
  }
  o.require(quad_bad == 0, "quadratic over F_{3^n} (n <= 4) and F_{5^2}, all instances: " +
                               std::to_string(quad_instances) + " instances, " + std::to_string(quad_bad) + " disagree");
  const double elapsed = sw.seconds();
  o.require(elapsed < 120.0, "runtime " + fmt_seconds(elapsed) + " < 120 s");
  return o;
}

// Criterion 9: structural FBCT identities.
Outcome criterion9() {
  Outcome o;
  const std::vector<std::tuple<std::uint32_t, U64, Method>> tables = {
      {6, 11, Method::BruteForce}, {8, 19, Method::PowerRow}, {8, 21, Method::PowerRow},
      {10, 37, Method::PowerRow},  {6, 13, Method::BruteForce}};
  for (auto [n, d, method] : tables) {
    const Field f = Field::make(2, n);
    const auto r = fbct_property_check(sozd_table(SBox(f, PowerMap{d}), {4, method}));
    o.require(r.ok(), "x^" + std::to_string(d) + " over F_{2^" + std::to_string(n) + "}: " +
                          std::to_string(r.total_violations) + " violations");
  }
  std::mt19937 rng(99);
  const Field f = Field::make(2, 5);
  std::uniform_int_distribution<std::uint32_t> pick(0, 31);
  U64 total = 0;
  for (int i = 0; i < 20; ++i) {
    TableMap t;
    for (int j = 0; j < 32; ++j) t.images.push_back(Elem{pick(rng)});
    total += fbct_property_check(sozd_table(SBox(f, t))).total_violations;
  }
  o.require(total == 0, "20 random lookup tables over F_{2^5}: " + std::to_string(total) + " violations");
  return o;
}

// Criterion 10: CSV bytes do not depend on the worker count.
Outcome criterion10() {
  Outcome o;
  const SBox s(Field::make(2, 6), PowerMap{11});
  std::ostringstream one, eight;
  write_csv(one, sozd_table(s, {1, Method::BruteForce}));
  write_csv(eight, sozd_table(s, {8, Method::BruteForce}));
  o.require(one.str() == eight.str(), "brute-force CSV of x^11 over F_{2^6}, 1 vs 8 threads: " +
                                          std::to_string(one.str().size()) + " bytes, identical");
  std::ostringstream fast1, fast8;
  write_csv(fast1, sozd_table(s, {1, Method::PowerRow}));
  write_csv(fast8, sozd_table(s, {8, Method::PowerRow}));
  o.require(fast1.str() == fast8.str() && fast1.str() == one.str(), "fast-path CSV identical as well");
  return o;
}

const std::vector<std::pair<const char*, std::function<Outcome()>>> kCriteria = {
    {"x^11 over F_{2^6} matches the 2^m+3 spectrum (m = 3)", criterion1},
    {"x^19 over F_{2^8} matches the 2^m+3 spectrum (m = 4)", criterion2},
    {"x^21 and x^37 match the 2^m+5 spectra (m = 4, 5)", criterion3},
    {"x^13 over F_{2^6} spectrum recorded with claim flag (m = 3)", criterion4},
    {"x^{p^k+1} entries follow the expanded condition", criterion5},
    {"DDT of x^4 over F_{3^n}", criterion6},
    {"known-uniformity registry", criterion7},
    {"solvers agree with exhaustive evaluation", criterion8},
    {"structural FBCT identities", criterion9},
    {"CSV determinism across worker counts", criterion10},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      selected.push_back(std::atoi(argv[++i]));
    } else {
      std::cerr << "usage: acceptance [--criterion N]...\n";
      return 2;
    }
  }
  if (selected.empty()) {
    for (std::size_t i = 1; i <= kCriteria.size(); ++i) selected.push_back(static_cast<int>(i));
  }
  bool all = true;
  for (int id : selected) {
    if (id < 1 || id > static_cast<int>(kCriteria.size())) {
      std::cerr << "no criterion " << id << "\n";
      return 2;
    }
    const auto& [title, fn] = kCriteria[id - 1];
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.details.push_back(std::string("FAIL exception: ") + e.what());
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << title << '\n';
    for (const auto& d : o.details) std::cout << "    " << d << '\n';
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
