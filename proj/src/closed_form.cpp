#include "sbox/closed_form.hpp"

#include <map>
#include <tuple>

#include "conway_table.hpp"
#include "parallel.hpp"

namespace sbox {

using U64 = std::uint64_t;

Prediction Prediction::exactly(U64 v, std::string condition) {
  Prediction p;
  p.exact = true;
  p.value = v;
  p.lo = p.hi = v;
  p.condition = std::move(condition);
  return p;
}

Prediction Prediction::between(U64 lo, U64 hi, std::string condition, bool flagged) {
  Prediction p;
  p.exact = false;
  p.lo = lo;
  p.hi = hi;
  p.condition = std::move(condition);
  p.flagged = flagged;
  return p;
}

namespace {

std::string prediction_text(const Prediction& p) {
  if (p.exact) return std::to_string(p.value);
  return "[" + std::to_string(p.lo) + "," + std::to_string(p.hi) + "]";
}

void require_binary_2m(const Field& field, std::uint32_t m) {
  if (m <= 2) throw Error(ErrorCode::BadParameters, "needs m > 2, got m = " + std::to_string(m));
  if (field.characteristic() != 2 || field.degree() != 2 * m) {
    throw Error(ErrorCode::BadParameters, "needs the field F_{2^{2m}}");
  }
}

bool trivial_pair(const Field& field, Elem a, Elem b) {
  return a.is_zero() || b.is_zero() || field.add(a, b).is_zero();
}

}  // namespace

Prediction predict_fbct_2m3(const Field& field, std::uint32_t m, Elem a, Elem b) {
  require_binary_2m(field, m);
  const U64 q = field.size();
  if (trivial_pair(field, a, b)) return Prediction::exactly(q, "ab(a+b)=0");
  const Elem u = field.div(b, a);
  if (field.pow(u, (U64{1} << m) - 1) == field.one()) {
    return Prediction::exactly(U64{1} << m, "b in a*F_{2^m}^*");
  }
  return Prediction::exactly(4, "otherwise");
}

Prediction predict_fbct_2m5(const Field& field, std::uint32_t m, Elem a, Elem b) {
  require_binary_2m(field, m);
  const U64 q = field.size();
  if (trivial_pair(field, a, b)) return Prediction::exactly(q, "ab(a+b)=0");
  if (field.pow(field.div(a, b), 3) == field.one()) {
    return Prediction::exactly(m % 2 == 1 ? 4 : 0, "a^3=b^3");
  }
  const Elem u = field.div(b, a);
  if (field.pow(u, (U64{1} << m) - 1) == field.one()) {
    return Prediction::exactly(U64{1} << m, "a^3!=b^3, b in a*F_{2^m}^*");
  }
  if (m == 3) {
    return Prediction::between(0, 16, "a^3!=b^3, b not in a*F_{2^m}^*", true);
  }
  return Prediction::exactly(16, "a^3!=b^3, b not in a*F_{2^m}^*");
}

Pk1Prediction predict_sozd_pk1(const Field& field, std::uint32_t k, Elem a, Elem b) {
  const std::uint32_t p = field.characteristic();
  const std::uint32_t n = field.degree();
  if (p == 2) throw Error(ErrorCode::EvenCharacteristic, "x^{p^k+1} predictor needs odd p");
  if (k < 1 || k >= n) throw Error(ErrorCode::BadParameters, "needs 1 <= k < n");
  const U64 q = field.size();
  U64 pk = 1;
  for (std::uint32_t i = 0; i < k; ++i) pk *= p;

  Pk1Prediction out;
  const Elem constant = field.mul(
      field.mul(a, b), field.add(field.pow(a, pk - 1), field.pow(b, pk - 1)));
  out.expanded = constant.is_zero() ? Prediction::exactly(q, "ab(a^{p^k-1}+b^{p^k-1})=0")
                                    : Prediction::exactly(0, "ab(a^{p^k-1}+b^{p^k-1})!=0");

  const auto s = static_cast<std::uint32_t>(gcd_u64(n, k));
  if (b.is_zero()) {
    out.stated = Prediction::exactly(q, "b=0");
  } else {
    const Elem ratio = field.div(a, b);
    out.stated = field.in_subfield(field.mul(ratio, ratio), s)
                     ? Prediction::exactly(q, "a^2 in b^2*F_{p^s}, b!=0")
                     : Prediction::exactly(0, "otherwise");
  }
  return out;
}

Prediction predict_ddt_x4_f3n(const Field& field, Elem a, Elem b) {
  if (field.characteristic() != 3) throw Error(ErrorCode::BadParameters, "needs the field F_{3^n}");
  const U64 q = field.size();
  if (a.is_zero()) {
    return b.is_zero() ? Prediction::exactly(q, "a=b=0") : Prediction::exactly(0, "a=0, b!=0");
  }
  if (field.degree() % 2 == 1) return Prediction::exactly(1, "a!=0, n odd");
  return Prediction::between(0, 3, "a!=0, n even");
}

std::optional<TheoremId> parse_theorem_id(std::string_view s) {
  if (s == "t1") return TheoremId::T1;
  if (s == "t2") return TheoremId::T2;
  if (s == "t3") return TheoremId::T3;
  if (s == "t4") return TheoremId::T4;
  return std::nullopt;
}

std::string theorem_name(TheoremId id) {
  switch (id) {
    case TheoremId::T1: return "t1";
    case TheoremId::T2: return "t2";
    case TheoremId::T3: return "t3";
    case TheoremId::T4: return "t4";
  }
  return "?";
}

namespace {

struct Setup {
  std::uint32_t p = 2;
  std::uint32_t n = 0;
  U64 d = 0;
  TableKind kind = TableKind::SOZD;
  U64 claimed = 0;
};

U64 upow(U64 base, U64 e) {
  U64 r = 1;
  while (e--) r *= base;
  return r;
}

Setup theorem_setup(TheoremId id, const TheoremParams& params) {
  Setup s;
  switch (id) {
    case TheoremId::T1:
    case TheoremId::T2:
      if (params.m <= 2 || params.m > 16) {
        throw Error(ErrorCode::BadParameters, "needs 2 < m <= 16, got m = " + std::to_string(params.m));
      }
      s.p = 2;
      s.n = 2 * params.m;
      s.d = (U64{1} << params.m) + (id == TheoremId::T1 ? 3 : 5);
      s.claimed = U64{1} << params.m;
      break;
    case TheoremId::T3:
      if (params.p == 2 || !is_prime(params.p)) {
        throw Error(ErrorCode::EvenCharacteristic, "x^{p^k+1} needs an odd prime p");
      }
      if (params.k < 1 || params.k >= params.n) throw Error(ErrorCode::BadParameters, "needs 1 <= k < n");
      s.p = params.p;
      s.n = params.n;
      s.d = upow(params.p, params.k) + 1;
      if (params.p == 3 && params.k == 1) {
        s.claimed = params.n % 2 == 1 ? 0 : upow(3, params.n);
      } else {
        s.claimed = upow(params.p, params.n);
      }
      break;
    case TheoremId::T4:
      if (params.n < 1) throw Error(ErrorCode::BadParameters, "needs n >= 1");
      s.p = 3;
      s.n = params.n;
      s.d = 4;
      s.kind = TableKind::DDT;
      s.claimed = params.n % 2 == 1 ? 1 : 3;
      break;
  }
  return s;
}

struct RowOutcome {
  U64 matches = 0;
  U64 flagged = 0;
  U64 mismatch_count = 0;
  std::vector<Mismatch> mismatches;
  std::map<std::tuple<std::string, std::string, U64>, U64> groups;
  U64 discrepancies = 0;
  std::vector<std::pair<Elem, Elem>> discrepancy_pairs;
  bool row_ok = true;
};

}  // namespace

VerificationReport verify_theorem(TheoremId id, const TheoremParams& params,
                                  const VerifyOptions& options) {
  const Setup s = theorem_setup(id, params);
  const Field field = Field::make(s.p, s.n, std::nullopt, options.max_elements);
  const SBox f(field, PowerMap{s.d});
  const SpectrumTable table =
      s.kind == TableKind::DDT ? ddt_table(f, options.compute) : sozd_table(f, options.compute);
  return verify_theorem_against(id, params, table, options);
}

VerificationReport verify_theorem_against(TheoremId id, const TheoremParams& params,
                                          const SpectrumTable& table,
                                          const VerifyOptions& options) {
  const Setup s = theorem_setup(id, params);
  const Field& field = table.field;
  if (field.characteristic() != s.p || field.degree() != s.n || table.kind != s.kind) {
    throw Error(ErrorCode::BadParameters, "table does not match the theorem's field or kind");
  }
  const U64 q = field.size();
  const std::size_t cap = options.max_listed_mismatches;

  std::vector<RowOutcome> rows(q);
  detail::parallel_for(q, options.compute.threads, [&](U64 ai) {
    RowOutcome& out = rows[ai];
    const Elem a{static_cast<std::uint32_t>(ai)};
    U64 row_sum = 0, row_max = 0;
    bool all_one = true;
    for (Elem b : field.elements()) {
      const U64 actual = table.at(a, b);
      row_sum += actual;
      row_max = std::max(row_max, actual);
      all_one = all_one && actual == 1;

      Prediction pred;
      switch (id) {
        case TheoremId::T1: pred = predict_fbct_2m3(field, params.m, a, b); break;
        case TheoremId::T2: pred = predict_fbct_2m5(field, params.m, a, b); break;
        case TheoremId::T3: {
          auto both = predict_sozd_pk1(field, params.k, a, b);
          if (both.expanded.value != both.stated.value) {
            ++out.discrepancies;
            if (out.discrepancy_pairs.size() < cap) out.discrepancy_pairs.emplace_back(a, b);
          }
          pred = params.condition == Pk1Condition::Expanded ? both.expanded : both.stated;
          break;
        }
        case TheoremId::T4: pred = predict_ddt_x4_f3n(field, a, b); break;
      }
      if (pred.flagged) ++out.flagged;
      if (pred.admits(actual)) {
        ++out.matches;
        continue;
      }
      ++out.mismatch_count;
      ++out.groups[{pred.condition, prediction_text(pred), actual}];
      if (out.mismatches.size() < cap) out.mismatches.push_back({a, b, pred, actual});
    }
    if (id == TheoremId::T4 && !a.is_zero()) {
      const bool odd = field.degree() % 2 == 1;
      out.row_ok = row_sum == q && (odd ? all_one : row_max == 3);
    }
  });

  VerificationReport report;
  report.theorem = id;
  report.field_spec = field.spec_string();
  report.exponent = s.d;
  report.kind = s.kind;
  if (id == TheoremId::T3) {
    report.condition = params.condition == Pk1Condition::Expanded ? "expanded" : "stated";
  }
  report.pairs_checked = q * q;
  std::map<std::tuple<std::string, std::string, U64>, U64> groups;
  for (auto& row : rows) {
    report.matches += row.matches;
    report.flagged_pairs += row.flagged;
    report.mismatch_count += row.mismatch_count;
    for (auto& m : row.mismatches) {
      if (report.mismatches.size() < cap) report.mismatches.push_back(std::move(m));
    }
    for (const auto& [key, count] : row.groups) groups[key] += count;
    report.condition_discrepancies += row.discrepancies;
    for (const auto& pr : row.discrepancy_pairs) {
      if (report.discrepancy_pairs.size() < cap) report.discrepancy_pairs.push_back(pr);
    }
    if (!row.row_ok) ++report.row_check_failures;
  }
  for (const auto& [key, count] : groups) {
    report.mismatch_groups.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), count});
  }

  report.summary = s.kind == TableKind::DDT ? differential_uniformity(table) : sozd_uniformity(table);
  report.uniformity_claimed = s.claimed;
  report.uniformity_actual = report.summary.uniformity;
  report.uniformity_agrees = report.uniformity_claimed == report.uniformity_actual;
  return report;
}

nlohmann::json report_to_json(const VerificationReport& r) {
  const Field field = parse_field_spec(r.field_spec);
  nlohmann::json mismatches = nlohmann::json::array();
  for (const auto& m : r.mismatches) {
    mismatches.push_back({{"a", format_element(field, m.a)},
                          {"b", format_element(field, m.b)},
                          {"predicted", prediction_text(m.predicted)},
                          {"case", m.predicted.condition},
                          {"actual", m.actual}});
  }
  nlohmann::json groups = nlohmann::json::array();
  for (const auto& g : r.mismatch_groups) {
    groups.push_back({{"case", g.condition}, {"predicted", g.predicted}, {"actual", g.actual},
                      {"count", g.count}});
  }
  nlohmann::json out = {
      {"theorem", theorem_name(r.theorem)},
      {"field", r.field_spec},
      {"exponent", r.exponent},
      {"kind", r.kind == TableKind::DDT ? "ddt" : "sozd"},
      {"pairs_checked", r.pairs_checked},
      {"matches", r.matches},
      {"mismatch_count", r.mismatch_count},
      {"mismatches", mismatches},
      {"mismatch_groups", groups},
      {"flagged_pairs", r.flagged_pairs},
      {"uniformity_claimed", r.uniformity_claimed},
      {"uniformity_actual", r.uniformity_actual},
      {"uniformity_agrees", r.uniformity_agrees},
      {"summary", summary_to_json(r.summary)},
      {"passed", r.passed()},
  };
  if (r.theorem == TheoremId::T3) {
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& [a, b] : r.discrepancy_pairs) {
      pairs.push_back({format_element(field, a), format_element(field, b)});
    }
    out["condition"] = r.condition;
    out["condition_discrepancies"] = r.condition_discrepancies;
    out["discrepancy_pairs"] = pairs;
  }
  if (r.theorem == TheoremId::T4) out["row_check_failures"] = r.row_check_failures;
  return out;
}

// ---------------------------------------------------------------------------
// Registry

namespace {

using Exp = std::optional<U64>;
using Values = std::vector<U64>;

constexpr U64 kExponentCap = U64{1} << 40;

Exp pow_checked(U64 base, U64 e) {
  U64 r = 1;
  for (U64 i = 0; i < e; ++i) {
    if (r > kExponentCap / base) return std::nullopt;
    r *= base;
  }
  return r;
}

U64 field_size(std::uint32_t p, std::uint32_t n) { return *pow_checked(p, n); }

// m with n = 2m or n = 2m + 1
std::uint32_t half(std::uint32_t n) { return n / 2; }

}  // namespace

const std::vector<RegistryEntry>& registry_cases() {
  static const std::vector<RegistryEntry> entries = {
      {1, "2^n-2", "p=2, n odd or n even", "2 or 4", false, false,
       [](std::uint32_t p, std::uint32_t n, std::uint32_t) -> Exp {
         if (p != 2) return std::nullopt;
         return field_size(2, n) - 2;
       },
       [](std::uint32_t, std::uint32_t n, std::uint32_t) -> Values { return {n % 2 ? 2u : 4u}; }},
      {2, "2^k+1", "p=2", "2^n", false, true,
       [](std::uint32_t p, std::uint32_t n, std::uint32_t k) -> Exp {
         if (p != 2 || k < 1 || k >= n) return std::nullopt;
         return (U64{1} << k) + 1;
       },
       [](std::uint32_t, std::uint32_t n, std::uint32_t) -> Values { return {U64{1} << n}; }},
      {3, "2^{2k}+2^k+1", "p=2, n=4k", "2^{2k}", false, false,
       [](std::uint32_t p, std::uint32_t n, std::uint32_t) -> Exp {
         if (p != 2 || n % 4 != 0) return std::nullopt;
         const U64 k = n / 4;
         return (U64{1} << (2 * k)) + (U64{1} << k) + 1;
       },
       [](std::uint32_t, std::uint32_t n, std::uint32_t) -> Values { return {U64{1} << (n / 2)}; }},
      {4, "2^{m+1}-1", "p=2, n=2m+1 or n=2m", "2 or 2^m", false, false,
       [](std::uint32_t p, std::uint32_t n, std::uint32_t) -> Exp {
         if (p != 2 || half(n) < 1) return std::nullopt;
         return (U64{1} << (half(n) + 1)) - 1;
       },
       [](std::uint32_t, std::uint32_t n, std::uint32_t) -> Values {
         return {n % 2 ? U64{2} : (U64{1} << half(n))};
       }},
      {5, "2^m-1", "p=2, n=2m+1 or n=2m", "2^m-4", false, false,
       [](std::uint32_t p, std::uint32_t n, std::uint32_t) -> Exp {
         if (p != 2 || half(n) < 2) return std::nullopt;
         return (U64{1} << half(n)) - 1;
       },
       [](std::uint32_t, std::uint32_t n, std::uint32_t) -> Values { return {(U64{1} << half(n)) - 4}; }},
      {6, "21", "p=2, n odd or n even", "4 or 16", false, false,
       [](std::uint32_t p, std::uint32_t, std::uint32_t) -> Exp {
         if (p != 2) return std::nullopt;
         return 21;
       },
       [](std::uint32_t, std::uint32_t n, std::uint32_t) -> Values { return {n % 2 ? 4u : 16u}; }},
      {7, "2^n-2^s", "p=2, gcd(n,s+1)=1, n-s=3", "4", false, false,
       [](std::uint32_t p, std::uint32_t n, std::uint32_t) -> Exp {
         if (p != 2 || n < 3 || gcd_u64(n, n - 3 + 1) != 1) return std::nullopt;
         return field_size(2, n) - (U64{1} << (n - 3));
       },
       [](std::uint32_t, std::uint32_t, std::uint32_t) -> Values { return {4}; }},
      {8, "7", "p=2", "4", false, false,
       [](std::uint32_t p, std::uint32_t, std::uint32_t) -> Exp {
         if (p != 2) return std::nullopt;
         return 7;
       },
       [](std::uint32_t, std::uint32_t, std::uint32_t) -> Values { return {4}; }},
      {9, "2^{m+1}+3", "p=2, n=2m+1 or n=2m", "4 or 2^m", false, false,
       [](std::uint32_t p, std::uint32_t n, std::uint32_t) -> Exp {
         if (p != 2 || half(n) < 1) return std::nullopt;
         return (U64{1} << (half(n) + 1)) + 3;
       },
       [](std::uint32_t, std::uint32_t n, std::uint32_t) -> Values {
         return {n % 2 ? U64{4} : (U64{1} << half(n))};
       }},
      {10, "7", "p=3", "3", false, false,
       [](std::uint32_t p, std::uint32_t, std::uint32_t) -> Exp {
         if (p != 3) return std::nullopt;
         return 7;
       },
       [](std::uint32_t, std::uint32_t, std::uint32_t) -> Values { return {3}; }},
      {11, "3^n-3", "p=3, n>1 is odd", "2", false, false,
       [](std::uint32_t p, std::uint32_t n, std::uint32_t) -> Exp {
         if (p != 3 || n <= 1 || n % 2 == 0) return std::nullopt;
         return field_size(3, n) - 3;
       },
       [](std::uint32_t, std::uint32_t, std::uint32_t) -> Values { return {2}; }},
      {12, "3^n-2", "p=3", "3", false, false,
       [](std::uint32_t p, std::uint32_t n, std::uint32_t) -> Exp {
         if (p != 3) return std::nullopt;
         return field_size(3, n) - 2;
       },
       [](std::uint32_t, std::uint32_t, std::uint32_t) -> Values { return {3}; }},
      {13, "(3^n-1)/2+2", "p=3, n odd", "3", false, false,
       [](std::uint32_t p, std::uint32_t n, std::uint32_t) -> Exp {
         if (p != 3 || n % 2 == 0) return std::nullopt;
         return (field_size(3, n) - 1) / 2 + 2;
       },
       [](std::uint32_t, std::uint32_t, std::uint32_t) -> Values { return {3}; }},
      {14, "2*3^{(n-1)/2}+1", "p=3", "3", false, false,
       [](std::uint32_t p, std::uint32_t n, std::uint32_t) -> Exp {
         // The exponent is only an integer for odd n.
         if (p != 3 || n % 2 == 0) return std::nullopt;
         return 2 * field_size(3, (n - 1) / 2) + 1;
       },
       [](std::uint32_t, std::uint32_t, std::uint32_t) -> Values { return {3}; }},
      {15, "5", "p>2", "3", false, false,
       [](std::uint32_t p, std::uint32_t, std::uint32_t) -> Exp {
         if (p <= 2) return std::nullopt;
         return 5;
       },
       [](std::uint32_t, std::uint32_t, std::uint32_t) -> Values { return {3}; }},
      {16, "3", "p>3", "1", false, false,
       [](std::uint32_t p, std::uint32_t, std::uint32_t) -> Exp {
         if (p <= 3) return std::nullopt;
         return 3;
       },
       [](std::uint32_t, std::uint32_t, std::uint32_t) -> Values { return {1}; }},
      {17, "p^n-2", "p>3, p^n=2 (mod 3)", "1", false, false,
       [](std::uint32_t p, std::uint32_t n, std::uint32_t) -> Exp {
         const U64 q = field_size(p, n);
         if (p <= 3 || q % 3 != 2) return std::nullopt;
         return q - 2;
       },
       [](std::uint32_t, std::uint32_t, std::uint32_t) -> Values { return {1}; }},
      {18, "p^n-2", "p>3, p^n=1 (mod 3)", "3", false, false,
       [](std::uint32_t p, std::uint32_t n, std::uint32_t) -> Exp {
         const U64 q = field_size(p, n);
         if (p <= 3 || q % 3 != 1) return std::nullopt;
         return q - 2;
       },
       [](std::uint32_t, std::uint32_t, std::uint32_t) -> Values { return {3}; }},
      {19, "p^m+2", "p>3, n=2m, p^n=1 (mod 3)", "1", false, false,
       [](std::uint32_t p, std::uint32_t n, std::uint32_t) -> Exp {
         if (p <= 3 || n % 2 != 0 || field_size(p, n) % 3 != 1) return std::nullopt;
         return field_size(p, n / 2) + 2;
       },
       [](std::uint32_t, std::uint32_t, std::uint32_t) -> Values { return {1}; }},
      {20, "4", "p>3, n>1", "2", false, false,
       [](std::uint32_t p, std::uint32_t n, std::uint32_t) -> Exp {
         if (p <= 3 || n <= 1) return std::nullopt;
         return 4;
       },
       [](std::uint32_t, std::uint32_t, std::uint32_t) -> Values { return {2}; }},
      {21, "(p^k+1)/2", "p>3, gcd(2n,k)=1", "(p-3)/2", false, true,
       [](std::uint32_t p, std::uint32_t n, std::uint32_t k) -> Exp {
         if (p <= 3 || k < 1 || gcd_u64(2 * n, k) != 1) return std::nullopt;
         const auto pk = pow_checked(p, k);
         if (!pk) return std::nullopt;
         return (*pk + 1) / 2;
       },
       [](std::uint32_t p, std::uint32_t, std::uint32_t) -> Values { return {(U64{p} - 3) / 2}; }},
      {22, "(2p^n-1)/3", "p^n=2 (mod 3)", "1", false, false,
       [](std::uint32_t p, std::uint32_t n, std::uint32_t) -> Exp {
         const U64 q = field_size(p, n);
         if (q % 3 != 2) return std::nullopt;
         return (2 * q - 1) / 3;
       },
       [](std::uint32_t, std::uint32_t, std::uint32_t) -> Values { return {1}; }},
      {23, "(p^n+1)/4+(p^n-1)/2", "p^n=3 (mod 8)", "8 or 18", false, false,
       [](std::uint32_t p, std::uint32_t n, std::uint32_t) -> Exp {
         const U64 q = field_size(p, n);
         if (q % 8 != 3) return std::nullopt;
         return (q + 1) / 4 + (q - 1) / 2;
       },
       [](std::uint32_t, std::uint32_t, std::uint32_t) -> Values { return {8, 18}; }},
      {24, "(p^n+1)/4", "p^n=7 (mod 8)", "8 or 18", false, false,
       [](std::uint32_t p, std::uint32_t n, std::uint32_t) -> Exp {
         const U64 q = field_size(p, n);
         if (q % 8 != 7) return std::nullopt;
         return (q + 1) / 4;
       },
       [](std::uint32_t, std::uint32_t, std::uint32_t) -> Values { return {8, 18}; }},
      {25, "2^m+3", "p=2, n=2m, m>2", "2^m", true, false,
       [](std::uint32_t p, std::uint32_t n, std::uint32_t) -> Exp {
         if (p != 2 || n % 2 != 0 || n / 2 <= 2) return std::nullopt;
         return (U64{1} << (n / 2)) + 3;
       },
       [](std::uint32_t, std::uint32_t n, std::uint32_t) -> Values { return {U64{1} << (n / 2)}; }},
      {26, "2^m+5", "p=2, n=2m, m>2", "2^m", true, false,
       [](std::uint32_t p, std::uint32_t n, std::uint32_t) -> Exp {
         if (p != 2 || n % 2 != 0 || n / 2 <= 2) return std::nullopt;
         return (U64{1} << (n / 2)) + 5;
       },
       [](std::uint32_t, std::uint32_t n, std::uint32_t) -> Values { return {U64{1} << (n / 2)}; }},
      {27, "p^k+1", "p odd, 1<=k<n", "p^n", true, true,
       [](std::uint32_t p, std::uint32_t n, std::uint32_t k) -> Exp {
         if (p == 2 || k < 1 || k >= n) return std::nullopt;
         return field_size(p, k) + 1;
       },
       [](std::uint32_t p, std::uint32_t n, std::uint32_t) -> Values { return {field_size(p, n)}; }},
      {28, "4", "p=3, n>1", "0 or 3^n", true, false,
       [](std::uint32_t p, std::uint32_t n, std::uint32_t) -> Exp {
         if (p != 3 || n <= 1) return std::nullopt;
         return 4;
       },
       [](std::uint32_t, std::uint32_t n, std::uint32_t) -> Values {
         return {n % 2 ? U64{0} : field_size(3, n)};
       }},
  };
  return entries;
}

std::vector<RegistryInstance> registry_instances(std::uint64_t max_size) {
  std::vector<std::uint32_t> primes;
  for (const auto& e : detail::conway_table()) {
    if (primes.empty() || primes.back() != e.p) primes.push_back(e.p);
  }
  std::vector<RegistryInstance> out;
  for (const auto& entry : registry_cases()) {
    for (std::uint32_t p : primes) {
      for (std::uint32_t n = 1;; ++n) {
        const auto q = pow_checked(p, n);
        if (!q || *q > max_size || *q > kDefaultMaxElements) break;
        // Over F_2 the domain a != b, both nonzero, is empty.
        if (*q < 3) continue;
        const std::uint32_t k_hi = entry.uses_k ? n : 0;
        for (std::uint32_t k = 0; k <= k_hi; ++k) {
          const auto d = entry.exponent_for(p, n, k);
          if (!d || *d < 1 || *d >= *q) continue;
          RegistryInstance inst{entry.row, p, n, std::nullopt, *d, entry.expected_for(p, n, k)};
          if (entry.uses_k) inst.k = k;
          out.push_back(std::move(inst));
        }
      }
    }
  }
  return out;
}

std::uint64_t registry_uniformity(const RegistryInstance& instance) {
  const Field field = Field::make(instance.p, instance.n);
  const auto row = sozd_row_power(field, instance.d);
  return summarize_power_row(field, TableKind::SOZD, row).uniformity;
}

RegistryReport verify_registry(std::uint64_t max_size, unsigned threads) {
  RegistryReport report;
  report.max_size = max_size;
  const auto instances = registry_instances(max_size);
  report.results.resize(instances.size());
  detail::parallel_for(instances.size(), threads, [&](U64 i) {
    RegistryResult& r = report.results[i];
    r.instance = instances[i];
    r.actual = registry_uniformity(r.instance);
    r.match = std::find(r.instance.expected.begin(), r.instance.expected.end(), r.actual) !=
              r.instance.expected.end();
  });
  for (const auto& r : report.results) (r.match ? report.matched : report.mismatched)++;
  for (const auto& entry : registry_cases()) {
    const bool any = std::any_of(report.results.begin(), report.results.end(),
                                 [&](const auto& r) { return r.instance.row == entry.row; });
    if (!any) report.skipped_rows.push_back(entry.row);
  }
  return report;
}

nlohmann::json registry_report_to_json(const RegistryReport& report) {
  nlohmann::json results = nlohmann::json::array();
  const auto& entries = registry_cases();
  for (const auto& r : report.results) {
    const auto& entry = entries[r.instance.row - 1];
    nlohmann::json item = {
        {"row", r.instance.row},
        {"pattern", entry.exponent},
        {"conditions", entry.conditions},
        {"p", r.instance.p},
        {"n", r.instance.n},
        {"d", r.instance.d},
        {"expected", r.instance.expected},
        {"actual", r.actual},
        {"match", r.match},
    };
    if (r.instance.k) item["k"] = *r.instance.k;
    results.push_back(std::move(item));
  }
  return {{"max_size", report.max_size},
          {"instances", report.results.size()},
          {"matched", report.matched},
          {"mismatched", report.mismatched},
          {"skipped_rows", report.skipped_rows},
          {"results", results},
          {"passed", report.passed()}};
}

}  // namespace sbox
