#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sbox/field.hpp"
#include "sbox/spectra.hpp"

namespace sbox {

// A predicted table entry: an exact count, or an interval when only a bound
// is claimed. `condition` names the case that fired.
struct Prediction {
  bool exact = true;
  std::uint64_t value = 0;
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  std::string condition;
  // Set when the claimed value for this case is internally inconsistent
  // with the claimed uniformity.
  bool flagged = false;

  static Prediction exactly(std::uint64_t v, std::string condition);
  static Prediction between(std::uint64_t lo, std::uint64_t hi, std::string condition,
                            bool flagged = false);

  bool admits(std::uint64_t actual) const {
    return exact ? actual == value : (lo <= actual && actual <= hi);
  }
};

// FBCT of x^{2^m+3} over F_{2^{2m}}, m > 2.
Prediction predict_fbct_2m3(const Field& field, std::uint32_t m, Elem a, Elem b);

// FBCT of x^{2^m+5} over F_{2^{2m}}, m > 2. At m = 3 the generic case is
// reported as the interval [0, 16] and flagged, since 16 > 2^3.
Prediction predict_fbct_2m5(const Field& field, std::uint32_t m, Elem a, Elem b);

// Second-order spectrum of x^{p^k+1} over F_{p^n}, p odd.
struct Pk1Prediction {
  // p^n iff a b (a^{p^k-1} + b^{p^k-1}) = 0, else 0. The second-order
  // difference of x^{p^k+1} does not depend on x, so this is exact.
  Prediction expanded;
  // p^n iff b = 0 or (a/b)^2 lies in F_{p^s}, s = gcd(n, k); the published
  // membership condition, kept as a claim under test.
  Prediction stated;
};
Pk1Prediction predict_sozd_pk1(const Field& field, std::uint32_t k, Elem a, Elem b);

// DDT of x^4 over F_{3^n}. Rows a != 0 are exactly 1 everywhere for odd n;
// for even n each entry is only bounded by 3 (row maximum 3).
Prediction predict_ddt_x4_f3n(const Field& field, Elem a, Elem b);

enum class TheoremId { T1, T2, T3, T4 };

std::optional<TheoremId> parse_theorem_id(std::string_view s);
std::string theorem_name(TheoremId id);

enum class Pk1Condition { Expanded, Stated };

struct TheoremParams {
  std::uint32_t m = 0;   // T1, T2
  std::uint32_t p = 3;   // T3
  std::uint32_t n = 0;   // T3, T4
  std::uint32_t k = 1;   // T3
  Pk1Condition condition = Pk1Condition::Expanded;
};

struct VerifyOptions {
  ComputeOptions compute;
  std::uint64_t max_elements = kDefaultMaxElements;
  std::size_t max_listed_mismatches = 100;
};

struct Mismatch {
  Elem a;
  Elem b;
  Prediction predicted;
  std::uint64_t actual = 0;
};

// Mismatch counts grouped by (case, predicted, actual).
struct MismatchGroup {
  std::string condition;
  std::string predicted;
  std::uint64_t actual = 0;
  std::uint64_t count = 0;
};

struct VerificationReport {
  TheoremId theorem = TheoremId::T1;
  std::string field_spec;
  std::uint64_t exponent = 0;
  TableKind kind = TableKind::SOZD;
  std::string condition;  // T3 only

  std::uint64_t pairs_checked = 0;
  std::uint64_t matches = 0;
  std::uint64_t mismatch_count = 0;
  std::vector<Mismatch> mismatches;  // first max_listed_mismatches
  std::vector<MismatchGroup> mismatch_groups;
  std::uint64_t flagged_pairs = 0;

  std::uint64_t uniformity_claimed = 0;
  std::uint64_t uniformity_actual = 0;
  bool uniformity_agrees = false;

  // T3: pairs where the stated and expanded conditions disagree.
  std::uint64_t condition_discrepancies = 0;
  std::vector<std::pair<Elem, Elem>> discrepancy_pairs;  // capped like mismatches

  // T4: rows a != 0 whose maximum, sum, or permutation property fails.
  std::uint64_t row_check_failures = 0;

  SpectrumSummary summary;

  bool passed() const {
    return mismatch_count == 0 && uniformity_agrees && row_check_failures == 0;
  }
};

// Computes the exhaustive table and diffs it against the theorem, pair by
// pair and in its uniformity claim.
VerificationReport verify_theorem(TheoremId id, const TheoremParams& params,
                                  const VerifyOptions& options = {});

// Same diff against an already computed table (e.g. from the brute-force
// path, or a deliberately corrupted one).
VerificationReport verify_theorem_against(TheoremId id, const TheoremParams& params,
                                          const SpectrumTable& table,
                                          const VerifyOptions& options = {});

nlohmann::json report_to_json(const VerificationReport& report);

// One row of the table of power functions with known second-order zero
// differential uniformity.
struct RegistryEntry {
  int row = 0;                 // 1-based row of the known-results table
  std::string exponent;        // pattern, e.g. "2^n-2"
  std::string conditions;      // as published
  std::string claimed;         // closed form of the uniformity
  bool from_this_work = false; // rows added by the four new theorems
  bool uses_k = false;         // the pattern has a free parameter k

  // Exponent for (p, n, k), or nullopt when the constraints fail.
  std::optional<std::uint64_t> (*exponent_for)(std::uint32_t p, std::uint32_t n, std::uint32_t k) = nullptr;
  // Acceptable uniformity values (two for rows published as "8 or 18").
  std::vector<std::uint64_t> (*expected_for)(std::uint32_t p, std::uint32_t n, std::uint32_t k) = nullptr;
};

const std::vector<RegistryEntry>& registry_cases();

struct RegistryInstance {
  int row = 0;
  std::uint32_t p = 0;
  std::uint32_t n = 0;
  std::optional<std::uint32_t> k;
  std::uint64_t d = 0;
  std::vector<std::uint64_t> expected;
};

// All (p, n, k) with p in the built-in modulus table, p^n <= max_size, and
// the row's constraints satisfied. Rows with none are reported as skipped.
std::vector<RegistryInstance> registry_instances(std::uint64_t max_size);

struct RegistryResult {
  RegistryInstance instance;
  std::uint64_t actual = 0;
  bool match = false;
};

struct RegistryReport {
  std::uint64_t max_size = 0;
  std::vector<RegistryResult> results;
  std::vector<int> skipped_rows;
  std::uint64_t matched = 0;
  std::uint64_t mismatched = 0;

  bool passed() const { return mismatched == 0; }
};

// Computes the second-order zero differential uniformity of one instance
// from its a = 1 row.
std::uint64_t registry_uniformity(const RegistryInstance& instance);

RegistryReport verify_registry(std::uint64_t max_size, unsigned threads = 1);
nlohmann::json registry_report_to_json(const RegistryReport& report);

}  // namespace sbox
