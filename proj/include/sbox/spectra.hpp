#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"
#include "sbox/field.hpp"

namespace sbox {

struct PowerMap {
  std::uint64_t d = 1;
};

// images[i] is the image of the i-th element in enumeration order.
struct TableMap {
  std::vector<Elem> images;
};

using MapSpec = std::variant<PowerMap, TableMap>;

// "11" for x^11, "table" for lookup tables.
std::string map_label(const MapSpec& map);

// A function F: F_{p^n} -> F_{p^n} with its value table materialised.
class SBox {
 public:
  SBox(Field field, MapSpec map);

  const Field& field() const { return field_; }
  const MapSpec& map() const { return map_; }
  std::span<const Elem> images() const { return images_; }
  Elem operator()(Elem x) const { return images_[x.v]; }

  // The exponent for power maps.
  std::optional<std::uint64_t> exponent() const;

 private:
  Field field_;
  MapSpec map_;
  std::vector<Elem> images_;
};

enum class TableKind { DDT, SOZD };

// "ddt"; "fbct" for second-order tables over F_{2^n}, "sozd" otherwise.
std::string table_label(TableKind kind, const Field& field);

enum class Method {
  Auto,        // power-row reconstruction for power maps, brute force otherwise
  BruteForce,  // every entry counted directly
  PowerRow,    // row at a = 1 plus scaling; power maps only
};

struct ComputeOptions {
  unsigned threads = 1;
  Method method = Method::Auto;
};

struct SpectrumTable {
  TableKind kind = TableKind::DDT;
  Field field;
  MapSpec map;
  // q x q, row a, column b, both in enumeration order.
  std::vector<std::uint64_t> entries;

  std::uint64_t size() const { return field.size(); }
  std::uint64_t at(Elem a, Elem b) const { return entries[a.v * size() + b.v]; }
  std::uint64_t& at(Elem a, Elem b) { return entries[a.v * size() + b.v]; }
};

using Histogram = std::vector<std::pair<std::uint64_t, std::uint64_t>>;

struct SpectrumSummary {
  TableKind kind = TableKind::DDT;
  std::uint64_t uniformity = 0;
  // value -> number of (a, b) pairs, ascending by value, over all q^2 pairs.
  Histogram histogram;
  // Same, restricted to the pairs the uniformity ranges over.
  Histogram domain_histogram;
  std::string domain;
};

// #{x : F(x + a) - F(x) = b}
std::uint64_t ddt_entry(const SBox& f, Elem a, Elem b);
// #{x : F(x + a + b) - F(x + a) - F(x + b) + F(x) = 0}
std::uint64_t sozd_entry(const SBox& f, Elem a, Elem b);

// DDT(1, .) of x^d. With `normalize`, d is first replaced by its canonical
// representative in [1, q - 1] (same map on F_{p^n}).
std::vector<std::uint64_t> ddt_row_power(const Field& field, std::uint64_t d, bool normalize = false);
std::vector<std::uint64_t> ddt_row_power(const SBox& f);
// SOZD(1, .) of x^d.
std::vector<std::uint64_t> sozd_row_power(const Field& field, std::uint64_t d);
std::vector<std::uint64_t> sozd_row_power(const SBox& f);

SpectrumTable ddt_table(const SBox& f, const ComputeOptions& options = {});
SpectrumTable sozd_table(const SBox& f, const ComputeOptions& options = {});

// Full table of x^d from its a = 1 row: DDT(a, b) = DDT(1, b / a^d) and
// SOZD(a, b) = SOZD(1, b / a) for a != 0.
SpectrumTable table_from_power_row(const Field& field, std::uint64_t d, TableKind kind,
                                   std::span<const std::uint64_t> row, unsigned threads = 1);

// Max over a, b nonzero with a != b (p = 2) or a, b nonzero (p odd).
SpectrumSummary sozd_uniformity(const SpectrumTable& table);
// Max over a != 0, all b.
SpectrumSummary differential_uniformity(const SpectrumTable& table);
SpectrumSummary differential_uniformity(const SBox& f, const ComputeOptions& options = {});
// Summary of the full table of x^d computed from its a = 1 row only.
SpectrumSummary summarize_power_row(const Field& field, TableKind kind,
                                    std::span<const std::uint64_t> row);

struct PropertyViolation {
  std::string property;
  Elem a;
  Elem b;
  std::uint64_t value = 0;
  std::uint64_t expected = 0;
};

struct PropertyReport {
  std::uint64_t total_violations = 0;
  // At most kMaxListed entries; total_violations has the full count.
  std::vector<PropertyViolation> violations;
  bool ok() const { return total_violations == 0; }

  static constexpr std::size_t kMaxListed = 1000;
};

// Symmetry, first line/column/diagonal = 2^n, entries = 0 mod 4, and
// FBCT(a, b) = FBCT(a, a + b).
PropertyReport fbct_property_check(const SpectrumTable& table);

// Header line `kind,p,n,d_or_table`, then q rows of q counts.
void write_csv(std::ostream& os, const SpectrumTable& table);
nlohmann::json summary_to_json(const SpectrumSummary& summary);
nlohmann::json property_report_to_json(const Field& field, const PropertyReport& report);

}  // namespace sbox
