#include "sbox/spectra.hpp"

#include <charconv>
#include <map>

#include "parallel.hpp"

namespace sbox {

namespace {

// Addition with a q x q lookup table for small odd-characteristic fields,
// where Field::add walks base-p digits.
class Adder {
 public:
  static constexpr std::uint64_t kTableLimit = 2048;

  explicit Adder(const Field& field) : field_(field), binary_(field.characteristic() == 2) {
    const std::uint64_t q = field.size();
    if (binary_ || q > kTableLimit) return;
    table_.resize(q * q);
    for (std::uint64_t a = 0; a < q; ++a) {
      for (std::uint64_t b = a; b < q; ++b) {
        const auto s = field.add(Elem{static_cast<std::uint32_t>(a)}, Elem{static_cast<std::uint32_t>(b)}).v;
        table_[a * q + b] = s;
        table_[b * q + a] = s;
      }
    }
  }

  Elem add(Elem a, Elem b) const {
    if (binary_) return Elem{a.v ^ b.v};
    if (!table_.empty()) return Elem{table_[a.v * field_.size() + b.v]};
    return field_.add(a, b);
  }

  Elem sub(Elem a, Elem b) const {
    if (binary_) return Elem{a.v ^ b.v};
    return add(a, field_.neg(b));
  }

 private:
  const Field& field_;
  bool binary_;
  std::vector<std::uint32_t> table_;
};

void ddt_row_into(const SBox& f, const Adder& adder, Elem a, std::span<std::uint64_t> row) {
  std::fill(row.begin(), row.end(), 0);
  for (Elem x : f.field().elements()) {
    ++row[adder.sub(f(adder.add(x, a)), f(x)).v];
  }
}

void sozd_row_into(const SBox& f, const Adder& adder, Elem a, std::span<std::uint64_t> row) {
  const Field& field = f.field();
  const std::uint64_t q = field.size();
  const auto images = f.images();
  if (field.characteristic() == 2) {
    std::vector<std::uint32_t> diff_a(q);
    for (std::uint32_t x = 0; x < q; ++x) diff_a[x] = images[x].v ^ images[x ^ a.v].v;
    for (std::uint32_t b = 0; b < q; ++b) {
      std::uint64_t count = 0;
      for (std::uint32_t x = 0; x < q; ++x) {
        count += (diff_a[x] ^ images[x ^ b].v ^ images[x ^ a.v ^ b].v) == 0;
      }
      row[b] = count;
    }
    return;
  }
  std::vector<Elem> shifted(q);
  for (Elem x : field.elements()) shifted[x.v] = adder.add(x, a);
  for (Elem b : field.elements()) {
    std::uint64_t count = 0;
    for (Elem x : field.elements()) {
      const Elem xb = adder.add(x, b);
      const Elem xab = adder.add(shifted[x.v], b);
      count += adder.add(f(xab), f(x)) == adder.add(f(shifted[x.v]), f(xb));
    }
    row[b.v] = count;
  }
}

const PowerMap& require_power(const SBox& f) {
  if (const auto* pm = std::get_if<PowerMap>(&f.map())) return *pm;
  throw Error(ErrorCode::NotAPowerMap, "operation needs a power map");
}

Histogram to_histogram(const std::map<std::uint64_t, std::uint64_t>& counts) {
  return Histogram(counts.begin(), counts.end());
}

std::string sozd_domain(const Field& field) {
  return field.characteristic() == 2 ? "a,b nonzero, a != b" : "a,b nonzero";
}

SpectrumTable brute_force_table(const SBox& f, TableKind kind, unsigned threads) {
  const std::uint64_t q = f.field().size();
  SpectrumTable table{kind, f.field(), f.map(), std::vector<std::uint64_t>(q * q)};
  const Adder adder(f.field());
  detail::parallel_for(q, threads, [&](std::uint64_t a) {
    std::span<std::uint64_t> row(table.entries.data() + a * q, q);
    const Elem ea{static_cast<std::uint32_t>(a)};
    if (kind == TableKind::DDT) {
      ddt_row_into(f, adder, ea, row);
    } else {
      sozd_row_into(f, adder, ea, row);
    }
  });
  return table;
}

SpectrumTable compute_table(const SBox& f, TableKind kind, const ComputeOptions& options) {
  Method method = options.method;
  if (method == Method::Auto) {
    method = f.exponent() ? Method::PowerRow : Method::BruteForce;
  }
  if (method == Method::BruteForce) return brute_force_table(f, kind, options.threads);
  const auto& pm = require_power(f);
  const auto row = kind == TableKind::DDT ? ddt_row_power(f) : sozd_row_power(f);
  return table_from_power_row(f.field(), pm.d, kind, row, options.threads);
}

}  // namespace

std::string map_label(const MapSpec& map) {
  if (const auto* pm = std::get_if<PowerMap>(&map)) return std::to_string(pm->d);
  return "table";
}

SBox::SBox(Field field, MapSpec map) : field_(std::move(field)), map_(std::move(map)) {
  const std::uint64_t q = field_.size();
  if (const auto* pm = std::get_if<PowerMap>(&map_)) {
    if (pm->d < 1) throw Error(ErrorCode::BadParameters, "power exponent must be positive");
    images_.resize(q);
    for (Elem x : field_.elements()) images_[x.v] = field_.pow(x, pm->d);
    images_[0] = field_.zero();
  } else {
    const auto& tm = std::get<TableMap>(map_);
    if (tm.images.size() != q) {
      throw Error(ErrorCode::WrongLength, "table map needs " + std::to_string(q) + " entries, got " +
                                              std::to_string(tm.images.size()));
    }
    for (Elem y : tm.images) {
      if (!field_.contains(y)) throw Error(ErrorCode::UnparsableElement, "table entry not in field");
    }
    images_ = tm.images;
  }
}

std::optional<std::uint64_t> SBox::exponent() const {
  if (const auto* pm = std::get_if<PowerMap>(&map_)) return pm->d;
  return std::nullopt;
}

std::string table_label(TableKind kind, const Field& field) {
  if (kind == TableKind::DDT) return "ddt";
  return field.characteristic() == 2 ? "fbct" : "sozd";
}

std::uint64_t ddt_entry(const SBox& f, Elem a, Elem b) {
  const Field& field = f.field();
  std::uint64_t count = 0;
  for (Elem x : field.elements()) {
    count += field.sub(f(field.add(x, a)), f(x)) == b;
  }
  return count;
}

std::uint64_t sozd_entry(const SBox& f, Elem a, Elem b) {
  const Field& field = f.field();
  std::uint64_t count = 0;
  const Elem ab = field.add(a, b);
  for (Elem x : field.elements()) {
    const Elem lhs = field.add(f(field.add(x, ab)), f(x));
    const Elem rhs = field.add(f(field.add(x, a)), f(field.add(x, b)));
    count += lhs == rhs;
  }
  return count;
}

std::vector<std::uint64_t> ddt_row_power(const Field& field, std::uint64_t d, bool normalize) {
  if (normalize) d = (d - 1) % (field.size() - 1) + 1;
  return ddt_row_power(SBox(field, PowerMap{d}));
}

std::vector<std::uint64_t> ddt_row_power(const SBox& f) {
  require_power(f);
  std::vector<std::uint64_t> row(f.field().size());
  ddt_row_into(f, Adder(f.field()), f.field().one(), row);
  return row;
}

std::vector<std::uint64_t> sozd_row_power(const Field& field, std::uint64_t d) {
  return sozd_row_power(SBox(field, PowerMap{d}));
}

std::vector<std::uint64_t> sozd_row_power(const SBox& f) {
  require_power(f);
  std::vector<std::uint64_t> row(f.field().size());
  sozd_row_into(f, Adder(f.field()), f.field().one(), row);
  return row;
}

SpectrumTable ddt_table(const SBox& f, const ComputeOptions& options) {
  return compute_table(f, TableKind::DDT, options);
}

SpectrumTable sozd_table(const SBox& f, const ComputeOptions& options) {
  return compute_table(f, TableKind::SOZD, options);
}

SpectrumTable table_from_power_row(const Field& field, std::uint64_t d, TableKind kind,
                                   std::span<const std::uint64_t> row, unsigned threads) {
  const std::uint64_t q = field.size();
  if (row.size() != q) throw Error(ErrorCode::WrongLength, "power row has wrong length");
  SpectrumTable table{kind, field, PowerMap{d}, std::vector<std::uint64_t>(q * q)};
  detail::parallel_for(q, threads, [&](std::uint64_t ai) {
    std::uint64_t* out = table.entries.data() + ai * q;
    const Elem a{static_cast<std::uint32_t>(ai)};
    if (a.is_zero()) {
      for (std::uint64_t b = 0; b < q; ++b) {
        out[b] = kind == TableKind::SOZD ? q : (b == 0 ? q : 0);
      }
      return;
    }
    const Elem scale = field.inv(kind == TableKind::DDT ? field.pow(a, d) : a);
    for (Elem b : field.elements()) out[b.v] = row[field.mul(b, scale).v];
  });
  return table;
}

SpectrumSummary sozd_uniformity(const SpectrumTable& table) {
  if (table.kind != TableKind::SOZD) throw Error(ErrorCode::WrongKind, "expected a second-order table");
  const bool binary = table.field.characteristic() == 2;
  const std::uint64_t q = table.size();
  std::map<std::uint64_t, std::uint64_t> all, dom;
  std::uint64_t best = 0;
  for (std::uint64_t a = 0; a < q; ++a) {
    for (std::uint64_t b = 0; b < q; ++b) {
      const std::uint64_t v = table.entries[a * q + b];
      ++all[v];
      if (a == 0 || b == 0 || (binary && a == b)) continue;
      ++dom[v];
      best = std::max(best, v);
    }
  }
  return {TableKind::SOZD, best, to_histogram(all), to_histogram(dom), sozd_domain(table.field)};
}

SpectrumSummary differential_uniformity(const SpectrumTable& table) {
  if (table.kind != TableKind::DDT) throw Error(ErrorCode::WrongKind, "expected a DDT");
  const std::uint64_t q = table.size();
  std::map<std::uint64_t, std::uint64_t> all, dom;
  std::uint64_t best = 0;
  for (std::uint64_t a = 0; a < q; ++a) {
    for (std::uint64_t b = 0; b < q; ++b) {
      const std::uint64_t v = table.entries[a * q + b];
      ++all[v];
      if (a == 0) continue;
      ++dom[v];
      best = std::max(best, v);
    }
  }
  return {TableKind::DDT, best, to_histogram(all), to_histogram(dom), "a nonzero"};
}

SpectrumSummary differential_uniformity(const SBox& f, const ComputeOptions& options) {
  return differential_uniformity(ddt_table(f, options));
}

SpectrumSummary summarize_power_row(const Field& field, TableKind kind,
                                    std::span<const std::uint64_t> row) {
  const std::uint64_t q = field.size();
  if (row.size() != q) throw Error(ErrorCode::WrongLength, "power row has wrong length");
  const bool binary = field.characteristic() == 2;
  std::map<std::uint64_t, std::uint64_t> all, dom;
  std::uint64_t best = 0;
  // Row a = 0.
  if (kind == TableKind::SOZD) {
    all[q] += q;
  } else {
    all[q] += 1;
    if (q > 1) all[0] += q - 1;
  }
  // Each a != 0 row is a permutation of the a = 1 row, indexed by u = b/a
  // (SOZD) or b/a^d (DDT).
  for (std::uint64_t u = 0; u < q; ++u) {
    const std::uint64_t v = row[u];
    all[v] += q - 1;
    if (kind == TableKind::SOZD && (u == 0 || (binary && u == 1))) continue;
    dom[v] += q - 1;
    best = std::max(best, v);
  }
  std::erase_if(all, [](const auto& kv) { return kv.second == 0; });
  return {kind, best, to_histogram(all), to_histogram(dom),
          kind == TableKind::SOZD ? sozd_domain(field) : "a nonzero"};
}

PropertyReport fbct_property_check(const SpectrumTable& table) {
  if (table.kind != TableKind::SOZD || table.field.characteristic() != 2) {
    throw Error(ErrorCode::WrongKind, "FBCT property check needs a p = 2 second-order table");
  }
  const std::uint64_t q = table.size();
  PropertyReport report;
  auto flag = [&](const char* name, std::uint32_t a, std::uint32_t b, std::uint64_t value,
                  std::uint64_t expected) {
    ++report.total_violations;
    if (report.violations.size() < PropertyReport::kMaxListed) {
      report.violations.push_back({name, Elem{a}, Elem{b}, value, expected});
    }
  };
  for (std::uint32_t a = 0; a < q; ++a) {
    for (std::uint32_t b = 0; b < q; ++b) {
      const std::uint64_t v = table.entries[a * q + b];
      const std::uint64_t mirrored = table.entries[std::uint64_t{b} * q + a];
      if (a < b && v != mirrored) flag("symmetry", a, b, v, mirrored);
      if (a == 0 && v != q) flag("first_line", a, b, v, q);
      if (b == 0 && v != q) flag("first_column", a, b, v, q);
      if (a == b && v != q) flag("diagonal", a, b, v, q);
      if (v % 4 != 0) flag("multiplicity_mod_4", a, b, v, v - v % 4);
      const std::uint64_t shifted = table.entries[std::uint64_t{a} * q + (a ^ b)];
      if (b < (a ^ b) && v != shifted) flag("equality_a_a_plus_b", a, b, v, shifted);
    }
  }
  return report;
}

void write_csv(std::ostream& os, const SpectrumTable& table) {
  const Field& field = table.field;
  os << table_label(table.kind, field) << ',' << field.characteristic() << ',' << field.degree()
     << ',' << map_label(table.map) << '\n';
  const std::uint64_t q = table.size();
  std::string line;
  char buf[24];
  for (std::uint64_t a = 0; a < q; ++a) {
    line.clear();
    for (std::uint64_t b = 0; b < q; ++b) {
      if (b) line.push_back(',');
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, table.entries[a * q + b]);
      line.append(buf, ptr);
    }
    line.push_back('\n');
    os << line;
  }
}

nlohmann::json summary_to_json(const SpectrumSummary& summary) {
  auto hist = [](const Histogram& h) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& [value, count] : h) out.push_back({value, count});
    return out;
  };
  return {
      {"kind", summary.kind == TableKind::DDT ? "ddt" : "sozd"},
      {"uniformity", summary.uniformity},
      {"histogram", hist(summary.histogram)},
      {"domain_histogram", hist(summary.domain_histogram)},
      {"domain", summary.domain},
  };
}

nlohmann::json property_report_to_json(const Field& field, const PropertyReport& report) {
  nlohmann::json listed = nlohmann::json::array();
  for (const auto& v : report.violations) {
    listed.push_back({{"property", v.property},
                      {"a", format_element(field, v.a)},
                      {"b", format_element(field, v.b)},
                      {"value", v.value},
                      {"expected", v.expected}});
  }
  return {{"total_violations", report.total_violations}, {"violations", listed}};
}

}  // namespace sbox
