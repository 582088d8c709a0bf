#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <ranges>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sbox/error.hpp"

namespace sbox {

inline constexpr std::uint64_t kDefaultMaxElements = std::uint64_t{1} << 24;

// An element of F_{p^n} in canonical encoding: the coefficient vector
// (c_0, ..., c_{n-1}) of its residue polynomial read as the base-p integer
// sum c_i p^i. For p = 2 this is the usual bit-packed word. The encoding is
// also the element's position in enumeration order.
struct Elem {
  std::uint32_t v = 0;

  constexpr auto operator<=>(const Elem&) const = default;
  constexpr bool is_zero() const { return v == 0; }
};

std::ostream& operator<<(std::ostream& os, Elem e);

struct PowerGcdFacts {
  std::uint64_t gcd = 0;
  bool is_permutation = false;
};

// F_{p^n} = Z_p[x] / (f), f monic irreducible of degree n.
//
// Field is an immutable value with shared internals; copies are cheap and
// all member functions are safe to call concurrently.
class Field {
 public:
  // Builds and validates a field. Without `modulus`, the Conway polynomial
  // from the built-in table is used. `modulus` is little-endian (constant
  // term first) and must be monic of degree n.
  static Field make(std::uint32_t p, std::uint32_t n,
                    std::optional<std::vector<std::uint32_t>> modulus = {},
                    std::uint64_t max_elements = kDefaultMaxElements);

  std::uint32_t characteristic() const { return d_->p; }
  std::uint32_t degree() const { return d_->n; }
  std::uint64_t size() const { return d_->q; }
  const std::vector<std::uint32_t>& modulus() const { return d_->modulus; }

  Elem zero() const { return Elem{0}; }
  Elem one() const { return Elem{1}; }
  // The image of the integer k under Z -> Z_p -> F_{p^n}.
  Elem scalar(std::int64_t k) const;
  // Element at position `index` in enumeration order.
  Elem element(std::uint64_t index) const;
  bool contains(Elem x) const { return x.v < d_->q; }

  Elem from_coeffs(std::span<const std::uint32_t> coeffs) const;
  std::vector<std::uint32_t> coeffs(Elem x) const;

  Elem add(Elem a, Elem b) const;
  Elem sub(Elem a, Elem b) const;
  Elem neg(Elem a) const;
  Elem mul(Elem a, Elem b) const;
  Elem inv(Elem a) const;
  Elem div(Elem a, Elem b) const;
  Elem pow(Elem a, std::uint64_t e) const;

  // x^{p^j}
  Elem frobenius(Elem x, std::uint64_t j) const;
  // Tr_d^n(x) = sum_{i < n/d} x^{p^{d i}}
  Elem trace(Elem x, std::uint32_t d) const;
  // eta(x) in {-1, 0, +1}; odd characteristic only.
  int quadratic_character(Elem x) const;
  bool in_subfield(Elem x, std::uint32_t d) const;

  PowerGcdFacts power_gcd_facts(std::uint64_t d) const;

  // All q elements in enumeration order (lexicographic on coefficient
  // vectors, constant term least significant; zero first).
  auto elements() const {
    return std::views::iota(std::uint64_t{0}, d_->q) |
           std::views::transform(
               [](std::uint64_t i) { return Elem{static_cast<std::uint32_t>(i)}; });
  }

  // Generic per-coefficient multiplication. Identical to mul() for odd p;
  // for p = 2 it bypasses the word path and exists for cross-checking.
  Elem mul_generic(Elem a, Elem b) const;

  // `p=<int>;n=<int>;mod=<c0,...,cn>`
  std::string spec_string() const;

  friend bool operator==(const Field& a, const Field& b) {
    return a.d_ == b.d_ ||
           (a.d_->p == b.d_->p && a.d_->n == b.d_->n && a.d_->modulus == b.d_->modulus);
  }

 private:
  struct Data {
    std::uint32_t p = 0;
    std::uint32_t n = 0;
    std::uint64_t q = 0;
    std::vector<std::uint32_t> modulus;
    std::vector<std::uint64_t> pow_p;  // p^i for i <= n
    std::uint64_t modulus_word = 0;    // p = 2 only, includes the x^n bit
  };

  explicit Field(std::shared_ptr<const Data> d) : d_(std::move(d)) {}

  Elem mul_binary(Elem a, Elem b) const;

  std::shared_ptr<const Data> d_;
};

// Parses `p=<int>;n=<int>[;mod=<c0,...,cn>]`.
Field parse_field_spec(std::string_view text,
                       std::uint64_t max_elements = kDefaultMaxElements);

// Element literal: `0x<hex>` (encoding word, p = 2 only) or a little-endian
// comma separated coefficient list such as `1,0,2`.
Elem parse_element(const Field& field, std::string_view text);
std::string format_element(const Field& field, Elem x);

bool is_prime(std::uint64_t v);
std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);

// Element bound: SBOX_SPECTRA_MAX_SIZE when set, otherwise the default.
std::uint64_t max_elements_from_env();

// Value-semantic element bound to its field, for code that prefers operator
// syntax. Mixing elements of different fields throws MixedFields.
class FieldElement {
 public:
  FieldElement(Field field, Elem value);

  const Field& field() const { return field_; }
  Elem value() const { return value_; }

  FieldElement operator+(const FieldElement& rhs) const;
  FieldElement operator-(const FieldElement& rhs) const;
  FieldElement operator*(const FieldElement& rhs) const;
  FieldElement operator/(const FieldElement& rhs) const;
  FieldElement operator-() const;
  FieldElement pow(std::uint64_t e) const;
  FieldElement inv() const;

  bool operator==(const FieldElement& rhs) const;

 private:
  const Field& common(const FieldElement& rhs) const;

  Field field_;
  Elem value_;
};

}  // namespace sbox
