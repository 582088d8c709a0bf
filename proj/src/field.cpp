#include "sbox/field.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdlib>
#include <sstream>

#include "conway_table.hpp"
#include "poly_zp.hpp"

namespace sbox {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotPrime: return "NotPrime";
    case ErrorCode::ReduciblePolynomial: return "ReduciblePolynomial";
    case ErrorCode::UnsupportedSize: return "UnsupportedSize";
    case ErrorCode::NoBuiltinModulus: return "NoBuiltinModulus";
    case ErrorCode::BadModulus: return "BadModulus";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::MixedFields: return "MixedFields";
    case ErrorCode::NotADivisor: return "NotADivisor";
    case ErrorCode::EvenCharacteristic: return "EvenCharacteristic";
    case ErrorCode::OddCharacteristic: return "OddCharacteristic";
    case ErrorCode::LeadingCoefficientZero: return "LeadingCoefficientZero";
    case ErrorCode::ZeroLinearCoefficient: return "ZeroLinearCoefficient";
    case ErrorCode::NotAPowerMap: return "NotAPowerMap";
    case ErrorCode::WrongKind: return "WrongKind";
    case ErrorCode::BadParameters: return "BadParameters";
    case ErrorCode::WrongLength: return "WrongLength";
    case ErrorCode::UnparsableElement: return "UnparsableElement";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

std::ostream& operator<<(std::ostream& os, Elem e) { return os << "Elem{" << e.v << "}"; }

bool is_prime(std::uint64_t v) {
  if (v < 2) return false;
  for (std::uint64_t d = 2; d * d <= v; ++d) {
    if (v % d == 0) return false;
  }
  return true;
}

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
  while (b) {
    a %= b;
    std::swap(a, b);
  }
  return a;
}

namespace {

constexpr std::uint32_t kMaxDegree = 32;
using Digits = std::array<std::uint64_t, 2 * kMaxDegree>;

std::vector<std::uint32_t> prime_factors(std::uint32_t n) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

// Rabin's test: f | x^{p^n} - x and gcd(x^{p^{n/q}} - x, f) = 1 for every
// prime q | n.
bool is_irreducible(const std::vector<std::uint32_t>& modulus, std::uint32_t p) {
  const std::uint32_t n = static_cast<std::uint32_t>(modulus.size() - 1);
  if (n == 1) return true;
  const detail::PolyZp f(modulus.begin(), modulus.end());
  const detail::PolyZp x{0, 1};

  // frob[j] = x^{p^j} mod f
  std::vector<detail::PolyZp> frob{x};
  for (std::uint32_t j = 1; j <= n; ++j) {
    frob.push_back(detail::poly_powmod(frob.back(), p, f, p));
  }
  if (detail::poly_sub(frob[n], x, p) != detail::PolyZp{}) return false;
  for (std::uint32_t q : prime_factors(n)) {
    const auto g = detail::poly_gcd(detail::poly_sub(frob[n / q], x, p), f, p);
    if (g.size() != 1) return false;
  }
  return true;
}

}  // namespace

Field Field::make(std::uint32_t p, std::uint32_t n,
                  std::optional<std::vector<std::uint32_t>> modulus,
                  std::uint64_t max_elements) {
  if (!is_prime(p)) throw Error(ErrorCode::NotPrime, std::to_string(p) + " is not prime");
  if (n < 1 || n > kMaxDegree) {
    throw Error(ErrorCode::BadParameters, "degree must be in [1, 32], got " + std::to_string(n));
  }

  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < n; ++i) {
    q *= p;
    if (q > max_elements || q > (std::uint64_t{1} << 31)) {
      throw Error(ErrorCode::UnsupportedSize,
                  std::to_string(p) + "^" + std::to_string(n) +
                      " exceeds the element-count bound " + std::to_string(max_elements));
    }
  }

  if (!modulus) {
    const auto& table = detail::conway_table();
    auto it = std::find_if(table.begin(), table.end(),
                           [&](const auto& e) { return e.p == p && e.n == n; });
    if (it == table.end()) {
      throw Error(ErrorCode::NoBuiltinModulus,
                  "no built-in modulus for p=" + std::to_string(p) + ", n=" + std::to_string(n));
    }
    modulus = it->coeffs;
  } else {
    if (modulus->size() != n + 1 || modulus->back() != 1) {
      throw Error(ErrorCode::BadModulus, "modulus must be monic of degree " + std::to_string(n));
    }
    for (auto c : *modulus) {
      if (c >= p) throw Error(ErrorCode::BadModulus, "modulus coefficient out of range");
    }
    if (!is_irreducible(*modulus, p)) {
      throw Error(ErrorCode::ReduciblePolynomial, "modulus is reducible over Z_p");
    }
  }

  auto d = std::make_shared<Data>();
  d->p = p;
  d->n = n;
  d->q = q;
  d->modulus = std::move(*modulus);
  d->pow_p.resize(n + 1);
  d->pow_p[0] = 1;
  for (std::uint32_t i = 1; i <= n; ++i) d->pow_p[i] = d->pow_p[i - 1] * p;
  if (p == 2) {
    for (std::uint32_t i = 0; i <= n; ++i) {
      if (d->modulus[i]) d->modulus_word |= std::uint64_t{1} << i;
    }
  }
  return Field(std::move(d));
}

Elem Field::scalar(std::int64_t k) const {
  const auto p = static_cast<std::int64_t>(d_->p);
  return Elem{static_cast<std::uint32_t>(((k % p) + p) % p)};
}

Elem Field::element(std::uint64_t index) const {
  if (index >= d_->q) throw Error(ErrorCode::BadParameters, "element index out of range");
  return Elem{static_cast<std::uint32_t>(index)};
}

Elem Field::from_coeffs(std::span<const std::uint32_t> coeffs) const {
  if (coeffs.size() > d_->n) {
    throw Error(ErrorCode::UnparsableElement, "too many coefficients");
  }
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] >= d_->p) throw Error(ErrorCode::UnparsableElement, "coefficient out of range");
    v += coeffs[i] * d_->pow_p[i];
  }
  return Elem{static_cast<std::uint32_t>(v)};
}

std::vector<std::uint32_t> Field::coeffs(Elem x) const {
  std::vector<std::uint32_t> out(d_->n);
  std::uint32_t v = x.v;
  for (std::uint32_t i = 0; i < d_->n; ++i) {
    out[i] = v % d_->p;
    v /= d_->p;
  }
  return out;
}

Elem Field::add(Elem a, Elem b) const {
  const std::uint32_t p = d_->p;
  if (p == 2) return Elem{a.v ^ b.v};
  std::uint32_t x = a.v, y = b.v, r = 0, place = 1;
  while (x | y) {
    std::uint32_t s = x % p + y % p;
    if (s >= p) s -= p;
    r += s * place;
    place *= p;
    x /= p;
    y /= p;
  }
  return Elem{r};
}

Elem Field::neg(Elem a) const {
  const std::uint32_t p = d_->p;
  if (p == 2) return a;
  std::uint32_t x = a.v, r = 0, place = 1;
  while (x) {
    const std::uint32_t c = x % p;
    if (c) r += (p - c) * place;
    place *= p;
    x /= p;
  }
  return Elem{r};
}

Elem Field::sub(Elem a, Elem b) const {
  if (d_->p == 2) return Elem{a.v ^ b.v};
  return add(a, neg(b));
}

Elem Field::mul_binary(Elem a, Elem b) const {
  std::uint64_t acc = 0;
  std::uint64_t x = a.v;
  for (std::uint32_t y = b.v; y; y >>= 1, x <<= 1) {
    if (y & 1) acc ^= x;
  }
  const std::uint32_t n = d_->n;
  for (int bit = 2 * static_cast<int>(n) - 2; bit >= static_cast<int>(n); --bit) {
    if ((acc >> bit) & 1) acc ^= d_->modulus_word << (bit - n);
  }
  return Elem{static_cast<std::uint32_t>(acc)};
}

Elem Field::mul_generic(Elem a, Elem b) const {
  const std::uint64_t p = d_->p;
  const std::uint32_t n = d_->n;
  Digits da{}, db{}, prod{};
  std::uint32_t x = a.v, y = b.v;
  for (std::uint32_t i = 0; i < n; ++i) {
    da[i] = x % p;
    db[i] = y % p;
    x /= p;
    y /= p;
  }
  for (std::uint32_t i = 0; i < n; ++i) {
    if (!da[i]) continue;
    for (std::uint32_t j = 0; j < n; ++j) {
      prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
    }
  }
  const auto& f = d_->modulus;
  for (std::uint32_t i = 2 * n - 1; i-- > n;) {
    const std::uint64_t c = prod[i];
    if (!c) continue;
    // x^i = x^{i-n} * x^n and x^n = -(f_0 + ... + f_{n-1} x^{n-1})
    for (std::uint32_t j = 0; j < n; ++j) {
      prod[i - n + j] = (prod[i - n + j] + c * (p - f[j])) % p;
    }
    prod[i] = 0;
  }
  std::uint64_t v = 0;
  for (std::uint32_t i = n; i-- > 0;) v = v * p + prod[i];
  return Elem{static_cast<std::uint32_t>(v)};
}

Elem Field::mul(Elem a, Elem b) const {
  if (a.v == 0 || b.v == 0) return Elem{0};
  if (d_->p == 2) return mul_binary(a, b);
  return mul_generic(a, b);
}

Elem Field::pow(Elem a, std::uint64_t e) const {
  Elem r = one();
  while (e) {
    if (e & 1) r = mul(r, a);
    e >>= 1;
    if (e) a = mul(a, a);
  }
  return r;
}

Elem Field::inv(Elem a) const {
  if (a.is_zero()) throw Error(ErrorCode::DivisionByZero, "inverse of zero");
  return pow(a, d_->q - 2);
}

Elem Field::div(Elem a, Elem b) const { return mul(a, inv(b)); }

Elem Field::frobenius(Elem x, std::uint64_t j) const {
  j %= d_->n;
  for (std::uint64_t i = 0; i < j; ++i) x = pow(x, d_->p);
  return x;
}

Elem Field::trace(Elem x, std::uint32_t d) const {
  if (d == 0 || d_->n % d != 0) {
    throw Error(ErrorCode::NotADivisor, std::to_string(d) + " does not divide " + std::to_string(d_->n));
  }
  Elem acc = zero();
  Elem term = x;
  for (std::uint32_t i = 0; i < d_->n / d; ++i) {
    acc = add(acc, term);
    term = frobenius(term, d);
  }
  return acc;
}

int Field::quadratic_character(Elem x) const {
  if (d_->p == 2) throw Error(ErrorCode::EvenCharacteristic, "quadratic character needs odd p");
  if (x.is_zero()) return 0;
  return pow(x, (d_->q - 1) / 2) == one() ? 1 : -1;
}

bool Field::in_subfield(Elem x, std::uint32_t d) const {
  if (d == 0 || d_->n % d != 0) {
    throw Error(ErrorCode::NotADivisor, std::to_string(d) + " does not divide " + std::to_string(d_->n));
  }
  return frobenius(x, d) == x;
}

PowerGcdFacts Field::power_gcd_facts(std::uint64_t d) const {
  const std::uint64_t g = gcd_u64(d, d_->q - 1);
  return {g, g == 1};
}

std::string Field::spec_string() const {
  std::ostringstream os;
  os << "p=" << d_->p << ";n=" << d_->n << ";mod=";
  for (std::size_t i = 0; i < d_->modulus.size(); ++i) {
    if (i) os << ',';
    os << d_->modulus[i];
  }
  return os.str();
}

namespace {

std::string_view strip(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::optional<std::uint64_t> to_uint(std::string_view s, int base = 10) {
  s = strip(s);
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, base);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::optional<std::vector<std::uint32_t>> to_uint_list(std::string_view s) {
  std::vector<std::uint32_t> out;
  while (true) {
    const auto comma = s.find(',');
    auto v = to_uint(s.substr(0, comma));
    if (!v || *v > UINT32_MAX) return std::nullopt;
    out.push_back(static_cast<std::uint32_t>(*v));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace

Field parse_field_spec(std::string_view text, std::uint64_t max_elements) {
  std::optional<std::uint64_t> p, n;
  std::optional<std::vector<std::uint32_t>> mod;
  while (!text.empty()) {
    const auto semi = text.find(';');
    const auto part = strip(text.substr(0, semi));
    text = semi == std::string_view::npos ? std::string_view{} : text.substr(semi + 1);
    if (part.empty()) continue;
    const auto eq = part.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::ParseError, "expected key=value in field spec: " + std::string(part));
    }
    const auto key = strip(part.substr(0, eq));
    const auto value = part.substr(eq + 1);
    if (key == "p") {
      p = to_uint(value);
      if (!p) throw Error(ErrorCode::ParseError, "bad p in field spec");
    } else if (key == "n") {
      n = to_uint(value);
      if (!n) throw Error(ErrorCode::ParseError, "bad n in field spec");
    } else if (key == "mod") {
      mod = to_uint_list(value);
      if (!mod) throw Error(ErrorCode::ParseError, "bad mod in field spec");
    } else {
      throw Error(ErrorCode::ParseError, "unknown key in field spec: " + std::string(key));
    }
  }
  if (!p || !n) throw Error(ErrorCode::ParseError, "field spec needs p and n");
  if (*p > UINT32_MAX || *n > UINT32_MAX) throw Error(ErrorCode::ParseError, "p or n too large");
  return Field::make(static_cast<std::uint32_t>(*p), static_cast<std::uint32_t>(*n), std::move(mod),
                     max_elements);
}

Elem parse_element(const Field& field, std::string_view text) {
  text = strip(text);
  if (text.starts_with("0x") || text.starts_with("0X")) {
    if (field.characteristic() != 2) {
      throw Error(ErrorCode::UnparsableElement, "hex words are only accepted for p = 2");
    }
    auto v = to_uint(text.substr(2), 16);
    if (!v || *v >= field.size()) {
      throw Error(ErrorCode::UnparsableElement, "bad element word: " + std::string(text));
    }
    return Elem{static_cast<std::uint32_t>(*v)};
  }
  auto coeffs = to_uint_list(text);
  if (!coeffs) throw Error(ErrorCode::UnparsableElement, "bad element: " + std::string(text));
  return field.from_coeffs(*coeffs);
}

std::string format_element(const Field& field, Elem x) {
  if (field.characteristic() == 2) {
    std::ostringstream os;
    os << "0x" << std::hex << x.v;
    return os.str();
  }
  std::string out;
  const auto c = field.coeffs(x);
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(c[i]);
  }
  return out;
}

std::uint64_t max_elements_from_env() {
  if (const char* env = std::getenv("SBOX_SPECTRA_MAX_SIZE")) {
    if (auto v = to_uint(env)) return *v;
    throw Error(ErrorCode::ParseError, "SBOX_SPECTRA_MAX_SIZE is not an integer");
  }
  return kDefaultMaxElements;
}

FieldElement::FieldElement(Field field, Elem value) : field_(std::move(field)), value_(value) {
  if (!field_.contains(value_)) throw Error(ErrorCode::BadParameters, "element not in field");
}

const Field& FieldElement::common(const FieldElement& rhs) const {
  if (!(field_ == rhs.field_)) throw Error(ErrorCode::MixedFields, "operands from different fields");
  return field_;
}

FieldElement FieldElement::operator+(const FieldElement& rhs) const {
  return {common(rhs), field_.add(value_, rhs.value_)};
}
FieldElement FieldElement::operator-(const FieldElement& rhs) const {
  return {common(rhs), field_.sub(value_, rhs.value_)};
}
FieldElement FieldElement::operator*(const FieldElement& rhs) const {
  return {common(rhs), field_.mul(value_, rhs.value_)};
}
FieldElement FieldElement::operator/(const FieldElement& rhs) const {
  return {common(rhs), field_.div(value_, rhs.value_)};
}
FieldElement FieldElement::operator-() const { return {field_, field_.neg(value_)}; }
FieldElement FieldElement::pow(std::uint64_t e) const { return {field_, field_.pow(value_, e)}; }
FieldElement FieldElement::inv() const { return {field_, field_.inv(value_)}; }

bool FieldElement::operator==(const FieldElement& rhs) const {
  return field_ == rhs.field_ && value_ == rhs.value_;
}

}  // namespace sbox
