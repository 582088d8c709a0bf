#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <map>
#include <random>
#include <set>

#include "sbox/field.hpp"

using namespace sbox;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::ParseError;
}

// Schoolbook product of two residues with explicit reduction; shares no code
// with the library.
std::vector<std::uint32_t> naive_mul(const std::vector<std::uint32_t>& a,
                                     const std::vector<std::uint32_t>& b,
                                     const std::vector<std::uint32_t>& f, std::uint32_t p) {
  const std::size_t n = f.size() - 1;
  std::vector<std::uint64_t> prod(2 * n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) prod[i + j] = (prod[i + j] + std::uint64_t{a[i]} * b[j]) % p;
  for (std::size_t deg = 2 * n - 1; deg >= n; --deg) {
    const std::uint64_t c = prod[deg];
    if (c == 0) continue;
    for (std::size_t i = 0; i <= n; ++i) {
      const std::size_t pos = deg - n + i;
      prod[pos] = (prod[pos] + (p - c) * f[i]) % p;
    }
  }
  return {prod.begin(), prod.begin() + n};
}

const std::vector<std::pair<int, int>> kSmallFields = {{2, 1}, {2, 3}, {2, 4}, {3, 2}, {5, 1}, {5, 2}, {7, 2}, {3, 3}};

}  // namespace

TEST(MakeField, BuiltinModulusSizes) {
  EXPECT_EQ(Field::make(2, 6).size(), 64u);
  EXPECT_EQ(Field::make(3, 5).size(), 243u);
  EXPECT_EQ(Field::make(11, 2).size(), 121u);
  EXPECT_EQ(Field::make(2, 24).size(), std::uint64_t{1} << 24);
}

TEST(MakeField, UserModulus) {
  // x^2 + 1 is irreducible over F_3 because -1 is a nonsquare mod 3.
  const Field f = Field::make(3, 2, std::vector<std::uint32_t>{1, 0, 1});
  EXPECT_EQ(f.size(), 9u);
  EXPECT_EQ(f.modulus(), (std::vector<std::uint32_t>{1, 0, 1}));
}

TEST(MakeField, Errors) {
  EXPECT_EQ(code_of([] { Field::make(4, 2); }), ErrorCode::NotPrime);
  EXPECT_EQ(code_of([] { Field::make(1, 2); }), ErrorCode::NotPrime);
  // x^2 + 2 = (x + 1)(x + 2) over F_3.
  EXPECT_EQ(code_of([] { Field::make(3, 2, std::vector<std::uint32_t>{2, 0, 1}); }),
            ErrorCode::ReduciblePolynomial);
  // x^4 + x^2 + 1 = (x^2 + x + 1)^2 over F_2: no roots, still reducible.
  EXPECT_EQ(code_of([] { Field::make(2, 4, std::vector<std::uint32_t>{1, 0, 1, 0, 1}); }),
            ErrorCode::ReduciblePolynomial);
  EXPECT_EQ(code_of([] { Field::make(2, 3, std::vector<std::uint32_t>{1, 1, 0, 2}); }),
            ErrorCode::BadModulus);
  EXPECT_EQ(code_of([] { Field::make(2, 3, std::vector<std::uint32_t>{1, 1, 1}); }),
            ErrorCode::BadModulus);
  EXPECT_EQ(code_of([] { Field::make(2, 25); }), ErrorCode::UnsupportedSize);
  EXPECT_EQ(code_of([] { Field::make(2, 10, std::nullopt, 512); }), ErrorCode::UnsupportedSize);
  EXPECT_EQ(code_of([] { Field::make(13, 2); }), ErrorCode::NoBuiltinModulus);
  EXPECT_EQ(code_of([] { Field::make(2, 0); }), ErrorCode::BadParameters);
}

TEST(MakeField, BuiltinModuliAreIrreducibleAndMonic) {
  for (auto [p, n] : kSmallFields) {
    const Field f = Field::make(p, n);
    ASSERT_EQ(f.modulus().size(), static_cast<std::size_t>(n) + 1);
    EXPECT_EQ(f.modulus().back(), 1u);
    // Rebuilding with the same polynomial passes the irreducibility check.
    EXPECT_NO_THROW(Field::make(p, n, f.modulus()));
  }
}

TEST(Arithmetic, AxiomsExhaustive) {
  for (auto [p, n] : kSmallFields) {
    const Field f = Field::make(p, n);
    SCOPED_TRACE(f.spec_string());
    for (Elem x : f.elements()) {
      EXPECT_EQ(f.add(x, f.neg(x)), f.zero());
      EXPECT_EQ(f.sub(x, x), f.zero());
      EXPECT_EQ(f.mul(x, f.one()), x);
      if (!x.is_zero()) {
        EXPECT_EQ(f.mul(x, f.inv(x)), f.one());
        EXPECT_EQ(f.pow(x, f.size() - 1), f.one());
      }
      for (Elem y : f.elements()) {
        EXPECT_EQ(f.add(x, y), f.add(y, x));
        EXPECT_EQ(f.mul(x, y), f.mul(y, x));
        EXPECT_EQ(f.sub(f.add(x, y), y), x);
      }
    }
  }
}

TEST(Arithmetic, AssociativityAndDistributivity) {
  for (auto [p, n] : std::vector<std::pair<int, int>>{{2, 4}, {3, 2}, {5, 2}}) {
    const Field f = Field::make(p, n);
    for (Elem x : f.elements())
      for (Elem y : f.elements())
        for (Elem z : f.elements()) {
          ASSERT_EQ(f.mul(f.mul(x, y), z), f.mul(x, f.mul(y, z)));
          ASSERT_EQ(f.add(f.add(x, y), z), f.add(x, f.add(y, z)));
          ASSERT_EQ(f.mul(x, f.add(y, z)), f.add(f.mul(x, y), f.mul(x, z)));
        }
  }
}

TEST(Arithmetic, RandomizedLargeFields) {
  std::mt19937_64 rng(7);
  for (auto [p, n] : std::vector<std::pair<int, int>>{{2, 16}, {2, 20}, {3, 10}, {7, 5}}) {
    const Field f = Field::make(p, n);
    std::uniform_int_distribution<std::uint64_t> pick(0, f.size() - 1);
    for (int i = 0; i < 2000; ++i) {
      const Elem x{static_cast<std::uint32_t>(pick(rng))}, y{static_cast<std::uint32_t>(pick(rng))},
          z{static_cast<std::uint32_t>(pick(rng))};
      ASSERT_EQ(f.mul(f.mul(x, y), z), f.mul(x, f.mul(y, z)));
      ASSERT_EQ(f.mul(x, f.add(y, z)), f.add(f.mul(x, y), f.mul(x, z)));
      if (!x.is_zero()) {
        ASSERT_EQ(f.mul(x, f.inv(x)), f.one());
      }
    }
  }
}

TEST(Arithmetic, CharacteristicTwo) {
  const Field f = Field::make(2, 8);
  for (Elem x : f.elements()) EXPECT_EQ(f.add(x, x), f.zero());
}

TEST(Arithmetic, MatchesNaiveProduct) {
  for (auto [p, n] : std::vector<std::pair<int, int>>{{2, 5}, {3, 3}, {5, 2}, {7, 2}}) {
    const Field f = Field::make(p, n);
    for (Elem x : f.elements())
      for (Elem y : f.elements()) {
        const Elem expect = f.from_coeffs(naive_mul(f.coeffs(x), f.coeffs(y), f.modulus(), p));
        ASSERT_EQ(f.mul(x, y), expect);
      }
  }
}

TEST(Arithmetic, BinaryAndGenericPathsAgree) {
  for (int n : {1, 3, 6, 8, 10}) {
    const Field f = Field::make(2, n);
    for (Elem x : f.elements())
      for (Elem y : f.elements()) ASSERT_EQ(f.mul(x, y), f.mul_generic(x, y));
  }
  std::mt19937 rng(3);
  const Field big = Field::make(2, 24);
  std::uniform_int_distribution<std::uint32_t> pick(0, (1u << 24) - 1);
  for (int i = 0; i < 20000; ++i) {
    const Elem x{pick(rng)}, y{pick(rng)};
    ASSERT_EQ(big.mul(x, y), big.mul_generic(x, y));
  }
}

TEST(Arithmetic, Errors) {
  const Field f = Field::make(2, 4);
  EXPECT_EQ(code_of([&] { f.inv(f.zero()); }), ErrorCode::DivisionByZero);
  EXPECT_EQ(code_of([&] { f.div(f.one(), f.zero()); }), ErrorCode::DivisionByZero);
  const FieldElement a(f, Elem{3});
  const FieldElement b(Field::make(2, 5), Elem{3});
  EXPECT_EQ(code_of([&] { (void)(a + b); }), ErrorCode::MixedFields);
  EXPECT_FALSE(a == b);
}

TEST(Arithmetic, FieldElementOperators) {
  const Field f = Field::make(3, 2);
  const FieldElement x(f, Elem{4}), y(f, Elem{7});
  EXPECT_EQ((x * y).value(), f.mul(Elem{4}, Elem{7}));
  EXPECT_EQ((x - y + y), x);
  EXPECT_EQ((x / y) * y, x);
  EXPECT_EQ(x * x.inv(), FieldElement(f, f.one()));
  EXPECT_EQ(-x + x, FieldElement(f, f.zero()));
  EXPECT_EQ(x.pow(8), FieldElement(f, f.one()));
}

TEST(Frobenius, Basics) {
  for (auto [p, n] : kSmallFields) {
    const Field f = Field::make(p, n);
    for (Elem x : f.elements()) {
      EXPECT_EQ(f.frobenius(x, 0), x);
      EXPECT_EQ(f.frobenius(x, n), x);
      EXPECT_EQ(f.frobenius(x, 1), f.pow(x, p));
      for (Elem y : f.elements()) {
        EXPECT_EQ(f.frobenius(f.add(x, y), 1), f.add(f.frobenius(x, 1), f.frobenius(y, 1)));
        EXPECT_EQ(f.frobenius(f.mul(x, y), 1), f.mul(f.frobenius(x, 1), f.frobenius(y, 1)));
      }
    }
  }
}

TEST(Trace, F16OntoF4IsBalanced) {
  const Field f = Field::make(2, 4);
  std::map<std::uint32_t, int> counts;
  for (Elem x : f.elements()) {
    const Elem t = f.trace(x, 2);
    EXPECT_EQ(f.frobenius(t, 2), t);
    ++counts[t.v];
  }
  ASSERT_EQ(counts.size(), 4u);
  for (auto [v, c] : counts) EXPECT_EQ(c, 4) << v;
}

TEST(Trace, LinearAndSurjective) {
  for (auto [p, n, d] : std::vector<std::tuple<int, int, int>>{{2, 6, 3}, {2, 6, 2}, {3, 4, 2}, {5, 2, 1}}) {
    const Field f = Field::make(p, n);
    EXPECT_EQ(f.trace(f.zero(), d), f.zero());
    std::set<std::uint32_t> image;
    for (Elem x : f.elements()) {
      image.insert(f.trace(x, d).v);
      for (Elem y : f.elements()) {
        ASSERT_EQ(f.trace(f.add(x, y), d), f.add(f.trace(x, d), f.trace(y, d)));
      }
    }
    EXPECT_EQ(image.size(), static_cast<std::size_t>(std::pow(p, d)));
    // F_{p^d}-linearity.
    for (Elem c : f.elements()) {
      if (!f.in_subfield(c, d)) continue;
      for (Elem x : f.elements()) ASSERT_EQ(f.trace(f.mul(c, x), d), f.mul(c, f.trace(x, d)));
    }
  }
  const Field f = Field::make(2, 6);
  EXPECT_EQ(code_of([&] { f.trace(f.one(), 4); }), ErrorCode::NotADivisor);
  EXPECT_EQ(code_of([&] { f.in_subfield(f.one(), 5); }), ErrorCode::NotADivisor);
}

TEST(QuadraticCharacter, Properties) {
  for (auto [p, n] : std::vector<std::pair<int, int>>{{3, 1}, {3, 2}, {3, 3}, {5, 2}, {7, 2}, {11, 1}}) {
    const Field f = Field::make(p, n);
    EXPECT_EQ(f.quadratic_character(f.zero()), 0);
    std::set<std::uint32_t> squares;
    for (Elem y : f.elements())
      if (!y.is_zero()) squares.insert(f.mul(y, y).v);
    int plus = 0;
    for (Elem x : f.elements()) {
      if (x.is_zero()) continue;
      const int eta = f.quadratic_character(x);
      EXPECT_EQ(eta == 1, squares.contains(x.v));
      plus += eta == 1;
      for (Elem y : f.elements()) {
        if (!y.is_zero()) {
          ASSERT_EQ(f.quadratic_character(f.mul(x, y)), eta * f.quadratic_character(y));
        }
      }
    }
    EXPECT_EQ(static_cast<std::uint64_t>(plus), (f.size() - 1) / 2);
  }
  for (int n = 1; n <= 5; ++n) {
    const Field f = Field::make(3, n);
    EXPECT_EQ(f.quadratic_character(f.scalar(-1)), n % 2 == 0 ? 1 : -1) << n;
  }
  EXPECT_EQ(code_of([] { Field::make(2, 3).quadratic_character(Elem{1}); }), ErrorCode::EvenCharacteristic);
}

TEST(Subfield, Membership) {
  const Field f = Field::make(2, 6);
  int count = 0;
  for (Elem x : f.elements()) {
    count += f.in_subfield(x, 3);
    EXPECT_TRUE(f.in_subfield(x, 6));
  }
  EXPECT_EQ(count, 8);
  EXPECT_TRUE(f.in_subfield(f.zero(), 2));
}

TEST(Enumeration, OrderAndCount) {
  const Field f = Field::make(3, 3);
  std::set<std::uint32_t> seen;
  std::vector<std::uint32_t> prev;
  bool first = true;
  for (Elem x : f.elements()) {
    if (first) {
      EXPECT_TRUE(x.is_zero());
    }
    const auto c = f.coeffs(x);
    if (!first) {
      // Lexicographic with the constant term least significant.
      EXPECT_TRUE(std::lexicographical_compare(prev.rbegin(), prev.rend(), c.rbegin(), c.rend()));
    }
    prev = c;
    first = false;
    seen.insert(x.v);
  }
  EXPECT_EQ(seen.size(), 27u);
  EXPECT_EQ(f.element(5).v, 5u);
}

TEST(PowerGcd, Facts) {
  auto m3 = Field::make(2, 6).power_gcd_facts(8 + 3);
  EXPECT_EQ(m3.gcd, 1u);
  EXPECT_TRUE(m3.is_permutation);
  auto m4 = Field::make(2, 8).power_gcd_facts(16 + 5);
  EXPECT_EQ(m4.gcd, 3u);
  EXPECT_FALSE(m4.is_permutation);
  EXPECT_EQ(Field::make(5, 2).power_gcd_facts(1).gcd, 1u);
  // Permutation iff the map is a bijection.
  const Field f = Field::make(3, 3);
  for (std::uint64_t d = 1; d < f.size(); ++d) {
    std::set<std::uint32_t> image;
    for (Elem x : f.elements()) image.insert(f.pow(x, d).v);
    EXPECT_EQ(f.power_gcd_facts(d).is_permutation, image.size() == f.size()) << d;
  }
}

TEST(Parsing, FieldSpec) {
  const Field f = parse_field_spec("p=2;n=6");
  EXPECT_EQ(f, Field::make(2, 6));
  EXPECT_EQ(parse_field_spec(f.spec_string()), f);
  const Field g = parse_field_spec(" p=3 ; n=2 ; mod=1,0,1 ");
  EXPECT_EQ(g.modulus(), (std::vector<std::uint32_t>{1, 0, 1}));
  EXPECT_EQ(g.spec_string(), "p=3;n=2;mod=1,0,1");
  EXPECT_EQ(code_of([] { parse_field_spec("p=2"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_field_spec("p=two;n=3"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_field_spec("p=2;n=3;q=1"); }), ErrorCode::ParseError);
}

TEST(Parsing, Elements) {
  const Field f = Field::make(2, 6);
  EXPECT_EQ(parse_element(f, "0x2b"), Elem{0x2b});
  EXPECT_EQ(parse_element(f, "1,1,0,1"), Elem{0xb});
  EXPECT_EQ(format_element(f, Elem{0x2b}), "0x2b");
  EXPECT_EQ(code_of([&] { parse_element(f, "0x40"); }), ErrorCode::UnparsableElement);
  const Field g = Field::make(3, 2);
  EXPECT_EQ(parse_element(g, "2,1"), Elem{5});
  EXPECT_EQ(format_element(g, Elem{5}), "2,1");
  EXPECT_EQ(code_of([&] { parse_element(g, "0x1"); }), ErrorCode::UnparsableElement);
  EXPECT_EQ(code_of([&] { parse_element(g, "3"); }), ErrorCode::UnparsableElement);
  EXPECT_EQ(code_of([&] { parse_element(g, "1,x"); }), ErrorCode::UnparsableElement);
}

TEST(Parsing, SizeBoundFromEnvironment) {
  ::setenv("SBOX_SPECTRA_MAX_SIZE", "100", 1);
  EXPECT_EQ(max_elements_from_env(), 100u);
  ::setenv("SBOX_SPECTRA_MAX_SIZE", "lots", 1);
  EXPECT_EQ(code_of([] { max_elements_from_env(); }), ErrorCode::ParseError);
  ::unsetenv("SBOX_SPECTRA_MAX_SIZE");
  EXPECT_EQ(max_elements_from_env(), kDefaultMaxElements);
}
