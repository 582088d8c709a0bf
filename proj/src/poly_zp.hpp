#pragma once

// Dense polynomials over Z_p, little-endian coefficient vectors with no
// trailing zeros (the zero polynomial is empty). Used for modulus
// validation only; element arithmetic lives in Field.

#include <cstdint>
#include <vector>

namespace sbox::detail {

using PolyZp = std::vector<std::uint64_t>;

inline void trim(PolyZp& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

inline std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) {
  std::uint64_t r = 1, e = p - 2;
  a %= p;
  while (e) {
    if (e & 1) r = r * a % p;
    a = a * a % p;
    e >>= 1;
  }
  return r;
}

// f mod g, g nonzero.
inline PolyZp poly_rem(PolyZp f, const PolyZp& g, std::uint64_t p) {
  trim(f);
  const std::uint64_t lead_inv = inv_mod(g.back(), p);
  while (f.size() >= g.size()) {
    const std::uint64_t c = f.back() * lead_inv % p;
    const std::size_t shift = f.size() - g.size();
    for (std::size_t i = 0; i < g.size(); ++i) {
      f[shift + i] = (f[shift + i] + (p - c) * g[i]) % p;
    }
    trim(f);
  }
  return f;
}

inline PolyZp poly_mulmod(const PolyZp& a, const PolyZp& b, const PolyZp& m,
                          std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  PolyZp r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    }
  }
  return poly_rem(std::move(r), m, p);
}

inline PolyZp poly_powmod(PolyZp base, std::uint64_t e, const PolyZp& m,
                          std::uint64_t p) {
  PolyZp r{1};
  base = poly_rem(std::move(base), m, p);
  while (e) {
    if (e & 1) r = poly_mulmod(r, base, m, p);
    base = poly_mulmod(base, base, m, p);
    e >>= 1;
  }
  return poly_rem(std::move(r), m, p);
}

inline PolyZp poly_sub(PolyZp a, const PolyZp& b, std::uint64_t p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
  trim(a);
  return a;
}

inline PolyZp poly_gcd(PolyZp a, PolyZp b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    PolyZp r = poly_rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

}  // namespace sbox::detail
