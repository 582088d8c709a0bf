#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sbox/field.hpp"

namespace sbox {

enum class RootKind {
  NoRoots,
  Unique,
  // An explicit set of distinct roots (two roots of a quadratic).
  Distinct,
  // representative + delta * direction, delta ranging over a subfield of
  // size `count`.
  Subspace,
};

struct RootResult {
  RootKind kind = RootKind::NoRoots;
  std::uint64_t count = 0;
  Elem representative{};
  Elem direction{};
  // Filled for Unique and Distinct; for Subspace only when enumeration was
  // requested.
  std::vector<Elem> roots;
};

// Row-major square-or-rectangular matrix over a field.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Elem> data;

  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}
  Elem& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  Elem at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  bool operator==(const Matrix&) const = default;
};

// L(x) = sum_i a_i x^{2^i} over F_{2^n}; exactly n coefficients.
struct LinearizedCoeffs {
  std::vector<Elem> a;
};

// Square root by Tonelli-Shanks in F_{p^n}^*, p odd. nullopt for
// nonsquares.
std::optional<Elem> field_sqrt(const Field& field, Elem x);

// a2 x^2 + a1 x + a0 = 0 over F_{p^n}, p odd, a2 != 0.
RootResult solve_quadratic(const Field& field, Elem a2, Elem a1, Elem a0);

// x^{2^k} + a x + b = 0 over F_{2^n}, a != 0, 0 <= k < n. Classifies the
// root set in closed form (no search over x) and returns a root when one
// exists. With `enumerate`, a Subspace result also lists all its roots.
RootResult solve_linearized_trinomial(const Field& field, std::uint32_t k, Elem a, Elem b,
                                      bool enumerate = false);

// Some tau with tau^{2^k - 1} = a, or nullopt. Uses an inverse exponent
// when gcd(2^k - 1, 2^n - 1) = 1 and a field scan otherwise.
std::optional<Elem> root_of_unity_power(const Field& field, std::uint32_t k, Elem a);

// The n x n matrix whose row i is (a_0, ..., a_{n-1}) cyclically shifted
// right by i positions with every entry raised to 2^i.
Matrix build_AL(const Field& field, const LinearizedCoeffs& L);

// Rank by Gaussian elimination, pivoting on the first nonzero entry in
// column order.
std::size_t matrix_rank(const Field& field, Matrix m);

// Number of roots of L(x) + b in F_{2^n}: 2^{n-r} when rank(A_L) =
// rank(A_L | (b, b^2, ..., b^{2^{n-1}})^T) = r, else 0.
std::uint64_t affine_root_count(const Field& field, const LinearizedCoeffs& L, Elem b);

// L(x) + b evaluated directly.
Elem eval_affine(const Field& field, const LinearizedCoeffs& L, Elem b, Elem x);

}  // namespace sbox
