#include "sbox/poly_solver.hpp"

#include <utility>

namespace sbox {

namespace {

void require_even(const Field& field) {
  if (field.characteristic() != 2) {
    throw Error(ErrorCode::OddCharacteristic, "operation is defined over F_{2^n} only");
  }
}

// 2^e mod (2^n - 1), using 2^n = 1 in that ring.
std::uint64_t pow2_mod(std::uint64_t e, std::uint32_t n, std::uint64_t modulus) {
  if (modulus == 1) return 0;
  return (std::uint64_t{1} << (e % n)) % modulus;
}

// sum_{j=i}^{last} 2^{k(j+1)} mod (2^n - 1); empty sums are 0.
std::uint64_t shifted_exponent(std::uint32_t i, std::int64_t last, std::uint32_t k, std::uint32_t n,
                               std::uint64_t modulus) {
  std::uint64_t acc = 0;
  for (std::int64_t j = i; j <= last; ++j) {
    acc = (acc + pow2_mod(std::uint64_t{k} * static_cast<std::uint64_t>(j + 1), n, modulus)) % modulus;
  }
  return acc;
}

}  // namespace

std::optional<Elem> field_sqrt(const Field& field, Elem x) {
  if (field.characteristic() == 2) {
    // Squaring is a bijection; the root is x^{2^{n-1}}.
    return field.frobenius(x, field.degree() - 1);
  }
  if (x.is_zero()) return x;
  if (field.quadratic_character(x) != 1) return std::nullopt;

  const std::uint64_t q = field.size();
  if (q % 4 == 3) return field.pow(x, (q + 1) / 4);

  std::uint64_t t = q - 1;
  std::uint32_t s = 0;
  while (t % 2 == 0) {
    t /= 2;
    ++s;
  }
  Elem z = field.one();
  for (Elem e : field.elements()) {
    if (field.quadratic_character(e) == -1) {
      z = e;
      break;
    }
  }

  Elem c = field.pow(z, t);
  Elem r = field.pow(x, (t + 1) / 2);
  Elem u = field.pow(x, t);
  std::uint32_t m = s;
  while (u != field.one()) {
    std::uint32_t i = 0;
    Elem probe = u;
    while (probe != field.one()) {
      probe = field.mul(probe, probe);
      ++i;
    }
    Elem b = c;
    for (std::uint32_t j = 0; j + i + 1 < m; ++j) b = field.mul(b, b);
    r = field.mul(r, b);
    c = field.mul(b, b);
    u = field.mul(u, c);
    m = i;
  }
  return r;
}

RootResult solve_quadratic(const Field& field, Elem a2, Elem a1, Elem a0) {
  if (field.characteristic() == 2) {
    throw Error(ErrorCode::EvenCharacteristic, "quadratic formula needs odd characteristic");
  }
  if (a2.is_zero()) throw Error(ErrorCode::LeadingCoefficientZero, "a2 must be nonzero");

  const Elem disc = field.sub(field.mul(a1, a1), field.mul(field.scalar(4), field.mul(a0, a2)));
  const Elem denom_inv = field.inv(field.mul(field.scalar(2), a2));
  const Elem minus_a1 = field.neg(a1);

  RootResult out;
  switch (field.quadratic_character(disc)) {
    case -1:
      out.kind = RootKind::NoRoots;
      break;
    case 0: {
      const Elem root = field.mul(minus_a1, denom_inv);
      out.kind = RootKind::Unique;
      out.count = 1;
      out.representative = root;
      out.roots = {root};
      break;
    }
    default: {
      const Elem sq = *field_sqrt(field, disc);
      out.kind = RootKind::Distinct;
      out.count = 2;
      out.roots = {field.mul(field.add(minus_a1, sq), denom_inv),
                   field.mul(field.sub(minus_a1, sq), denom_inv)};
      out.representative = out.roots.front();
      break;
    }
  }
  return out;
}

std::optional<Elem> root_of_unity_power(const Field& field, std::uint32_t k, Elem a) {
  require_even(field);
  const std::uint32_t n = field.degree();
  const std::uint64_t order = field.size() - 1;
  if (k == 0) {
    if (a == field.one()) return field.one();
    return std::nullopt;
  }
  if (a.is_zero()) return field.zero();

  const std::uint64_t e = ((std::uint64_t{1} << k) - 1) % (order == 0 ? 1 : order);
  if (gcd_u64(k, n) == 1 && order > 1) {
    // Invert e modulo the group order.
    std::int64_t old_r = static_cast<std::int64_t>(e), r = static_cast<std::int64_t>(order);
    std::int64_t old_s = 1, s = 0;
    while (r != 0) {
      const std::int64_t quot = old_r / r;
      std::tie(old_r, r) = std::pair{r, old_r - quot * r};
      std::tie(old_s, s) = std::pair{s, old_s - quot * s};
    }
    const auto ord = static_cast<std::int64_t>(order);
    const auto inv_e = static_cast<std::uint64_t>(((old_s % ord) + ord) % ord);
    return field.pow(a, inv_e);
  }
  for (Elem tau : field.elements()) {
    if (!tau.is_zero() && field.pow(tau, e) == a) return tau;
  }
  return std::nullopt;
}

RootResult solve_linearized_trinomial(const Field& field, std::uint32_t k, Elem a, Elem b,
                                      bool enumerate) {
  require_even(field);
  if (a.is_zero()) throw Error(ErrorCode::ZeroLinearCoefficient, "a must be nonzero");
  const std::uint32_t n = field.degree();
  if (k >= n) throw Error(ErrorCode::BadParameters, "k must satisfy 0 <= k < n");

  const std::uint32_t d = static_cast<std::uint32_t>(gcd_u64(k, n));
  const std::uint32_t t = n / d;
  const std::uint64_t order = field.size() - 1;

  // alpha = a^{1 + 2^k + ... + 2^{k(t-1)}}
  std::uint64_t alpha_exp = 0;
  for (std::uint32_t j = 0; j < t; ++j) {
    alpha_exp = (alpha_exp + pow2_mod(std::uint64_t{k} * j, n, order)) % order;
  }
  const Elem alpha = t == 1 ? a : field.pow(a, alpha_exp);

  // beta = sum_i a^{s_i} b^{2^{ki}}
  Elem beta = field.zero();
  for (std::uint32_t i = 0; i < t; ++i) {
    const std::uint64_t s_i = shifted_exponent(i, static_cast<std::int64_t>(t) - 2, k, n, order);
    beta = field.add(beta, field.mul(field.pow(a, s_i), field.frobenius(b, std::uint64_t{k} * i)));
  }

  RootResult out;
  if (alpha != field.one()) {
    const Elem root = field.div(beta, field.add(field.one(), alpha));
    out.kind = RootKind::Unique;
    out.count = 1;
    out.representative = root;
    out.roots = {root};
    return out;
  }
  if (!beta.is_zero()) {
    out.kind = RootKind::NoRoots;
    return out;
  }

  Elem c = field.one();
  Elem tr_c = field.zero();
  for (Elem e : field.elements()) {
    tr_c = field.trace(e, d);
    if (!tr_c.is_zero()) {
      c = e;
      break;
    }
  }

  Elem sum = field.zero();
  Elem c_partial = field.zero();
  for (std::uint32_t i = 0; i < t; ++i) {
    c_partial = field.add(c_partial, field.frobenius(c, std::uint64_t{k} * i));
    const std::uint64_t u_i = shifted_exponent(i, static_cast<std::int64_t>(t) - 2, k, n, order);
    const Elem term = field.mul(field.mul(c_partial, field.pow(a, u_i)),
                                field.frobenius(b, std::uint64_t{k} * i));
    sum = field.add(sum, term);
  }

  out.kind = RootKind::Subspace;
  out.count = std::uint64_t{1} << d;
  out.representative = field.div(sum, tr_c);
  out.direction = root_of_unity_power(field, k, a).value_or(field.zero());
  if (enumerate) {
    for (Elem delta : field.elements()) {
      if (field.in_subfield(delta, d)) {
        out.roots.push_back(field.add(out.representative, field.mul(delta, out.direction)));
      }
    }
  }
  return out;
}

Matrix build_AL(const Field& field, const LinearizedCoeffs& L) {
  require_even(field);
  const std::size_t n = field.degree();
  if (L.a.size() != n) {
    throw Error(ErrorCode::WrongLength, "linearized polynomial needs exactly n coefficients");
  }
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      m.at(i, j) = field.frobenius(L.a[(j + n - i) % n], i);
    }
  }
  return m;
}

std::size_t matrix_rank(const Field& field, Matrix m) {
  std::size_t rank = 0;
  for (std::size_t col = 0; col < m.cols && rank < m.rows; ++col) {
    std::size_t pivot = rank;
    while (pivot < m.rows && m.at(pivot, col).is_zero()) ++pivot;
    if (pivot == m.rows) continue;
    if (pivot != rank) {
      for (std::size_t j = 0; j < m.cols; ++j) std::swap(m.at(pivot, j), m.at(rank, j));
    }
    const Elem pinv = field.inv(m.at(rank, col));
    for (std::size_t i = rank + 1; i < m.rows; ++i) {
      if (m.at(i, col).is_zero()) continue;
      const Elem factor = field.mul(m.at(i, col), pinv);
      for (std::size_t j = col; j < m.cols; ++j) {
        m.at(i, j) = field.sub(m.at(i, j), field.mul(factor, m.at(rank, j)));
      }
    }
    ++rank;
  }
  return rank;
}

std::uint64_t affine_root_count(const Field& field, const LinearizedCoeffs& L, Elem b) {
  const Matrix A = build_AL(field, L);
  const std::size_t n = A.rows;
  Matrix augmented(n, n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) augmented.at(i, j) = A.at(i, j);
    augmented.at(i, n) = field.frobenius(b, i);
  }
  const std::size_t r = matrix_rank(field, A);
  const std::size_t r_aug = matrix_rank(field, std::move(augmented));
  if (r != r_aug) return 0;
  return std::uint64_t{1} << (n - r);
}

Elem eval_affine(const Field& field, const LinearizedCoeffs& L, Elem b, Elem x) {
  Elem acc = b;
  Elem power = x;
  for (std::size_t i = 0; i < L.a.size(); ++i) {
    acc = field.add(acc, field.mul(L.a[i], power));
    power = field.mul(power, power);
  }
  return acc;
}

}  // namespace sbox
