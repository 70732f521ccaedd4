#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bigint.hpp"

namespace foulkes {

/// Dense row-major matrix of arbitrary-precision integers.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols) {}

  static IntMatrix from_rows(const std::vector<std::vector<BigInt>>& rows)
  {
    const int r = static_cast<int>(rows.size());
    const int c = r ? static_cast<int>(rows.front().size()) : 0;
    IntMatrix m(r, c);
    for (int i = 0; i < r; ++i) {
      if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != c)
        throw std::invalid_argument("IntMatrix: ragged rows");
      for (int j = 0; j < c; ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  BigInt& operator()(int i, int j) { return data_[index(i, j)]; }
  const BigInt& operator()(int i, int j) const { return data_[index(i, j)]; }

  std::span<const BigInt> row(int i) const
  {
    return {data_.data() + static_cast<std::size_t>(i) * cols_, static_cast<std::size_t>(cols_)};
  }

  IntMatrix transposed() const
  {
    IntMatrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

 private:
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * cols_ + j; }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<BigInt> data_;
};

namespace detail {

// Fraction-free elimination in place. Returns the rank; `sign` tracks row
// swaps so the caller can read off a determinant for square input.
inline int bareiss(IntMatrix& a, int& sign)
{
  sign = 1;
  BigInt prev = 1;
  int r = 0;
  for (int col = 0; col < a.cols() && r < a.rows(); ++col) {
    int pivot = -1;
    for (int i = r; i < a.rows(); ++i) {
      if (sgn(a(i, col)) == 0) continue;
      if (pivot < 0 || mpz_cmpabs(a(i, col).get_mpz_t(), a(pivot, col).get_mpz_t()) > 0) pivot = i;
    }
    if (pivot < 0) continue;
    if (pivot != r) {
      for (int j = 0; j < a.cols(); ++j) std::swap(a(r, j), a(pivot, j));
      sign = -sign;
    }
    for (int i = r + 1; i < a.rows(); ++i) {
      for (int j = col + 1; j < a.cols(); ++j) {
        BigInt v = a(i, j) * a(r, col) - a(i, col) * a(r, j);
        mpz_divexact(a(i, j).get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
      }
      a(i, col) = 0;
    }
    prev = a(r, col);
    ++r;
  }
  return r;
}

} // namespace detail

/// Rank over the rationals, by fraction-free (Bareiss) elimination.
inline int rank(IntMatrix m)
{
  int sign;
  return detail::bareiss(m, sign);
}

inline int kernel_dimension(const IntMatrix& m) { return m.cols() - rank(m); }

inline BigInt determinant(IntMatrix m)
{
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant of a non-square matrix");
  if (m.rows() == 0) return 1;
  int sign;
  if (detail::bareiss(m, sign) < m.rows()) return 0;
  BigInt d = m(m.rows() - 1, m.cols() - 1);
  return sign < 0 ? BigInt(-d) : d;
}

/// Rank of the reduction modulo a word-size prime. Never exceeds the true rank.
inline int rank_modulo(const IntMatrix& m, std::uint32_t prime)
{
  const std::uint64_t p = prime;
  std::vector<std::uint64_t> a(static_cast<std::size_t>(m.rows()) * m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      BigInt r = m(i, j) % static_cast<unsigned long>(prime);
      if (r < 0) r += static_cast<unsigned long>(prime);
      a[static_cast<std::size_t>(i) * m.cols() + j] = r.get_ui();
    }
  auto at = [&](int i, int j) -> std::uint64_t& { return a[static_cast<std::size_t>(i) * m.cols() + j]; };
  auto inverse = [&](std::uint64_t x) {
    std::uint64_t result = 1, e = p - 2;
    while (e) {
      if (e & 1) result = result * x % p;
      x = x * x % p;
      e >>= 1;
    }
    return result;
  };
  int r = 0;
  for (int col = 0; col < m.cols() && r < m.rows(); ++col) {
    int pivot = -1;
    for (int i = r; i < m.rows() && pivot < 0; ++i)
      if (at(i, col)) pivot = i;
    if (pivot < 0) continue;
    for (int j = 0; j < m.cols(); ++j) std::swap(at(r, j), at(pivot, j));
    const std::uint64_t inv = inverse(at(r, col));
    for (int i = r + 1; i < m.rows(); ++i) {
      const std::uint64_t factor = at(i, col) * inv % p;
      if (!factor) continue;
      for (int j = col; j < m.cols(); ++j) at(i, j) = (at(i, j) + (p - factor) * at(r, j)) % p;
    }
    ++r;
  }
  return r;
}

/// Incrementally grown set of linearly independent integer rows.
class RowBasis {
 public:
  explicit RowBasis(int width) : width_(width) {}

  int width() const { return width_; }
  int size() const { return static_cast<int>(accepted_.size()); }
  const std::vector<std::vector<BigInt>>& rows() const { return accepted_; }

  // Accepts the row iff it is independent of the rows accepted so far.
  bool try_add_row(std::span<const BigInt> row)
  {
    if (static_cast<int>(row.size()) != width_) throw std::invalid_argument("RowBasis: row width mismatch");
    std::vector<BigInt> v(row.begin(), row.end());
    for (std::size_t e = 0; e < echelon_.size(); ++e) {
      const int pc = pivots_[e];
      if (sgn(v[static_cast<std::size_t>(pc)]) == 0) continue;
      const BigInt scale = echelon_[e][static_cast<std::size_t>(pc)];
      const BigInt factor = v[static_cast<std::size_t>(pc)];
      for (int j = 0; j < width_; ++j)
        v[static_cast<std::size_t>(j)] = scale * v[static_cast<std::size_t>(j)] - factor * echelon_[e][static_cast<std::size_t>(j)];
      remove_content(v);
    }
    int pivot = -1;
    for (int j = 0; j < width_ && pivot < 0; ++j)
      if (sgn(v[static_cast<std::size_t>(j)]) != 0) pivot = j;
    if (pivot < 0) return false;
    echelon_.push_back(std::move(v));
    pivots_.push_back(pivot);
    accepted_.emplace_back(row.begin(), row.end());
    return true;
  }

 private:
  static void remove_content(std::vector<BigInt>& v)
  {
    BigInt g = 0;
    for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g > 1)
      for (auto& x : v) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
  }

  int width_;
  std::vector<std::vector<BigInt>> echelon_;
  std::vector<int> pivots_;
  std::vector<std::vector<BigInt>> accepted_;
};

} // namespace foulkes
