#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bigint.hpp"
#include "evaluation.hpp"
#include "filling.hpp"

namespace foulkes {

/// Order used by straightening. Columns are compared right to left, and each
/// column bottom to top. A Plucker exchange at the topmost violation between
/// columns j and j+1 only produces terms whose column j+1 is strictly larger
/// here while later columns stay put, so straightening terminates.
struct StraighteningOrder {
  bool operator()(const Filling& x, const Filling& y) const
  {
    if (x.shape() != y.shape()) return x.shape() < y.shape();
    if (x.content() != y.content()) return x.content() < y.content();
    for (int c = x.columns() - 1; c >= 0; --c)
      for (int r = x.column_length(c) - 1; r >= 0; --r) {
        const int u = x.at(r, c), v = y.at(r, c);
        if (u != v) return u < v;
      }
    return false;
  }
};

/// Formal integer combination of column-sorted fillings.
class TableauSum {
 public:
  using Terms = std::map<Filling, BigInt, StraighteningOrder>;

  TableauSum() = default;

  const Terms& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  BigInt coefficient(const Filling& t) const
  {
    auto it = terms_.find(t);
    return it == terms_.end() ? BigInt(0) : it->second;
  }

  // Adds coeff * t after Grassmann canonicalization.
  void add(const Filling& t, const BigInt& coeff);

  // Adds coeff * t where t is already column-sorted.
  void add_canonical(const Filling& t, const BigInt& coeff)
  {
    if (sgn(coeff) == 0) return;
    auto [it, inserted] = terms_.try_emplace(t, coeff);
    if (!inserted) {
      it->second += coeff;
      if (sgn(it->second) == 0) terms_.erase(it);
    }
  }

  void add(const TableauSum& other, const BigInt& scale = 1)
  {
    for (const auto& [t, c] : other.terms_) add_canonical(t, c * scale);
  }

  TableauSum scaled(const BigInt& s) const
  {
    TableauSum out;
    out.add(*this, s);
    return out;
  }

  // "coeff * filling" lines in the map order.
  std::string to_string() const
  {
    std::string out;
    for (const auto& [t, c] : terms_) out += to_decimal(c) + " * " + t.to_string() + "\n";
    return out;
  }

  friend bool operator==(const TableauSum& x, const TableauSum& y) { return x.terms_ == y.terms_; }

 private:
  Terms terms_;
};

/// Sorts every column ascending. Returns the accumulated sign and the sorted
/// filling, or nullopt when a column repeats an entry (the tableau vanishes).
inline std::optional<std::pair<int, Filling>> grassmann_canonicalize(const Filling& t)
{
  std::vector<int> entries = t.entries();
  int sign = 1;
  for (int c = 0; c < t.columns(); ++c) {
    const int len = t.column_length(c);
    for (int i = 1; i < len; ++i)
      for (int r = i; r > 0; --r) {
        int& upper = entries[static_cast<std::size_t>(t.offset(r - 1, c))];
        int& lower = entries[static_cast<std::size_t>(t.offset(r, c))];
        if (upper < lower) break;
        if (upper == lower) return std::nullopt;
        std::swap(upper, lower);
        sign = -sign;
      }
  }
  return std::make_pair(sign, t.with_entries(std::move(entries)));
}

inline void TableauSum::add(const Filling& t, const BigInt& coeff)
{
  if (auto canon = grassmann_canonicalize(t)) add_canonical(canon->second, canon->first > 0 ? coeff : BigInt(-coeff));
}

/// Right-hand side of the Plucker relation T = sum_S S: every S swaps the top k
/// entries of column j+1 with a k-subset of column j, keeping vertical order.
inline TableauSum plucker_expand(const Filling& t, int j, int k)
{
  if (j < 0 || j + 1 >= t.columns()) throw std::invalid_argument("plucker_expand: column j+1 does not exist");
  const int left_len = t.column_length(j);
  if (k < 1 || k > t.column_length(j + 1)) throw std::invalid_argument("plucker_expand: invalid depth k");

  TableauSum out;
  std::vector<int> pick(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) pick[static_cast<std::size_t>(i)] = i;
  for (;;) {
    std::vector<int> entries = t.entries();
    for (int i = 0; i < k; ++i) {
      const int row = pick[static_cast<std::size_t>(i)];
      std::swap(entries[static_cast<std::size_t>(t.offset(row, j))], entries[static_cast<std::size_t>(t.offset(i, j + 1))]);
    }
    out.add(t.with_entries(std::move(entries)), 1);
    // next k-subset of rows of column j, lexicographic
    int i = k - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == left_len - k + i) --i;
    if (i < 0) break;
    ++pick[static_cast<std::size_t>(i)];
    for (int r = i + 1; r < k; ++r) pick[static_cast<std::size_t>(r)] = pick[static_cast<std::size_t>(r - 1)] + 1;
  }
  return out;
}

/// Leftmost column pair with a row descent, at the topmost such row.
/// Assumes columns are sorted. Returns (j, row).
inline std::optional<std::pair<int, int>> first_violation(const Filling& t)
{
  for (int j = 0; j + 1 < t.columns(); ++j)
    for (int r = 0; r < t.column_length(j + 1); ++r)
      if (t.at(r, j) > t.at(r, j + 1)) return std::make_pair(j, r);
  return std::nullopt;
}

/// Rewrites every term over semistandard fillings.
inline TableauSum straighten(const TableauSum& s)
{
  TableauSum::Terms work;
  for (const auto& [t, c] : s.terms()) work.emplace(t, c);
  TableauSum out;
  // each expansion only creates terms above the current one in the map order,
  // so a single forward sweep visits every term once
  auto it = work.begin();
  while (it != work.end()) {
    if (sgn(it->second) == 0) {
      it = work.erase(it);
      continue;
    }
    const auto violation = first_violation(it->first);
    if (!violation) {
      out.add_canonical(it->first, it->second);
      it = work.erase(it);
      continue;
    }
    const BigInt coeff = it->second;
    const TableauSum expansion = plucker_expand(it->first, violation->first, violation->second + 1);
    for (const auto& [t, c] : expansion.terms()) {
      if (!StraighteningOrder{}(it->first, t))
        throw std::logic_error("straighten: Plucker exchange did not increase " + it->first.to_string());
      auto [pos, inserted] = work.try_emplace(t, c * coeff);
      if (!inserted) pos->second += c * coeff;
    }
    it = work.erase(it);
  }
  return out;
}

inline TableauSum straighten(const Filling& t)
{
  TableauSum s;
  s.add(t, 1);
  return straighten(s);
}

/// Symbolic Psi_{a,b}(f): the sum over all ways of putting 1..b on each
/// letter's cells (content b x a), straightened. Fillings with a repeated
/// number in a column vanish and are skipped during enumeration.
inline TableauSum apply_psi_symbolic(const SymmetrizedTableau& f)
{
  const Filling& t = f.base();
  const int a = t.content().symbols;
  const int b = t.content().repeats;
  std::vector<std::vector<int>> letter_cells(static_cast<std::size_t>(a));
  std::vector<int> column_of(static_cast<std::size_t>(t.cells()));
  for (int r = 0; r < t.rows(); ++r)
    for (int c = 0; c < t.shape()[r]; ++c) {
      letter_cells[static_cast<std::size_t>(t.at(r, c) - 1)].push_back(t.offset(r, c));
      column_of[static_cast<std::size_t>(t.offset(r, c))] = c;
    }

  std::vector<int> entries(static_cast<std::size_t>(t.cells()), 0);
  std::vector<std::vector<char>> in_column(static_cast<std::size_t>(t.columns()),
                                           std::vector<char>(static_cast<std::size_t>(b) + 1, 0));
  std::vector<std::vector<char>> used(static_cast<std::size_t>(a), std::vector<char>(static_cast<std::size_t>(b) + 1, 0));
  TableauSum raw;
  const ContentSpec content{b, a};

  auto rec = [&](auto&& self, int letter, int index) -> void {
    if (letter == a) {
      raw.add(Filling(t.shape(), entries, content), 1);
      return;
    }
    const auto& cells = letter_cells[static_cast<std::size_t>(letter)];
    if (index == static_cast<int>(cells.size())) {
      self(self, letter + 1, 0);
      return;
    }
    const int cell = cells[static_cast<std::size_t>(index)];
    auto& col = in_column[static_cast<std::size_t>(column_of[static_cast<std::size_t>(cell)])];
    for (int q = 1; q <= b; ++q) {
      if (used[static_cast<std::size_t>(letter)][static_cast<std::size_t>(q)] || col[static_cast<std::size_t>(q)]) continue;
      used[static_cast<std::size_t>(letter)][static_cast<std::size_t>(q)] = 1;
      col[static_cast<std::size_t>(q)] = 1;
      entries[static_cast<std::size_t>(cell)] = q;
      self(self, letter, index + 1);
      col[static_cast<std::size_t>(q)] = 0;
      used[static_cast<std::size_t>(letter)][static_cast<std::size_t>(q)] = 0;
    }
  };
  rec(rec, 0, 0);
  return straighten(raw);
}

/// Linear extension of evaluate_tableau to formal sums.
inline BigInt evaluate_sum(const TableauSum& s, const Point& v, const MinorCache& cache)
{
  BigInt total = 0;
  for (const auto& [t, c] : s.terms()) total += c * evaluate_tableau(t, v, cache);
  return total;
}

} // namespace foulkes
