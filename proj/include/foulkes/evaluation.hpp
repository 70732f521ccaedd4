#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bigint.hpp"
#include "filling.hpp"
#include "linalg.hpp"
#include "rng.hpp"

namespace foulkes {

struct LinearForm {
  std::vector<long> coords;
  friend bool operator==(const LinearForm&, const LinearForm&) = default;
};

/// v = sum_i (l_i)^power, a point of Sym^power V with V = Z^n.
class Point {
 public:
  Point() = default;
  Point(std::vector<LinearForm> forms, int power) : forms_(std::move(forms)), power_(power)
  {
    if (forms_.empty()) throw std::invalid_argument("Point: no linear forms");
    if (power_ < 1) throw std::invalid_argument("Point: power must be >= 1");
    for (const auto& l : forms_)
      if (l.coords.size() != forms_.front().coords.size()) throw std::invalid_argument("Point: forms of unequal length");
  }

  const std::vector<LinearForm>& forms() const { return forms_; }
  int power() const { return power_; }
  int form_count() const { return static_cast<int>(forms_.size()); }
  int dimension() const { return static_cast<int>(forms_.front().coords.size()); }

  friend bool operator==(const Point&, const Point&) = default;

 private:
  std::vector<LinearForm> forms_;
  int power_ = 1;
};

/// Forms with coordinates uniform in [-9, 9], never the zero form.
inline Point random_point(int form_count, int dimension, int power, std::uint64_t seed)
{
  Rng rng(seed);
  std::vector<LinearForm> forms;
  for (int i = 0; i < form_count; ++i) {
    LinearForm l;
    do {
      l.coords.assign(static_cast<std::size_t>(dimension), 0);
      for (auto& x : l.coords) x = rng.uniform(-9, 9);
    } while (std::all_of(l.coords.begin(), l.coords.end(), [](long x) { return x == 0; }));
    forms.push_back(std::move(l));
  }
  return Point(std::move(forms), power);
}

/// Subtree selection: at tree depth `depth`, shard `shard_id` of `shards`
/// owns the I-th visited node iff I mod shards == shard_id.
struct ShardSpec {
  int depth = 0;
  int shards = 1;
  int shard_id = 0;

  void validate() const
  {
    if (depth < 0 || shards < 1 || shard_id < 0 || shard_id >= shards)
      throw std::invalid_argument("invalid shard spec: need depth >= 0 and 0 <= shard-id < shards");
  }
  friend bool operator==(const ShardSpec&, const ShardSpec&) = default;
};

/// Determinants of the leading k x k blocks of every k-tuple of forms.
///
/// Keys are sorted tuples; any ordered tuple resolves through its sorted key
/// with the sign of the sorting permutation, and tuples with a repeated form
/// are zero. A dense table over ordered tuples backs the hot path.
class MinorCache {
 public:
  MinorCache() = default;

  MinorCache(const Point& point, const std::set<int>& column_lengths)
      : forms_(point.form_count()), dim_(point.dimension())
  {
    for (int k : column_lengths) {
      if (k < 1) throw std::invalid_argument("MinorCache: column length must be positive");
      if (k > dim_)
        throw std::invalid_argument("MinorCache: column length " + std::to_string(k) + " exceeds dimension " +
                                    std::to_string(dim_));
      build(point, k);
    }
  }

  int form_count() const { return forms_; }
  int dimension() const { return dim_; }
  bool has_length(int k) const { return k < static_cast<int>(ordered_.size()) && !ordered_[static_cast<std::size_t>(k)].empty(); }

  // Entry for a sorted, repetition-free tuple.
  const BigInt& sorted(std::span<const int> tuple) const
  {
    return sorted_.at(std::vector<int>(tuple.begin(), tuple.end()));
  }

  // Determinant for any ordered tuple of form indices.
  BigInt det(std::span<const int> tuple) const
  {
    std::vector<int> t(tuple.begin(), tuple.end());
    int sign = sort_with_sign(t);
    if (sign == 0) return 0;
    const BigInt& v = sorted(t);
    return sign > 0 ? v : BigInt(-v);
  }

  // Hot-path access: code = sum tuple[r] * forms^(k-1-r).
  const BigInt& ordered(int k, std::size_t code) const { return ordered_[static_cast<std::size_t>(k)][code]; }
  std::int64_t small(int k, std::size_t code) const { return small_[static_cast<std::size_t>(k)][code]; }
  bool all_small() const { return all_small_; }

  std::size_t size() const { return sorted_.size(); }

 private:
  static int sort_with_sign(std::vector<int>& t)
  {
    int sign = 1;
    for (std::size_t i = 1; i < t.size(); ++i)
      for (std::size_t j = i; j > 0 && t[j - 1] >= t[j]; --j) {
        if (t[j - 1] == t[j]) return 0;
        std::swap(t[j - 1], t[j]);
        sign = -sign;
      }
    return sign;
  }

  void build(const Point& point, int k)
  {
    if (static_cast<int>(ordered_.size()) <= k) {
      ordered_.resize(static_cast<std::size_t>(k) + 1);
      small_.resize(static_cast<std::size_t>(k) + 1);
    }
    std::size_t total = 1;
    for (int i = 0; i < k; ++i) total *= static_cast<std::size_t>(forms_);
    auto& table = ordered_[static_cast<std::size_t>(k)];
    auto& fast = small_[static_cast<std::size_t>(k)];
    table.assign(total, 0);
    fast.assign(total, 0);
    std::vector<int> tuple(static_cast<std::size_t>(k));
    for (std::size_t code = 0; code < total; ++code) {
      std::size_t rest = code;
      for (int r = k - 1; r >= 0; --r) {
        tuple[static_cast<std::size_t>(r)] = static_cast<int>(rest % static_cast<std::size_t>(forms_));
        rest /= static_cast<std::size_t>(forms_);
      }
      std::vector<int> key = tuple;
      const int sign = sort_with_sign(key);
      if (sign == 0) continue;
      auto it = sorted_.find(key);
      if (it == sorted_.end()) {
        IntMatrix m(k, k);
        for (int r = 0; r < k; ++r)
          for (int c = 0; c < k; ++c)
            m(r, c) = point.forms()[static_cast<std::size_t>(key[static_cast<std::size_t>(r)])].coords[static_cast<std::size_t>(c)];
        it = sorted_.emplace(key, determinant(std::move(m))).first;
      }
      table[code] = sign > 0 ? it->second : BigInt(-it->second);
      if (table[code].fits_slong_p())
        fast[code] = table[code].get_si();
      else
        all_small_ = false;
    }
  }

  int forms_ = 0;
  int dim_ = 0;
  std::map<std::vector<int>, BigInt> sorted_;
  std::vector<std::vector<BigInt>> ordered_;
  std::vector<std::vector<std::int64_t>> small_;
  bool all_small_ = true;
};

inline std::set<int> column_lengths(const Partition& shape)
{
  std::set<int> out;
  const Partition conj = shape.conjugate();
  for (int len : conj.parts()) out.insert(len);
  return out;
}

inline MinorCache build_minor_cache(const Point& point, const std::set<int>& lengths)
{
  return MinorCache(point, lengths);
}

namespace detail {

inline void add_product(BigInt& acc, const BigInt& x, const MinorCache& cache, int k, std::size_t code)
{
  if (cache.all_small()) {
    const std::int64_t d = cache.small(k, code);
    if (d > 0)
      mpz_addmul_ui(acc.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(d));
    else if (d < 0)
      mpz_submul_ui(acc.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(-d));
  } else {
    mpz_addmul(acc.get_mpz_t(), x.get_mpz_t(), cache.ordered(k, code).get_mpz_t());
  }
}

inline bool det_is_zero(const MinorCache& cache, int k, std::size_t code)
{
  return cache.all_small() ? cache.small(k, code) == 0 : sgn(cache.ordered(k, code)) == 0;
}

} // namespace detail

/// Value of a content s x r tableau at v = sum_{i<m} l_i^r: the sum over all
/// assignments of forms to entry values of the product of column minors.
inline BigInt evaluate_tableau(const Filling& t, const Point& v, const MinorCache& cache)
{
  const int symbols = t.content().symbols;
  const int m = v.form_count();
  if (cache.form_count() != m) throw std::invalid_argument("evaluate_tableau: cache built for another point");

  std::vector<std::vector<int>> cols;
  for (int c = 0; c < t.columns(); ++c) {
    auto col = t.column(c);
    auto sorted = col;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return 0;
    if (!cache.has_length(static_cast<int>(col.size())))
      throw std::invalid_argument("evaluate_tableau: cache lacks column length " + std::to_string(col.size()));
    cols.push_back(std::move(col));
  }

  BigInt total = 0, prod;
  std::vector<int> assign(static_cast<std::size_t>(symbols), 0);
  for (;;) {
    prod = 1;
    for (const auto& col : cols) {
      std::size_t code = 0;
      for (int e : col) code = code * static_cast<std::size_t>(m) + static_cast<std::size_t>(assign[static_cast<std::size_t>(e - 1)]);
      const int k = static_cast<int>(col.size());
      if (detail::det_is_zero(cache, k, code)) {
        prod = 0;
        break;
      }
      if (cache.all_small())
        prod *= static_cast<long>(cache.small(k, code));
      else
        prod *= cache.ordered(k, code);
    }
    total += prod;
    int i = 0;
    while (i < symbols && ++assign[static_cast<std::size_t>(i)] == m) assign[static_cast<std::size_t>(i++)] = 0;
    if (i == symbols) break;
  }
  return total;
}

/// Top-entry windows for coinciding columns: in a group of r identical
/// columns the k-th (1-based, left to right) top entry lies in [k, b - r + k].
/// Returns column index -> (min, max). Groups larger than b admit no filling.
inline std::map<int, std::pair<int, int>> pruning_bounds(const std::vector<std::vector<int>>& groups, int b)
{
  std::map<int, std::pair<int, int>> out;
  for (const auto& g : groups) {
    const int r = static_cast<int>(g.size());
    if (r > b)
      throw std::invalid_argument("pruning_bounds: group of " + std::to_string(r) + " identical columns exceeds b = " +
                                  std::to_string(b));
    for (int k = 1; k <= r; ++k) out[g[static_cast<std::size_t>(k - 1)]] = {k, b - r + k};
  }
  return out;
}

enum class CellOrder {
  FewestChoices,  // fill the cell with the fewest legal numbers next
  ColumnMajor,    // fill columns left to right, top to bottom
};

struct SearchOptions {
  CellOrder order = CellOrder::ColumnMajor;
  bool symmetry_pruning = true;
  bool memoize = true;
};

struct SearchStats {
  std::uint64_t nodes = 0;
  std::uint64_t memo_hits = 0;
  std::uint64_t shard_nodes = 0;  // nodes seen at the shard depth
};

/// Evaluates Psi_{a,b}(f) at a point v' of Sym^a V without expanding the image.
///
/// Outer loop: non-decreasing form assignments j (number q -> form j_q),
/// weighted by the number of orderings. Inner loop: a depth-first tree that
/// places the numbers 1..b on each letter's cells. A branch dies as soon as a
/// column would hold two numbers mapped to the same form; a completed column
/// contributes its cached minor.
class PsiEvaluator {
 public:
  PsiEvaluator(const SymmetrizedTableau& f, const Point& v, const MinorCache& cache, SearchOptions options = {})
      : cache_(cache), options_(options)
  {
    const Filling& t = f.base();
    a_ = t.content().symbols;
    b_ = t.content().repeats;
    m_ = v.form_count();
    if (v.power() != a_)
      throw std::invalid_argument("evaluate_psi_image: point power must equal the number of letters");
    if (cache.form_count() != m_) throw std::invalid_argument("evaluate_psi_image: cache built for another point");
    if (t.cells() > 64 || b_ > 30 || m_ > 30) throw std::invalid_argument("evaluate_psi_image: instance too large");

    cells_ = t.cells();
    columns_ = t.columns();
    col_len_.resize(static_cast<std::size_t>(columns_));
    col_cells_.resize(static_cast<std::size_t>(columns_));
    for (int c = 0; c < columns_; ++c) {
      const int len = t.column_length(c);
      col_len_[static_cast<std::size_t>(c)] = len;
      if (!cache.has_length(len)) throw std::invalid_argument("evaluate_psi_image: cache lacks column length");
      for (int r = 0; r < len; ++r) {
        Cell cell;
        cell.letter = t.at(r, c) - 1;
        cell.column = c;
        cell.row = r;
        col_cells_[static_cast<std::size_t>(c)].push_back(static_cast<int>(cell_info_.size()));
        cell_info_.push_back(cell);
      }
    }

    group_of_column_.assign(static_cast<std::size_t>(columns_), -1);
    position_in_group_.assign(static_cast<std::size_t>(columns_), -1);
    for (auto& g : coinciding_column_groups(f)) {
      if (static_cast<int>(g.size()) > b_) impossible_ = true;
      if (g.size() < 2) continue;
      const int id = static_cast<int>(groups_.size());
      for (std::size_t k = 0; k < g.size(); ++k) {
        group_of_column_[static_cast<std::size_t>(g[k])] = id;
        position_in_group_[static_cast<std::size_t>(g[k])] = static_cast<int>(k);
      }
      groups_.push_back(std::move(g));
    }
    int group_columns = 0;
    if (options_.symmetry_pruning)
      for (const auto& g : groups_) {
        collapse_ *= factorial(static_cast<int>(g.size()));
        group_columns += static_cast<int>(g.size());
      }
    // the memo key packs the used-number masks into one word and group tops into three
    memo_allowed_ = options_.memoize && a_ * b_ <= 64 && group_columns <= 36;
  }

  // Sum over shard-selected subtrees; summing all shard ids gives the full value.
  BigInt run(const ShardSpec& shard = {})
  {
    shard.validate();
    shard_ = shard;
    shard_depth_ = std::min(shard.depth, cells_);
    counter_ = 0;
    stats_ = {};
    if (impossible_) return 0;

    BigInt total = 0, inner;
    std::vector<int> j(static_cast<std::size_t>(b_), 0);
    // numbers -> form, non-decreasing
    for (;;) {
      setup_assignment(j);
      inner = 0;
      dfs(inner, 0);
      if (sgn(inner) != 0) total += inner * weight(j);
      int i = b_ - 1;
      while (i >= 0 && j[static_cast<std::size_t>(i)] == m_ - 1) --i;
      if (i < 0) break;
      const int next = j[static_cast<std::size_t>(i)] + 1;
      for (int q = i; q < b_; ++q) j[static_cast<std::size_t>(q)] = next;
    }
    return total * collapse_;
  }

  const SearchStats& stats() const { return stats_; }
  const BigInt& collapse_factor() const { return collapse_; }

 private:
  struct Cell {
    int letter = 0;
    int column = 0;
    int row = 0;
  };

  struct Key {
    std::array<std::uint64_t, 5> w{};
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept
    {
      std::uint64_t h = 0;
      for (auto x : k.w) h = mix64(h ^ x);
      return static_cast<std::size_t>(h);
    }
  };

  BigInt weight(const std::vector<int>& j) const
  {
    BigInt w = factorial(b_);
    int run = 1;
    for (int q = 1; q <= b_; ++q) {
      if (q < b_ && j[static_cast<std::size_t>(q)] == j[static_cast<std::size_t>(q - 1)]) {
        ++run;
      } else {
        w /= factorial(run);
        run = 1;
      }
    }
    return w;
  }

  void setup_assignment(const std::vector<int>& j)
  {
    form_of_.assign(j.begin(), j.end());
    blocked_.assign(std::size_t{1} << m_, 0);
    for (std::uint32_t mask = 0; mask < blocked_.size(); ++mask)
      for (int q = 0; q < b_; ++q)
        if (mask >> form_of_[static_cast<std::size_t>(q)] & 1u) blocked_[mask] |= 1u << q;
    value_.assign(static_cast<std::size_t>(cells_), -1);
    used_.assign(static_cast<std::size_t>(a_), 0);
    col_forms_.assign(static_cast<std::size_t>(columns_), 0);
    col_fill_.assign(static_cast<std::size_t>(columns_), 0);
    col_code_.assign(static_cast<std::size_t>(columns_), 0);
    partial_columns_ = 0;
    filled_mask_ = 0;
    memo_.clear();
    acc_buf_.resize(static_cast<std::size_t>(cells_) + 1);
    child_buf_.resize(static_cast<std::size_t>(cells_) + 1);
  }

  std::uint32_t legal(int cell) const
  {
    const Cell& x = cell_info_[static_cast<std::size_t>(cell)];
    const std::uint32_t all = (b_ == 32) ? ~0u : ((1u << b_) - 1);
    std::uint32_t mask = all & ~used_[static_cast<std::size_t>(x.letter)] & ~blocked_[col_forms_[static_cast<std::size_t>(x.column)]];
    if (options_.symmetry_pruning && x.row == 0) {
      const int g = group_of_column_[static_cast<std::size_t>(x.column)];
      if (g >= 0) {
        const auto& members = groups_[static_cast<std::size_t>(g)];
        const int r = static_cast<int>(members.size());
        const int k = position_in_group_[static_cast<std::size_t>(x.column)];
        int lo = k, hi = b_ - r + k;  // 0-based numbers
        for (int i = 0; i < r; ++i) {
          const int top = value_[static_cast<std::size_t>(col_cells_[static_cast<std::size_t>(members[static_cast<std::size_t>(i)])][0])];
          if (top < 0) continue;
          if (i < k) lo = std::max(lo, top + 1);
          if (i > k) hi = std::min(hi, top - 1);
        }
        if (lo > hi) return 0;
        const std::uint32_t window = ((hi == 31 ? ~0u : ((1u << (hi + 1)) - 1))) & ~((1u << lo) - 1);
        mask &= window;
      }
    }
    return mask;
  }

  int choose_cell(int depth, std::uint32_t& mask) const
  {
    if (options_.order == CellOrder::ColumnMajor) {
      mask = legal(depth);
      return depth;
    }
    int best = -1, best_count = 64;
    for (int c = 0; c < columns_; ++c) {
      for (int cell : col_cells_[static_cast<std::size_t>(c)]) {
        if (value_[static_cast<std::size_t>(cell)] >= 0) continue;
        const std::uint32_t l = legal(cell);
        const int count = std::popcount(l);
        if (count < best_count) {
          best = cell;
          best_count = count;
          mask = l;
          if (count == 0) return best;
        }
      }
    }
    return best;
  }

  Key memo_key() const
  {
    Key k;
    k.w[0] = filled_mask_;
    std::uint64_t used = 0;
    for (int l = 0; l < a_; ++l) used = used * (std::uint64_t{1} << b_) + used_[static_cast<std::size_t>(l)];
    k.w[1] = used;
    if (options_.symmetry_pruning) {
      // tops of completed columns in groups that still have open columns
      int slot = 0;
      for (const auto& g : groups_) {
        bool open = false;
        for (int c : g) open |= col_fill_[static_cast<std::size_t>(c)] == 0;
        for (int c : g) {
          std::uint64_t top = 0;
          if (open && col_fill_[static_cast<std::size_t>(c)] > 0)
            top = static_cast<std::uint64_t>(value_[static_cast<std::size_t>(col_cells_[static_cast<std::size_t>(c)][0])]) + 1;
          const int word = 2 + slot / 12;
          if (word < 5) k.w[static_cast<std::size_t>(word)] = k.w[static_cast<std::size_t>(word)] * 32 + top;
          ++slot;
        }
      }
    }
    return k;
  }

  void dfs(BigInt& out, int depth)
  {
    ++stats_.nodes;
    if (depth == shard_depth_) {
      ++stats_.shard_nodes;
      if (counter_++ % static_cast<std::uint64_t>(shard_.shards) != static_cast<std::uint64_t>(shard_.shard_id)) return;
    }
    if (depth == cells_) {
      out += 1;
      return;
    }
    const bool use_memo = memo_allowed_ && depth > shard_depth_ && partial_columns_ == 0;
    Key key;
    if (use_memo) {
      key = memo_key();
      if (auto it = memo_.find(key); it != memo_.end()) {
        ++stats_.memo_hits;
        out += it->second;
        return;
      }
    }

    std::uint32_t mask = 0;
    const int cell = choose_cell(depth, mask);
    BigInt& acc = acc_buf_[static_cast<std::size_t>(depth)];
    acc = 0;
    const Cell& x = cell_info_[static_cast<std::size_t>(cell)];
    const auto col = static_cast<std::size_t>(x.column);
    const int len = col_len_[col];
    const auto letter = static_cast<std::size_t>(x.letter);
    BigInt& child = child_buf_[static_cast<std::size_t>(depth)];

    while (mask) {
      const int q = std::countr_zero(mask);
      mask &= mask - 1;
      const int form = form_of_[static_cast<std::size_t>(q)];
      // place
      value_[static_cast<std::size_t>(cell)] = q;
      used_[letter] |= 1u << q;
      col_forms_[col] |= 1u << form;
      const std::size_t code_before = col_code_[col];
      col_code_[col] += static_cast<std::size_t>(form) * pow_m(len - 1 - x.row);
      const int fill_before = col_fill_[col]++;
      if (fill_before == 0 && len > 1) ++partial_columns_;
      const bool completes = col_fill_[col] == len;
      if (completes && len > 1) --partial_columns_;
      filled_mask_ |= std::uint64_t{1} << cell;

      if (completes) {
        if (!detail::det_is_zero(cache_, len, col_code_[col])) {
          child = 0;
          dfs(child, depth + 1);
          if (sgn(child) != 0) detail::add_product(acc, child, cache_, len, col_code_[col]);
        }
      } else {
        dfs(acc, depth + 1);
      }

      // undo
      filled_mask_ &= ~(std::uint64_t{1} << cell);
      if (completes && len > 1) ++partial_columns_;
      col_fill_[col] = fill_before;
      if (fill_before == 0 && len > 1) --partial_columns_;
      col_code_[col] = code_before;
      col_forms_[col] &= ~(1u << form);
      used_[letter] &= ~(1u << q);
      value_[static_cast<std::size_t>(cell)] = -1;
    }
    if (use_memo) memo_.emplace(key, acc);
    out += acc;
  }

  std::size_t pow_m(int e) const
  {
    std::size_t p = 1;
    for (int i = 0; i < e; ++i) p *= static_cast<std::size_t>(m_);
    return p;
  }

  const MinorCache& cache_;
  SearchOptions options_;
  int a_ = 0, b_ = 0, m_ = 0, cells_ = 0, columns_ = 0;
  bool impossible_ = false;
  std::vector<Cell> cell_info_;  // column-major order
  std::vector<int> col_len_;
  std::vector<std::vector<int>> col_cells_;
  std::vector<int> group_of_column_;
  std::vector<int> position_in_group_;
  bool memo_allowed_ = false;
  std::vector<std::vector<int>> groups_;
  BigInt collapse_ = 1;

  ShardSpec shard_;
  int shard_depth_ = 0;
  std::uint64_t counter_ = 0;
  SearchStats stats_;

  std::vector<int> form_of_;
  std::vector<std::uint32_t> blocked_;
  std::vector<int> value_;
  std::vector<std::uint32_t> used_;
  std::vector<std::uint32_t> col_forms_;
  std::vector<int> col_fill_;
  std::vector<std::size_t> col_code_;
  int partial_columns_ = 0;
  std::uint64_t filled_mask_ = 0;
  std::unordered_map<Key, BigInt, KeyHash> memo_;
  std::vector<BigInt> acc_buf_;
  std::vector<BigInt> child_buf_;
};

/// Psi_{a,b}(f)(v) restricted to the subtrees owned by `shard`.
inline BigInt evaluate_psi_image(const SymmetrizedTableau& f, const Point& v, const MinorCache& cache,
                                 const ShardSpec& shard = {}, SearchOptions options = {})
{
  PsiEvaluator evaluator(f, v, cache, options);
  return evaluator.run(shard);
}

} // namespace foulkes
