#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "partition.hpp"
#include "rng.hpp"

namespace foulkes {

/// Rectangular content: each value 1..symbols appears exactly `repeats` times.
struct ContentSpec {
  int symbols = 0;
  int repeats = 0;

  int cells() const { return symbols * repeats; }
  friend bool operator==(const ContentSpec&, const ContentSpec&) = default;
  friend auto operator<=>(const ContentSpec&, const ContentSpec&) = default;
};

/// A tableau of a given shape with rectangular content. Entries are stored
/// row-major; cells are addressed (row, column), 0-based.
class Filling {
 public:
  Filling() = default;

  Filling(Partition shape, std::vector<int> entries, ContentSpec content)
      : shape_(std::move(shape)), entries_(std::move(entries)), content_(content)
  {
    init_offsets();
    if (static_cast<int>(entries_.size()) != shape_.weight())
      throw std::invalid_argument("filling: entry count does not match shape");
    if (content_.cells() != shape_.weight())
      throw std::invalid_argument("filling: content " + std::to_string(content_.symbols) + "x" +
                                  std::to_string(content_.repeats) + " does not fit shape " + shape_.to_string());
    std::vector<int> count(static_cast<std::size_t>(content_.symbols) + 1, 0);
    for (int e : entries_) {
      if (e < 1 || e > content_.symbols) throw std::invalid_argument("filling: entry out of range");
      ++count[static_cast<std::size_t>(e)];
    }
    for (int v = 1; v <= content_.symbols; ++v)
      if (count[static_cast<std::size_t>(v)] != content_.repeats)
        throw std::invalid_argument("filling: content is not rectangular " + std::to_string(content_.symbols) + "x" +
                                    std::to_string(content_.repeats));
  }

  // Rows given explicitly, e.g. {{1,1,3,3},{2,2}}.
  static Filling from_rows(const std::vector<std::vector<int>>& rows, ContentSpec content)
  {
    std::vector<int> parts, entries;
    for (const auto& row : rows) {
      parts.push_back(static_cast<int>(row.size()));
      entries.insert(entries.end(), row.begin(), row.end());
    }
    return Filling(Partition(std::move(parts)), std::move(entries), content);
  }

  // "1 1 3 3/2 2". Content is inferred when not given and must be rectangular.
  static Filling parse(std::string_view text, std::optional<ContentSpec> content = std::nullopt)
  {
    std::vector<std::vector<int>> rows(1);
    std::size_t i = 0;
    while (i < text.size()) {
      char ch = text[i];
      if (ch == '/') {
        rows.emplace_back();
        ++i;
      } else if (ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r') {
        ++i;
      } else {
        int value = 0;
        auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + text.size(), value);
        if (ec != std::errc{}) throw std::invalid_argument("malformed filling: '" + std::string(text) + "'");
        rows.back().push_back(value);
        i = static_cast<std::size_t>(ptr - text.data());
      }
    }
    for (const auto& row : rows)
      if (row.empty()) throw std::invalid_argument("malformed filling (empty row): '" + std::string(text) + "'");
    if (!content) content = infer_content(rows);
    return from_rows(rows, *content);
  }

  const Partition& shape() const { return shape_; }
  const ContentSpec& content() const { return content_; }
  const std::vector<int>& entries() const { return entries_; }
  int cells() const { return static_cast<int>(entries_.size()); }
  int rows() const { return shape_.rows(); }
  int columns() const { return shape_[0]; }
  int column_length(int col) const { return col_len_[static_cast<std::size_t>(col)]; }

  int offset(int row, int col) const { return row_start_[static_cast<std::size_t>(row)] + col; }
  int at(int row, int col) const { return entries_[static_cast<std::size_t>(offset(row, col))]; }

  std::vector<int> column(int col) const
  {
    std::vector<int> out(static_cast<std::size_t>(column_length(col)));
    for (int r = 0; r < column_length(col); ++r) out[static_cast<std::size_t>(r)] = at(r, col);
    return out;
  }

  std::vector<int> row(int r) const
  {
    auto first = entries_.begin() + row_start_[static_cast<std::size_t>(r)];
    return std::vector<int>(first, first + shape_[r]);
  }

  // Same shape and content, new entries.
  Filling with_entries(std::vector<int> entries) const
  {
    Filling out;
    out.shape_ = shape_;
    out.content_ = content_;
    out.row_start_ = row_start_;
    out.col_len_ = col_len_;
    out.entries_ = std::move(entries);
    return out;
  }

  std::string to_string() const
  {
    std::string out;
    for (int r = 0; r < rows(); ++r) {
      if (r) out += '/';
      for (int c = 0; c < shape_[r]; ++c) {
        if (c) out += ' ';
        out += std::to_string(at(r, c));
      }
    }
    return out;
  }

  friend bool operator==(const Filling& x, const Filling& y)
  {
    return x.shape_ == y.shape_ && x.content_ == y.content_ && x.entries_ == y.entries_;
  }

  friend bool operator<(const Filling& x, const Filling& y)
  {
    return std::tie(x.shape_, x.content_, x.entries_) < std::tie(y.shape_, y.content_, y.entries_);
  }

 private:
  static ContentSpec infer_content(const std::vector<std::vector<int>>& rows)
  {
    std::map<int, int> count;
    for (const auto& row : rows)
      for (int e : row) ++count[e];
    if (count.empty() || count.begin()->first != 1 || count.rbegin()->first != static_cast<int>(count.size()))
      throw std::invalid_argument("filling entries must be exactly the values 1..k");
    const int repeats = count.begin()->second;
    for (auto [value, n] : count)
      if (n != repeats) throw std::invalid_argument("filling content is not rectangular");
    return {static_cast<int>(count.size()), repeats};
  }

  void init_offsets()
  {
    row_start_.assign(static_cast<std::size_t>(shape_.rows()), 0);
    for (int r = 1; r < shape_.rows(); ++r)
      row_start_[static_cast<std::size_t>(r)] = row_start_[static_cast<std::size_t>(r - 1)] + shape_[r - 1];
    col_len_.assign(static_cast<std::size_t>(shape_[0]), 0);
    for (int r = 0; r < shape_.rows(); ++r)
      for (int c = 0; c < shape_[r]; ++c) ++col_len_[static_cast<std::size_t>(c)];
  }

  Partition shape_;
  std::vector<int> entries_;
  ContentSpec content_;
  std::vector<int> row_start_;
  std::vector<int> col_len_;
};

/// Strictly increasing down columns, weakly increasing along rows.
inline bool is_semistandard(const Filling& t)
{
  for (int r = 0; r < t.rows(); ++r) {
    for (int c = 0; c < t.shape()[r]; ++c) {
      if (c + 1 < t.shape()[r] && t.at(r, c) > t.at(r, c + 1)) return false;
      if (r + 1 < t.rows() && c < t.shape()[r + 1] && t.at(r, c) >= t.at(r + 1, c)) return false;
    }
  }
  return true;
}

/// The standard tableau whose entries run consecutively down each column.
inline Filling column_standard_tableau(const Partition& shape)
{
  if (shape.empty()) throw std::invalid_argument("column_standard_tableau: empty shape");
  std::vector<int> entries(static_cast<std::size_t>(shape.weight()), 0);
  Filling probe(shape, std::vector<int>(entries.size(), 1), {1, shape.weight()});
  int next = 1;
  for (int c = 0; c < shape[0]; ++c)
    for (int r = 0; r < probe.column_length(c); ++r) entries[static_cast<std::size_t>(probe.offset(r, c))] = next++;
  return Filling(shape, std::move(entries), {shape.weight(), 1});
}

/// A pseudorandom semistandard filling of `shape` with rectangular content,
/// or nullopt when none exists.
///
/// The filling is built by peeling horizontal strips of size `repeats` off the
/// shape, largest value first. After placing value v the remaining shape must
/// have at most v-1 rows, which is exactly when it still admits a semistandard
/// filling with content (v-1) x repeats, so no backtracking is needed and every
/// semistandard filling is reachable.
inline std::optional<Filling> random_semistandard(const Partition& shape, ContentSpec content, std::uint64_t seed)
{
  if (shape.weight() != content.cells())
    throw std::invalid_argument("random_semistandard: shape weight does not match content");
  if (shape.rows() > content.symbols) return std::nullopt;

  Rng rng(seed);
  std::vector<int> current(shape.parts().begin(), shape.parts().end());
  std::vector<int> entries(static_cast<std::size_t>(shape.weight()), 0);
  std::vector<int> row_start(current.size(), 0);
  for (std::size_t r = 1; r < current.size(); ++r) row_start[r] = row_start[r - 1] + current[r - 1];

  for (int value = content.symbols; value >= 1; --value) {
    const int rows = static_cast<int>(current.size());
    auto at = [&](int r) { return r < rows ? current[static_cast<std::size_t>(r)] : 0; };
    // enumerate removal vectors: row r loses take[r] in [lo, hi]
    std::vector<int> lo(static_cast<std::size_t>(rows)), hi(static_cast<std::size_t>(rows));
    for (int r = 0; r < rows; ++r) {
      hi[static_cast<std::size_t>(r)] = at(r) - at(r + 1);
      // rows at index >= value-1 must vanish entirely
      lo[static_cast<std::size_t>(r)] = r >= value - 1 ? at(r) - at(r + 1) : 0;
    }
    std::vector<std::vector<int>> options;
    std::vector<int> take(static_cast<std::size_t>(rows), 0);
    auto rec = [&](auto&& self, int r, int left) -> void {
      if (r == rows) {
        if (left == 0) options.push_back(take);
        return;
      }
      for (int t = lo[static_cast<std::size_t>(r)]; t <= std::min(hi[static_cast<std::size_t>(r)], left); ++t) {
        take[static_cast<std::size_t>(r)] = t;
        self(self, r + 1, left - t);
      }
    };
    rec(rec, 0, content.repeats);
    if (options.empty()) return std::nullopt;
    const auto& chosen = options[rng.index(options.size())];
    for (int r = 0; r < rows; ++r) {
      for (int k = 0; k < chosen[static_cast<std::size_t>(r)]; ++k) {
        int& len = current[static_cast<std::size_t>(r)];
        --len;
        entries[static_cast<std::size_t>(row_start[static_cast<std::size_t>(r)] + len)] = value;
      }
    }
    while (!current.empty() && current.back() == 0) current.pop_back();
  }
  return Filling(shape, std::move(entries), content);
}

/// The outer symmetrization of a content a x b filling. Letters are the entry
/// values read as an unordered alphabet; equality ignores how they are named.
class SymmetrizedTableau {
 public:
  SymmetrizedTableau() = default;

  explicit SymmetrizedTableau(Filling base) : base_(std::move(base))
  {
    std::vector<int> relabel(static_cast<std::size_t>(base_.content().symbols) + 1, 0);
    std::vector<int> entries = base_.entries();
    int next = 1;
    for (int& e : entries) {
      int& slot = relabel[static_cast<std::size_t>(e)];
      if (slot == 0) slot = next++;
      e = slot;
    }
    canonical_ = base_.with_entries(std::move(entries));
  }

  // "AACC/BB" style, letters A.. standing for values 1..
  static SymmetrizedTableau parse_letters(std::string_view text)
  {
    std::string digits;
    for (char ch : text) {
      if (ch >= 'A' && ch <= 'Z') {
        if (!digits.empty() && digits.back() != '/') digits += ' ';
        digits += std::to_string(ch - 'A' + 1);
      } else if (ch == '/') {
        digits += '/';
      } else if (ch != ' ') {
        throw std::invalid_argument("letters must be A-Z");
      }
    }
    return SymmetrizedTableau(Filling::parse(digits));
  }

  const Filling& base() const { return base_; }
  const Filling& canonical() const { return canonical_; }
  const Partition& shape() const { return base_.shape(); }
  int symbols() const { return base_.content().symbols; }
  int repeats() const { return base_.content().repeats; }

  std::string letters() const
  {
    std::string out;
    for (int r = 0; r < base_.rows(); ++r) {
      if (r) out += '/';
      for (int c = 0; c < base_.shape()[r]; ++c) out += static_cast<char>('A' + base_.at(r, c) - 1);
    }
    return out;
  }

  friend bool operator==(const SymmetrizedTableau& x, const SymmetrizedTableau& y)
  {
    return x.canonical_ == y.canonical_;
  }

 private:
  Filling base_;
  Filling canonical_;
};

/// Maximal groups of identical columns (0-based indices), ordered by first member.
inline std::vector<std::vector<int>> coinciding_column_groups(const SymmetrizedTableau& f)
{
  const Filling& t = f.canonical();
  std::vector<std::vector<int>> groups;
  std::vector<std::vector<int>> reps;
  for (int c = 0; c < t.columns(); ++c) {
    auto col = t.column(c);
    auto it = std::find(reps.begin(), reps.end(), col);
    if (it == reps.end()) {
      reps.push_back(std::move(col));
      groups.push_back({c});
    } else {
      groups[static_cast<std::size_t>(it - reps.begin())].push_back(c);
    }
  }
  return groups;
}

} // namespace foulkes
