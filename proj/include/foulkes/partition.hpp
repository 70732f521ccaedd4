#pragma once

#include <algorithm>
#include <compare>
#include <charconv>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bigint.hpp"

namespace foulkes {

/// An integer partition: weakly decreasing positive parts.
class Partition {
 public:
  Partition() = default;

  explicit Partition(std::vector<int> parts) : parts_(std::move(parts))
  {
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (parts_[i] < 1) throw std::invalid_argument("partition parts must be positive");
      if (i > 0 && parts_[i] > parts_[i - 1])
        throw std::invalid_argument("partition parts must be weakly decreasing");
    }
  }

  Partition(std::initializer_list<int> parts) : Partition(std::vector<int>(parts)) {}

  std::span<const int> parts() const { return parts_; }
  int rows() const { return static_cast<int>(parts_.size()); }
  int weight() const { return std::accumulate(parts_.begin(), parts_.end(), 0); }
  bool empty() const { return parts_.empty(); }

  // Row length, 0 past the last row.
  int operator[](int row) const { return row < rows() ? parts_[static_cast<std::size_t>(row)] : 0; }

  Partition conjugate() const
  {
    std::vector<int> cols;
    if (!parts_.empty()) {
      cols.resize(static_cast<std::size_t>(parts_.front()), 0);
      for (int len : parts_)
        for (int c = 0; c < len; ++c) ++cols[static_cast<std::size_t>(c)];
    }
    return Partition(std::move(cols));
  }

  std::string to_string() const
  {
    std::string out;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(parts_[i]);
    }
    return out;
  }

  // Inverse of to_string: "14,7,2,2".
  static Partition parse(std::string_view text)
  {
    std::vector<int> parts;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      auto comma = text.find(',', pos);
      if (comma == std::string_view::npos) comma = text.size();
      auto field = text.substr(pos, comma - pos);
      while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
      while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
      int value = 0;
      auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
      if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size())
        throw std::invalid_argument("malformed partition: '" + std::string(text) + "'");
      parts.push_back(value);
      pos = comma + 1;
    }
    return Partition(std::move(parts));
  }

  friend bool operator==(const Partition&, const Partition&) = default;
  friend auto operator<=>(const Partition&, const Partition&) = default;

 private:
  std::vector<int> parts_;
};

namespace detail {

inline void partitions_rec(int remaining, int max_part, int rows_left, std::vector<int>& prefix,
                           std::vector<Partition>& out)
{
  if (remaining == 0) {
    out.emplace_back(prefix);
    return;
  }
  if (rows_left == 0) return;
  for (int part = std::min(remaining, max_part); part >= 1; --part) {
    // the remaining rows can hold at most part * rows_left boxes
    if (static_cast<long>(part) * rows_left < remaining) break;
    prefix.push_back(part);
    partitions_rec(remaining - part, part, rows_left - 1, prefix, out);
    prefix.pop_back();
  }
}

} // namespace detail

/// All partitions of `weight` with at most `max_rows` parts, reverse-lexicographic.
inline std::vector<Partition> enumerate_partitions(int weight, int max_rows)
{
  if (weight < 1 || max_rows < 1) throw std::invalid_argument("enumerate_partitions: weight and max_rows must be >= 1");
  std::vector<Partition> out;
  std::vector<int> prefix;
  detail::partitions_rec(weight, weight, max_rows, prefix, out);
  return out;
}

/// Dimension of the irreducible GL_n module of type lambda (hook-content formula).
inline BigInt schur_dimension(const Partition& lambda, int n)
{
  if (lambda.rows() > n) return 0;
  const Partition conj = lambda.conjugate();
  BigInt num = 1, den = 1;
  for (int r = 0; r < lambda.rows(); ++r) {
    for (int c = 0; c < lambda[r]; ++c) {
      num *= n + c - r;
      den *= (lambda[r] - c - 1) + (conj[c] - r - 1) + 1;
    }
  }
  return num / den;
}

} // namespace foulkes
