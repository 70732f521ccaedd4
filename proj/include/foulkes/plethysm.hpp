#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "partition.hpp"

namespace foulkes {

namespace detail {

// Counts multisets of `a` degree-b monomials in n variables by their total
// exponent vector. The memo is keyed on (monomial index, remaining count,
// residual weight) and is shared by every target weight of one (a, b, n).
class WeightCounter {
 public:
  WeightCounter(int a, int b, int n) : a_(a), b_(b), n_(n)
  {
    std::vector<int> e(static_cast<std::size_t>(n), 0);
    gen_monomials(0, b, e);
  }

  std::uint64_t count(std::span<const int> mu)
  {
    std::vector<int> w(mu.begin(), mu.end());
    // weight spaces are symmetric under permuting coordinates
    std::sort(w.begin(), w.end(), std::greater<>());
    return rec(0, a_, w);
  }

 private:
  struct KeyHash {
    std::size_t operator()(const std::vector<int>& k) const noexcept
    {
      std::size_t h = 1469598103934665603ULL;
      for (int x : k) h = (h ^ static_cast<std::size_t>(x + 1)) * 1099511628211ULL;
      return h;
    }
  };

  void gen_monomials(int var, int left, std::vector<int>& e)
  {
    if (var == n_ - 1) {
      e[static_cast<std::size_t>(var)] = left;
      monomials_.push_back(e);
      return;
    }
    for (int d = left; d >= 0; --d) {
      e[static_cast<std::size_t>(var)] = d;
      gen_monomials(var + 1, left - d, e);
    }
  }

  std::uint64_t rec(std::size_t mono, int left, std::vector<int>& w)
  {
    if (left == 0) return std::all_of(w.begin(), w.end(), [](int x) { return x == 0; }) ? 1 : 0;
    if (mono == monomials_.size()) return 0;
    std::vector<int> key;
    key.reserve(w.size() + 2);
    key.push_back(static_cast<int>(mono));
    key.push_back(left);
    key.insert(key.end(), w.begin(), w.end());
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    const auto& e = monomials_[mono];
    std::uint64_t total = 0;
    int taken = 0;
    for (;;) {
      total += rec(mono + 1, left - taken, w);
      if (taken == left) break;
      bool fits = true;
      for (int i = 0; i < n_; ++i)
        if (w[static_cast<std::size_t>(i)] < e[static_cast<std::size_t>(i)]) fits = false;
      if (!fits) break;
      for (int i = 0; i < n_; ++i) w[static_cast<std::size_t>(i)] -= e[static_cast<std::size_t>(i)];
      ++taken;
    }
    for (int i = 0; i < n_; ++i) w[static_cast<std::size_t>(i)] += taken * e[static_cast<std::size_t>(i)];
    memo_.emplace(std::move(key), total);
    return total;
  }

  int a_, b_, n_;
  std::vector<std::vector<int>> monomials_;
  std::unordered_map<std::vector<int>, std::uint64_t, KeyHash> memo_;
};

} // namespace detail

/// Dimension of the mu-weight space of Sym^a Sym^b V with dim V = mu.size().
inline std::uint64_t weight_multiplicity(int a, int b, std::span<const int> mu)
{
  if (a < 1 || b < 1) throw std::invalid_argument("weight_multiplicity: a, b must be >= 1");
  if (mu.empty()) throw std::invalid_argument("weight_multiplicity: empty weight");
  long total = 0;
  for (int x : mu) {
    if (x < 0) throw std::invalid_argument("weight_multiplicity: negative coordinate");
    total += x;
  }
  if (total != static_cast<long>(a) * b) throw std::invalid_argument("weight_multiplicity: weight does not sum to a*b");
  detail::WeightCounter counter(a, b, static_cast<int>(mu.size()));
  return counter.count(mu);
}

/// Multiplicity of the irreducible type lambda in Sym^a Sym^b V.
///
/// Computed from weight multiplicities in n = rows(lambda) variables by the
/// alternating sum over S_n: sum sgn(w) * m(lambda + delta - w(delta)).
/// Permutations are enumerated with backtracking that drops branches as soon
/// as a coordinate goes negative.
inline std::int64_t plethysm_coefficient(int a, int b, const Partition& lambda)
{
  if (a < 1 || b < 1) throw std::invalid_argument("plethysm_coefficient: a, b must be >= 1");
  if (lambda.weight() != a * b) throw std::invalid_argument("plethysm_coefficient: |lambda| != a*b");
  const int n = lambda.rows();
  detail::WeightCounter counter(a, b, n);

  std::vector<int> shifted(static_cast<std::size_t>(n));  // lambda + delta
  for (int i = 0; i < n; ++i) shifted[static_cast<std::size_t>(i)] = lambda[i] + (n - 1 - i);

  std::vector<int> mu(static_cast<std::size_t>(n));
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  std::int64_t total = 0;
  // position i receives delta value d = n-1-j for some unused j; track inversions for the sign
  auto rec = [&](auto&& self, int i, int inversions) -> void {
    if (i == n) {
      const auto m = static_cast<std::int64_t>(counter.count(mu));
      total += (inversions % 2 ? -m : m);
      return;
    }
    int smaller_unused = 0;  // unused j' < j seen so far
    for (int j = 0; j < n; ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      const int value = shifted[static_cast<std::size_t>(i)] - (n - 1 - j);
      if (value >= 0) {
        used[static_cast<std::size_t>(j)] = 1;
        mu[static_cast<std::size_t>(i)] = value;
        self(self, i + 1, inversions + smaller_unused);
        used[static_cast<std::size_t>(j)] = 0;
      }
      ++smaller_unused;
    }
  };
  rec(rec, 0, 0);
  if (total < 0) throw std::logic_error("plethysm_coefficient: negative alternating sum");
  return total;
}

} // namespace foulkes
