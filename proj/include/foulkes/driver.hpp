#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "bigint.hpp"
#include "errors.hpp"
#include "evaluation.hpp"
#include "filling.hpp"
#include "linalg.hpp"
#include "partition.hpp"
#include "plethysm.hpp"
#include "rng.hpp"

namespace foulkes {

/// Source = Sym^a Sym^b V (content a x b), Target = Sym^b Sym^a V (content b x a).
enum class Side { Source, Target };

inline const char* side_name(Side s) { return s == Side::Source ? "source" : "target"; }

struct RetryPolicy {
  int draws_per_dim = 10;        // nonzero but dependent draws per point set, times dim
  int point_sets = 5;            // point regenerations before giving up
  int idle_draws_per_dim = 1000; // draws that vanish at every point or repeat, times dim
};

/// Certified basis of the type-lambda highest weight vectors of one side,
/// together with points on which its evaluation matrix is invertible.
struct HwvBasis {
  Side side = Side::Source;
  int symbols = 0;  // letters of each tableau
  int repeats = 0;  // copies of each letter
  Partition lambda;
  std::vector<SymmetrizedTableau> tableaux;
  std::vector<Point> points;
  IntMatrix eval;  // eval(i, j) = tableau i at point j
  int dim = 0;
};

inline std::uint64_t partition_tag(const Partition& lambda)
{
  std::uint64_t h = mix64(static_cast<std::uint64_t>(lambda.rows()));
  for (int part : lambda.parts()) h = mix64(h ^ static_cast<std::uint64_t>(part));
  return h;
}

// Sub-seed streams. Every draw depends only on (seed, side, lambda, attempt, index).
enum : std::uint64_t { kPointStream = 1, kTableauStream = 2 };

inline HwvBasis build_hwv_basis(Side side, int a, int b, const Partition& lambda, std::uint64_t seed,
                                RetryPolicy retry = {})
{
  if (a < 1 || b < 1) throw std::invalid_argument("build_hwv_basis: a, b must be >= 1");
  if (lambda.weight() != a * b) throw std::invalid_argument("build_hwv_basis: |lambda| != a*b");
  HwvBasis out;
  out.side = side;
  out.symbols = side == Side::Source ? a : b;
  out.repeats = side == Side::Source ? b : a;
  out.lambda = lambda;
  out.dim = static_cast<int>(plethysm_coefficient(out.symbols, out.repeats, lambda));
  if (out.dim == 0) return out;

  const int n = lambda.rows();
  const ContentSpec content{out.symbols, out.repeats};
  const auto lengths = column_lengths(lambda);
  const std::uint64_t side_tag = side == Side::Source ? 0 : 1;
  const std::uint64_t shape_tag = partition_tag(lambda);

  for (int attempt = 0; attempt < retry.point_sets; ++attempt) {
    std::vector<Point> points;
    std::vector<MinorCache> caches;
    for (int j = 0; j < out.dim; ++j) {
      points.push_back(random_point(out.symbols, n, out.repeats,
                                    derive_seed(seed, {side_tag, shape_tag, static_cast<std::uint64_t>(attempt),
                                                       kPointStream, static_cast<std::uint64_t>(j)})));
      caches.emplace_back(points.back(), lengths);
    }

    RowBasis basis(out.dim);
    std::vector<SymmetrizedTableau> chosen;
    std::set<Filling> tried;
    // Only a nonzero row that fails to extend the basis is evidence against
    // the points. Tableaux whose symmetrization vanishes are common for some
    // shapes and are budgeted separately.
    const int budget = retry.draws_per_dim * out.dim;
    const int idle_budget = retry.idle_draws_per_dim * out.dim;
    int dependent = 0, idle = 0;
    for (int draw = 0; dependent < budget && idle < idle_budget && basis.size() < out.dim; ++draw) {
      auto t = random_semistandard(lambda, content,
                                   derive_seed(seed, {side_tag, shape_tag, static_cast<std::uint64_t>(attempt),
                                                      kTableauStream, static_cast<std::uint64_t>(draw)}));
      if (!t) throw RetryExhausted("no semistandard tableau of shape " + lambda.to_string() + " although dim = " +
                                   std::to_string(out.dim));
      SymmetrizedTableau f(*t);
      if (!tried.insert(f.canonical()).second) {
        ++idle;
        continue;
      }
      std::vector<BigInt> row;
      row.reserve(static_cast<std::size_t>(out.dim));
      for (int j = 0; j < out.dim; ++j)
        row.push_back(evaluate_tableau(f.base(), points[static_cast<std::size_t>(j)], caches[static_cast<std::size_t>(j)]));
      if (std::all_of(row.begin(), row.end(), [](const BigInt& x) { return sgn(x) == 0; }))
        ++idle;
      else if (basis.try_add_row(row))
        chosen.push_back(std::move(f));
      else
        ++dependent;
    }
    if (basis.size() < out.dim) continue;

    out.eval = IntMatrix::from_rows(basis.rows());
    if (rank(out.eval) != out.dim) throw std::logic_error("build_hwv_basis: accepted rows are not independent");
    out.tableaux = std::move(chosen);
    out.points = std::move(points);
    return out;
  }
  throw RetryExhausted(std::string(side_name(side)) + " basis for lambda = " + lambda.to_string() + " at (a,b) = (" +
                       std::to_string(a) + "," + std::to_string(b) + ") saturated below dim " +
                       std::to_string(out.dim) + " after " + std::to_string(retry.point_sets) + " point sets");
}

enum class ReportStatus { Ok, Skipped, RetryExhausted, ConjectureWitness, Failed };

inline const char* status_name(ReportStatus s)
{
  switch (s) {
    case ReportStatus::Ok: return "ok";
    case ReportStatus::Skipped: return "skipped";
    case ReportStatus::RetryExhausted: return "retry_exhausted";
    case ReportStatus::ConjectureWitness: return "conjecture_witness";
    case ReportStatus::Failed: return "failed";
  }
  return "failed";
}

struct KernelReport {
  int a = 0;
  int b = 0;
  Partition lambda;
  std::int64_t p = 0;
  std::int64_t p_prime = 0;
  int rank = 0;
  std::int64_t kernel_mult = 0;
  std::uint64_t seed = 0;
  ReportStatus status = ReportStatus::Ok;
  std::string error;
  double elapsed = 0;  // seconds; kept out of the report file so reruns compare byte for byte
  std::vector<Filling> source_tableaux;
  std::vector<Point> source_points;
  std::vector<Filling> target_tableaux;
  std::vector<Point> target_points;
  IntMatrix matrix;  // matrix(j, i) = Psi(f_i) at v'_j
};

/// Everything about one lambda that precedes the Psi evaluations.
struct KernelProblem {
  int a = 0;
  int b = 0;
  Partition lambda;
  std::uint64_t seed = 0;
  std::int64_t p = 0;
  std::int64_t p_prime = 0;
  HwvBasis source;
  HwvBasis target;
  std::vector<MinorCache> target_caches;

  int rows() const { return static_cast<int>(target.points.size()); }
  int cols() const { return static_cast<int>(source.tableaux.size()); }
  std::size_t entry_count() const { return static_cast<std::size_t>(rows()) * static_cast<std::size_t>(cols()); }
};

inline KernelProblem prepare_kernel_problem(int a, int b, const Partition& lambda, std::uint64_t seed,
                                            RetryPolicy retry = {})
{
  if (a < 1 || b < 1) throw std::invalid_argument("kernel: a, b must be >= 1");
  if (lambda.weight() != a * b)
    throw std::invalid_argument("kernel: |lambda| = " + std::to_string(lambda.weight()) + " but a*b = " +
                                std::to_string(a * b));
  KernelProblem pr;
  pr.a = a;
  pr.b = b;
  pr.lambda = lambda;
  pr.seed = seed;
  pr.p = plethysm_coefficient(a, b, lambda);
  pr.p_prime = plethysm_coefficient(b, a, lambda);
  if (pr.p == 0) return pr;
  if (a <= b && pr.p > pr.p_prime)
    throw ConjectureWitness("p = " + std::to_string(pr.p) + " > p' = " + std::to_string(pr.p_prime) +
                            " for lambda = " + lambda.to_string() + " at (a,b) = (" + std::to_string(a) + "," +
                            std::to_string(b) + ")");
  pr.source = build_hwv_basis(Side::Source, a, b, lambda, seed, retry);
  if (pr.p_prime == 0) return pr;
  pr.target = build_hwv_basis(Side::Target, a, b, lambda, seed, retry);
  const auto lengths = column_lengths(lambda);
  for (const auto& v : pr.target.points) pr.target_caches.emplace_back(v, lengths);
  return pr;
}

/// Shard C's part of M[j][i] = Psi(f_i)(v'_j).
inline BigInt evaluate_entry(const KernelProblem& pr, int i, int j, const ShardSpec& shard = {},
                             SearchOptions search = {})
{
  return evaluate_psi_image(pr.source.tableaux[static_cast<std::size_t>(i)], pr.target.points[static_cast<std::size_t>(j)],
                            pr.target_caches[static_cast<std::size_t>(j)], shard, search);
}

/// The report fields fixed before any Psi evaluation.
inline KernelReport report_head(const KernelProblem& pr)
{
  KernelReport r;
  r.a = pr.a;
  r.b = pr.b;
  r.lambda = pr.lambda;
  r.seed = pr.seed;
  r.p = pr.p;
  r.p_prime = pr.p_prime;
  r.status = pr.p == 0 ? ReportStatus::Skipped : ReportStatus::Ok;
  for (const auto& f : pr.source.tableaux) r.source_tableaux.push_back(f.base());
  r.source_points = pr.source.points;
  for (const auto& f : pr.target.tableaux) r.target_tableaux.push_back(f.base());
  r.target_points = pr.target.points;
  return r;
}

inline KernelReport finish_report(const KernelProblem& pr, IntMatrix matrix)
{
  KernelReport r = report_head(pr);
  if (matrix.rows() != pr.rows() || matrix.cols() != pr.cols())
    throw std::logic_error("finish_report: matrix has the wrong size");
  r.rank = rank(matrix);
  r.matrix = std::move(matrix);
  r.kernel_mult = pr.p - r.rank;
  return r;
}

inline KernelReport error_report(int a, int b, const Partition& lambda, std::uint64_t seed, ReportStatus status,
                                 std::string message)
{
  KernelReport r;
  r.a = a;
  r.b = b;
  r.lambda = lambda;
  r.seed = seed;
  r.status = status;
  r.error = std::move(message);
  try {
    r.p = plethysm_coefficient(a, b, lambda);
    r.p_prime = plethysm_coefficient(b, a, lambda);
  } catch (const std::exception&) {
  }
  r.kernel_mult = -1;
  return r;
}

inline int default_workers()
{
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

/// Runs fn(k) for k in [0, count) on `workers` threads. Every index runs even if
/// some throw; the exception of the smallest failing index is rethrown.
template <class Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn)
{
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < count;) {
      try {
        fn(k);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const int threads = static_cast<int>(std::min<std::size_t>(count, static_cast<std::size_t>(std::max(workers, 1))));
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

struct KernelOptions {
  int depth = 0;   // shard tree depth
  int shards = 1;  // every shard is evaluated; their sum is the entry
  SearchOptions search;
  int workers = 1;
  RetryPolicy retry;
};

namespace detail {

// Fills every matrix of `problems` using one task per (problem, j, i, shard).
inline std::vector<IntMatrix> evaluate_all(const std::vector<const KernelProblem*>& problems,
                                           const KernelOptions& opt)
{
  struct Task {
    std::size_t problem;
    int i, j, shard;
  };
  std::vector<Task> tasks;
  std::vector<IntMatrix> out;
  for (std::size_t q = 0; q < problems.size(); ++q) {
    const auto& pr = *problems[q];
    out.emplace_back(pr.rows(), pr.cols());
    for (int j = 0; j < pr.rows(); ++j)
      for (int i = 0; i < pr.cols(); ++i)
        for (int c = 0; c < opt.shards; ++c) tasks.push_back({q, i, j, c});
  }
  std::vector<BigInt> values(tasks.size());
  parallel_for(tasks.size(), opt.workers, [&](std::size_t k) {
    const Task& t = tasks[k];
    values[k] = evaluate_entry(*problems[t.problem], t.i, t.j, ShardSpec{opt.depth, opt.shards, t.shard}, opt.search);
  });
  // fixed summation order, independent of scheduling
  for (std::size_t k = 0; k < tasks.size(); ++k) out[tasks[k].problem](tasks[k].j, tasks[k].i) += values[k];
  return out;
}

} // namespace detail

/// mult_lambda(ker Psi_{a,b}) = p - rank of the p' x p matrix of Psi(f_i)(v'_j).
/// Throws RetryExhausted and ConjectureWitness.
inline KernelReport kernel_multiplicity(int a, int b, const Partition& lambda, std::uint64_t seed,
                                        const KernelOptions& opt = {})
{
  ShardSpec{opt.depth, opt.shards, 0}.validate();
  const auto start = std::chrono::steady_clock::now();
  const KernelProblem pr = prepare_kernel_problem(a, b, lambda, seed, opt.retry);
  auto matrices = detail::evaluate_all({&pr}, opt);
  KernelReport r = finish_report(pr, std::move(matrices.front()));
  r.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

/// Types lambda of weight a*b with at most a rows, optionally restricted to `filter`.
inline std::vector<Partition> kernel_partitions(int a, int b, const std::optional<std::vector<Partition>>& filter)
{
  if (a < 1 || b < 1) throw std::invalid_argument("a, b must be >= 1");
  std::vector<Partition> out;
  for (auto& lambda : enumerate_partitions(a * b, a))
    if (!filter || std::find(filter->begin(), filter->end(), lambda) != filter->end()) out.push_back(std::move(lambda));
  return out;
}

/// One report per lambda. A failing lambda yields an error report; the
/// others still run.
inline std::vector<KernelReport> decompose_kernel(int a, int b, const std::optional<std::vector<Partition>>& filter,
                                                  std::uint64_t seed, const KernelOptions& opt = {})
{
  ShardSpec{opt.depth, opt.shards, 0}.validate();
  if (filter)
    for (const auto& lambda : *filter)
      if (lambda.weight() != a * b)
        throw std::invalid_argument("lambda " + lambda.to_string() + " does not have weight a*b = " +
                                    std::to_string(a * b));
  const auto lambdas = kernel_partitions(a, b, filter);
  const auto start = std::chrono::steady_clock::now();

  std::vector<std::optional<KernelProblem>> problems(lambdas.size());
  std::vector<KernelReport> reports(lambdas.size());
  parallel_for(lambdas.size(), opt.workers, [&](std::size_t k) {
    const auto& lambda = lambdas[k];
    try {
      problems[k] = prepare_kernel_problem(a, b, lambda, seed, opt.retry);
    } catch (const RetryExhausted& e) {
      reports[k] = error_report(a, b, lambda, seed, ReportStatus::RetryExhausted, e.what());
    } catch (const ConjectureWitness& e) {
      reports[k] = error_report(a, b, lambda, seed, ReportStatus::ConjectureWitness, e.what());
    } catch (const std::exception& e) {
      reports[k] = error_report(a, b, lambda, seed, ReportStatus::Failed, e.what());
    }
  });

  std::vector<const KernelProblem*> ready;
  for (const auto& pr : problems)
    if (pr) ready.push_back(&*pr);
  auto matrices = detail::evaluate_all(ready, opt);
  std::size_t next = 0;
  for (std::size_t k = 0; k < lambdas.size(); ++k)
    if (problems[k]) reports[k] = finish_report(*problems[k], std::move(matrices[next++]));
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (auto& r : reports) r.elapsed = elapsed;
  return reports;
}

} // namespace foulkes
