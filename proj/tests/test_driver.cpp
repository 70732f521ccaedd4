#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include <foulkes/checkpoint.hpp>
#include <foulkes/driver.hpp>
#include <foulkes/report_io.hpp>
#include <foulkes/straighten.hpp>

#include "oracles.hpp"

using foulkes::KernelOptions;
using foulkes::Partition;
using foulkes::Side;

namespace {

std::vector<std::pair<int, int>> small_pairs(int max_product)
{
  std::vector<std::pair<int, int>> out;
  for (int a = 2; a <= max_product / 2; ++a)
    for (int b = 2; a * b <= max_product; ++b) out.push_back({a, b});
  return out;
}

std::filesystem::path scratch_dir(const std::string& name)
{
  auto dir = std::filesystem::temp_directory_path() / ("foulkes-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// kernel dimension of Psi on the basis f_i, computed in the straightened basis
std::int64_t symbolic_kernel(const foulkes::KernelProblem& pr)
{
  std::vector<foulkes::TableauSum> images;
  for (const auto& f : pr.source.tableaux) images.push_back(foulkes::apply_psi_symbolic(f));
  return pr.p - oracle::rational_rank(oracle::coefficient_matrix(images));
}

} // namespace

TEST(HwvBasis, CertifiedFullRank)
{
  for (auto [a, b] : small_pairs(12))
    for (const auto& lambda : foulkes::kernel_partitions(a, b, std::nullopt))
      for (Side side : {Side::Source, Side::Target}) {
        const auto basis = foulkes::build_hwv_basis(side, a, b, lambda, 5);
        const int expected = static_cast<int>(side == Side::Source ? foulkes::plethysm_coefficient(a, b, lambda)
                                                                   : foulkes::plethysm_coefficient(b, a, lambda));
        ASSERT_EQ(basis.dim, expected);
        ASSERT_EQ(static_cast<int>(basis.tableaux.size()), expected);
        ASSERT_EQ(static_cast<int>(basis.points.size()), expected);
        if (expected == 0) continue;
        EXPECT_EQ(basis.eval.rows(), expected);
        EXPECT_EQ(basis.eval.cols(), expected);
        EXPECT_EQ(oracle::rational_rank(basis.eval), expected);
        for (const auto& f : basis.tableaux) EXPECT_TRUE(foulkes::is_semistandard(f.base()));
      }
}

TEST(HwvBasis, DeterministicPerSeed)
{
  const auto x = foulkes::build_hwv_basis(Side::Target, 4, 4, {8, 4, 4}, 3);
  const auto y = foulkes::build_hwv_basis(Side::Target, 4, 4, {8, 4, 4}, 3);
  ASSERT_EQ(x.dim, 2);
  EXPECT_EQ(x.eval, y.eval);
  EXPECT_EQ(x.points, y.points);
  for (std::size_t i = 0; i < x.tableaux.size(); ++i) EXPECT_EQ(x.tableaux[i].base(), y.tableaux[i].base());
}

TEST(HwvBasis, ZeroDimensionIsEmpty)
{
  const auto basis = foulkes::build_hwv_basis(Side::Source, 2, 2, {3, 1}, 1);
  EXPECT_EQ(basis.dim, 0);
  EXPECT_TRUE(basis.tableaux.empty());
}

TEST(HwvBasis, EmptyBudgetIsReported)
{
  EXPECT_THROW(foulkes::build_hwv_basis(Side::Source, 3, 3, {5, 2, 2}, 1, foulkes::RetryPolicy{0, 5}),
               foulkes::RetryExhausted);
  EXPECT_THROW(foulkes::build_hwv_basis(Side::Source, 3, 3, {5, 2, 2}, 1, foulkes::RetryPolicy{10, 0}),
               foulkes::RetryExhausted);
}

TEST(HwvBasis, SparseGeneratorsStillFound)
{
  // Only 14 of the 126 semistandard tableaux symmetrize to something nonzero.
  for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
    const auto basis = foulkes::build_hwv_basis(Side::Target, 5, 5, {11, 5, 5, 3, 1}, seed);
    EXPECT_EQ(basis.dim, 1);
    EXPECT_EQ(basis.tableaux.size(), 1u);
  }
}

TEST(Kernel, TwoByTwoIsInjective)
{
  for (const auto& r : foulkes::decompose_kernel(2, 2, std::nullopt, 1)) {
    EXPECT_EQ(r.kernel_mult, 0) << r.lambda.to_string();
    EXPECT_EQ(r.status, r.p ? foulkes::ReportStatus::Ok : foulkes::ReportStatus::Skipped);
  }
}

TEST(Kernel, RejectsWrongWeight)
{
  EXPECT_THROW(foulkes::kernel_multiplicity(3, 3, {4, 4}, 1), std::invalid_argument);
  EXPECT_THROW(foulkes::decompose_kernel(3, 3, std::vector<Partition>{{4, 4}}, 1), std::invalid_argument);
}

TEST(Kernel, FilterYieldsOneReport)
{
  const auto reports = foulkes::decompose_kernel(3, 3, std::vector<Partition>{{5, 2, 2}}, 1);
  ASSERT_EQ(reports.size(), 1u);
  EXPECT_EQ(reports[0].lambda, Partition({5, 2, 2}));
}

TEST(Kernel, MultiplicityWithinBoundsAndMatchesSymbolicRank)
{
  for (auto [a, b] : small_pairs(9))
    for (const auto& lambda : foulkes::kernel_partitions(a, b, std::nullopt)) {
      const auto pr = foulkes::prepare_kernel_problem(a, b, lambda, 2);
      const auto r = foulkes::kernel_multiplicity(a, b, lambda, 2);
      EXPECT_GE(r.kernel_mult, 0);
      EXPECT_LE(r.kernel_mult, r.p);
      EXPECT_EQ(r.kernel_mult, r.p - r.rank);
      if (r.p) {
        EXPECT_EQ(r.kernel_mult, symbolic_kernel(pr)) << a << "," << b << " " << lambda.to_string();
      }
    }
}

TEST(Kernel, TransposedMapHasTheSameRank)
{
  // Psi_{b,a} is the transpose of Psi_{a,b}, so the ranks agree and the
  // kernel of the wider side is p - p'
  for (auto [a, b] : small_pairs(12)) {
    if (a >= b) continue;
    for (const auto& lambda : foulkes::kernel_partitions(b, a, std::nullopt)) {
      const auto wide = foulkes::kernel_multiplicity(b, a, lambda, 4);
      const auto narrow = foulkes::kernel_multiplicity(a, b, lambda, 4);
      EXPECT_EQ(wide.rank, narrow.rank) << lambda.to_string();
      EXPECT_EQ(wide.kernel_mult, wide.p - wide.p_prime) << lambda.to_string();
    }
  }
}

TEST(Kernel, IndependentOfSeed)
{
  for (auto [a, b] : small_pairs(12)) {
    const auto base = foulkes::decompose_kernel(a, b, std::nullopt, 1);
    for (std::uint64_t seed : {2u, 3u, 1234567u}) {
      const auto other = foulkes::decompose_kernel(a, b, std::nullopt, seed);
      ASSERT_EQ(other.size(), base.size());
      for (std::size_t k = 0; k < base.size(); ++k) {
        EXPECT_EQ(other[k].kernel_mult, base[k].kernel_mult) << a << "," << b << " " << base[k].lambda.to_string();
        EXPECT_EQ(other[k].rank, base[k].rank);
      }
    }
  }
}

TEST(Kernel, ReportsAreDeterministicAcrossWorkersAndShards)
{
  std::string reference;
  for (const auto& r : foulkes::decompose_kernel(4, 3, std::nullopt, 9)) reference += foulkes::report_line(r);
  for (int workers : {1, 3, 8})
    for (auto [depth, shards] : std::vector<std::pair<int, int>>{{0, 1}, {1, 3}, {2, 4}}) {
      KernelOptions opt;
      opt.workers = workers;
      opt.depth = depth;
      opt.shards = shards;
      std::string text;
      for (const auto& r : foulkes::decompose_kernel(4, 3, std::nullopt, 9, opt)) text += foulkes::report_line(r);
      EXPECT_EQ(text, reference) << workers << " " << depth << " " << shards;
    }
}

TEST(Kernel, ErrorsStayPerLambda)
{
  KernelOptions opt;
  opt.retry = foulkes::RetryPolicy{0, 1};
  const auto reports = foulkes::decompose_kernel(3, 3, std::nullopt, 1, opt);
  for (const auto& r : reports) {
    if (r.p == 0)
      EXPECT_EQ(r.status, foulkes::ReportStatus::Skipped);
    else
      EXPECT_EQ(r.status, foulkes::ReportStatus::RetryExhausted) << r.lambda.to_string();
  }
  EXPECT_THROW(foulkes::kernel_multiplicity(3, 3, {5, 2, 2}, 1, opt), foulkes::RetryExhausted);
}

TEST(Merge, SingleFileIsIdentity)
{
  const auto pr = foulkes::prepare_kernel_problem(3, 3, {4, 4, 1}, 1);
  const auto merged = foulkes::checkpoint_merge({foulkes::run_shard(pr, {0, 1, 0}, {}, 1)});
  ASSERT_EQ(merged.size(), 1u);
  EXPECT_EQ(foulkes::report_line(merged[0]), foulkes::report_line(foulkes::kernel_multiplicity(3, 3, {4, 4, 1}, 1)));
}

TEST(Merge, ThreeShardsMatchUnsharded)
{
  for (const Partition& lambda : {Partition{6, 4, 2}, Partition{4, 4, 4}, Partition{8, 2, 2}}) {
    const auto pr = foulkes::prepare_kernel_problem(3, 4, lambda, 6);
    std::vector<foulkes::ShardFile> files;
    for (int c = 0; c < 3; ++c) files.push_back(foulkes::run_shard(pr, {1, 3, c}, {}, 2));
    const auto merged = foulkes::checkpoint_merge(files);
    ASSERT_EQ(merged.size(), 1u);
    EXPECT_EQ(foulkes::report_line(merged[0]), foulkes::report_line(foulkes::kernel_multiplicity(3, 4, lambda, 6)));
  }
}

TEST(Merge, CoverageErrors)
{
  const auto pr = foulkes::prepare_kernel_problem(3, 4, {6, 4, 2}, 6);
  std::vector<foulkes::ShardFile> files;
  for (int c = 0; c < 3; ++c) files.push_back(foulkes::run_shard(pr, {1, 3, c}, {}, 1));

  auto missing_shard = files;
  missing_shard.pop_back();
  EXPECT_THROW(foulkes::checkpoint_merge(missing_shard), foulkes::IncompleteCoverage);

  auto twice = files;
  twice.push_back(files[1]);
  EXPECT_THROW(foulkes::checkpoint_merge(twice), foulkes::DuplicateShard);

  auto repeated_entry = files;
  repeated_entry[0].entries.push_back(repeated_entry[0].entries.front());
  EXPECT_THROW(foulkes::checkpoint_merge(repeated_entry), foulkes::DuplicateShard);

  auto missing_entry = files;
  missing_entry[2].entries.pop_back();
  EXPECT_THROW(foulkes::checkpoint_merge(missing_entry), foulkes::IncompleteCoverage);

  auto other_plan = files;
  other_plan[1].depth = 2;
  EXPECT_THROW(foulkes::checkpoint_merge(other_plan), foulkes::DuplicateShard);
}

TEST(Checkpoint, RoundTripAndResume)
{
  const auto dir = scratch_dir("resume");
  const auto pr = foulkes::prepare_kernel_problem(4, 4, {12, 4}, 2);
  ASSERT_GT(pr.entry_count(), 1u);
  const auto path = foulkes::shard_path(dir, 4, 4, pr.lambda, 1, 2);
  EXPECT_EQ(path, dir / "4x4" / "12,4" / "shard-1-of-2.jsonl");

  const auto full = foulkes::run_shard(pr, {1, 2, 1}, {}, 1, path);
  const auto reread = foulkes::read_shard_file(path);
  EXPECT_EQ(foulkes::shard_header_json(reread), foulkes::shard_header_json(full));
  ASSERT_EQ(reread.entries.size(), full.entries.size());

  // keep the header and one entry, then a torn line
  std::ifstream in(path);
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  in.close();
  {
    std::ofstream out(path, std::ios::trunc);
    out << header << '\n' << first << '\n' << "{\"kind\":\"entry\",\"f\":0,\"po";
  }
  EXPECT_EQ(foulkes::read_shard_file(path).entries.size(), 1u);
  const auto resumed = foulkes::run_shard(pr, {1, 2, 1}, {}, 1, path);
  ASSERT_EQ(resumed.entries.size(), full.entries.size());
  for (std::size_t k = 0; k < full.entries.size(); ++k) EXPECT_EQ(resumed.entries[k].value, full.entries[k].value);
  EXPECT_EQ(foulkes::read_shard_file(path).entries.size(), full.entries.size());

  // a checkpoint of another run is refused
  const auto other = foulkes::prepare_kernel_problem(4, 4, {12, 4}, 3);
  EXPECT_THROW(foulkes::run_shard(other, {1, 2, 1}, {}, 1, path), std::runtime_error);
  std::filesystem::remove_all(dir);
}

TEST(ReportIo, PointAndMatrixRoundTrip)
{
  const auto v = foulkes::random_point(3, 4, 2, 8);
  EXPECT_EQ(foulkes::point_from_json(foulkes::point_to_json(v)), v);
  foulkes::IntMatrix m(2, 2);
  m(0, 0) = foulkes::parse_bigint("123456789012345678901234567890");
  m(1, 1) = -7;
  EXPECT_EQ(foulkes::matrix_from_json(foulkes::matrix_to_json(m), 2, 2), m);
  EXPECT_EQ(foulkes::matrix_to_json(m).dump(), R"([["123456789012345678901234567890","0"],["0","-7"]])");
}
