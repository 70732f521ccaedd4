#include <gtest/gtest.h>

#include <foulkes/evaluation.hpp>
#include <foulkes/straighten.hpp>

using foulkes::BigInt;
using foulkes::ContentSpec;
using foulkes::Filling;
using foulkes::MinorCache;
using foulkes::Partition;
using foulkes::Point;
using foulkes::SymmetrizedTableau;

namespace {

Point point_from(std::vector<std::vector<long>> forms, int power)
{
  std::vector<foulkes::LinearForm> ls;
  for (auto& f : forms) ls.push_back({std::move(f)});
  return Point(std::move(ls), power);
}

struct Instance {
  int a, b;
  Partition lambda;
};

// (a, b, lambda) with a semistandard content a x b filling and p > 0 or not; both kinds matter
const std::vector<Instance> kInstances = {
    {3, 2, {4, 2}},    {3, 2, {2, 2, 2}}, {2, 3, {4, 2}},       {3, 3, {5, 2, 2}}, {3, 3, {4, 4, 1}},
    {4, 2, {4, 2, 2}}, {2, 4, {4, 4}},    {4, 3, {6, 2, 2, 2}}, {3, 4, {6, 4, 2}}, {4, 3, {5, 4, 2, 1}},
    {3, 4, {4, 4, 4}}, {2, 6, {6, 6}},    {6, 2, {4, 4, 2, 2}},
};

SymmetrizedTableau draw(const Instance& in, std::uint64_t seed)
{
  return SymmetrizedTableau(*foulkes::random_semistandard(in.lambda, ContentSpec{in.a, in.b}, seed));
}

Point target_point(const Instance& in, std::uint64_t seed)
{
  return foulkes::random_point(in.b, in.lambda.rows(), in.a, seed);
}

} // namespace

TEST(RandomPoint, DeterministicNonzeroInRange)
{
  const Point v = foulkes::random_point(5, 4, 3, 42);
  EXPECT_EQ(v, foulkes::random_point(5, 4, 3, 42));
  EXPECT_NE(v, foulkes::random_point(5, 4, 3, 43));
  EXPECT_EQ(v.form_count(), 5);
  EXPECT_EQ(v.dimension(), 4);
  EXPECT_EQ(v.power(), 3);
  for (const auto& l : v.forms()) {
    bool nonzero = false;
    for (long x : l.coords) {
      EXPECT_GE(x, -9);
      EXPECT_LE(x, 9);
      nonzero |= x != 0;
    }
    EXPECT_TRUE(nonzero);
  }
  EXPECT_THROW(point_from({{1, 2}, {3}}, 2), std::invalid_argument);
  EXPECT_THROW(point_from({}, 2), std::invalid_argument);
}

TEST(MinorCache, SignedMinors)
{
  const Point v = point_from({{1, 2, 3}, {4, 5, 6}, {7, 8, 10}}, 2);
  const MinorCache cache(v, {1, 2, 3});
  const std::vector<int> t01{0, 1}, t10{1, 0}, t00{0, 0}, t012{0, 1, 2}, t210{2, 1, 0}, t2{2};
  EXPECT_EQ(cache.det(t01), 1 * 5 - 2 * 4);
  EXPECT_EQ(cache.det(t10), -(1 * 5 - 2 * 4));
  EXPECT_EQ(cache.det(t00), 0);
  EXPECT_EQ(cache.det(t012), -3);
  EXPECT_EQ(cache.det(t210), 3);
  EXPECT_EQ(cache.det(t2), 7);
  EXPECT_EQ(cache.size(), 3u + 3u + 1u);
  EXPECT_THROW(MinorCache(v, {4}), std::invalid_argument);
}

TEST(MinorCache, OrderedTableMatchesDeterminants)
{
  const Point v = foulkes::random_point(4, 3, 2, 9);
  const MinorCache cache(v, {2, 3});
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y)
      for (int z = 0; z < 4; ++z) {
        foulkes::IntMatrix m(3, 3);
        const int rows[3] = {x, y, z};
        for (int r = 0; r < 3; ++r)
          for (int c = 0; c < 3; ++c) m(r, c) = v.forms()[static_cast<std::size_t>(rows[r])].coords[static_cast<std::size_t>(c)];
        EXPECT_EQ(cache.ordered(3, static_cast<std::size_t>(x * 16 + y * 4 + z)), foulkes::determinant(m));
      }
}

TEST(EvaluateTableau, SingleRowIsPowerOfPowerSum)
{
  // every column has length 1: value = (sum_i l_i[0]^r)^s
  const Filling t = Filling::parse("1 1 1 2 2 2");
  const Point v = foulkes::random_point(4, 1, 3, 5);
  const MinorCache cache(v, {1});
  BigInt power_sum = 0;
  for (const auto& l : v.forms()) {
    BigInt x = l.coords[0];
    power_sum += x * x * x;
  }
  EXPECT_EQ(foulkes::evaluate_tableau(t, v, cache), power_sum * power_sum);
}

TEST(EvaluateTableau, SingleFormKillsLongColumns)
{
  const Point v = foulkes::random_point(1, 2, 2, 5);
  const MinorCache cache(v, {1, 2});
  EXPECT_EQ(foulkes::evaluate_tableau(Filling::parse("1 1/2 2"), v, cache), 0);
  EXPECT_EQ(foulkes::evaluate_tableau(Filling::parse("1 2/1 2"), v, cache), 0);  // repeated column entry
}

TEST(EvaluateTableau, RejectsMismatchedCache)
{
  const Point v = foulkes::random_point(2, 2, 2, 1);
  const MinorCache only_ones(v, {1});
  EXPECT_THROW(foulkes::evaluate_tableau(Filling::parse("1 1/2 2"), v, only_ones), std::invalid_argument);
  const MinorCache other(foulkes::random_point(3, 2, 2, 1), {1, 2});
  EXPECT_THROW(foulkes::evaluate_tableau(Filling::parse("1 1/2 2"), v, other), std::invalid_argument);
}

TEST(PruningBounds, Windows)
{
  using Bounds = std::map<int, std::pair<int, int>>;
  EXPECT_EQ(foulkes::pruning_bounds({{0, 1}, {2, 3}}, 2), (Bounds{{0, {1, 1}}, {1, {2, 2}}, {2, {1, 1}}, {3, {2, 2}}}));
  EXPECT_EQ(foulkes::pruning_bounds({{0, 2, 4}, {1}}, 5), (Bounds{{0, {1, 3}}, {2, {2, 4}}, {4, {3, 5}}, {1, {1, 5}}}));
  EXPECT_THROW(foulkes::pruning_bounds({{0, 1, 2}}, 2), std::invalid_argument);
}

TEST(PsiEvaluator, RejectsBadInput)
{
  const auto f = SymmetrizedTableau::parse_letters("AACC/BB");
  const Point wrong_power = foulkes::random_point(2, 2, 2, 1);
  EXPECT_THROW(foulkes::evaluate_psi_image(f, wrong_power, MinorCache(wrong_power, {1, 2})), std::invalid_argument);
  const Point v = foulkes::random_point(2, 2, 3, 1);
  EXPECT_THROW(foulkes::evaluate_psi_image(f, v, MinorCache(v, {1, 2}), foulkes::ShardSpec{0, 2, 2}), std::invalid_argument);
  EXPECT_THROW(foulkes::evaluate_psi_image(f, v, MinorCache(v, {1, 2}), foulkes::ShardSpec{-1, 1, 0}), std::invalid_argument);
}

TEST(PsiEvaluator, CollapseFactorIsProductOfGroupFactorials)
{
  const auto f = SymmetrizedTableau(Filling::parse("1 1 1 3 3 3/2 2 2 4 4 4"));
  const Point v = foulkes::random_point(3, 2, 4, 1);
  const MinorCache cache(v, {2});
  EXPECT_EQ(foulkes::PsiEvaluator(f, v, cache).collapse_factor(), 6 * 6);
  EXPECT_EQ(foulkes::PsiEvaluator(f, v, cache, {foulkes::CellOrder::ColumnMajor, false, true}).collapse_factor(), 1);
}

TEST(PsiEvaluator, AgreesWithSymbolicImage)
{
  for (const auto& in : kInstances)
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const auto f = draw(in, seed);
      const auto symbolic = foulkes::apply_psi_symbolic(f);
      const Point v = target_point(in, seed + 77);
      const MinorCache cache(v, foulkes::column_lengths(in.lambda));
      EXPECT_EQ(foulkes::evaluate_psi_image(f, v, cache), foulkes::evaluate_sum(symbolic, v, cache))
          << f.base().to_string();
    }
}

TEST(PsiEvaluator, AllSearchStrategiesAgree)
{
  using foulkes::CellOrder;
  for (const auto& in : kInstances)
    for (std::uint64_t seed = 0; seed < (in.a * in.b > 9 ? 1u : 4u); ++seed) {
      const auto f = draw(in, seed);
      const Point v = target_point(in, seed);
      const MinorCache cache(v, foulkes::column_lengths(in.lambda));
      const BigInt reference = foulkes::evaluate_psi_image(f, v, cache, {}, {CellOrder::FewestChoices, false, false});
      for (auto order : {CellOrder::FewestChoices, CellOrder::ColumnMajor})
        for (bool sym : {false, true})
          for (bool memo : {false, true})
            EXPECT_EQ(foulkes::evaluate_psi_image(f, v, cache, {}, {order, sym, memo}), reference)
                << f.base().to_string() << " order=" << static_cast<int>(order) << " sym=" << sym << " memo=" << memo;
    }
}

TEST(PsiEvaluator, ShardsSumToTheWhole)
{
  using foulkes::CellOrder;
  for (const auto& in : kInstances) {
    const auto f = draw(in, 11);
    const Point v = target_point(in, 12);
    const MinorCache cache(v, foulkes::column_lengths(in.lambda));
    const BigInt whole = foulkes::evaluate_psi_image(f, v, cache);
    for (int n : {2, 3, 5})
      for (int depth : {0, 1, 2, 3, 100})
        for (auto order : {CellOrder::FewestChoices, CellOrder::ColumnMajor}) {
          BigInt sum = 0;
          for (int c = 0; c < n; ++c) sum += foulkes::evaluate_psi_image(f, v, cache, {depth, n, c}, {order, true, true});
          EXPECT_EQ(sum, whole) << f.base().to_string() << " N=" << n << " D=" << depth;
        }
  }
}

TEST(PsiEvaluator, ExampleValueIsMinusFourTimesStandard)
{
  const auto f = SymmetrizedTableau::parse_letters("AACC/BB");
  const Filling standard = Filling::parse("1 1 1 2/2 2");
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Point v = foulkes::random_point(2, 2, 3, seed);
    const MinorCache cache(v, {1, 2});
    EXPECT_EQ(foulkes::evaluate_psi_image(f, v, cache), -4 * foulkes::evaluate_tableau(standard, v, cache));
  }
}
