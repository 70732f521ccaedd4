#include <gtest/gtest.h>

#include <set>

#include <foulkes/filling.hpp>

#include "oracles.hpp"

using foulkes::ContentSpec;
using foulkes::Filling;
using foulkes::Partition;
using foulkes::SymmetrizedTableau;

TEST(Filling, ParseInfersRectangularContent)
{
  const Filling t = Filling::parse("1 1 3 3/2 2");
  EXPECT_EQ(t.shape(), Partition({4, 2}));
  EXPECT_EQ(t.content(), (ContentSpec{3, 2}));
  EXPECT_EQ(t.at(1, 1), 2);
  EXPECT_EQ(t.column(1), (std::vector<int>{1, 2}));
  EXPECT_EQ(t.column_length(3), 1);
  EXPECT_EQ(t.to_string(), "1 1 3 3/2 2");
  EXPECT_THROW(Filling::parse("1 1 2/3"), std::invalid_argument);
  EXPECT_THROW(Filling::parse("1 2/"), std::invalid_argument);
  EXPECT_THROW(Filling::parse("1 1 1 2/2 2", ContentSpec{3, 2}), std::invalid_argument);
}

TEST(Filling, Semistandardness)
{
  EXPECT_TRUE(foulkes::is_semistandard(Filling::parse("1 1 2/2 3 3")));
  EXPECT_TRUE(foulkes::is_semistandard(Filling::parse("1 1 3 3/2 2")));
  EXPECT_FALSE(foulkes::is_semistandard(Filling::parse("1 2 1/2 3 3")));
  EXPECT_FALSE(foulkes::is_semistandard(Filling::parse("1 2/1 2")));
  EXPECT_TRUE(foulkes::is_semistandard(Filling::parse("1 1 1 2/2 2")));
}

TEST(Filling, ColumnStandardTableau)
{
  const Filling t = foulkes::column_standard_tableau({3, 2});
  EXPECT_EQ(t.to_string(), "1 3 5/2 4");
  EXPECT_TRUE(foulkes::is_semistandard(t));
  EXPECT_EQ(foulkes::column_standard_tableau({1, 1, 1}).to_string(), "1/2/3");
}

TEST(RandomSemistandard, NoneWhenTooManyRows)
{
  EXPECT_FALSE(foulkes::random_semistandard({2, 2, 2}, ContentSpec{2, 3}, 1));
  EXPECT_TRUE(foulkes::random_semistandard({4, 2}, ContentSpec{3, 2}, 1));
}

TEST(RandomSemistandard, ThousandSeedsAreValid)
{
  const Partition shape{5, 3, 3, 1};
  const ContentSpec content{4, 3};
  std::set<Filling> seen;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    auto t = foulkes::random_semistandard(shape, content, seed);
    ASSERT_TRUE(t);
    EXPECT_TRUE(foulkes::is_semistandard(*t));
    EXPECT_EQ(t->shape(), shape);
    EXPECT_EQ(t->content(), content);
    EXPECT_EQ(*t, *foulkes::random_semistandard(shape, content, seed));
    seen.insert(*t);
  }
  // every semistandard filling is reachable
  EXPECT_EQ(seen.size(), oracle::all_semistandard(shape, content).size());
}

TEST(SymmetrizedTableau, EqualityIgnoresLetterNames)
{
  const auto x = SymmetrizedTableau::parse_letters("AACC/BB");
  const auto y = SymmetrizedTableau(Filling::parse("2 2 1 1/3 3"));
  EXPECT_EQ(x, y);
  EXPECT_EQ(x.canonical().to_string(), "1 1 2 2/3 3");
  EXPECT_EQ(x.letters(), "AACC/BB");
  EXPECT_EQ(x.symbols(), 3);
  EXPECT_EQ(x.repeats(), 2);
  EXPECT_FALSE(x == SymmetrizedTableau::parse_letters("AABC/BC"));
}

TEST(CoincidingColumns, GroupsIdenticalColumns)
{
  using Groups = std::vector<std::vector<int>>;
  EXPECT_EQ(foulkes::coinciding_column_groups(SymmetrizedTableau::parse_letters("AACC/BB")), (Groups{{0, 1}, {2, 3}}));
  EXPECT_EQ(foulkes::coinciding_column_groups(SymmetrizedTableau(Filling::parse("1 2 1 2/2 1 2 1"))),
            (Groups{{0, 2}, {1, 3}}));
  EXPECT_EQ(foulkes::coinciding_column_groups(SymmetrizedTableau(Filling::parse("1 2 3"))), (Groups{{0}, {1}, {2}}));
}
