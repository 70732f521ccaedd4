#include <gtest/gtest.h>

#include <foulkes/partition.hpp>

#include "oracles.hpp"

using foulkes::Partition;

TEST(Partition, RejectsMalformedParts)
{
  EXPECT_THROW(Partition({2, 3}), std::invalid_argument);
  EXPECT_THROW(Partition({3, 0}), std::invalid_argument);
  EXPECT_THROW(Partition::parse("3,,1"), std::invalid_argument);
  EXPECT_THROW(Partition::parse("3,x"), std::invalid_argument);
  EXPECT_THROW(Partition::parse(""), std::invalid_argument);
}

TEST(Partition, ParseAndPrintRoundTrip)
{
  const Partition p = Partition::parse("14,7,2,2");
  EXPECT_EQ(p, Partition({14, 7, 2, 2}));
  EXPECT_EQ(p.to_string(), "14,7,2,2");
  EXPECT_EQ(p.weight(), 25);
  EXPECT_EQ(p.rows(), 4);
  EXPECT_EQ(p[7], 0);
  EXPECT_EQ(Partition::parse(" 3, 1 "), Partition({3, 1}));
}

TEST(Partition, ConjugateIsAnInvolution)
{
  EXPECT_EQ(Partition({4, 2, 1}).conjugate(), Partition({3, 2, 1, 1}));
  for (int n = 1; n <= 12; ++n)
    for (const auto& p : foulkes::enumerate_partitions(n, n)) {
      EXPECT_EQ(p.conjugate().conjugate(), p);
      EXPECT_EQ(p.conjugate().weight(), n);
    }
}

TEST(EnumeratePartitions, SmallCasesInOrder)
{
  const auto four = foulkes::enumerate_partitions(4, 2);
  ASSERT_EQ(four.size(), 3u);
  EXPECT_EQ(four[0], Partition({4}));
  EXPECT_EQ(four[1], Partition({3, 1}));
  EXPECT_EQ(four[2], Partition({2, 2}));
  EXPECT_EQ(foulkes::enumerate_partitions(6, 3).size(), 7u);
  EXPECT_THROW(foulkes::enumerate_partitions(0, 3), std::invalid_argument);
}

TEST(EnumeratePartitions, CountsMatchRecurrence)
{
  for (int n = 1; n <= 25; ++n)
    for (int k = 1; k <= 6; ++k) {
      const auto ps = foulkes::enumerate_partitions(n, k);
      EXPECT_EQ(static_cast<std::int64_t>(ps.size()), oracle::partition_count(n, k)) << n << " " << k;
      for (std::size_t i = 1; i < ps.size(); ++i) EXPECT_LT(ps[i], ps[i - 1]);
      for (const auto& p : ps) {
        EXPECT_EQ(p.weight(), n);
        EXPECT_LE(p.rows(), k);
      }
    }
}

TEST(SchurDimension, KnownValues)
{
  EXPECT_EQ(foulkes::schur_dimension({2}, 3), 6);
  EXPECT_EQ(foulkes::schur_dimension({1, 1}, 3), 3);
  EXPECT_EQ(foulkes::schur_dimension({2, 1}, 3), 8);
  EXPECT_EQ(foulkes::schur_dimension({1, 1, 1, 1}, 3), 0);
}

TEST(SchurDimension, SumsToTensorPowerWithMultiplicities)
{
  // dim (C^n)^{tensor d} = sum_lambda f^lambda dim S_lambda(C^n), f^lambda = number of standard tableaux
  for (int d = 1; d <= 7; ++d)
    for (int n = 1; n <= 4; ++n) {
      foulkes::BigInt total = 0;
      for (const auto& p : foulkes::enumerate_partitions(d, d))
        total += oracle::kostka(p, std::vector<int>(static_cast<std::size_t>(d), 1)) * foulkes::schur_dimension(p, n);
      foulkes::BigInt power = 1;
      for (int i = 0; i < d; ++i) power *= n;
      EXPECT_EQ(total, power) << "d=" << d << " n=" << n;
    }
}
