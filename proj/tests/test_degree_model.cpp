#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "gcm/degree_model.hpp"
#include "gcm/presets.hpp"

using namespace gcm;

namespace {

// Stub mass k p_k summed over [lo, hi] of a pmf, computed straight from the masses.
double stub_sum(const DegreePmf& p, int lo, int hi) {
  double s = 0.0;
  for (int k = lo; k <= hi; ++k) s += k * p[k];
  return s;
}

DegreePmf random_pmf(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> support(2, 25);
  std::uniform_real_distribution<double> w(0.0, 1.0);
  std::map<int, double> weights;
  const int top = support(rng);
  for (int k = 0; k <= top; ++k)
    if (w(rng) < 0.8) weights[k] = w(rng);
  weights[top] = 0.5;  // guarantees positive stub mass
  weights[1] = 0.3;
  return DegreePmf::from_weights(weights);
}

}  // namespace

TEST(SizeBiased, UniformOneTwoThree) {
  const auto s = size_biased(DegreePmf::uniform(1, 3));
  EXPECT_NEAR(s[1], 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(s[2], 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(s[3], 1.0 / 2.0, 1e-15);
  EXPECT_EQ(s[0], 0.0);
}

TEST(SizeBiased, PointMassStaysPut) {
  const auto s = size_biased(DegreePmf::point_mass(5));
  EXPECT_DOUBLE_EQ(s[5], 1.0);
  EXPECT_EQ(s[4], 0.0);
}

TEST(SizeBiased, GeometricFirstMass) {
  // E(Z) = p/(1-p) = 2, so k p_k / E(Z) at k = 1 is (1/3)(2/3)/2 = 1/9.
  const auto s = size_biased(DegreePmf::geometric(2.0 / 3.0));
  EXPECT_NEAR(s[1], 1.0 / 9.0, 1e-8);
}

TEST(SizeBiased, ZeroMeanIsDegenerate) {
  try {
    (void)size_biased(DegreePmf::point_mass(0));
    FAIL() << "expected config_error";
  } catch (const config_error& e) {
    EXPECT_NE(std::string(e.what()).find("degenerate distribution"), std::string::npos);
  }
}

TEST(DegreePmfTest, RejectsBadInput) {
  EXPECT_THROW(DegreePmf::from_weights({{1, -0.1}, {2, 1.0}}), config_error);
  EXPECT_THROW(DegreePmf::from_weights({{1, 0.0}}), config_error);
  EXPECT_THROW(DegreePmf::geometric(1.0), config_error);
  EXPECT_THROW(DegreePmf::uniform(3, 1), config_error);
  EXPECT_THROW(DegreePmf::powerlaw(2.0, 0, 10), config_error);
}

TEST(DegreePmfTest, GeometricTruncationTailIsTiny) {
  const auto p = DegreePmf::geometric(2.0 / 3.0);
  // Untruncated stub mass beyond K is p^{K+1}((K+1) - K p)/(1-p); must fall under 1e-9.
  const int K = p.truncation_degree();
  const double r = 2.0 / 3.0;
  EXPECT_LT(std::pow(r, K + 1) * ((K + 1) - K * r) / (1 - r), 1e-9);
  EXPECT_GE(std::pow(r, K) * (K - (K - 1) * r) / (1 - r), 1e-9);
  EXPECT_NEAR(std::accumulate(p.masses().begin(), p.masses().end(), 0.0), 1.0, 1e-12);
}

TEST(Partition, UniformTwoBlocksNoShift) {
  const auto part = partition_blocks(DegreePmf::uniform(1, 3), 2);
  EXPECT_EQ(part.first_degree[0], 0);  // degree 0 belongs to the first block
  EXPECT_EQ(part.last_degree[0], 2);
  EXPECT_EQ(part.first_degree[1], 3);
  EXPECT_EQ(part.last_degree[1], 3);
  EXPECT_TRUE(part.shifts.empty());
  for (int k = 0; k <= 3; ++k) EXPECT_EQ(part.adjusted[k], part.original[k]);
}

TEST(Partition, ModifiedGeometricShift) {
  const auto part = presets::modified_geometric(2);
  ASSERT_EQ(part.shifts.size(), 1u);
  EXPECT_EQ(part.shifts[0].from, 4);
  EXPECT_EQ(part.shifts[0].to, 5);
  // Overshoot = cumulative stub mass through k = 4 minus half the mean.
  double cum = 0.0;
  for (int k = 1; k <= 4; ++k) cum += k * (1.0 / 3.0) * std::pow(2.0 / 3.0, k);
  const double mean = part.original.mean();
  EXPECT_NEAR(part.shifts[0].stub_mass, cum - mean / 2.0, 1e-10);
  EXPECT_NEAR(part.shifts[0].stub_mass, 19.0 / 243.0, 1e-8);
  EXPECT_NEAR(part.shifts[0].stub_mass, 0.0782, 5e-5);
  EXPECT_EQ(part.last_degree[0], 4);
  EXPECT_EQ(part.first_degree[1], 5);
}

TEST(Partition, SingleBlockIsIdentity) {
  const auto pmf = DegreePmf::poisson(3.0);
  const auto part = partition_blocks(pmf, 1);
  EXPECT_TRUE(part.shifts.empty());
  EXPECT_EQ(part.first_degree[0], 0);
  EXPECT_EQ(part.last_degree[0], pmf.truncation_degree());
}

TEST(Partition, Errors) {
  EXPECT_THROW(partition_blocks(DegreePmf::uniform(1, 3), 4), config_error);
  EXPECT_THROW(partition_blocks(DegreePmf::uniform(1, 3), 0), config_error);
  EXPECT_THROW(partition_blocks(DegreePmf::point_mass(0), 1), config_error);
}

TEST(Partition, PropertyEqualStubMassAndConservation) {
  std::mt19937_64 rng(20240601);
  int tested = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const auto pmf = random_pmf(rng);
    int positive = 0;
    for (int k = 1; k <= pmf.truncation_degree(); ++k) positive += pmf[k] > 0.0;
    const int b = 1 + int(rng() % std::min(6, positive));
    BlockPartition part;
    try {
      part = partition_blocks(pmf, b);
    } catch (const config_error&) {
      continue;  // a block with zero mass is a legitimate rejection
    }
    ++tested;
    const double total = stub_sum(part.adjusted, 0, part.adjusted.truncation_degree());
    EXPECT_NEAR(total, stub_sum(pmf, 0, pmf.truncation_degree()), 1e-12);
    const auto m = part.adjusted.masses();
    EXPECT_NEAR(std::accumulate(m.begin(), m.end(), 0.0), 1.0, 1e-12);
    for (double v : m) EXPECT_GE(v, 0.0);
    // contiguous, ascending, covering
    EXPECT_EQ(part.first_degree.front(), 0);
    for (int i = 1; i < b; ++i) EXPECT_EQ(part.first_degree[i], part.last_degree[i - 1] + 1);
    EXPECT_GE(part.last_degree.back(), part.adjusted.truncation_degree());
    const auto sb = size_biased(part.adjusted);
    for (int i = 0; i < b; ++i) {
      EXPECT_NEAR(stub_sum(part.adjusted, part.first_degree[i], part.last_degree[i]), total / b, 1e-10);
      double block = 0.0;
      for (int k = part.first_degree[i]; k <= part.last_degree[i]; ++k) block += sb[k];
      EXPECT_NEAR(block, 1.0 / b, 1e-10);
    }
  }
  EXPECT_GT(tested, 300);
}

TEST(ComputeU, Examples) {
  const auto u = compute_u(partition_blocks(DegreePmf::uniform(1, 3), 2));
  EXPECT_NEAR(u[0], 5.0 / 3.0, 1e-15);
  EXPECT_NEAR(u[1], 3.0, 1e-15);
  EXPECT_NEAR(compute_u(partition_blocks(DegreePmf::point_mass(4), 1))[0], 16.0, 1e-15);

  // Modified geometric, first block: sum_{k<=4} k^2 p_k with the shifted mass removed at k = 4.
  double u1 = 0.0;
  for (int k = 1; k <= 4; ++k) u1 += k * k * (1.0 / 3.0) * std::pow(2.0 / 3.0, k);
  u1 -= 4.0 * (19.0 / 243.0);
  const auto ug = compute_u(presets::modified_geometric(2));
  EXPECT_NEAR(ug[0], u1, 1e-8);
  EXPECT_NEAR(ug[0], 2.4444, 1e-4);
  EXPECT_NEAR(ug[0] + ug[1], presets::modified_geometric(2).adjusted.moment(2), 1e-12);
}

TEST(DegreeSequenceTest, Examples) {
  const auto a = sample_degree_sequence(partition_blocks(DegreePmf::uniform(1, 3), 2), 6);
  EXPECT_EQ(a.degrees, (std::vector<int>{1, 1, 2, 2, 3, 3}));
  EXPECT_EQ(a.total_degree(), 12u);
  EXPECT_EQ(a.added_vertices, 0u);

  const auto b = sample_degree_sequence(partition_blocks(DegreePmf::point_mass(2), 1), 4);
  EXPECT_EQ(b.degrees, (std::vector<int>{2, 2, 2, 2}));

  // n = 7: Hamilton gives (3,2,2) at degrees 1,2,3; blocks carry 7 and 6 stubs, so the repair
  // must equalize them at an even total.
  const auto c = sample_degree_sequence(partition_blocks(DegreePmf::uniform(1, 3), 2), 7);
  EXPECT_EQ(detail::largest_remainder(DegreePmf::uniform(1, 3).masses(), 7),
            (std::vector<std::size_t>{0, 3, 2, 2}));
  ASSERT_EQ(c.block_stubs.size(), 2u);
  EXPECT_EQ(c.block_stubs[0], c.block_stubs[1]);
  EXPECT_EQ(c.total_degree() % 2, 0u);
  EXPECT_GT(c.added_vertices, 0u);
  EXPECT_EQ(c.n(), 7 + c.added_vertices);
}

TEST(DegreeSequenceTest, TooSmallNamesMinimum) {
  try {
    (void)sample_degree_sequence(presets::modified_geometric(2), 1);
    FAIL();
  } catch (const config_error& e) {
    EXPECT_NE(std::string(e.what()).find("minimum n"), std::string::npos);
  }
}

TEST(DegreeSequenceTest, PropertyBlockMembershipReproducesPartition) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 150; ++trial) {
    const auto pmf = random_pmf(rng);
    const int b = 1 + int(rng() % 4);
    BlockPartition part;
    try {
      part = partition_blocks(pmf, b);
    } catch (const config_error&) {
      continue;
    }
    const std::size_t n = 500 + rng() % 5000;
    const auto seq = sample_degree_sequence(part, n);
    ASSERT_TRUE(std::is_sorted(seq.degrees.begin(), seq.degrees.end()));
    std::size_t total = 0;
    for (int d : seq.degrees) total += static_cast<std::size_t>(d);
    ASSERT_EQ(total % std::lcm<std::size_t>(2, static_cast<std::size_t>(b)), 0u);
    const std::size_t per = total / static_cast<std::size_t>(b);
    // Walk stubs in order; every stub of degree k must land in block_of(k).
    std::size_t id = 0;
    for (int d : seq.degrees)
      for (int s = 0; s < d; ++s, ++id) ASSERT_EQ(static_cast<int>(id / per), part.block_of(d)) << "degree " << d;
    // Hamilton apportionment before repair: counts sum to n and each is within 1 of n p'_k.
    const auto counts = detail::largest_remainder(part.adjusted.masses(), n);
    EXPECT_EQ(std::accumulate(counts.begin(), counts.end(), std::size_t{0}), n);
    for (std::size_t k = 0; k < counts.size(); ++k) EXPECT_LT(std::abs(double(counts[k]) - n * part.adjusted[int(k)]), 1.0);
  }
}

TEST(PermutationTest, Basics) {
  const auto swap = Permutation::from_one_based({2, 1});
  EXPECT_TRUE(swap.is_involution());
  EXPECT_FALSE(swap.is_identity());
  EXPECT_EQ(swap.one_based(), (std::vector<int>{2, 1}));
  const auto rot = Permutation::rotator(3);
  EXPECT_EQ(rot.one_based(), (std::vector<int>{3, 1, 2}));  // h(i) = ((i + 1) mod b) + 1
  EXPECT_FALSE(rot.is_involution());
  EXPECT_THROW(Permutation::from_one_based({1, 1}), config_error);
  EXPECT_THROW(Permutation::from_one_based({0, 1}), config_error);
  EXPECT_EQ(Permutation::reversal(4).one_based(), (std::vector<int>{4, 3, 2, 1}));
}
