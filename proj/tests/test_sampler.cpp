#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "mdp/counting.hpp"
#include "mdp/errors.hpp"
#include "mdp/gapseq.hpp"
#include "mdp/harness.hpp"
#include "mdp/partition.hpp"
#include "mdp/sampler.hpp"
#include "mdp/stats.hpp"

using namespace mdp;

TEST_CASE("canonical sampler matches the geometric marginals") {
  GapSequenceProvider alt(GapSequenceSpec::periodic({1, 0}));
  double z = 0.7;
  std::int64_t k = 10;
  const std::int64_t B = 20000;
  CanonicalKSampler sampler(alt, z, k);
  std::vector<double> mean_d(static_cast<std::size_t>(k), 0.0);
  Rng rng(31, 0);
  for (std::int64_t b = 0; b < B; ++b) {
    Partition p = sampler.draw(rng);
    REQUIRE(p.length() == k);
    REQUIRE(is_mdp(p, alt));
    auto d = p.differences();
    for (std::size_t j = 0; j < d.size(); ++j) mean_d[j] += static_cast<double>(d[j]);
  }
  auto gaps = alt.gaps_upto(k);
  for (std::int64_t j = 1; j <= k; ++j) {
    double m = mean_d[static_cast<std::size_t>(j - 1)] / static_cast<double>(B);
    double x = std::exp(-z * static_cast<double>(j));
    double expect = static_cast<double>(gaps[static_cast<std::size_t>(k - j)]) + x / (1.0 - x);
    double sd = std::sqrt(x) / (1.0 - x);  // geometric sd
    double tol = 4.0 * sd / std::sqrt(static_cast<double>(B));
    CHECK(std::fabs(m - expect) < tol);
  }
}

TEST_CASE("single-difference canonical law") {
  GapSequenceProvider one(GapSequenceSpec::constant(1));
  double z = 0.9;
  Rng rng(5, 0);
  const std::int64_t B = 30000;
  std::int64_t zeros = 0;
  for (std::int64_t b = 0; b < B; ++b) {
    Partition p = sample_canonical(one, z, 1, rng);
    REQUIRE(p.length() == 1);
    REQUIRE(p.part(1) >= 1);  // lambda_1 = 1 + G
    if (p.part(1) == 1) ++zeros;
  }
  double p0 = 1.0 - std::exp(-z);
  double sd = std::sqrt(p0 * (1 - p0) / static_cast<double>(B));
  CHECK(std::fabs(static_cast<double>(zeros) / static_cast<double>(B) - p0) < 4.0 * sd);
}

TEST_CASE("canonical product law at z=1, k=2") {
  GapSequenceProvider one(GapSequenceSpec::constant(1));
  Rng rng(17, 3);
  const std::int64_t B = 30000;
  std::int64_t hits = 0;
  Partition target({2, 1});
  for (std::int64_t b = 0; b < B; ++b)
    if (sample_canonical(one, 1.0, 2, rng) == target) ++hits;
  double expect = (1.0 - std::exp(-1.0)) * (1.0 - std::exp(-2.0));
  double sd = std::sqrt(expect * (1 - expect) / static_cast<double>(B));
  CHECK(std::fabs(static_cast<double>(hits) / static_cast<double>(B) - expect) < 4.0 * sd);
}

TEST_CASE("uniform nk fibers") {
  GapSequenceProvider one(GapSequenceSpec::constant(1));
  // n=6, k=2: exactly {(5,1),(4,2)}, each 1/2.
  {
    auto sampler = UniformFiberSampler::fixed_length(one, 6, 2);
    CHECK(sampler.total() == 2);
    Rng rng(11, 0);
    std::int64_t first = 0;
    const std::int64_t B = 20000;
    for (std::int64_t b = 0; b < B; ++b) {
      Partition p = sampler.draw(rng);
      REQUIRE(p.weight() == 6);
      REQUIRE(p.length() == 2);
      REQUIRE(is_mdp(p, one));
      if (p == Partition({5, 1})) ++first;
      else REQUIRE(p == Partition({4, 2}));
    }
    double freq = static_cast<double>(first) / static_cast<double>(B);
    CHECK(std::fabs(freq - 0.5) < 4.0 * std::sqrt(0.25 / static_cast<double>(B)));
  }
  // n=6, k=3: the single element (3,2,1).
  {
    auto sampler = UniformFiberSampler::fixed_length(one, 6, 3);
    CHECK(sampler.total() == 1);
    Rng rng(4, 4);
    for (int i = 0; i < 50; ++i) CHECK(sampler.draw(rng) == Partition({3, 2, 1}));
  }
  // n = s_k: the hard ground state lambda_i = Q_{k-i+1}.
  {
    GapSequenceProvider alt(GapSequenceSpec::periodic({1, 0}));
    std::int64_t k = 7;
    std::int64_t n = alt.weighted_sum(k);
    auto sampler = UniformFiberSampler::fixed_length(alt, n, k);
    CHECK(sampler.total() == 1);
    Rng rng(9, 0);
    Partition p = sampler.draw(rng);
    for (std::int64_t i = 1; i <= k; ++i) CHECK(p.part(i) == alt.prefix_sum(k - i + 1));
  }
  CHECK_THROWS_AS(UniformFiberSampler::fixed_length(one, 3, 3), EmptyClassError);  // s_3 = 6 > 3
}

TEST_CASE("uniform n fibers") {
  GapSequenceProvider one(GapSequenceSpec::constant(1));
  {
    auto sampler = UniformFiberSampler::whole_fiber(one, 4);
    CHECK(sampler.total() == 2);  // {(4),(3,1)}
    Rng rng(23, 0);
    std::int64_t singleton = 0;
    const std::int64_t B = 20000;
    for (std::int64_t b = 0; b < B; ++b) {
      Partition p = sampler.draw(rng);
      if (p == Partition({4})) ++singleton;
      else REQUIRE(p == Partition({3, 1}));
    }
    CHECK(std::fabs(static_cast<double>(singleton) / static_cast<double>(B) - 0.5) <
          4.0 * std::sqrt(0.25 / static_cast<double>(B)));
  }
  {
    GapSequenceProvider plain(GapSequenceSpec::constant(0));
    auto sampler = UniformFiberSampler::whole_fiber(plain, 4);
    CHECK(sampler.total() == 5);
    std::map<std::string, std::int64_t> counts;
    Rng rng(29, 0);
    const std::int64_t B = 50000;
    for (std::int64_t b = 0; b < B; ++b) ++counts[sampler.draw(rng).to_text()];
    CHECK(counts.size() == 5);
    std::vector<std::int64_t> observed;
    for (auto& [text, c] : counts) observed.push_back(c);
    std::vector<double> expected(5, static_cast<double>(B) / 5.0);
    CHECK(chi_square_pvalue(chi_square_stat(observed, expected), 4) > 1e-3);
  }
  // n = 0 is the empty partition with probability 1.
  {
    GapSequenceProvider two(GapSequenceSpec::constant(2));
    auto sampler = UniformFiberSampler::whole_fiber(two, 0);
    Rng rng(1, 1);
    CHECK(sampler.draw(rng) == Partition());
  }
}

TEST_CASE("uniformity over whole fibers") {
  std::vector<GapSequenceSpec> specs = {
      GapSequenceSpec::constant(0),
      GapSequenceSpec::constant(1),
      GapSequenceSpec::periodic({1, 0}),
  };
  std::uint64_t seed = 1201;
  for (auto& spec : specs) {
    GapSequenceProvider g(spec);
    std::int64_t n = 9;
    auto fiber = enumerate_mdp_fiber(g, n);
    auto sampler = UniformFiberSampler::whole_fiber(g, n);
    CHECK(sampler.total() == static_cast<std::int64_t>(fiber.size()));
    std::map<std::string, std::int64_t> counts;
    Rng rng(seed++, 0);
    const std::int64_t B = 30000;
    for (std::int64_t b = 0; b < B; ++b) {
      Partition p = sampler.draw(rng);
      REQUIRE(p.weight() == n);
      REQUIRE(is_mdp(p, g));
      ++counts[p.to_text()];
    }
    CHECK(counts.size() == fiber.size());
    std::vector<std::int64_t> observed;
    for (auto& [text, c] : counts) observed.push_back(c);
    std::vector<double> expected(fiber.size(),
                                 static_cast<double>(B) / static_cast<double>(fiber.size()));
    double pv = chi_square_pvalue(chi_square_stat(observed, expected),
                                  static_cast<std::int64_t>(fiber.size()) - 1);
    CHECK(pv > 1e-3);
  }
}

TEST_CASE("length categorical is exact") {
  GapSequenceProvider alt(GapSequenceSpec::periodic({1, 0}));
  std::int64_t n = 12;
  auto sampler = UniformFiberSampler::whole_fiber(alt, n);
  mpz_class total = count_mdp_total(alt, n);
  CHECK(sampler.total() == total);
  std::map<std::int64_t, std::int64_t> k_counts;
  Rng rng(77, 0);
  const std::int64_t B = 40000;
  for (std::int64_t b = 0; b < B; ++b) ++k_counts[sampler.draw(rng).length()];
  std::vector<std::int64_t> observed;
  std::vector<double> expected;
  for (auto& [k, c] : k_counts) {
    observed.push_back(c);
    mpz_class pk = count_mdp(alt, n, k);
    expected.push_back(static_cast<double>(B) * pk.get_d() / total.get_d());
    CHECK(pk > 0);
  }
  double pv = chi_square_pvalue(chi_square_stat(observed, expected),
                                static_cast<std::int64_t>(observed.size()) - 1);
  CHECK(pv > 1e-3);
}

TEST_CASE("grand sampler") {
  GapSequenceProvider one(GapSequenceSpec::constant(1));
  // z = 5: the empty partition carries 1/F ~ 1 - e^{-5}.
  {
    auto weights = grand_weights(one, 5.0);
    Rng rng(3, 0);
    const std::int64_t B = 50000;
    std::int64_t empties = 0;
    for (std::int64_t b = 0; b < B; ++b)
      if (sample_grand(one, weights, rng).empty()) ++empties;
    double expect = std::exp(-weights.log_total);
    CHECK(std::fabs(expect - (1.0 - std::exp(-5.0))) < 1e-4);
    double sd = std::sqrt(expect * (1 - expect) / static_cast<double>(B));
    CHECK(std::fabs(static_cast<double>(empties) / static_cast<double>(B) - expect) < 4.0 * sd);
  }
  // Small z: the empirical mode of K sits at k_*(z).
  {
    double z = 0.05;
    auto weights = grand_weights(one, z);
    Rng rng(41, 0);
    const std::int64_t B = 100000;
    std::map<std::int64_t, std::int64_t> k_counts;
    for (std::int64_t b = 0; b < B; ++b) ++k_counts[sample_grand(one, weights, rng).length()];
    std::int64_t mode = -1, best = -1;
    for (auto& [k, c] : k_counts)
      if (c > best) { best = c; mode = k; }
    CHECK(std::llabs(mode - k_star(one, z)) <= 1);
  }
}

TEST_CASE("draws are reproducible and streams independent") {
  GapSequenceProvider one(GapSequenceSpec::constant(1));
  auto sampler = UniformFiberSampler::whole_fiber(one, 30);
  Rng a(99, 7), b(99, 7), c(99, 8);
  bool all_same = true, any_diff = false;
  for (int i = 0; i < 50; ++i) {
    Partition pa = sampler.draw(a), pb = sampler.draw(b), pc = sampler.draw(c);
    all_same = all_same && (pa == pb);
    any_diff = any_diff || !(pa == pc);
  }
  CHECK(all_same);
  CHECK(any_diff);
}

TEST_CASE("uniform big-integer draws are in range with the right mean") {
  Rng rng(8, 0);
  mpz_class bound("1000000000000000000000000");  // 1e24
  mpz_class acc = 0;
  const int B = 20000;
  for (int i = 0; i < B; ++i) {
    mpz_class x = uniform_mpz_below(rng, bound);
    REQUIRE(x >= 0);
    REQUIRE(x < bound);
    acc += x;
  }
  mpz_class mean_int = acc / B;
  double mean_ratio = mean_int.get_d() / bound.get_d();
  CHECK(std::fabs(mean_ratio - 0.5) < 4.0 / std::sqrt(12.0 * B));
}
