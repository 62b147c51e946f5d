#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "mdp/errors.hpp"
#include "mdp/rng.hpp"
#include "mdp/rwre.hpp"

using namespace mdp;

TEST_CASE("environment validation and frozen site probabilities") {
  CHECK_THROWS_AS(EnvironmentSpec::two_point(0.0, 0.5, 0.5, 1), SpecError);
  CHECK_THROWS_AS(EnvironmentSpec::two_point(0.5, 0.5, 1.5, 1), SpecError);
  CHECK_THROWS_AS(EnvironmentSpec::uniform(0.0, 0.5, 1), SpecError);
  CHECK_THROWS_AS(EnvironmentSpec::uniform(0.5, 1.0, 1), SpecError);
  CHECK_THROWS_AS(EnvironmentSpec::from_table({{0.5, 0.7}}, 1), SpecError);  // mass != 1

  auto env = EnvironmentSpec::two_point(0.3, 0.8, 0.4, 99);
  for (std::int64_t j : {-5, -1, 0, 3, 1000}) {
    double p = env.site_prob(j);
    CHECK((p == 0.3 || p == 0.8));
    CHECK(env.site_prob(j) == p);  // frozen
  }
  auto uni = EnvironmentSpec::uniform(0.2, 0.7, 5);
  for (std::int64_t j = -20; j < 20; ++j) {
    double p = uni.site_prob(j);
    CHECK(p >= 0.2);
    CHECK(p <= 0.7);
  }
}

TEST_CASE("walks: deterministic and biased") {
  // p = 1 everywhere: straight up.
  auto up = EnvironmentSpec::two_point(1.0, 1.0, 1.0, 0);
  Rng rng(1, 0);
  auto x = run_walk(up, 100, rng);
  for (std::int64_t t = 0; t <= 100; ++t) CHECK(x[static_cast<std::size_t>(t)] == t);

  // p = 0.75 everywhere: slope 2p - 1 = 0.5.
  auto biased = EnvironmentSpec::two_point(0.75, 0.75, 1.0, 0);
  Rng rng2(12, 0);
  std::int64_t steps = 200000;
  auto traj = run_walk(biased, steps, rng2);
  double slope = static_cast<double>(traj.back()) / static_cast<double>(steps);
  CHECK(std::fabs(slope - 0.5) < 0.01);
}

TEST_CASE("solomon drift formula") {
  auto det = EnvironmentSpec::two_point(0.75, 0.75, 1.0, 0);
  CHECK(drift(det) == doctest::Approx(0.5).epsilon(1e-14));

  // Symmetric environment: E rho >= 1 and E rho^{-1} >= 1 force v = 0.
  auto sym = EnvironmentSpec::two_point(0.3, 0.7, 0.5, 0);
  CHECK(sym.mean_rho() >= 1.0);
  CHECK(sym.mean_inv_rho() >= 1.0);
  CHECK(drift(sym) == 0.0);

  // Empirical agreement for a transient two-point environment.
  auto env = EnvironmentSpec::two_point(0.8, 0.6, 0.5, 321);
  double v = drift(env);
  CHECK(v > 0.0);
  Rng rng(55, 0);
  std::int64_t steps = 1000000;
  auto traj = run_walk(env, steps, rng);
  double slope = static_cast<double>(traj.back()) / static_cast<double>(steps);
  CHECK(std::fabs(slope - v) < 0.01);
}

TEST_CASE("kappa root of E rho^kappa = 1") {
  // rho in {1/4, 2}: choosing w so that E rho = 1 pins kappa = 1.
  // w/4 + 2(1-w) = 1  =>  w = 4/7.
  double w = 4.0 / 7.0;
  double p_for_rho = [](double rho) { return 1.0 / (1.0 + rho); }(0.25);
  double p_for_rho2 = 1.0 / (1.0 + 2.0);
  auto env = EnvironmentSpec::two_point(p_for_rho, p_for_rho2, w, 0);
  CHECK(env.mean_rho() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(env.mean_log_rho() < 0.0);
  auto kap = kappa(env);
  REQUIRE(kap.has_value());
  CHECK(*kap == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::fabs(env.mean_rho_pow(*kap) - 1.0) <= 1e-10);

  // Deterministic rho < 1: no finite root.
  auto det = EnvironmentSpec::two_point(0.75, 0.75, 1.0, 0);
  CHECK_FALSE(kappa(det).has_value());

  // eta >= 0 is rejected.
  auto sym = EnvironmentSpec::two_point(0.3, 0.7, 0.5, 0);
  CHECK_THROWS_AS(kappa(sym), RegimeError);

  // A genuinely transient-sub environment: kappa in (0,1).
  auto sub = EnvironmentSpec::two_point(0.9, 1.0 / 3.0, 0.5, 0);
  // eta = 0.5 (log(1/9) + log 2) < 0, rho_max = 2 > 1.
  auto k2 = kappa(sub);
  REQUIRE(k2.has_value());
  CHECK(std::fabs(sub.mean_rho_pow(*k2) - 1.0) <= 1e-10);
}

TEST_CASE("regime classification") {
  auto det = EnvironmentSpec::two_point(0.75, 0.75, 1.0, 0);
  CHECK(classify_regime(det).regime == Regime::TransientBallistic);

  auto sym = EnvironmentSpec::two_point(0.3, 0.7, 0.5, 0);
  CHECK(classify_regime(sym).regime == Regime::Recurrent);

  double w = 4.0 / 7.0;
  auto boundary = EnvironmentSpec::two_point(0.8, 1.0 / 3.0, w, 0);
  auto info = classify_regime(boundary);
  CHECK(info.regime == Regime::TransientSub);
  CHECK(info.error_bound.find("k/log k") != std::string::npos);

  auto neg = EnvironmentSpec::two_point(0.3, 0.3, 1.0, 0);
  CHECK(classify_regime(neg).regime == Regime::NegativeDrift);

  // Ballistic with finite kappa > 1: mostly-right environment.
  auto bal = EnvironmentSpec::two_point(0.8, 0.45, 0.9, 0);
  auto binfo = classify_regime(bal);
  CHECK(binfo.regime == Regime::TransientBallistic);
  REQUIRE(binfo.kappa.has_value());
  CHECK(*binfo.kappa > 1.0);
}

TEST_CASE("sinai localization stays on the log^2 scale") {
  // Symmetric bounded environment, eta = 0.
  std::int64_t steps = 300000;
  double lg2 = std::log(static_cast<double>(steps)) * std::log(static_cast<double>(steps));
  std::vector<double> scaled;
  for (std::uint64_t rep = 0; rep < 11; ++rep) {
    auto env = EnvironmentSpec::two_point(0.25, 0.75, 0.5, 1000 + rep);
    Rng rng(7000 + rep, 0);
    auto traj = run_walk(env, steps, rng);
    scaled.push_back(std::fabs(static_cast<double>(traj.back())) / lg2);
  }
  std::sort(scaled.begin(), scaled.end());
  // Monte Carlo calibrated constant (median ~0.3 at this scale); 2.0 leaves
  // a wide margin while still certifying the log^2 localization.
  CHECK(scaled[scaled.size() / 2] < 2.0);
}

TEST_CASE("rwre gap generation") {
  // Deterministic up-walk with a = (b+1, b, b, ...): q_0 = 2b+1, q_i = 2b.
  {
    std::int64_t b = 2;
    RwreGapParams params{EnvironmentSpec::two_point(1.0, 1.0, 1.0, 0),
                         GapSequenceSpec::explicit_list({b + 1}, b), b};
    Rng rng(1, 0);
    auto result = make_rwre_gaps(params, 50, rng);
    CHECK(result.gaps[0] == 2 * b + 1);
    for (std::size_t i = 1; i < result.gaps.size(); ++i) CHECK(result.gaps[i] == 2 * b);
    CHECK(result.v == doctest::Approx(1.0));
  }
  // Q_k = A_k + b X_k: the reconstructed walk has +-1 steps from 0.
  {
    RwreGapParams params{EnvironmentSpec::two_point(0.6, 0.35, 0.5, 42),
                         GapSequenceSpec::constant(2), 1};
    Rng rng(5, 0);
    std::int64_t len = 2000;
    auto result = make_rwre_gaps(params, len, rng);
    const auto& g = *result.provider;
    std::int64_t prev_x = 0;
    for (std::int64_t k = 1; k <= len; ++k) {
      std::int64_t x = g.prefix_sum(k) - 2 * k;  // (Q_k - A_k)/b with b=1
      CHECK(std::llabs(x - prev_x) == 1);
      prev_x = x;
    }
  }
  // Criterion-scale slope check at a smaller horizon.
  {
    RwreGapParams params{EnvironmentSpec::two_point(0.75, 0.75, 1.0, 0),
                         GapSequenceSpec::constant(2), 1};
    Rng rng(9, 0);
    auto result = make_rwre_gaps(params, 20000, rng);
    CHECK(result.q_predicted == doctest::Approx(2.5).epsilon(1e-12));
    auto [q_hat, beta_hat] = result.provider->estimate_regularity(20000);
    CHECK(std::fabs(q_hat - 2.5) < 0.02);
    CHECK(beta_hat < 0.9);
  }
  // Invariant violations are rejected.
  {
    RwreGapParams bad{EnvironmentSpec::two_point(0.75, 0.75, 1.0, 0),
                      GapSequenceSpec::constant(1), 1};  // a_0 = 1 < b+1
    Rng rng(2, 0);
    CHECK_THROWS_AS(make_rwre_gaps(bad, 10, rng), SpecError);
    RwreGapParams bad2{EnvironmentSpec::two_point(0.75, 0.75, 1.0, 0),
                       GapSequenceSpec::periodic({2, 1}), 1};  // wrong kind
    CHECK_THROWS_AS(make_rwre_gaps(bad2, 10, rng), SpecError);
  }
}
