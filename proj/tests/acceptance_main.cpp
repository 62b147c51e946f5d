// Acceptance suite: one pass/fail line per criterion, exit code equals the
// number of failed criteria. Each criterion pins its tolerances in code and
// runs with fixed seeds, so the binary is deterministic end to end.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "mdp/counting.hpp"
#include "mdp/gapseq.hpp"
#include "mdp/harness.hpp"
#include "mdp/partition.hpp"
#include "mdp/rng.hpp"
#include "mdp/rwre.hpp"
#include "mdp/sampler.hpp"
#include "mdp/shape.hpp"
#include "mdp/stats.hpp"

using namespace mdp;

namespace {

struct Criterion {
  int id;
  std::string name;
  std::function<bool(std::string&)> run;
};

bool nearly(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

// ---------------------------------------------------------------------------
// 1. Closed-form constants to 1e-6 absolute.
bool criterion1(std::string& detail) {
  struct Row { double q, T, theta; };
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<Row> rows = {
      {0.0, inf, kPi / std::sqrt(6.0)},
      {1.0, std::log(2.0), kPi / std::sqrt(12.0)},
      {2.0, std::log((1.0 + std::sqrt(5.0)) / 2.0), kPi / std::sqrt(15.0)},
      {0.5, 0.962424, kPi / std::sqrt(10.0)},
      {3.0, 0.382245, 0.752618},
      {1.0 / 3.0, 1.146735, 1.038508},
  };
  bool ok = true;
  for (const auto& row : rows) {
    auto sc = ShapeConstants::for_gap(row.q);
    if (std::isinf(row.T)) {
      ok = ok && std::isinf(sc.T);
    } else {
      ok = ok && nearly(sc.T, row.T, 1e-6);
    }
    ok = ok && nearly(sc.theta, row.theta, 1e-6);
  }
  detail = "11 constants vs closed forms / printed values";
  return ok;
}

// ---------------------------------------------------------------------------
// 2. Duality and conservation on a 50-point log grid, plus the figure values.
bool criterion2(std::string& detail) {
  bool ok = true;
  double worst_dual = 0.0, worst_cons = 0.0;
  for (int i = 0; i < 50; ++i) {
    double q = std::pow(10.0, -3.0 + 6.0 * static_cast<double>(i) / 49.0);
    worst_dual = std::max(worst_dual, verify_duality(q).defect);
    worst_cons = std::max(worst_cons, verify_conservation(q));
  }
  ok = ok && worst_dual <= 1e-10 && worst_cons <= 1e-10;
  ok = ok && nearly(solve_Tq(4.0 / 3.0), 0.598382, 1e-6);
  ok = ok && nearly(solve_Tq(3.0 / 4.0), 0.797842, 1e-6);
  char buf[128];
  std::snprintf(buf, sizeof buf, "max duality defect %.2e, max conservation defect %.2e",
                worst_dual, worst_cons);
  detail = buf;
  return ok;
}

// ---------------------------------------------------------------------------
// 3. Exact counting vs brute-force enumeration for n <= 25.
bool criterion3(std::string& detail) {
  std::vector<GapSequenceSpec> specs = {
      GapSequenceSpec::constant(0),
      GapSequenceSpec::constant(1),
      GapSequenceSpec::constant(2),
      GapSequenceSpec::periodic({1, 0}),
  };
  long long checked = 0;
  for (auto& spec : specs) {
    GapSequenceProvider g(spec);
    for (std::int64_t n = 0; n <= 25; ++n) {
      std::map<std::int64_t, std::int64_t> by_k;
      std::int64_t total = 0;
      for (const auto& p : enumerate_mdp_fiber(g, n)) {
        ++by_k[p.length()];
        ++total;
      }
      if (n == 0) total = 1;  // the empty partition
      if (count_mdp_total(g, n) != total) return false;
      for (std::int64_t k = 0; k <= n + 1; ++k) {
        mpz_class expect = (k == 0) ? (n == 0 ? 1 : 0)
                                    : mpz_class(by_k.count(k) ? by_k[k] : 0);
        if (count_mdp(g, n, k) != expect) return false;
        ++checked;
      }
    }
  }
  detail = std::to_string(checked) + " (n,k) cells, exact equality";
  return true;
}

// ---------------------------------------------------------------------------
// 4. Sylvester round-trip on 1e4 random MDP partitions per gap spec.
bool criterion4(std::string& detail) {
  std::vector<GapSequenceSpec> specs = {
      GapSequenceSpec::constant(0),
      GapSequenceSpec::constant(1),
      GapSequenceSpec::constant(2),
      GapSequenceSpec::periodic({1, 0}),
  };
  Rng rng(40404, 0);
  for (auto& spec : specs) {
    GapSequenceProvider g(spec);
    for (int rep = 0; rep < 10000; ++rep) {
      std::int64_t k = 1 + static_cast<std::int64_t>(rng.below(20));
      double z = 0.05 + rng.uniform01();
      Partition lam = sample_canonical(g, z, k, rng);
      Partition rho = sylvester_forward(lam, g);
      if (rho.weight() != lam.weight() + k - g.weighted_sum(k)) return false;
      if (!(sylvester_inverse(rho, g) == lam)) return false;
      if (!(sylvester_forward(sylvester_inverse(rho, g), g) == rho)) return false;
    }
  }
  detail = "4 specs x 10^4 partitions, identity and weight law exact";
  return true;
}

// ---------------------------------------------------------------------------
// 5. Exact-uniformity chi-square at 1e5 draws on the n = 12 fibers, both for
//    the unranking sampler and for grand-canonical conditioning on N = n.
bool criterion5(std::string& detail) {
  std::vector<GapSequenceSpec> specs = {
      GapSequenceSpec::constant(0),
      GapSequenceSpec::constant(1),
      GapSequenceSpec::periodic({1, 0}),
  };
  const std::int64_t B = 100000;
  const std::int64_t n = 12;
  double min_pv = 1.0;
  std::uint64_t seed = 5000;
  for (auto& spec : specs) {
    GapSequenceProvider g(spec);
    auto fiber = enumerate_mdp_fiber(g, n);
    std::vector<double> expected(fiber.size(),
                                 static_cast<double>(B) / static_cast<double>(fiber.size()));
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < fiber.size(); ++i) index[fiber[i].to_text()] = i;

    auto sampler = UniformFiberSampler::whole_fiber(g, n);
    ConditionedFiberSampler conditioned(g, n);
    for (int mode = 0; mode < 2; ++mode) {
      std::vector<std::int64_t> observed(fiber.size(), 0);
      Rng rng(seed++, 0);
      for (std::int64_t b = 0; b < B; ++b) {
        Partition p = mode == 0 ? sampler.draw(rng) : conditioned.draw(rng);
        auto it = index.find(p.to_text());
        if (it == index.end()) return false;
        ++observed[it->second];
      }
      double pv = chi_square_pvalue(chi_square_stat(observed, expected),
                                    static_cast<std::int64_t>(fiber.size()) - 1);
      min_pv = std::min(min_pv, pv);
      if (pv <= 1e-3) {
        detail = "rejected with p = " + std::to_string(pv);
        return false;
      }
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "3 specs x 2 samplers at 10^5 draws; min p-value %.4f", min_pv);
  detail = buf;
  return true;
}

// ---------------------------------------------------------------------------
// 6. Canonical marginal means within 3 sigma at z = 0.1, k = 50, 1e5 draws.
bool criterion6(std::string& detail) {
  GapSequenceProvider alt(GapSequenceSpec::periodic({1, 0}));
  const double z = 0.1;
  const std::int64_t k = 50;
  const std::int64_t B = 100000;
  CanonicalKSampler sampler(alt, z, k);
  std::vector<double> sum(static_cast<std::size_t>(k), 0.0);
  Rng rng(606, 0);
  for (std::int64_t b = 0; b < B; ++b) {
    Partition p = sampler.draw(rng);
    auto d = p.differences();
    for (std::size_t j = 0; j < d.size(); ++j) sum[j] += static_cast<double>(d[j]);
  }
  auto gaps = alt.gaps_upto(k);
  double worst = 0.0;
  for (std::int64_t j = 1; j <= k; ++j) {
    double x = std::exp(-z * static_cast<double>(j));
    double expect = static_cast<double>(gaps[static_cast<std::size_t>(k - j)]) + x / (1.0 - x);
    double sigma = std::sqrt(x) / (1.0 - x) / std::sqrt(static_cast<double>(B));
    double dev = std::fabs(sum[static_cast<std::size_t>(j - 1)] / static_cast<double>(B) - expect);
    worst = std::max(worst, dev / sigma);
    if (dev > 3.0 * sigma) {
      detail = "difference j=" + std::to_string(j) + " off by " + std::to_string(dev / sigma) +
               " sigma";
      return false;
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "worst marginal at %.2f sigma", worst);
  detail = buf;
  return true;
}

// ---------------------------------------------------------------------------
// 7. Limit-shape convergence at desk scale.
bool criterion7(std::string& detail) {
  bool ok = true;
  char buf[256];

  // q = 1, exact uniform nu_n via grand-canonical conditioning.
  GapSequenceProvider one(GapSequenceSpec::constant(1));
  auto rep1 = run_limit_shape_experiment(one, 1.0, {10000, 1000000}, 50,
                                         EnsembleKind::UniformN, 71);
  double q1_small = rep1.single("sup_dev_median", 10000);
  double q1_large = rep1.single("sup_dev_median", 1000000);
  bool a1 = q1_large < 0.05;
  bool b1 = q1_large < q1_small;
  ok = ok && a1 && b1;

  // q = 0 (plain partitions) against the free curve.
  GapSequenceProvider plain(GapSequenceSpec::constant(0));
  auto rep0 = run_limit_shape_experiment(plain, 0.0, {10000, 1000000}, 50,
                                         EnsembleKind::UniformN, 72);
  double q0_small = rep0.single("sup_dev_median", 10000);
  double q0_large = rep0.single("sup_dev_median", 1000000);
  bool a0 = q0_large < 0.05;
  bool b0 = q0_large < q0_small;
  ok = ok && a0 && b0;

  // Fixed-length regime tau = 0.5 against phi_{T_*}.
  LimitShapeOptions opts;
  opts.tau = 0.5;
  auto repk = run_limit_shape_experiment(one, 1.0, {10000, 1000000}, 50,
                                         EnsembleKind::UniformNK, 73, opts);
  double qk_small = repk.single("sup_dev_median", 10000);
  double qk_large = repk.single("sup_dev_median", 1000000);
  bool ak = qk_large < 0.05;
  bool bk = qk_large < qk_small;
  ok = ok && ak && bk;

  std::snprintf(buf, sizeof buf,
                "medians q1: %.4f->%.4f (a:%s b:%s); q0: %.4f->%.4f (a:%s b:%s); "
                "tau=0.5: %.4f->%.4f (a:%s b:%s)",
                q1_small, q1_large, a1 ? "ok" : "FAIL", b1 ? "ok" : "FAIL", q0_small, q0_large,
                a0 ? "ok" : "FAIL", b0 ? "ok" : "FAIL", qk_small, qk_large, ak ? "ok" : "FAIL",
                bk ? "ok" : "FAIL");
  detail = buf;
  return ok;
}

// ---------------------------------------------------------------------------
// 8. Number-of-parts law of large numbers at n = 1e6.
bool criterion8(std::string& detail) {
  bool ok = true;
  char buf[192];

  GapSequenceProvider one(GapSequenceSpec::constant(1));
  auto r1 = run_parts_experiment(one, 1.0, {1000000}, 50, 81);
  double m1 = r1.single("k_over_sqrt_n_mean", 1000000);
  bool ok1 = std::fabs(m1 / 0.764304 - 1.0) < 0.02;

  GapSequenceProvider two(GapSequenceSpec::constant(2));
  auto r2 = run_parts_experiment(two, 2.0, {1000000}, 50, 82);
  double target2 = solve_Tq(2.0) / theta(2.0);
  double m2 = r2.single("k_over_sqrt_n_mean", 1000000);
  bool ok2 = std::fabs(m2 / target2 - 1.0) < 0.02;

  GapSequenceProvider plain(GapSequenceSpec::constant(0));
  auto r0 = run_parts_experiment(plain, 0.0, {1000000}, 50, 80);
  double target0 = std::sqrt(6.0) / (2.0 * kPi);
  double m0 = r0.single("k_over_sqrtn_logn_mean", 1000000);
  bool ok0 = std::fabs(m0 / target0 - 1.0) < 0.10;

  ok = ok1 && ok2 && ok0;
  std::snprintf(buf, sizeof buf,
                "q=1: %.5f vs 0.764304 (%s); q=2: %.5f vs %.5f (%s); q=0: %.5f vs %.5f (%s)",
                m1, ok1 ? "ok" : "FAIL", m2, target2, ok2 ? "ok" : "FAIL", m0, target0,
                ok0 ? "ok" : "FAIL");
  detail = buf;
  return ok;
}

// ---------------------------------------------------------------------------
// 9. k_*(z) asymptotics for q = 1.
bool criterion9(std::string& detail) {
  GapSequenceProvider one(GapSequenceSpec::constant(1));
  double z = 1e-3;
  double zk = z * static_cast<double>(k_star(one, z));
  char buf[64];
  std::snprintf(buf, sizeof buf, "z k_*(z) = %.6f vs log 2 = %.6f", zk, std::log(2.0));
  detail = buf;
  return std::fabs(zk - std::log(2.0)) <= 0.01;
}

// ---------------------------------------------------------------------------
// 10. Random-environment pipeline end to end.
bool criterion10(std::string& detail) {
  RwreGapParams params{EnvironmentSpec::two_point(0.75, 0.75, 1.0, 0),
                       GapSequenceSpec::constant(2), 1};
  auto report = run_rwre_pipeline(params, 100000, 1000000, 50, 1010);
  double q_hat = report.single("q_hat");
  bool ok_q = q_hat >= 2.49 && q_hat <= 2.51;
  double med = report.single("sup_dev_median", 1000000);
  bool ok_dev = med < 0.07;

  // Solomon drift vs the realized slope of an independent walk.
  double v = drift(params.env);
  Rng rng(1011, 0);
  auto traj = run_walk(params.env, 1000000, rng);
  double slope = static_cast<double>(traj.back()) / 1e6;
  bool ok_v = std::fabs(slope - v) < 0.01;

  char buf[160];
  std::snprintf(buf, sizeof buf,
                "q_hat %.5f (%s); median dev %.4f vs 0.07 (%s); drift %.4f vs slope %.4f (%s)",
                q_hat, ok_q ? "ok" : "FAIL", med, ok_dev ? "ok" : "FAIL", v, slope,
                ok_v ? "ok" : "FAIL");
  detail = buf;
  return ok_q && ok_dev && ok_v;
}

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {1, "closed-form constants T_q, theta_q", criterion1},
      {2, "duality T_{1/q} = q T_q and conservation of pi^2/6", criterion2},
      {3, "exact counting vs brute-force enumeration (n <= 25)", criterion3},
      {4, "Sylvester bijection round-trip and weight law", criterion4},
      {5, "exact-uniformity chi-square on n = 12 fibers", criterion5},
      {6, "canonical geometric marginals (z=0.1, k=50)", criterion6},
      {7, "limit-shape convergence at n = 1e4 -> 1e6", criterion7},
      {8, "number-of-parts LLN at n = 1e6", criterion8},
      {9, "k_*(z) asymptotics at z = 1e-3", criterion9},
      {10, "random-environment pipeline", criterion10},
  };

  int failures = 0;
  for (auto& criterion : criteria) {
    auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool pass = false;
    try {
      pass = criterion.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] criterion %2d: %s (%.1f s)%s%s\n", pass ? "PASS" : "FAIL", criterion.id,
                criterion.name.c_str(), secs, detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
  }
  if (failures == 0) {
    std::printf("all %zu acceptance criteria passed\n", criteria.size());
  } else {
    std::printf("%d acceptance criteria FAILED\n", failures);
  }
  return failures == 0 ? 0 : 1;
}
