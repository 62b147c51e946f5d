#include "mdp/counting.hpp"

#include <algorithm>
#include <cmath>

#include "mdp/errors.hpp"

namespace mdp {

const mpz_class CountTable::zero_ = 0;

std::size_t CountTable::estimate_bytes(std::int64_t r_max, std::int64_t k_max) {
  // log2 p(r) <= pi * sqrt(2r/3) / ln 2; average over rows ~ 2/3 of the top.
  double top_bits = 4.5324 * std::sqrt(static_cast<double>(std::max<std::int64_t>(r_max, 1)));
  double avg_limb_bytes = (top_bits * 2.0 / 3.0) / 8.0;
  double per_cell = avg_limb_bytes + sizeof(mpz_class) + 16.0;  // limbs + header + allocator slack
  double cells = static_cast<double>(r_max + 1) * static_cast<double>(k_max + 1);
  return static_cast<std::size_t>(cells * per_cell);
}

CountTable::CountTable(std::int64_t r_max, std::int64_t k_max, std::size_t max_bytes)
    : r_max_(r_max), k_max_(k_max) {
  if (r_max < 0 || k_max < 0) throw DomainError("CountTable bounds must be non-negative");
  std::size_t need = estimate_bytes(r_max, k_max);
  if (need > max_bytes)
    throw TableBudgetError("count table would need ~" + std::to_string(need >> 20) +
                           " MiB, over the budget of " + std::to_string(max_bytes >> 20) + " MiB");
  std::size_t cols = static_cast<std::size_t>(k_max + 1);
  cells_.assign(static_cast<std::size_t>(r_max + 1) * cols, mpz_class(0));
  cells_[0] = 1;  // p(0,0) = 1
  for (std::int64_t r = 1; r <= r_max; ++r) {
    std::size_t row = static_cast<std::size_t>(r) * cols;
    std::int64_t kk_hi = std::min(k_max, r);
    for (std::int64_t k = 1; k <= kk_hi; ++k) {
      // p(r,k) = p(r-1,k-1) + p(r-k,k)
      mpz_class& cell = cells_[row + static_cast<std::size_t>(k)];
      cell = cells_[static_cast<std::size_t>(r - 1) * cols + static_cast<std::size_t>(k - 1)];
      if (r - k >= 0)
        cell += cells_[static_cast<std::size_t>(r - k) * cols + static_cast<std::size_t>(k)];
    }
  }
}

const mpz_class& CountTable::count(std::int64_t r, std::int64_t k) const {
  if (r < 0 || k < 0 || k > r) return zero_;
  if (r > r_max_ || k > k_max_) throw DomainError("CountTable query out of range");
  return cells_[static_cast<std::size_t>(r) * static_cast<std::size_t>(k_max_ + 1) +
                static_cast<std::size_t>(k)];
}

mpz_class count_exact_parts(std::int64_t r, std::int64_t k) {
  if (r < 0 || k < 0) throw DomainError("count_exact_parts needs r, k >= 0");
  if (k == 0) return r == 0 ? 1 : 0;
  if (k > r) return 0;
  std::vector<mpz_class> prev(static_cast<std::size_t>(r) + 1), cur(static_cast<std::size_t>(r) + 1);
  prev[0] = 1;  // p(m, 0)
  for (std::int64_t kk = 1; kk <= k; ++kk) {
    std::fill(cur.begin(), cur.end(), mpz_class(0));
    for (std::int64_t m = kk; m <= r; ++m) {
      cur[static_cast<std::size_t>(m)] = prev[static_cast<std::size_t>(m - 1)];
      if (m - kk >= 0) cur[static_cast<std::size_t>(m)] += cur[static_cast<std::size_t>(m - kk)];
    }
    std::swap(prev, cur);
  }
  return prev[static_cast<std::size_t>(r)];
}

mpz_class count_mdp(const GapSequenceProvider& g, std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0) throw DomainError("count_mdp needs n, k >= 0");
  if (k == 0) return n == 0 ? 1 : 0;
  std::int64_t r = n + k - g.weighted_sum(k);
  if (r < k) return 0;  // empty class
  return count_exact_parts(r, k);
}

mpz_class count_mdp(const GapSequenceProvider& g, std::int64_t n, std::int64_t k,
                    const CountTable& table) {
  if (n < 0 || k < 0) throw DomainError("count_mdp needs n, k >= 0");
  if (k == 0) return n == 0 ? 1 : 0;
  std::int64_t r = n + k - g.weighted_sum(k);
  if (r < k) return 0;
  return table.count(r, k);
}

mpz_class count_mdp_total(const GapSequenceProvider& g, std::int64_t n) {
  if (n < 0) throw DomainError("count_mdp_total needs n >= 0");
  if (n == 0) return 1;  // the empty partition
  // s_k <= n is necessary and sufficient for a non-empty fiber (r >= k iff
  // n >= s_k); s_k is strictly increasing, so the sum below is finite.
  std::int64_t k_end = 0;
  while (g.weighted_sum(k_end + 1) <= n) ++k_end;
  if (k_end == 0) return 0;
  std::int64_t r_top = 0;
  for (std::int64_t k = 1; k <= k_end; ++k)
    r_top = std::max(r_top, n + k - g.weighted_sum(k));
  mpz_class total = 0;
  if (CountTable::estimate_bytes(r_top, k_end) <= CountTable::kDefaultBudgetBytes) {
    CountTable table(r_top, k_end);
    for (std::int64_t k = 1; k <= k_end; ++k) total += count_mdp(g, n, k, table);
  } else {
    for (std::int64_t k = 1; k <= k_end; ++k) total += count_mdp(g, n, k);
  }
  return total;
}

double log_gen_fn_fixed_k(const GapSequenceProvider& g, double z, std::int64_t k) {
  if (!(z > 0.0)) throw DomainError("log_gen_fn_fixed_k needs z > 0");
  if (k < 0) throw DomainError("log_gen_fn_fixed_k needs k >= 0");
  if (k == 0) return 0.0;
  double acc = -z * static_cast<double>(g.weighted_sum(k));
  for (std::int64_t j = 1; j <= k; ++j)
    acc -= std::log1p(-std::exp(-z * static_cast<double>(j)));
  return acc;
}

double log_eta(const GapSequenceProvider& g, double z, std::int64_t k) {
  if (!(z > 0.0)) throw DomainError("eta needs z > 0");
  if (k < 1) throw DomainError("eta needs k >= 1");
  double zq = z * static_cast<double>(g.prefix_sum(k));
  return -zq - std::log1p(-std::exp(-z * static_cast<double>(k)));
}

double eta(const GapSequenceProvider& g, double z, std::int64_t k) {
  return std::exp(log_eta(g, z, k));
}

std::int64_t k_star(const GapSequenceProvider& g, double z) {
  if (!(z > 0.0)) throw DomainError("k_star needs z > 0");
  if (log_eta(g, z, 1) < 0.0) return 1;
  // eta_k(z) is decreasing in k, so the set {eta_k >= 1} is an interval
  // 1..k_*: double the horizon, then bisect.
  std::int64_t lo = 1, hi = 2;
  while (log_eta(g, z, hi) >= 0.0) {
    lo = hi;
    hi *= 2;
    if (hi > (std::int64_t{1} << 40)) throw DomainError("k_star horizon overflow");
  }
  while (hi - lo > 1) {
    std::int64_t mid = lo + (hi - lo) / 2;
    if (log_eta(g, z, mid) >= 0.0) lo = mid;
    else hi = mid;
  }
  return lo;
}

std::int64_t k_gamma(const GapSequenceProvider& g, double z, double gamma) {
  if (!(z > 0.0 && z < 1.0)) throw DomainError("k_gamma needs z in (0,1)");
  if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("k_gamma needs gamma in (0,1)");
  double threshold = std::pow(z, -2.0 * (1.0 - gamma));
  if (threshold > 1e15) throw DomainError("k_gamma threshold exceeds supported range");
  // s_k >= k, so k <= ceil(threshold); s_k strictly increasing -> bisect.
  std::int64_t hi = static_cast<std::int64_t>(std::ceil(threshold));
  if (hi < 1) hi = 1;
  std::int64_t lo = 0;  // s_0 = 0 < threshold (threshold >= 1)
  while (hi - lo > 1) {
    std::int64_t mid = lo + (hi - lo) / 2;
    if (static_cast<double>(g.weighted_sum(mid)) >= threshold) hi = mid;
    else lo = mid;
  }
  return hi;
}

std::vector<double> GrandCanonicalWeights::probabilities() const {
  std::vector<double> p(log_weight.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::exp(log_weight[i] - log_total);
  return p;
}

GrandCanonicalWeights grand_weights(const GapSequenceProvider& g, double z, double rel_tail) {
  if (!(z > 0.0)) throw DomainError("grand_weights needs z > 0");
  if (!(rel_tail > 0.0 && rel_tail < 1.0)) throw DomainError("rel_tail must lie in (0,1)");
  GrandCanonicalWeights w;
  w.z = z;
  w.k_star = k_star(g, z);
  w.log_weight.push_back(0.0);  // F_q(z,0) = 1
  double log_sum = 0.0;         // log of accumulated sum, via shifted accumulation
  double lf = 0.0;
  const std::int64_t hard_cap = 50'000'000;
  double log_rel = std::log(rel_tail);
  for (std::int64_t k = 1;; ++k) {
    if (k > hard_cap) throw DomainError("grand_weights truncation did not converge");
    double le = log_eta(g, z, k);
    lf += le;
    w.log_weight.push_back(lf);
    double m = std::max(log_sum, lf);
    log_sum = m + std::log(std::exp(log_sum - m) + std::exp(lf - m));
    if (k <= w.k_star) continue;
    // Tail k' > k is dominated by the geometric series with ratio
    // eta_{k+1} <= eta_k < 1: sum <= F(z,k) * eta/(1-eta).
    double le_next = log_eta(g, z, k + 1);
    if (le_next >= 0.0) continue;
    double eta_next = std::exp(le_next);
    double log_tail = lf + le_next - std::log1p(-eta_next);
    if (log_tail < log_rel + log_sum) {
      w.log_total = log_sum;
      w.tail_bound_rel = std::exp(log_tail - log_sum);
      break;
    }
  }
  return w;
}

}  // namespace mdp
