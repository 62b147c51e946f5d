// Exact counting of partitions and minimal-difference partitions, plus the
// log-space generating-function machinery of the grand-canonical ensemble.
//
// p(r,k) counts partitions of r into exactly k positive parts and obeys
// p(r,k) = p(r-1,k-1) + p(r-k,k). The minimal-difference count is obtained
// through the Sylvester shift: p_q(n,k) = p(n+k-s_k, k) whenever
// n + k - s_k >= k, and 0 otherwise.
//
// All generating-function arithmetic is done in log space: F_q(z) spans
// hundreds of orders of magnitude already at z ~ 1e-3.
#ifndef MDP_COUNTING_HPP
#define MDP_COUNTING_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include <gmpxx.h>

#include "mdp/gapseq.hpp"

namespace mdp {

// Dense DP table of p(r,k) for 0 <= r <= r_max, 0 <= k <= k_max.
// Build is single-writer; the table is read-only afterwards.
class CountTable {
 public:
  static constexpr std::size_t kDefaultBudgetBytes = 1200u * 1024u * 1024u;

  // Throws TableBudgetError if the estimated storage exceeds max_bytes.
  CountTable(std::int64_t r_max, std::int64_t k_max,
             std::size_t max_bytes = kDefaultBudgetBytes);

  const mpz_class& count(std::int64_t r, std::int64_t k) const;
  std::int64_t r_max() const { return r_max_; }
  std::int64_t k_max() const { return k_max_; }

  // Rough upper bound on the bytes a full table would take, used to decide
  // between the dense table and the streaming per-k fallback.
  static std::size_t estimate_bytes(std::int64_t r_max, std::int64_t k_max);

 private:
  std::int64_t r_max_, k_max_;
  std::vector<mpz_class> cells_;  // (r_max+1) x (k_max+1), row-major in r
  static const mpz_class zero_;
};

// p(r,k) without a table: two-row sweep, O(r*k) time, O(r) memory.
mpz_class count_exact_parts(std::int64_t r, std::int64_t k);

// p_q(n,k) = #{minimal-difference partitions of n with exactly k parts}.
mpz_class count_mdp(const GapSequenceProvider& g, std::int64_t n, std::int64_t k);
mpz_class count_mdp(const GapSequenceProvider& g, std::int64_t n, std::int64_t k,
                    const CountTable& table);

// p_q(n) = sum_k p_q(n,k); the sum stops at the largest k with s_k <= n.
mpz_class count_mdp_total(const GapSequenceProvider& g, std::int64_t n);

// log F_q(z,k) = -z s_k - sum_{j<=k} log(1 - e^{-zj}); k = 0 gives 0.
double log_gen_fn_fixed_k(const GapSequenceProvider& g, double z, std::int64_t k);

// eta_k(z) = e^{-z Q_k} / (1 - e^{-zk}) = F_q(z,k)/F_q(z,k-1); k >= 1.
double eta(const GapSequenceProvider& g, double z, std::int64_t k);
double log_eta(const GapSequenceProvider& g, double z, std::int64_t k);

// Mode of the length distribution under the grand-canonical measure:
// the largest k with eta_k(z) >= 1, or 1 when eta_1(z) < 1.
std::int64_t k_star(const GapSequenceProvider& g, double z);

// Smallest k with s_k >= z^{-2(1-gamma)}; z in (0,1), gamma in (0,1).
std::int64_t k_gamma(const GapSequenceProvider& g, double z, double gamma);

// Truncated log-space weights F_q(z,k) for k = 0..K, where K is chosen so
// that the geometric-domination tail bound is below rel_tail of the
// accumulated sum.
struct GrandCanonicalWeights {
  double z = 0;
  std::vector<double> log_weight;  // log F_q(z,k), k = 0..K
  double log_total = 0;            // log of the truncated sum
  double tail_bound_rel = 0;       // bound on neglected mass / total
  std::int64_t k_star = 1;

  std::int64_t k_max() const { return static_cast<std::int64_t>(log_weight.size()) - 1; }
  // Normalized probabilities of the kept k values (sum to 1 up to the tail).
  std::vector<double> probabilities() const;
};

GrandCanonicalWeights grand_weights(const GapSequenceProvider& g, double z,
                                    double rel_tail = 1e-10);

}  // namespace mdp

#endif  // MDP_COUNTING_HPP
