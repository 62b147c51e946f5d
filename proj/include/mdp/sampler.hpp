// Random generation of minimal-difference partitions under the four
// ensembles:
//   - canonical mu_{z,k}: independent differences D_j = q_{k-j} + G_j with
//     G_j geometric of parameter 1 - e^{-zj};
//   - grand-canonical mu_z: length K drawn from the truncated weights
//     F_q(z,k)/F_q(z), then canonical;
//   - uniform nu_{n,k} and nu_n: exact, by unranking a uniform partition of
//     r = n + k - s_k into exactly k parts against the count table and
//     mapping back through the Sylvester shift.
//
// Samplers are immutable after construction; every draw takes an explicit
// Rng stream, so batches parallelize by (seed, stream id) and reproduce
// independently of scheduling.
#ifndef MDP_SAMPLER_HPP
#define MDP_SAMPLER_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include <gmpxx.h>

#include "mdp/counting.hpp"
#include "mdp/gapseq.hpp"
#include "mdp/partition.hpp"
#include "mdp/rng.hpp"

namespace mdp {

struct SamplerConfig {
  enum class Ensemble { CanonicalZK, GrandZ, UniformNK, UniformN };
  Ensemble ensemble = Ensemble::UniformN;
  double z = 0.0;
  std::int64_t n = 0;
  std::int64_t k = 0;
  std::uint64_t seed = 0;
};

// Unbiased uniform big integer in [0, bound), bound >= 1.
mpz_class uniform_mpz_below(Rng& rng, const mpz_class& bound);

// One canonical draw; z > 0, k >= 1.
Partition sample_canonical(const GapSequenceProvider& g, double z, std::int64_t k, Rng& rng);

// One grand-canonical draw; the K = 0 outcome returns the empty partition.
Partition sample_grand(const GapSequenceProvider& g, double z, Rng& rng);
Partition sample_grand(const GapSequenceProvider& g, const GrandCanonicalWeights& weights,
                       Rng& rng);

// Repeated canonical draws at fixed (z,k): shifts and per-j constants are
// snapshotted once, so draws never touch the provider again.
class CanonicalKSampler {
 public:
  CanonicalKSampler(const GapSequenceProvider& g, double z, std::int64_t k);

  Partition draw(Rng& rng) const;

  // Rejection support: draws the geometric part-weights only and reports
  // w = sum_j j G_j, aborting early once w exceeds `cap`. Returns w (or
  // cap+1 on abort) and leaves the raw G_j draws in `gbuf`.
  std::int64_t draw_excess_weight(Rng& rng, std::int64_t cap,
                                  std::vector<std::int64_t>& gbuf) const;

  // Partition with differences D_j = q_{k-j} + G_j.
  Partition assemble(const std::vector<std::int64_t>& gbuf) const;

  std::int64_t k() const { return k_; }
  double z() const { return z_; }
  std::int64_t shift_weight() const { return s_k_; }  // s_k

 private:
  double z_;
  std::int64_t k_;
  std::int64_t s_k_;
  std::vector<std::int64_t> shifts_;  // q_{k-j}, j = 1..k
  std::vector<double> c_;             // e^{-zj}: G_j = 0 iff U >= c_j
  std::vector<double> neg_inv_zj_;    // -1/(zj)
};

// Exact uniform sampling on a fiber (n fixed, length free or fixed), backed
// by one count table shared across draws.
class UniformFiberSampler {
 public:
  // nu_n: uniform over all minimal-difference partitions of weight n.
  static UniformFiberSampler whole_fiber(
      const GapSequenceProvider& g, std::int64_t n,
      std::size_t max_table_bytes = CountTable::kDefaultBudgetBytes);
  // nu_{n,k}: uniform over the fixed-length class.
  static UniformFiberSampler fixed_length(
      const GapSequenceProvider& g, std::int64_t n, std::int64_t k,
      std::size_t max_table_bytes = CountTable::kDefaultBudgetBytes);

  // Throws EmptyClassError when the fiber is empty.
  Partition draw(Rng& rng) const;

  const mpz_class& total() const { return total_; }  // p_q(n) or p_q(n,k)
  // p_q(n, k) for the k values the sampler can produce.
  const std::vector<std::pair<std::int64_t, mpz_class>>& class_counts() const {
    return class_counts_;
  }

 private:
  UniformFiberSampler(const GapSequenceProvider& g, std::int64_t n,
                      std::optional<std::int64_t> k, std::size_t max_table_bytes);
  void build(const GapSequenceProvider& g, std::size_t max_table_bytes);
  Partition unrank(std::int64_t k, Rng& rng) const;

  std::int64_t n_;
  std::optional<std::int64_t> fixed_k_;
  std::vector<std::int64_t> qsum_;  // Q_0..Q_{k_top}, for the inverse shift
  std::vector<std::int64_t> ssum_;  // s_0..s_{k_top}
  std::vector<std::pair<std::int64_t, mpz_class>> class_counts_;  // (k, p_q(n,k)), nonzero only
  mpz_class total_ = 0;
  std::unique_ptr<CountTable> table_;
};

// Convenience single draws (they build the table per call; use the class for
// repeated sampling).
Partition sample_uniform_nk(const GapSequenceProvider& g, std::int64_t n, std::int64_t k,
                            Rng& rng);
Partition sample_uniform_n(const GapSequenceProvider& g, std::int64_t n, Rng& rng);

}  // namespace mdp

#endif  // MDP_SAMPLER_HPP
