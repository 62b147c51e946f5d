// Gap sequences q = (q_i): the per-index minimal differences that define a
// minimal-difference partition space. A provider exposes q_i, the prefix
// sums Q_k = sum_{i<k} q_i and the weighted sums s_k = sum_{i<=k} Q_i, all
// cached and extended on demand.
//
// Conventions enforced at construction: every q_i is a non-negative integer
// and q_0 >= 1. Constant(0) is patched to q_0 = 1 (plain partitions); all
// other kinds reject a zero first value instead of patching it.
//
// Random-environment (RWRE) gap sequences are produced by the rwre module as
// materialized Explicit sequences; see mdp/rwre.hpp.
#ifndef MDP_GAPSEQ_HPP
#define MDP_GAPSEQ_HPP

#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace mdp {

// Integer-valued distribution for i.i.d. random gaps. Draws are frozen by
// (seed, index), so value i is the same no matter the query order.
struct DistributionSpec {
  enum class Kind { TwoPoint, Geometric, BoundedUniform };

  Kind kind = Kind::TwoPoint;
  std::int64_t a = 0, b = 1;  // two-point values: a w.p. p, else b
  double p = 0.5;             // two-point weight / geometric success prob
  std::int64_t lo = 0, hi = 1;

  static DistributionSpec two_point(std::int64_t a, std::int64_t b, double p);
  static DistributionSpec geometric(double p);
  static DistributionSpec bounded_uniform(std::int64_t lo, std::int64_t hi);

  std::int64_t sample(std::uint64_t seed, std::uint64_t index) const;
  std::string to_text() const;
};

struct ConstantGaps {
  std::int64_t q = 1;
};
struct PeriodicGaps {
  std::vector<std::int64_t> pattern;
};
struct ExplicitGaps {
  std::vector<std::int64_t> values;
  std::int64_t tail = 0;
};
struct IidGaps {
  DistributionSpec dist;
  std::uint64_t seed = 0;
};

struct GapSequenceSpec {
  std::variant<ConstantGaps, PeriodicGaps, ExplicitGaps, IidGaps> kind;

  static GapSequenceSpec constant(std::int64_t q) { return {ConstantGaps{q}}; }
  static GapSequenceSpec periodic(std::vector<std::int64_t> pattern) {
    return {PeriodicGaps{std::move(pattern)}};
  }
  static GapSequenceSpec explicit_list(std::vector<std::int64_t> values, std::int64_t tail) {
    return {ExplicitGaps{std::move(values), tail}};
  }
  static GapSequenceSpec iid(DistributionSpec dist, std::uint64_t seed) {
    return {IidGaps{dist, seed}};
  }

  std::string to_text() const;
};

class GapSequenceProvider {
 public:
  // Throws SpecError if the spec violates the q_0 >= 1 / non-negativity rules.
  explicit GapSequenceProvider(GapSequenceSpec spec);

  GapSequenceProvider(const GapSequenceProvider&) = delete;
  GapSequenceProvider& operator=(const GapSequenceProvider&) = delete;

  std::int64_t gap(std::int64_t i) const;           // q_i, i >= 0
  std::int64_t prefix_sum(std::int64_t k) const;    // Q_k, k >= 0
  std::int64_t weighted_sum(std::int64_t k) const;  // s_k, k >= 0

  // Snapshot of q_0..q_{k-1}; lock taken once, so hot loops stay contention-free.
  std::vector<std::int64_t> gaps_upto(std::int64_t k) const;
  // Snapshot of s_0..s_k.
  std::vector<std::int64_t> weighted_sums_upto(std::int64_t k) const;

  // Empirical check of the regularity condition Q_k = q k + O(k^beta):
  // q_hat = Q_{k_max}/k_max and beta_hat = least-squares slope of
  // log|Q_k - q_hat k| against log k over k in [k_max/2, k_max] (zero
  // residuals are skipped; all-zero residuals give beta_hat = 0).
  // Requires k_max >= 100.
  std::pair<double, double> estimate_regularity(std::int64_t k_max) const;

  const GapSequenceSpec& spec() const { return spec_; }
  std::string spec_text() const { return spec_.to_text(); }

 private:
  std::int64_t value_at(std::int64_t i) const;  // uncached kind dispatch
  void ensure(std::int64_t count) const;        // materialize q_0..q_{count-1}

  GapSequenceSpec spec_;
  mutable std::mutex mu_;
  mutable std::vector<std::int64_t> gaps_;
  mutable std::vector<std::int64_t> qsum_;  // qsum_[k] = Q_k, size gaps_+1
  mutable std::vector<std::int64_t> ssum_;  // ssum_[k] = s_k, size gaps_+1
};

using GapProviderPtr = std::shared_ptr<const GapSequenceProvider>;

inline GapProviderPtr make_provider(GapSequenceSpec spec) {
  return std::make_shared<const GapSequenceProvider>(std::move(spec));
}

}  // namespace mdp

#endif  // MDP_GAPSEQ_HPP
