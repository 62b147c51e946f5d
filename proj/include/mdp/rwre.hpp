// Gap sequences driven by a nearest-neighbour random walk in a random
// environment: site probabilities p_j are i.i.d. (frozen by a seed, lazily
// keyed by site index so negative sites are well-defined), the walk obeys
// P(X_{k}=j+1 | X_{k-1}=j) = p_j, and gaps are q_i = a_i + b(X_{i+1} - X_i),
// so Q_k = A_k + b X_k.
//
// Regime classification uses rho_0 = (1-p_0)/p_0: the sign of
// eta = E log rho_0 separates transient from recurrent environments, the
// root kappa of E rho_0^kappa = 1 grades the transient fluctuations, and
// Solomon's formula gives the drift v = lim X_k / k. The non-arithmetic
// condition on log rho_0 is not checked programmatically; kappa is used for
// regime labels only.
#ifndef MDP_RWRE_HPP
#define MDP_RWRE_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mdp/gapseq.hpp"
#include "mdp/rng.hpp"

namespace mdp {

struct EnvironmentSpec {
  enum class Kind { TwoPoint, Uniform, Table };

  Kind kind = Kind::TwoPoint;
  double p1 = 0.5, p2 = 0.5, w = 1.0;  // TwoPoint: p1 w.p. w, else p2
  double lo = 0.25, hi = 0.75;         // Uniform(lo,hi), 0 < lo <= hi < 1
  std::vector<std::pair<double, double>> table;  // (p value, probability)
  std::uint64_t seed = 0;

  static EnvironmentSpec two_point(double p1, double p2, double w, std::uint64_t seed);
  static EnvironmentSpec uniform(double lo, double hi, std::uint64_t seed);
  static EnvironmentSpec from_table(std::vector<std::pair<double, double>> table,
                                    std::uint64_t seed);

  // Frozen site probability p_j; deterministic in (seed, site).
  double site_prob(std::int64_t site) const;

  // Distribution moments of rho = (1-p)/p. Closed forms for TwoPoint,
  // Uniform and Table; E rho^kappa for Uniform goes through an internal
  // discretization (midpoint rule, 4096 slices).
  double mean_rho() const;
  double mean_inv_rho() const;
  double mean_log_rho() const;
  double mean_rho_pow(double kappa) const;
  double prob_rho_gt1() const;

  std::string to_text() const;
};

// Quenched trajectory X_0 = 0, ..., X_steps.
std::vector<std::int64_t> run_walk(const EnvironmentSpec& env, std::int64_t steps, Rng& rng);

// Solomon's drift v = lim X_k/k from the three-case formula.
double drift(const EnvironmentSpec& env);

// Root of E rho^kappa = 1 on (0,inf); nullopt when no finite root exists
// (P(rho > 1) = 0). Throws RegimeError unless eta = E log rho < 0.
std::optional<double> kappa(const EnvironmentSpec& env);

enum class Regime {
  TransientBallistic,  // eta < 0, kappa > 1 (or no finite kappa): X_k ~ v k
  TransientSub,        // eta < 0, kappa <= 1: sublinear transience
  Recurrent,           // eta = 0: Sinai localization, X_k = O_p(log^2 k)
  NegativeDrift,       // eta > 0: walk escapes to -infinity
};

struct RegimeInfo {
  Regime regime;
  double eta = 0.0;
  std::optional<double> kappa;
  double v = 0.0;
  std::string error_bound;  // error-term exponent note for Q_k = qk + O_p(.)
};

RegimeInfo classify_regime(const EnvironmentSpec& env);
std::string regime_name(Regime regime);

struct RwreGapParams {
  EnvironmentSpec env;
  // Leading deterministic sequence a_i with A_k = ak + O(k^{beta_0});
  // Constant or Explicit kinds only.
  GapSequenceSpec a_seq = GapSequenceSpec::constant(2);
  std::int64_t b = 1;
};

struct RwreGapResult {
  std::shared_ptr<const GapSequenceProvider> provider;  // Explicit, materialized
  std::vector<std::int64_t> gaps;                       // q_0..q_{length-1}
  RegimeInfo regime;
  double v = 0.0;            // drift from the formula
  double q_predicted = 0.0;  // a + b v
};

// Materializes q_0..q_{length-1} from one frozen environment and one walk.
// Requires b >= 1, a_0 >= b+1 and a_i >= b, which force q_i >= 0 and
// q_0 >= 1. Beyond the materialized range the provider falls back to the
// a-sequence tail.
RwreGapResult make_rwre_gaps(const RwreGapParams& params, std::int64_t length, Rng& rng);

}  // namespace mdp

#endif  // MDP_RWRE_HPP
