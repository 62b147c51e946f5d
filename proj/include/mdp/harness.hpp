// Experiment driver: limit-shape deviation statistics, number-of-parts laws,
// equivalence-of-ensembles tests, and deterministic CSV/JSON reports.
//
// Exact sampling routes. Small fibers use the table-backed unranking sampler.
// Above the table budget the driver switches to rejection from the canonical
// or grand-canonical product measure conditioned on the exact event N = n:
// that conditional law *is* the uniform fiber measure, so the route stays
// exact (the length categorical is kept out to the largest k with s_k <= n,
// which covers the entire conditional support; out-of-range proposals are
// rejected). The chosen route is recorded in the report notes.
#ifndef MDP_HARNESS_HPP
#define MDP_HARNESS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mdp/counting.hpp"
#include "mdp/gapseq.hpp"
#include "mdp/partition.hpp"
#include "mdp/rng.hpp"
#include "mdp/rwre.hpp"
#include "mdp/sampler.hpp"
#include "mdp/shape.hpp"

namespace mdp {

// Comparison curve for deviation statistics: phi_T(.;q) with area scale
// theta = theta_q(T).
struct LimitCurve {
  double q = 0.0;
  double T = 0.0;      // +infinity for the q = 0 free-length curve
  double theta = 1.0;  // theta_q(T)

  // Curve for the free-length ensembles: T = T_q, theta = theta_q.
  static LimitCurve nu_n(double q);
  // Curve for the fixed-length regime k_n ~ tau sqrt(n): T = T_*(tau;q).
  static LimitCurve fixed_tau(double q, double tau);
};

enum class DeviationScaling { UnitArea, Intrinsic };

// sup_{t >= t0} |n^{-1/2} Y_lambda(t sqrt n) - theta^{-1} phi_T(t theta; q)|.
// The supremum is exact: both functions are monotone between the step
// discontinuities of Y_lambda, so evaluating both one-sided limits at every
// step plus the curve tail suffices. t0 is in unit-area coordinates;
// Intrinsic scaling returns theta times the unit-area value.
double sup_deviation(const Partition& p, std::int64_t n, const LimitCurve& curve,
                     DeviationScaling scaling = DeviationScaling::UnitArea, double t0 = 0.05);

// All partitions of n, largest part first within each partition.
std::vector<Partition> enumerate_partitions(std::int64_t n);
// All partitions of n satisfying the minimal-difference condition.
std::vector<Partition> enumerate_mdp_fiber(const GapSequenceProvider& g, std::int64_t n);

// Exact uniform sampling on a fiber by rejection from the product-form
// measure conditioned on N = n (length free, or fixed to k). Intended for
// weights beyond the exact-table budget; cost per draw is ~1/P(N = n) trials.
class ConditionedFiberSampler {
 public:
  // nu_{n,k}; z is tuned so the mean weight matches n.
  ConditionedFiberSampler(const GapSequenceProvider& g, std::int64_t n, std::int64_t k);
  // nu_n; the length is drawn per trial from the grand-canonical categorical.
  ConditionedFiberSampler(const GapSequenceProvider& g, std::int64_t n);

  Partition draw(Rng& rng) const;

  double z() const { return z_; }
  std::int64_t trial_cap() const { return trial_cap_; }
  void set_trial_cap(std::int64_t cap) { trial_cap_ = cap; }

 private:
  std::int64_t draw_length(Rng& rng) const;  // grand mode; -1 = rejected proposal

  void init_tables(std::int64_t k_end);

  std::int64_t n_ = 0;
  std::optional<std::int64_t> fixed_k_;
  double z_ = 0.0;
  std::int64_t trial_cap_ = 2'000'000'000;
  std::vector<std::int64_t> gaps_;   // q_0..q_{k_end-1}
  std::vector<std::int64_t> ssum_;   // s_0..s_{k_end}
  std::vector<double> neg_inv_zj_;   // -1/(zj)
  // Integer form of the G_j >= 1 test: (raw >> 11) < thr_[j-1] is the
  // 53-bit-mantissa equivalent of uniform01() < e^{-zj}, so the common
  // G_j = 0 case costs one compare and no double conversion.
  std::vector<std::uint64_t> thr_;
  std::vector<double> length_cum_;   // grand mode: cumulative P(K = k), k = 0..k_end
};

struct ReportRow {
  std::int64_t n = 0;
  std::int64_t k = 0;
  double z = 0.0;
  std::int64_t rep = 0;  // -1 marks a per-cell aggregate
  std::string stat;
  double value = 0.0;
  std::string seed_stream;
};

struct ExperimentReport {
  std::string experiment;
  std::string gaps;
  std::string ensemble;
  std::uint64_t master_seed = 0;
  std::vector<std::string> notes;
  std::vector<ReportRow> rows;
  double wall_seconds = 0.0;  // informational; never serialized, so reports
                              // with equal inputs stay byte-identical

  // Schema: exp,gaps,ensemble,n,k,z,rep,stat_name,value,seed_stream
  void write_csv(std::ostream& os) const;
  std::string to_json_string() const;

  // Values of one statistic, optionally restricted to a cell.
  std::vector<double> values(std::string_view stat, std::int64_t n = -1) const;
  double single(std::string_view stat, std::int64_t n = -1) const;
};

enum class EnsembleKind { CanonicalZK, GrandZ, UniformNK, UniformN };
std::string ensemble_name(EnsembleKind kind);

struct LimitShapeOptions {
  double tau = 0.5;    // fixed-length regimes: k_n = round(tau sqrt n)
  double t0 = 0.05;    // deviation cut-off, unit-area coordinates
  double z = 0.0;      // grand/canonical override; 0 = theta/sqrt(n)
  std::int64_t exact_table_max_n = 20'000;
  std::size_t table_budget = CountTable::kDefaultBudgetBytes;
};

// Per n: draw `reps` samples, compute sup-deviations against the ensemble's
// curve, report per-replicate values and median/q25/q75 aggregates.
ExperimentReport run_limit_shape_experiment(const GapSequenceProvider& g, double q_nominal,
                                            const std::vector<std::int64_t>& n_grid,
                                            std::int64_t reps, EnsembleKind ensemble,
                                            std::uint64_t seed,
                                            const LimitShapeOptions& options = {});

// Number-of-parts law under nu_n. For q > 0 the statistic is K/sqrt(n) with
// target T_q/theta_q; for q = 0 it is K/(sqrt(n) ln n) with target
// sqrt(6)(1-beta)/(2 pi).
ExperimentReport run_parts_experiment(const GapSequenceProvider& g, double q,
                                      const std::vector<std::int64_t>& n_grid, std::int64_t reps,
                                      std::uint64_t seed, double beta = 0.0,
                                      const LimitShapeOptions& options = {});

// Chi-square uniformity over the full fiber of n (n small enough to
// enumerate): (i) grand-canonical draws at the given z filtered on N = n,
// (ii) the exact uniform sampler. Degenerate one-element fibers pass with
// p-value 1.
ExperimentReport run_ensemble_equivalence(const GapSequenceProvider& g, std::int64_t n_max,
                                          double z, std::int64_t samples, std::uint64_t seed);

// End-to-end random-environment pipeline: materialize gaps, estimate the
// regularity parameters, compare the drift formula against the realized
// slope, and run the limit-shape deviation at weight n against the curve for
// the predicted limiting gap.
ExperimentReport run_rwre_pipeline(const RwreGapParams& params, std::int64_t length,
                                   std::int64_t n, std::int64_t reps, std::uint64_t seed,
                                   const LimitShapeOptions& options = {});

}  // namespace mdp

#endif  // MDP_HARNESS_HPP
