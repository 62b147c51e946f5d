#include "mdp/rwre.hpp"

#include <cmath>
#include <sstream>

#include "mdp/errors.hpp"

namespace mdp {

namespace {

constexpr std::uint64_t kEnvStream = 0x52575245u;  // distinct stream tag for environments

// Sites live on all of Z; fold them onto N for the keyed draw.
std::uint64_t zigzag(std::int64_t j) {
  return j >= 0 ? 2ull * static_cast<std::uint64_t>(j)
                : 2ull * static_cast<std::uint64_t>(-j) - 1ull;
}

double rho_of(double p) { return (1.0 - p) / p; }

// Weighted two-atom sum that skips zero-weight atoms, so degenerate values
// (rho = 0 at p = 1, where log rho = -inf) cannot poison the mean with NaNs.
template <typename F>
double two_point_mean(double p1, double p2, double w, F&& f) {
  double s = 0.0;
  if (w > 0.0) s += w * f(p1);
  if (w < 1.0) s += (1.0 - w) * f(p2);
  return s;
}

void check_prob_open(double p, const char* what) {
  if (!(p > 0.0 && p < 1.0)) throw SpecError(std::string(what) + " must lie strictly in (0,1)");
}

// Discrete kinds admit an atom at p = 1 (rho = 0), which covers the
// deterministic up-walk; p = 0 stays excluded so rho is finite.
void check_prob_half_open(double p, const char* what) {
  if (!(p > 0.0 && p <= 1.0)) throw SpecError(std::string(what) + " must lie in (0,1]");
}

}  // namespace

EnvironmentSpec EnvironmentSpec::two_point(double p1, double p2, double w, std::uint64_t seed) {
  check_prob_half_open(p1, "two-point p1");
  check_prob_half_open(p2, "two-point p2");
  if (!(w >= 0.0 && w <= 1.0)) throw SpecError("two-point weight must lie in [0,1]");
  EnvironmentSpec env;
  env.kind = Kind::TwoPoint;
  env.p1 = p1;
  env.p2 = p2;
  env.w = w;
  env.seed = seed;
  return env;
}

EnvironmentSpec EnvironmentSpec::uniform(double lo, double hi, std::uint64_t seed) {
  check_prob_open(lo, "uniform lo");
  check_prob_open(hi, "uniform hi");
  if (!(lo <= hi)) throw SpecError("uniform range needs lo <= hi");
  EnvironmentSpec env;
  env.kind = Kind::Uniform;
  env.lo = lo;
  env.hi = hi;
  env.seed = seed;
  return env;
}

EnvironmentSpec EnvironmentSpec::from_table(std::vector<std::pair<double, double>> table,
                                            std::uint64_t seed) {
  if (table.empty()) throw SpecError("environment table must be non-empty");
  double mass = 0.0;
  for (auto& [p, pr] : table) {
    check_prob_half_open(p, "table p value");
    if (pr < 0.0) throw SpecError("table probabilities must be non-negative");
    mass += pr;
  }
  if (!(std::fabs(mass - 1.0) <= 1e-9)) throw SpecError("table probabilities must sum to 1");
  EnvironmentSpec env;
  env.kind = Kind::Table;
  env.table = std::move(table);
  env.seed = seed;
  return env;
}

double EnvironmentSpec::site_prob(std::int64_t site) const {
  double u = Rng::uniform01_at(seed, kEnvStream, zigzag(site));
  switch (kind) {
    case Kind::TwoPoint:
      return u < w ? p1 : p2;
    case Kind::Uniform:
      return lo + u * (hi - lo);
    case Kind::Table: {
      double acc = 0.0;
      for (const auto& [p, pr] : table) {
        acc += pr;
        if (u < acc) return p;
      }
      return table.back().first;
    }
  }
  throw SpecError("unknown environment kind");
}

double EnvironmentSpec::mean_rho() const {
  switch (kind) {
    case Kind::TwoPoint:
      return two_point_mean(p1, p2, w, [](double p) { return rho_of(p); });
    case Kind::Uniform: {
      if (hi == lo) return rho_of(lo);
      // E[(1-p)/p] = ln(hi/lo)/(hi-lo) - 1
      return std::log(hi / lo) / (hi - lo) - 1.0;
    }
    case Kind::Table: {
      double s = 0.0;
      for (const auto& [p, pr] : table)
        if (pr > 0.0) s += pr * rho_of(p);
      return s;
    }
  }
  throw SpecError("unknown environment kind");
}

double EnvironmentSpec::mean_inv_rho() const {
  switch (kind) {
    case Kind::TwoPoint:
      return two_point_mean(p1, p2, w, [](double p) { return 1.0 / rho_of(p); });
    case Kind::Uniform: {
      if (hi == lo) return 1.0 / rho_of(lo);
      // E[p/(1-p)] = ln((1-lo)/(1-hi))/(hi-lo) - 1
      return std::log((1.0 - lo) / (1.0 - hi)) / (hi - lo) - 1.0;
    }
    case Kind::Table: {
      double s = 0.0;
      for (const auto& [p, pr] : table)
        if (pr > 0.0) s += pr / rho_of(p);
      return s;
    }
  }
  throw SpecError("unknown environment kind");
}

double EnvironmentSpec::mean_log_rho() const {
  switch (kind) {
    case Kind::TwoPoint:
      return two_point_mean(p1, p2, w, [](double p) { return std::log(rho_of(p)); });
    case Kind::Uniform: {
      if (hi == lo) return std::log(rho_of(lo));
      // integral of log((1-p)/p): [-(1-p)log(1-p) - p log p]
      auto prim = [](double p) { return -(1.0 - p) * std::log1p(-p) - p * std::log(p); };
      return (prim(hi) - prim(lo)) / (hi - lo);
    }
    case Kind::Table: {
      double s = 0.0;
      for (const auto& [p, pr] : table)
        if (pr > 0.0) s += pr * std::log(rho_of(p));
      return s;
    }
  }
  throw SpecError("unknown environment kind");
}

double EnvironmentSpec::mean_rho_pow(double kap) const {
  switch (kind) {
    case Kind::TwoPoint:
      return two_point_mean(p1, p2, w,
                            [kap](double p) { return std::pow(rho_of(p), kap); });
    case Kind::Uniform: {
      if (hi == lo) return std::pow(rho_of(lo), kap);
      // midpoint discretization; grid error O(M^-2)
      const int M = 4096;
      double h = (hi - lo) / M;
      double s = 0.0;
      for (int i = 0; i < M; ++i) s += std::pow(rho_of(lo + (i + 0.5) * h), kap);
      return s / M;
    }
    case Kind::Table: {
      double s = 0.0;
      for (const auto& [p, pr] : table)
        if (pr > 0.0) s += pr * std::pow(rho_of(p), kap);
      return s;
    }
  }
  throw SpecError("unknown environment kind");
}

double EnvironmentSpec::prob_rho_gt1() const {
  switch (kind) {
    case Kind::TwoPoint: {
      double s = 0.0;
      if (rho_of(p1) > 1.0) s += w;
      if (rho_of(p2) > 1.0) s += 1.0 - w;
      return s;
    }
    case Kind::Uniform: {
      // rho > 1 iff p < 1/2
      if (hi <= 0.5) return 1.0;
      if (lo >= 0.5) return 0.0;
      return (0.5 - lo) / (hi - lo);
    }
    case Kind::Table: {
      double s = 0.0;
      for (const auto& [p, pr] : table)
        if (rho_of(p) > 1.0) s += pr;
      return s;
    }
  }
  throw SpecError("unknown environment kind");
}

std::string EnvironmentSpec::to_text() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::TwoPoint:
      os << "two-point:p1=" << p1 << ",p2=" << p2 << ",w=" << w;
      break;
    case Kind::Uniform:
      os << "uniform:lo=" << lo << ",hi=" << hi;
      break;
    case Kind::Table:
      os << "table:" << table.size() << " atoms";
      break;
  }
  return os.str();
}

std::vector<std::int64_t> run_walk(const EnvironmentSpec& env, std::int64_t steps, Rng& rng) {
  if (steps < 0) throw DomainError("run_walk needs steps >= 0");
  std::vector<std::int64_t> x(static_cast<std::size_t>(steps) + 1);
  x[0] = 0;
  for (std::int64_t t = 0; t < steps; ++t) {
    double p = env.site_prob(x[static_cast<std::size_t>(t)]);
    x[static_cast<std::size_t>(t + 1)] =
        x[static_cast<std::size_t>(t)] + (rng.uniform01() < p ? 1 : -1);
  }
  return x;
}

double drift(const EnvironmentSpec& env) {
  double er = env.mean_rho();
  double einv = env.mean_inv_rho();
  if (er < 1.0) return (1.0 - er) / (1.0 + er);
  if (einv < 1.0) return -(1.0 - einv) / (1.0 + einv);
  return 0.0;
}

std::optional<double> kappa(const EnvironmentSpec& env) {
  double eta = env.mean_log_rho();
  if (!(eta < 0.0)) throw RegimeError("kappa requires E log rho < 0");
  if (env.prob_rho_gt1() <= 0.0) return std::nullopt;  // E rho^k < 1 for all k > 0
  // f(k) = E rho^k is strictly convex with f(0) = 1 and f'(0) = eta < 0, so
  // the nontrivial root is bracketed once f exceeds 1 again.
  auto f = [&env](double k) { return env.mean_rho_pow(k); };
  double hi = 1.0;
  while (f(hi) < 1.0) {
    hi *= 2.0;
    if (hi > 1e6) return std::nullopt;  // numerically indistinguishable from no root
  }
  double lo = hi * 0.5;
  if (hi == 1.0) lo = 1e-12;
  while (f(lo) >= 1.0 && lo > 1e-12) lo *= 0.5;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (f(mid) >= 1.0) hi = mid;
    else lo = mid;
    if (hi - lo < 1e-14 * hi) break;
  }
  return 0.5 * (lo + hi);
}

RegimeInfo classify_regime(const EnvironmentSpec& env) {
  RegimeInfo info;
  info.eta = env.mean_log_rho();
  info.v = drift(env);
  const double eta_tol = 1e-12;
  if (std::fabs(info.eta) <= eta_tol) {
    info.regime = Regime::Recurrent;
    info.error_bound = "Q_k = a k + O_p(k^beta0) (Sinai: X_k = O_p(log^2 k))";
    return info;
  }
  if (info.eta > 0.0) {
    info.regime = Regime::NegativeDrift;
    info.error_bound = "walk drifts to -infinity; mirror the environment for MDP use";
    return info;
  }
  info.kappa = kappa(env);
  if (!info.kappa) {
    info.regime = Regime::TransientBallistic;
    info.error_bound = "Q_k = q k + O_p(k^max(beta0,1/2))";
    return info;
  }
  double kap = *info.kappa;
  if (kap > 1.0 + 1e-9) {
    info.regime = Regime::TransientBallistic;
    std::ostringstream os;
    os << "Q_k = q k + O_p(k^max(beta0,1/2," << 1.0 / kap << "))";
    info.error_bound = os.str();
  } else {
    info.regime = Regime::TransientSub;
    info.error_bound = std::fabs(kap - 1.0) <= 1e-9
                           ? "Q_k = a k + O_p(k/log k) (kappa = 1 boundary)"
                           : "Q_k = a k + O_p(k^max(beta0,kappa))";
  }
  return info;
}

std::string regime_name(Regime regime) {
  switch (regime) {
    case Regime::TransientBallistic: return "transient-ballistic";
    case Regime::TransientSub: return "transient-subballistic";
    case Regime::Recurrent: return "recurrent";
    case Regime::NegativeDrift: return "negative-drift";
  }
  return "unknown";
}

RwreGapResult make_rwre_gaps(const RwreGapParams& params, std::int64_t length, Rng& rng) {
  if (length < 1) throw DomainError("make_rwre_gaps needs length >= 1");
  if (params.b < 1) throw SpecError("rwre gap params need b >= 1");
  if (!std::holds_alternative<ConstantGaps>(params.a_seq.kind) &&
      !std::holds_alternative<ExplicitGaps>(params.a_seq.kind))
    throw SpecError("rwre leading sequence must be Constant or Explicit");

  GapSequenceProvider a_provider(params.a_seq);
  auto a = a_provider.gaps_upto(length);
  if (a[0] < params.b + 1) throw SpecError("rwre gap params need a_0 >= b+1");
  for (std::int64_t i = 1; i < length; ++i)
    if (a[static_cast<std::size_t>(i)] < params.b)
      throw SpecError("rwre gap params need a_i >= b for i >= 1");

  auto x = run_walk(params.env, length, rng);
  std::vector<std::int64_t> gaps(static_cast<std::size_t>(length));
  for (std::int64_t i = 0; i < length; ++i) {
    std::int64_t step = x[static_cast<std::size_t>(i + 1)] - x[static_cast<std::size_t>(i)];
    std::int64_t q = a[static_cast<std::size_t>(i)] + params.b * step;
    if (q < 0 || (i == 0 && q < 1))
      throw SpecError("rwre gap invariant violated");  // cannot occur under the checks above
    gaps[static_cast<std::size_t>(i)] = q;
  }

  std::int64_t tail;
  if (const auto* c = std::get_if<ConstantGaps>(&params.a_seq.kind)) tail = c->q;
  else tail = std::get<ExplicitGaps>(params.a_seq.kind).tail;

  RwreGapResult result;
  result.gaps = gaps;
  result.provider = make_provider(GapSequenceSpec::explicit_list(std::move(gaps), tail));
  result.regime = classify_regime(params.env);
  result.v = result.regime.v;
  double a_mean = static_cast<double>(a_provider.prefix_sum(length)) / static_cast<double>(length);
  result.q_predicted = a_mean + static_cast<double>(params.b) * result.v;
  return result;
}

}  // namespace mdp
