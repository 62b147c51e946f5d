#include "mdp/gapseq.hpp"

#include <cmath>
#include <sstream>

#include "mdp/errors.hpp"
#include "mdp/rng.hpp"
#include "mdp/stats.hpp"

namespace mdp {

DistributionSpec DistributionSpec::two_point(std::int64_t a, std::int64_t b, double p) {
  if (a < 0 || b < 0) throw SpecError("two-point gap values must be non-negative");
  if (!(p >= 0.0 && p <= 1.0)) throw SpecError("two-point weight must lie in [0,1]");
  DistributionSpec d;
  d.kind = Kind::TwoPoint;
  d.a = a;
  d.b = b;
  d.p = p;
  return d;
}

DistributionSpec DistributionSpec::geometric(double p) {
  if (!(p > 0.0 && p <= 1.0)) throw SpecError("geometric parameter must lie in (0,1]");
  DistributionSpec d;
  d.kind = Kind::Geometric;
  d.p = p;
  return d;
}

DistributionSpec DistributionSpec::bounded_uniform(std::int64_t lo, std::int64_t hi) {
  if (lo < 0 || hi < lo) throw SpecError("bounded-uniform range must satisfy 0 <= lo <= hi");
  DistributionSpec d;
  d.kind = Kind::BoundedUniform;
  d.lo = lo;
  d.hi = hi;
  return d;
}

std::int64_t DistributionSpec::sample(std::uint64_t seed, std::uint64_t index) const {
  double u = Rng::uniform01_at(seed, /*stream=*/0, index);
  switch (kind) {
    case Kind::TwoPoint:
      return u < p ? a : b;
    case Kind::Geometric: {
      if (p == 1.0) return 0;
      return static_cast<std::int64_t>(std::log(u) / std::log1p(-p));
    }
    case Kind::BoundedUniform: {
      auto span = static_cast<std::uint64_t>(hi - lo + 1);
      auto off = static_cast<std::int64_t>(u * static_cast<double>(span));
      if (off >= static_cast<std::int64_t>(span)) off = static_cast<std::int64_t>(span) - 1;
      return lo + off;
    }
  }
  throw SpecError("unknown distribution kind");
}

std::string DistributionSpec::to_text() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::TwoPoint:
      os << "two-point:a=" << a << ",b=" << b << ",p=" << p;
      break;
    case Kind::Geometric:
      os << "geometric:p=" << p;
      break;
    case Kind::BoundedUniform:
      os << "uniform:lo=" << lo << ",hi=" << hi;
      break;
  }
  return os.str();
}

std::string GapSequenceSpec::to_text() const {
  std::ostringstream os;
  if (const auto* c = std::get_if<ConstantGaps>(&kind)) {
    os << "const:" << c->q;
  } else if (const auto* p = std::get_if<PeriodicGaps>(&kind)) {
    os << "periodic:";
    for (std::size_t i = 0; i < p->pattern.size(); ++i) {
      if (i) os << ',';
      os << p->pattern[i];
    }
  } else if (const auto* e = std::get_if<ExplicitGaps>(&kind)) {
    os << "list:";
    for (std::size_t i = 0; i < e->values.size(); ++i) {
      if (i) os << ',';
      os << e->values[i];
    }
    os << ";tail=" << e->tail;
  } else if (const auto* r = std::get_if<IidGaps>(&kind)) {
    os << "iid:" << r->dist.to_text() << ";seed=" << r->seed;
  }
  return os.str();
}

GapSequenceProvider::GapSequenceProvider(GapSequenceSpec spec) : spec_(std::move(spec)) {
  if (const auto* c = std::get_if<ConstantGaps>(&spec_.kind)) {
    if (c->q < 0) throw SpecError("constant gap must be non-negative");
  } else if (const auto* p = std::get_if<PeriodicGaps>(&spec_.kind)) {
    if (p->pattern.empty()) throw SpecError("periodic pattern must be non-empty");
    for (auto v : p->pattern)
      if (v < 0) throw SpecError("periodic pattern values must be non-negative");
    if (p->pattern[0] < 1) throw SpecError("first gap q_0 must be >= 1");
  } else if (const auto* e = std::get_if<ExplicitGaps>(&spec_.kind)) {
    for (auto v : e->values)
      if (v < 0) throw SpecError("explicit gap values must be non-negative");
    if (e->tail < 0) throw SpecError("explicit tail must be non-negative");
    std::int64_t first = e->values.empty() ? e->tail : e->values[0];
    if (first < 1) throw SpecError("first gap q_0 must be >= 1");
  } else if (const auto* r = std::get_if<IidGaps>(&spec_.kind)) {
    if (r->dist.sample(r->seed, 0) < 1)
      throw SpecError("first sampled gap q_0 is zero; choose a different seed or distribution");
  }
  qsum_.push_back(0);
  ssum_.push_back(0);
}

std::int64_t GapSequenceProvider::value_at(std::int64_t i) const {
  if (const auto* c = std::get_if<ConstantGaps>(&spec_.kind)) {
    if (i == 0) return c->q >= 1 ? c->q : 1;  // Constant(0): plain partitions, q_0 = 1
    return c->q;
  }
  if (const auto* p = std::get_if<PeriodicGaps>(&spec_.kind)) {
    return p->pattern[static_cast<std::size_t>(i % static_cast<std::int64_t>(p->pattern.size()))];
  }
  if (const auto* e = std::get_if<ExplicitGaps>(&spec_.kind)) {
    if (i < static_cast<std::int64_t>(e->values.size())) return e->values[static_cast<std::size_t>(i)];
    return e->tail;
  }
  const auto& r = std::get<IidGaps>(spec_.kind);
  return r.dist.sample(r.seed, static_cast<std::uint64_t>(i));
}

void GapSequenceProvider::ensure(std::int64_t count) const {
  while (static_cast<std::int64_t>(gaps_.size()) < count) {
    auto i = static_cast<std::int64_t>(gaps_.size());
    std::int64_t q = value_at(i);
    gaps_.push_back(q);
    qsum_.push_back(qsum_.back() + q);
    ssum_.push_back(ssum_.back() + qsum_.back());
  }
}

std::int64_t GapSequenceProvider::gap(std::int64_t i) const {
  if (i < 0) throw DomainError("gap index must be non-negative");
  std::lock_guard<std::mutex> lock(mu_);
  ensure(i + 1);
  return gaps_[static_cast<std::size_t>(i)];
}

std::int64_t GapSequenceProvider::prefix_sum(std::int64_t k) const {
  if (k < 0) throw DomainError("prefix count must be non-negative");
  std::lock_guard<std::mutex> lock(mu_);
  ensure(k);
  return qsum_[static_cast<std::size_t>(k)];
}

std::int64_t GapSequenceProvider::weighted_sum(std::int64_t k) const {
  if (k < 0) throw DomainError("weighted-sum count must be non-negative");
  std::lock_guard<std::mutex> lock(mu_);
  ensure(k);
  return ssum_[static_cast<std::size_t>(k)];
}

std::vector<std::int64_t> GapSequenceProvider::gaps_upto(std::int64_t k) const {
  if (k < 0) throw DomainError("gap count must be non-negative");
  std::lock_guard<std::mutex> lock(mu_);
  ensure(k);
  return {gaps_.begin(), gaps_.begin() + static_cast<std::ptrdiff_t>(k)};
}

std::vector<std::int64_t> GapSequenceProvider::weighted_sums_upto(std::int64_t k) const {
  if (k < 0) throw DomainError("weighted-sum count must be non-negative");
  std::lock_guard<std::mutex> lock(mu_);
  ensure(k);
  return {ssum_.begin(), ssum_.begin() + static_cast<std::ptrdiff_t>(k) + 1};
}

std::pair<double, double> GapSequenceProvider::estimate_regularity(std::int64_t k_max) const {
  if (k_max < 100) throw DomainError("estimate_regularity needs k_max >= 100");
  std::vector<std::int64_t> qs;
  {
    std::lock_guard<std::mutex> lock(mu_);
    ensure(k_max);
    qs.assign(qsum_.begin(), qsum_.begin() + static_cast<std::ptrdiff_t>(k_max) + 1);
  }
  double q_hat = static_cast<double>(qs[static_cast<std::size_t>(k_max)]) /
                 static_cast<double>(k_max);
  std::vector<double> lx, ly;
  for (std::int64_t k = k_max / 2; k <= k_max; ++k) {
    double resid = std::fabs(static_cast<double>(qs[static_cast<std::size_t>(k)]) -
                             q_hat * static_cast<double>(k));
    if (resid > 0.0) {
      lx.push_back(std::log(static_cast<double>(k)));
      ly.push_back(std::log(resid));
    }
  }
  if (lx.size() < 2) return {q_hat, 0.0};
  auto fit = least_squares_slope(lx, ly);
  return {q_hat, fit.first};
}

}  // namespace mdp
