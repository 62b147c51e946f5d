#include "mdp/sampler.hpp"

#include <algorithm>
#include <cmath>

#include "mdp/errors.hpp"

namespace mdp {

mpz_class uniform_mpz_below(Rng& rng, const mpz_class& bound) {
  if (bound <= 0) throw DomainError("uniform_mpz_below needs bound >= 1");
  if (bound == 1) return 0;
  std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
  std::size_t words = (bits + 63) / 64;
  unsigned top_bits = static_cast<unsigned>(bits - (words - 1) * 64);
  std::uint64_t top_mask =
      top_bits >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << top_bits) - 1);
  std::vector<std::uint64_t> buf(words);
  mpz_class x;
  for (;;) {
    for (auto& w : buf) w = rng();
    buf[words - 1] &= top_mask;  // acceptance >= 1/2
    mpz_import(x.get_mpz_t(), words, -1, sizeof(std::uint64_t), 0, 0, buf.data());
    if (x < bound) return x;
  }
}

CanonicalKSampler::CanonicalKSampler(const GapSequenceProvider& g, double z, std::int64_t k)
    : z_(z), k_(k) {
  if (!(z > 0.0)) throw DomainError("canonical sampler needs z > 0");
  if (k < 1) throw DomainError("canonical sampler needs k >= 1");
  auto gaps = g.gaps_upto(k);
  s_k_ = g.weighted_sum(k);
  shifts_.resize(static_cast<std::size_t>(k));
  c_.resize(static_cast<std::size_t>(k));
  neg_inv_zj_.resize(static_cast<std::size_t>(k));
  for (std::int64_t j = 1; j <= k; ++j) {
    shifts_[static_cast<std::size_t>(j - 1)] = gaps[static_cast<std::size_t>(k - j)];
    c_[static_cast<std::size_t>(j - 1)] = std::exp(-z * static_cast<double>(j));
    neg_inv_zj_[static_cast<std::size_t>(j - 1)] = -1.0 / (z * static_cast<double>(j));
  }
}

Partition CanonicalKSampler::draw(Rng& rng) const {
  std::vector<std::int64_t> d(static_cast<std::size_t>(k_));
  for (std::size_t j = 0; j < d.size(); ++j) {
    double u = rng.uniform01();
    std::int64_t gdraw = 0;
    if (u < c_[j]) gdraw = static_cast<std::int64_t>(std::log(u) * neg_inv_zj_[j]);
    d[j] = shifts_[j] + gdraw;
  }
  // lambda_i = sum_{j>=i} D_j; D_k >= q_0 >= 1 keeps the last part positive.
  std::vector<std::int64_t> parts(d.size());
  std::int64_t acc = 0;
  for (std::size_t j = d.size(); j-- > 0;) {
    acc += d[j];
    parts[j] = acc;
  }
  return detail::make_partition_unchecked(std::move(parts));
}

std::int64_t CanonicalKSampler::draw_excess_weight(Rng& rng, std::int64_t cap,
                                                   std::vector<std::int64_t>& gbuf) const {
  gbuf.assign(static_cast<std::size_t>(k_), 0);
  std::int64_t w = 0;
  for (std::int64_t j = 1; j <= k_; ++j) {
    std::size_t idx = static_cast<std::size_t>(j - 1);
    double u = rng.uniform01();
    if (u < c_[idx]) {
      std::int64_t gdraw = static_cast<std::int64_t>(std::log(u) * neg_inv_zj_[idx]);
      w += j * gdraw;
      if (w > cap) return cap + 1;
      gbuf[idx] = gdraw;
    }
  }
  return w;
}

Partition CanonicalKSampler::assemble(const std::vector<std::int64_t>& gbuf) const {
  std::vector<std::int64_t> parts(static_cast<std::size_t>(k_));
  std::int64_t acc = 0;
  for (std::size_t j = parts.size(); j-- > 0;) {
    acc += shifts_[j] + gbuf[j];
    parts[j] = acc;
  }
  return detail::make_partition_unchecked(std::move(parts));
}

Partition sample_canonical(const GapSequenceProvider& g, double z, std::int64_t k, Rng& rng) {
  CanonicalKSampler sampler(g, z, k);
  return sampler.draw(rng);
}

Partition sample_grand(const GapSequenceProvider& g, const GrandCanonicalWeights& weights,
                       Rng& rng) {
  // Draw K from the truncated categorical law; the neglected tail mass
  // (< rel_tail of the total) is assigned to the largest kept K.
  double u = rng.uniform01();
  double acc = 0.0;
  std::int64_t k = weights.k_max();
  for (std::int64_t i = 0; i <= weights.k_max(); ++i) {
    acc += std::exp(weights.log_weight[static_cast<std::size_t>(i)] - weights.log_total);
    if (u < acc) {
      k = i;
      break;
    }
  }
  if (k == 0) return Partition();
  return sample_canonical(g, weights.z, k, rng);
}

Partition sample_grand(const GapSequenceProvider& g, double z, Rng& rng) {
  return sample_grand(g, grand_weights(g, z), rng);
}

UniformFiberSampler::UniformFiberSampler(const GapSequenceProvider& g, std::int64_t n,
                                         std::optional<std::int64_t> k,
                                         std::size_t max_table_bytes)
    : n_(n), fixed_k_(k) {
  if (n < 0 || (k && *k < 0)) throw DomainError("uniform sampler needs n, k >= 0");
  build(g, max_table_bytes);
}

UniformFiberSampler UniformFiberSampler::whole_fiber(const GapSequenceProvider& g,
                                                     std::int64_t n,
                                                     std::size_t max_table_bytes) {
  return UniformFiberSampler(g, n, std::nullopt, max_table_bytes);
}

UniformFiberSampler UniformFiberSampler::fixed_length(const GapSequenceProvider& g,
                                                      std::int64_t n, std::int64_t k,
                                                      std::size_t max_table_bytes) {
  return UniformFiberSampler(g, n, k, max_table_bytes);
}

void UniformFiberSampler::build(const GapSequenceProvider& g, std::size_t max_table_bytes) {
  std::int64_t k_lo = 1, k_hi;
  if (fixed_k_) {
    k_lo = k_hi = *fixed_k_;
  } else {
    k_hi = 0;
    while (g.weighted_sum(k_hi + 1) <= n_) ++k_hi;
  }
  if (!fixed_k_ || *fixed_k_ == 0) {
    if (n_ == 0) {
      total_ = 1;  // the empty partition
      return;
    }
    if (fixed_k_ && *fixed_k_ == 0) {
      total_ = 0;
      throw EmptyClassError("no minimal-difference partition of n > 0 with 0 parts");
    }
  }
  // Snapshot prefix data up to the largest usable length.
  std::int64_t k_top = std::max<std::int64_t>(k_hi, 0);
  qsum_.resize(static_cast<std::size_t>(k_top) + 1);
  for (std::int64_t k = 0; k <= k_top; ++k) qsum_[static_cast<std::size_t>(k)] = g.prefix_sum(k);
  ssum_ = g.weighted_sums_upto(k_top);

  std::int64_t r_top = 0;
  for (std::int64_t k = k_lo; k <= k_hi; ++k) {
    std::int64_t r = n_ + k - ssum_[static_cast<std::size_t>(k)];
    if (r >= k) r_top = std::max(r_top, r);
  }
  if (r_top > 0) table_ = std::make_unique<CountTable>(r_top, k_hi, max_table_bytes);
  for (std::int64_t k = k_lo; k <= k_hi; ++k) {
    std::int64_t r = n_ + k - ssum_[static_cast<std::size_t>(k)];
    if (r < k) continue;
    const mpz_class& c = table_->count(r, k);
    if (c > 0) {
      class_counts_.emplace_back(k, c);
      total_ += c;
    }
  }
  if (total_ == 0)
    throw EmptyClassError("empty fiber: no minimal-difference partition matches (n" +
                          std::string(fixed_k_ ? ",k)" : ")"));
}

Partition UniformFiberSampler::unrank(std::int64_t k0, Rng& rng) const {
  std::int64_t r = n_ + k0 - ssum_[static_cast<std::size_t>(k0)];
  std::int64_t k = k0;
  std::int64_t lift = 0;
  std::vector<std::int64_t> ascending;
  ascending.reserve(static_cast<std::size_t>(k0));
  // p(r,k) = p(r-1,k-1) + p(r-k,k): the first branch removes a part equal to
  // 1 (+lift), the second decrements every remaining part.
  while (k > 0) {
    const mpz_class& here = table_->count(r, k);
    mpz_class u = uniform_mpz_below(rng, here);
    if (u < table_->count(r - 1, k - 1)) {
      ascending.push_back(1 + lift);
      r -= 1;
      k -= 1;
    } else {
      r -= k;
      lift += 1;
    }
  }
  std::vector<std::int64_t> rho(ascending.rbegin(), ascending.rend());
  // Inverse Sylvester shift: lambda_i = rho_i - 1 + Q_{k0-i+1}.
  std::vector<std::int64_t> lam(rho.size());
  for (std::int64_t i = 1; i <= k0; ++i)
    lam[static_cast<std::size_t>(i - 1)] =
        rho[static_cast<std::size_t>(i - 1)] - 1 + qsum_[static_cast<std::size_t>(k0 - i + 1)];
  return detail::make_partition_unchecked(std::move(lam));
}

Partition UniformFiberSampler::draw(Rng& rng) const {
  if (total_ == 0) throw EmptyClassError("empty fiber");
  if (class_counts_.empty()) return Partition();  // n = 0
  std::int64_t k = class_counts_.back().first;
  if (class_counts_.size() > 1) {
    // Exact categorical draw over k: compare a uniform big integer in
    // [0, p_q(n)) against cumulative class counts.
    mpz_class u = uniform_mpz_below(rng, total_);
    mpz_class acc = 0;
    for (const auto& [kk, c] : class_counts_) {
      acc += c;
      if (u < acc) {
        k = kk;
        break;
      }
    }
  }
  return unrank(k, rng);
}

Partition sample_uniform_nk(const GapSequenceProvider& g, std::int64_t n, std::int64_t k,
                            Rng& rng) {
  auto sampler = UniformFiberSampler::fixed_length(g, n, k);
  return sampler.draw(rng);
}

Partition sample_uniform_n(const GapSequenceProvider& g, std::int64_t n, Rng& rng) {
  auto sampler = UniformFiberSampler::whole_fiber(g, n);
  return sampler.draw(rng);
}

}  // namespace mdp
