#include "mdp/partition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "mdp/errors.hpp"

namespace mdp {

Partition::Partition(std::vector<std::int64_t> parts) : parts_(std::move(parts)) {
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (parts_[i] < 1) throw SpecError("partition parts must be >= 1");
    if (i > 0 && parts_[i] > parts_[i - 1]) throw SpecError("partition parts must be non-increasing");
  }
  weight_ = std::accumulate(parts_.begin(), parts_.end(), std::int64_t{0});
}

Partition::Partition(Unchecked, std::vector<std::int64_t> parts) : parts_(std::move(parts)) {
  weight_ = std::accumulate(parts_.begin(), parts_.end(), std::int64_t{0});
}

Partition unchecked_partition(std::vector<std::int64_t> parts) {
  return Partition(Partition::Unchecked{}, std::move(parts));
}

namespace detail {
Partition make_partition_unchecked(std::vector<std::int64_t> parts) {
  return unchecked_partition(std::move(parts));
}
}  // namespace detail

std::int64_t Partition::part(std::int64_t i) const {
  if (i < 1) throw DomainError("part index is 1-based");
  if (i > length()) return 0;
  return parts_[static_cast<std::size_t>(i - 1)];
}

std::vector<std::int64_t> Partition::differences() const {
  std::vector<std::int64_t> d(parts_.size());
  for (std::size_t j = 0; j < parts_.size(); ++j) {
    std::int64_t next = (j + 1 < parts_.size()) ? parts_[j + 1] : 0;
    d[j] = parts_[j] - next;
  }
  return d;
}

Partition Partition::from_differences(const std::vector<std::int64_t>& d) {
  std::vector<std::int64_t> parts(d.size());
  std::int64_t acc = 0;
  for (std::size_t j = d.size(); j-- > 0;) {
    if (d[j] < 0) throw SpecError("differences must be non-negative");
    acc += d[j];
    parts[j] = acc;
  }
  if (!parts.empty() && parts.back() == 0) throw SpecError("last difference must be >= 1");
  return Partition(std::move(parts));
}

std::string Partition::to_text() const {
  std::string out;
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(parts_[i]);
  }
  return out;
}

Partition Partition::parse_text(std::string_view text) {
  std::vector<std::int64_t> parts;
  if (text.empty()) return Partition();
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string_view tok = text.substr(pos, comma == std::string_view::npos ? comma : comma - pos);
    if (tok.empty()) throw ParseError("empty partition token", pos);
    std::int64_t value = 0;
    for (char c : tok) {
      if (c < '0' || c > '9') throw ParseError(std::string("invalid character '") + c + "' in partition", pos);
      value = value * 10 + (c - '0');
    }
    parts.push_back(value);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return Partition(std::move(parts));
}

std::string Partition::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (auto v : parts_) arr.push_back(v);
  return arr.dump();
}

Partition Partition::parse_json(std::string_view text) {
  nlohmann::json arr = nlohmann::json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (arr.is_discarded() || !arr.is_array()) throw ParseError("expected a JSON array of integers", 0);
  std::vector<std::int64_t> parts;
  for (const auto& v : arr) {
    if (!v.is_number_integer()) throw ParseError("expected a JSON array of integers", 0);
    parts.push_back(v.get<std::int64_t>());
  }
  return Partition(std::move(parts));
}

std::int64_t young_boundary(const Partition& p, double t) {
  if (t < 0.0) throw DomainError("young_boundary needs t >= 0");
  double fl = std::floor(t);
  if (fl >= static_cast<double>(p.length())) return 0;
  return p.parts()[static_cast<std::size_t>(fl)];
}

bool is_mdp(const Partition& p, const GapSequenceProvider& g) {
  std::int64_t k = p.length();
  if (k == 0) return true;
  auto gaps = g.gaps_upto(k);  // q_0..q_{k-1}
  for (std::int64_t i = 1; i <= k; ++i) {
    std::int64_t next = (i < k) ? p.parts()[static_cast<std::size_t>(i)] : 0;
    std::int64_t diff = p.parts()[static_cast<std::size_t>(i - 1)] - next;
    if (diff < gaps[static_cast<std::size_t>(k - i)]) return false;
  }
  return true;
}

Partition sylvester_forward(const Partition& p, const GapSequenceProvider& g) {
  if (p.empty()) throw NotMdpError("sylvester_forward needs a non-empty partition");
  if (!is_mdp(p, g)) throw NotMdpError("partition does not satisfy the minimal-difference condition");
  std::int64_t k = p.length();
  auto gaps = g.gaps_upto(k);
  // Q_{k-i+1} = q_0 + ... + q_{k-i}
  std::vector<std::int64_t> rho(static_cast<std::size_t>(k));
  std::int64_t qs = 0;  // running Q_{k-i+1} built from i = k down to 1
  for (std::int64_t i = k; i >= 1; --i) {
    qs += gaps[static_cast<std::size_t>(k - i)];
    rho[static_cast<std::size_t>(i - 1)] = p.parts()[static_cast<std::size_t>(i - 1)] + 1 - qs;
  }
  return Partition(std::move(rho));
}

Partition sylvester_inverse(const Partition& rho, const GapSequenceProvider& g) {
  if (rho.empty()) throw DomainError("sylvester_inverse needs a non-empty partition");
  std::int64_t k = rho.length();
  auto gaps = g.gaps_upto(k);
  std::vector<std::int64_t> lam(static_cast<std::size_t>(k));
  std::int64_t qs = 0;
  for (std::int64_t i = k; i >= 1; --i) {
    qs += gaps[static_cast<std::size_t>(k - i)];
    lam[static_cast<std::size_t>(i - 1)] = rho.parts()[static_cast<std::size_t>(i - 1)] - 1 + qs;
  }
  return Partition(std::move(lam));
}

Partition conjugate(const Partition& p) {
  if (p.empty()) return Partition();
  std::vector<std::int64_t> out(static_cast<std::size_t>(p.parts()[0]));
  for (std::int64_t j = 1; j <= p.parts()[0]; ++j) {
    std::int64_t count = 0;
    for (auto v : p.parts()) {
      if (v >= j) ++count;
      else break;
    }
    out[static_cast<std::size_t>(j - 1)] = count;
  }
  return Partition(std::move(out));
}

}  // namespace mdp
