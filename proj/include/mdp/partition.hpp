// Integer partitions: non-increasing positive parts, Young-diagram boundary,
// difference coordinates, the minimal-difference test, the generalized
// Sylvester shift and conjugation.
//
// Parts are stored densely, largest first, with no trailing zeros. Values are
// immutable after construction and freely shareable between threads.
#ifndef MDP_PARTITION_HPP
#define MDP_PARTITION_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mdp/gapseq.hpp"

namespace mdp {

class Partition {
 public:
  Partition() = default;  // empty partition: N = 0, K = 0

  // Validates that parts are non-increasing and >= 1; throws SpecError.
  explicit Partition(std::vector<std::int64_t> parts);

  std::int64_t weight() const { return weight_; }               // N
  std::int64_t length() const { return static_cast<std::int64_t>(parts_.size()); }  // K
  const std::vector<std::int64_t>& parts() const { return parts_; }
  bool empty() const { return parts_.empty(); }

  // lambda_i with 1-based i; zero beyond the last part.
  std::int64_t part(std::int64_t i) const;

  // D_j = lambda_j - lambda_{j+1}, j = 1..K (with lambda_{K+1} = 0).
  std::vector<std::int64_t> differences() const;
  static Partition from_differences(const std::vector<std::int64_t>& d);

  // Canonical comma-separated form, e.g. "8,6,6,5,4,2,2,1,1"; empty -> "".
  std::string to_text() const;
  static Partition parse_text(std::string_view text);

  // JSON array form, e.g. [8,6,6,5,4,2,2,1,1].
  std::string to_json() const;
  static Partition parse_json(std::string_view text);

  bool operator==(const Partition& other) const { return parts_ == other.parts_; }
  bool operator!=(const Partition& other) const { return parts_ != other.parts_; }
  bool operator<(const Partition& other) const { return parts_ < other.parts_; }

 private:
  struct Unchecked {};
  Partition(Unchecked, std::vector<std::int64_t> parts);

  friend Partition unchecked_partition(std::vector<std::int64_t>);

  std::vector<std::int64_t> parts_;
  std::int64_t weight_ = 0;
};

namespace detail {
// Fast path for samplers that construct valid parts by design. Not part of
// the public contract.
Partition make_partition_unchecked(std::vector<std::int64_t> parts);
}  // namespace detail

// Upper boundary of the Young diagram: Y_lambda(t) = lambda_{floor(t)+1}.
std::int64_t young_boundary(const Partition& p, double t);

// True iff lambda_i - lambda_{i+1} >= q_{k-i} for i = 1..k, where k = K(p)
// and lambda_{k+1} = 0. The empty partition qualifies by convention.
bool is_mdp(const Partition& p, const GapSequenceProvider& g);

// The shift rho_i = lambda_i + 1 - Q_{k-i+1}, a bijection from the
// minimal-difference partitions of n with k parts onto the unrestricted
// partitions of r = n + k - s_k into exactly k parts.
// Throws NotMdpError if p is empty or not MDP for g.
Partition sylvester_forward(const Partition& p, const GapSequenceProvider& g);

// Inverse shift lambda_i = rho_i - 1 + Q_{k-i+1}; accepts any non-empty
// partition rho and returns an MDP partition.
Partition sylvester_inverse(const Partition& rho, const GapSequenceProvider& g);

// Conjugate (transpose) partition: rho'_j = #{i : rho_i >= j}.
Partition conjugate(const Partition& p);

}  // namespace mdp

#endif  // MDP_PARTITION_HPP
