// Counter-based pseudo-random generator with cheap stream derivation.
//
// Every draw is a pure function of (master seed, stream id, counter), so a
// batch of replicates can be split across workers by stream id and still
// produce results that do not depend on scheduling or worker count. The
// output function is SplitMix64 (Steele, Lea & Flood), applied to a counter
// advanced by the golden-ratio increment.
#ifndef MDP_RNG_HPP
#define MDP_RNG_HPP

#include <cmath>
#include <cstdint>
#include <limits>

namespace mdp {

class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : state_(derive_key(seed, stream)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<std::uint64_t>::max(); }

  result_type operator()() {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix(state_);
  }

  // Uniform double strictly inside (0,1); safe as an argument to log().
  double uniform01() {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Unbiased integer in [0, n), n >= 1.
  std::uint64_t below(std::uint64_t n);

  // Geometric on {0,1,2,...} with P(G >= g) = exp(g * log_c), log_c < 0.
  // Inverse-CDF: G = floor(log U / log_c).
  std::int64_t geometric_from_log(double log_c) {
    double u = uniform01();
    return static_cast<std::int64_t>(std::log(u) / log_c);
  }

  // Stateless access: value of draw number `index` for a fresh (seed, stream)
  // generator. Used to freeze random gap sequences and environments so that
  // index i can be queried out of order.
  static std::uint64_t at(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    return mix(derive_key(seed, stream) + (index + 1) * 0x9E3779B97F4A7C15ull);
  }

  static double uniform01_at(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    return (static_cast<double>(at(seed, stream, index) >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
  }

  static std::uint64_t derive_key(std::uint64_t seed, std::uint64_t stream) {
    return mix(seed ^ 0xD6E8FEB86659FD93ull) ^ mix(stream * 0xA24BAED4963EE407ull + 0x9FB21C651E98DF25ull);
  }

  std::uint64_t state_;
};

}  // namespace mdp

#endif  // MDP_RNG_HPP
