#include "mdp/rng.hpp"

namespace mdp {

std::uint64_t Rng::below(std::uint64_t n) {
  // Rejection from the top of the range keeps the draw unbiased.
  std::uint64_t threshold = -n % n;  // (2^64 - n) mod n
  for (;;) {
    std::uint64_t x = (*this)();
    if (x >= threshold) return x % n;
  }
}

}  // namespace mdp
