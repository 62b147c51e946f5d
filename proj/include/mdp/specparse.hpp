// Textual gap-sequence specs, as accepted by the CLI:
//
//   const:<q>
//   periodic:<v1,v2,...>
//   list:<v1,...>;tail=<v>
//   iid:<dist>;seed=<u64>        dist = two-point:a=<i>,b=<i>,p=<r>
//                                     | geometric:p=<r>
//                                     | uniform:lo=<i>,hi=<i>
//   rwre:dist=<env>;a=<spec>;b=<i>;len=<k>;seed=<u64>
//                                env  = two-point:p1=<r>[,p2=<r>],w=<r>
//                                     | uniform:lo=<r>,hi=<r>
//                                a    = const:<i> | list:<v1,...>;tail=<v>
//
// Parse errors report the offending position and token. Random-environment
// specs are materialized immediately (len values) and carry their regime
// metadata alongside the provider.
#ifndef MDP_SPECPARSE_HPP
#define MDP_SPECPARSE_HPP

#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "mdp/gapseq.hpp"
#include "mdp/rwre.hpp"

namespace mdp {

struct ParsedGaps {
  GapProviderPtr provider;
  std::string text;  // canonical form of what was parsed
  std::optional<RwreGapResult> rwre;
};

ParsedGaps parse_gap_spec(std::string_view text);

// Pieces of the rwre grammar, reused by the CLI flags --dist and --a.
EnvironmentSpec parse_env_spec(std::string_view text, std::uint64_t seed);
GapSequenceSpec parse_leading_seq_spec(std::string_view text);

}  // namespace mdp

#endif  // MDP_SPECPARSE_HPP
