#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "subposet/family.hpp"
#include "subposet/rational.hpp"

namespace subposet {

/// A full (maximal) chain of the Boolean lattice, recorded as the insertion
/// order of ground elements: prefix sets are the chain's nonempty members.
struct FullChain {
    std::vector<std::uint8_t> order;  // a permutation of 0..n-1
};

/// Exact enumeration is capped at n <= 8 (8! chains).
constexpr int kMaxChainEnumeration = 8;

/// Visits all n! full chains.
void for_each_chain(int n, const std::function<void(const FullChain&)>& fn);
std::vector<FullChain> enumerate_chains(int n);

/// |F ∩ C|, counting the empty set and [n].
int meet_count(const SetFamily& f, const FullChain& c);

/// Average meet count over all n! chains; equals lubell(f) identically.
/// Kept as an independent oracle for the closed form (n <= 8).
Rat lubell_via_chains(const SetFamily& f);

struct MonteCarloEstimate {
    Rat estimate;      // sample mean, exact
    Rat stderr_bound;  // rational upper enclosure of the standard error
    std::uint64_t samples = 0;
};

/// Unbiased chain-sampling estimator of the Lubell mass. Each sample draws a
/// uniform permutation from a counter-based generator keyed by (seed, index),
/// so results are independent of how samples are sharded across threads.
MonteCarloEstimate lubell_monte_carlo(const SetFamily& f, std::uint64_t samples,
                                      std::uint64_t seed, int threads = 1);

/// One block of a partition of the n! full chains, with exact statistics.
struct ChainBlockReport {
    enum class Kind { deleted_element, min_element, minmax_pair, empty_block };
    Kind kind = Kind::empty_block;
    int deleted = -1;           // deleted_element blocks (0-based)
    std::uint32_t lo = 0, hi = 0;  // min / minmax keys
    Int chain_count;
    Rat average_meet;
    std::string key_string() const;  // "del:3" | "min:{1,2}" | "minmax:{1}-{1,2}" | "empty"
};

std::string format_block(const ChainBlockReport& b);  // "block <key> chains=<int> avg=<p>/<q>"

/// n blocks keyed by the ground element the chain's size-(n-1) set omits.
/// Block i's average equals the (n-1)-ground Lubell mass of {F : i not in F},
/// plus one when [n] itself belongs to the family. Requires n >= 2, n <= 8.
std::vector<ChainBlockReport> partition_by_deleted_element(const SetFamily& f);

/// Blocks keyed by the minimal member the chain meets, plus the block of
/// chains that miss the family entirely. Exact counts and averages come from
/// combinatorial counting, not enumeration (n <= 8).
std::vector<ChainBlockReport> min_partition(const SetFamily& f);

/// Blocks keyed by the (min, max) pair of members the chain meets. Interior
/// members of [A,B] contribute 1/C(|B-A|,|S-A|) each to the block average.
std::vector<ChainBlockReport> minmax_partition(const SetFamily& f);

}  // namespace subposet
