#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace subposet {

using PairList = std::vector<std::pair<int, int>>;

/// Smallest transitively closed superset of a strict relation on
/// {0..element_count-1}. Throws std::invalid_argument on a cycle (the
/// closure would violate irreflexivity/antisymmetry).
PairList transitive_closure(const PairList& pairs, int element_count);

/// A finite strict partial order used as a forbidden configuration.
/// Containment is always in the weak-subposet sense: an injection must
/// preserve the pattern's strict relations, and nothing else.
class PosetPattern {
public:
    PosetPattern() = default;
    /// Builds from an arbitrary strict relation; closure is applied.
    static PosetPattern from_pairs(int element_count, const PairList& pairs,
                                   std::string name = "");

    // Named constructors. Element labelling is fixed so witnesses are
    // reproducible:
    //   chain(k):    0 < 1 < ... < k-1
    //   diamond(k):  0 < {1..k} < k+1
    //   fork(r):     0 < {1..r}
    //   butterfly(): 0,1 < 2,3
    //   n_poset():   0 < 1, 2 < 1, 2 < 3
    //   j_poset():   1 < 0, 1 < 2 < 3
    //   harp(l):     0 = shared bottom, last = shared top, interior path
    //                elements numbered path by path
    static PosetPattern chain(int k);
    static PosetPattern diamond(int k);
    static PosetPattern fork(int r);
    static PosetPattern butterfly();
    static PosetPattern n_poset();
    static PosetPattern j_poset();
    static PosetPattern harp(const std::vector<int>& lengths);

    int size() const { return count_; }
    const std::string& name() const { return name_; }
    bool less(int u, int v) const { return (up_[u] >> v) & 1u; }
    PairList pairs() const;
    int pair_count() const;
    /// Elements strictly above / below u, as bitmasks over pattern labels.
    std::uint32_t up_set(int u) const { return up_[u]; }
    std::uint32_t down_set(int u) const { return down_[u]; }

private:
    int count_ = 0;
    std::string name_;
    std::vector<std::uint32_t> up_;    // up_[u] bit v <=> u < v
    std::vector<std::uint32_t> down_;  // down_[u] bit v <=> v < u
};

/// A finite host order with a precomputed closed comparability relation.
/// Rows are bitsets so embedding search can intersect candidate sets.
class HostPoset {
public:
    HostPoset(int element_count, const PairList& strict_pairs);
    int size() const { return count_; }
    bool less(int u, int v) const {
        return (up_row(u)[static_cast<std::size_t>(v) >> 6] >> (v & 63)) & 1u;
    }
    const std::uint64_t* up_row(int u) const { return up_.data() + static_cast<std::size_t>(u) * words_; }
    const std::uint64_t* down_row(int u) const { return down_.data() + static_cast<std::size_t>(u) * words_; }
    int words() const { return words_; }
    int up_count(int u) const { return up_count_[u]; }
    int down_count(int u) const { return down_count_[u]; }

private:
    int count_ = 0;
    int words_ = 0;
    std::vector<std::uint64_t> up_, down_;
    std::vector<int> up_count_, down_count_;
};

/// An order-preserving injection of a pattern into a host.
struct EmbeddingWitness {
    std::vector<int> mapping;  // host index per pattern element
    /// Replays the mapping: injective and every pattern pair preserved.
    bool verify(const PosetPattern& pattern, const HostPoset& host) const;
};

/// Longest chain size of the pattern (0 for the empty pattern).
int height(const PosetPattern& p);

/// Weak-subposet test: a witness iff an order-preserving injection of
/// `pattern` into `host` exists.
std::optional<EmbeddingWitness> embeds(const PosetPattern& pattern, const HostPoset& host);

/// Like embeds(), but only admits witnesses whose image contains the host
/// element `forced`. Used for incremental freeness checks.
std::optional<EmbeddingWitness> embeds_using(const PosetPattern& pattern, const HostPoset& host,
                                             int forced);

/// Largest m such that every middle-level family B(n,m), for every n up to
/// n_max and both parity variants, avoids the pattern. A finite-n lower
/// bound surrogate for the limit quantity; n_max <= 10.
int e_lower(const PosetPattern& pattern, int n_max);

}  // namespace subposet
