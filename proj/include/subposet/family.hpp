#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "subposet/poset.hpp"
#include "subposet/rational.hpp"

namespace subposet {

/// A family of distinct subsets of [n], bitmask encoded (bit i-1 = element i).
/// Members are kept strictly sorted by mask value, which is the canonical
/// order for equality tests and file round-trips.
struct SetFamily {
    int n = 1;
    std::vector<std::uint32_t> members;

    SetFamily() = default;
    /// Validates, sorts, and rejects duplicates / oversized masks.
    SetFamily(int ground_size, std::vector<std::uint32_t> masks);

    std::size_t size() const { return members.size(); }
    bool contains(std::uint32_t mask) const;
    std::uint32_t full_mask() const { return n == 32 ? ~0u : (1u << n) - 1; }
    bool operator==(const SetFamily&) const = default;
};

/// Exact Lubell mass: sum over members of 1/C(n,|F|).
Rat lubell(const SetFamily& f);

/// Longest inclusion chain inside the family (0 when empty).
int family_height(const SetFamily& f);

/// Sum of the k middle binomial coefficients of n.
Int sigma(int n, int k);

enum class LevelVariant { low, high };

/// The k middle levels B(n,k). The two variants coincide when n+k is odd.
SetFamily middle_levels(int n, int k, LevelVariant variant = LevelVariant::low);

// The three explicit two-sided constructions over a partition S, T of [n]
// (masks must be disjoint, nonempty, and cover [n]). All three avoid the
// 2-diamond and have Lubell mass 2 + |S||T| / (n(n-1)).
SetFamily construct_c1(std::uint32_t s_mask, std::uint32_t t_mask);
SetFamily construct_c2(std::uint32_t s_mask, std::uint32_t t_mask);
SetFamily construct_c3(std::uint32_t s_mask, std::uint32_t t_mask);

/// Complements every member; an involution.
SetFamily conjugate(const SetFamily& f);

/// The family viewed as a poset under inclusion (element order = member order).
HostPoset inclusion_host(const SetFamily& f);

/// True iff the pattern has no weak-subposet copy inside the family.
bool is_pattern_free(const SetFamily& f, const PosetPattern& p);

/// Interval-counting k-diamond test: free iff every pair X < Z of members has
/// at most k-1 members strictly between. Agrees with is_pattern_free on
/// diamond(k) for every family.
bool diamond_free_fast(const SetFamily& f, int k);

/// Number of members strictly between x and z; requires x < z (proper subset).
int interval_count(const SetFamily& f, std::uint32_t x, std::uint32_t z);

/// Size bound from a Lubell-mass cap m: |F| <= m * C(n, n/2), and the
/// sharper sum-of-middle-levels value when m is a positive integer.
struct SizeBound {
    Int coarse;
    std::optional<Int> refined;  // set when the cap is integral
    const Int& best() const { return refined ? *refined : coarse; }
};
SizeBound lubell_size_bound(int n, const Rat& m);

/// k-diamond bound report: m = ceil(log2(k+2)); case1 when the k middle
/// budget fills whole levels (bound exactly m), case2 otherwise.
struct BoundsReport {
    int k = 0;
    int m = 0;
    enum class CaseTag { case1, case2 } case_tag = CaseTag::case1;
    Rat lower;
    Rat upper;
};
BoundsReport dk_bounds(int k);

}  // namespace subposet
