#include "subposet/family.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>

namespace subposet {

namespace {

constexpr std::size_t kMaxMaterializedFamily = 50'000'000;

int ground_checked(int n) {
    if (n < 1 || n > 30) throw std::invalid_argument("ground size must be in [1,30]");
    return n;
}

void split_checked(std::uint32_t s, std::uint32_t t, int& n_out) {
    if (s == 0 || t == 0) throw std::invalid_argument("construction parts must be nonempty");
    if (s & t) throw std::invalid_argument("construction parts must be disjoint");
    const std::uint32_t u = s | t;
    const int n = std::popcount(u);
    if (n > 30 || u != (n == 32 ? ~0u : (1u << n) - 1))
        throw std::invalid_argument("construction parts must partition [n]");
    n_out = n;
}

std::vector<std::uint32_t> bits_of(std::uint32_t mask) {
    std::vector<std::uint32_t> out;
    while (mask) {
        out.push_back(mask & (~mask + 1));
        mask &= mask - 1;
    }
    return out;
}

// All r-subsets of the support of `mask`, as masks.
std::vector<std::uint32_t> subsets_of_size(std::uint32_t mask, int r) {
    const auto elems = bits_of(mask);
    std::vector<std::uint32_t> out;
    if (r < 0 || r > static_cast<int>(elems.size())) return out;
    std::vector<int> idx(static_cast<std::size_t>(r));
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        std::uint32_t m = 0;
        for (int i : idx) m |= elems[static_cast<std::size_t>(i)];
        out.push_back(m);
        int i = r - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == static_cast<int>(elems.size()) - r + i) --i;
        if (i < 0) break;
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < r; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
    if (r == 0) out = {0};
    return out;
}

void append_join(std::vector<std::uint32_t>& out, const std::vector<std::uint32_t>& a,
                 const std::vector<std::uint32_t>& b) {
    for (auto x : a)
        for (auto y : b) out.push_back(x | y);
}

}  // namespace

SetFamily::SetFamily(int ground_size, std::vector<std::uint32_t> masks)
    : n(ground_checked(ground_size)), members(std::move(masks)) {
    const std::uint32_t full = full_mask();
    for (auto m : members)
        if (m & ~full) throw std::invalid_argument("member mask exceeds ground set");
    std::sort(members.begin(), members.end());
    if (std::adjacent_find(members.begin(), members.end()) != members.end())
        throw std::invalid_argument("family members must be distinct");
}

bool SetFamily::contains(std::uint32_t mask) const {
    return std::binary_search(members.begin(), members.end(), mask);
}

Rat lubell(const SetFamily& f) {
    std::vector<Int> per_size(static_cast<std::size_t>(f.n) + 1, 0);
    for (auto m : f.members) ++per_size[static_cast<std::size_t>(std::popcount(m))];
    Rat total = 0;
    for (int s = 0; s <= f.n; ++s)
        if (per_size[static_cast<std::size_t>(s)] != 0)
            total += Rat(per_size[static_cast<std::size_t>(s)], binomial(f.n, s));
    return total;
}

int family_height(const SetFamily& f) {
    // Members sorted by popcount; chain DP over proper subsets.
    std::vector<std::uint32_t> by_size(f.members);
    std::sort(by_size.begin(), by_size.end(), [](std::uint32_t a, std::uint32_t b) {
        const int pa = std::popcount(a), pb = std::popcount(b);
        return pa != pb ? pa < pb : a < b;
    });
    std::vector<int> len(by_size.size(), 1);
    int best = by_size.empty() ? 0 : 1;
    for (std::size_t i = 0; i < by_size.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j)
            if (by_size[j] != by_size[i] && (by_size[j] & ~by_size[i]) == 0)
                len[i] = std::max(len[i], len[j] + 1);
        best = std::max(best, len[i]);
    }
    return best;
}

Int sigma(int n, int k) {
    ground_checked(n);
    if (k < 0 || k > n + 1) throw std::invalid_argument("sigma: 0 <= k <= n+1 required");
    const int lo = (n - k + 1) / 2;  // floor, k >= 1
    Int total = 0;
    for (int s = lo; s < lo + k; ++s) total += binomial(n, s);
    return total;
}

SetFamily middle_levels(int n, int k, LevelVariant variant) {
    ground_checked(n);
    if (k < 1 || k > n + 1) throw std::invalid_argument("middle_levels: 1 <= k <= n+1 required");
    int lo;
    if (variant == LevelVariant::low) {
        lo = (n - k + 1) / 2;
    } else {
        lo = (n - k + 2) / 2;  // ceil((n-k+1)/2)
    }
    const int hi = lo + k - 1;
    Int total = 0;
    for (int s = std::max(0, lo); s <= std::min(n, hi); ++s) total += binomial(n, s);
    if (total > kMaxMaterializedFamily)
        throw std::invalid_argument("middle_levels: family too large to materialize");
    std::vector<std::uint32_t> masks;
    masks.reserve(static_cast<std::size_t>(total));
    const std::uint32_t full = n == 32 ? ~0u : (1u << n) - 1;
    for (int s = std::max(0, lo); s <= std::min(n, hi); ++s) {
        if (s == 0) {
            masks.push_back(0);
            continue;
        }
        // Gosper's hack over s-subsets of [n].
        std::uint32_t v = (1u << s) - 1;
        while (v <= full) {
            masks.push_back(v);
            const std::uint32_t c = v & (~v + 1), r = v + c;
            const std::uint32_t next = (((r ^ v) >> 2) / c) | r;
            if (next == v || r == 0) break;
            v = next;
        }
    }
    return SetFamily(n, std::move(masks));
}

SetFamily construct_c1(std::uint32_t s_mask, std::uint32_t t_mask) {
    int n = 0;
    split_checked(s_mask, t_mask, n);
    std::vector<std::uint32_t> m{0};
    const auto s1 = subsets_of_size(s_mask, 1);
    const auto t1 = subsets_of_size(t_mask, 1);
    m.insert(m.end(), s1.begin(), s1.end());
    append_join(m, s1, t1);
    const auto t2 = subsets_of_size(t_mask, 2);
    m.insert(m.end(), t2.begin(), t2.end());
    return SetFamily(n, std::move(m));
}

SetFamily construct_c2(std::uint32_t s_mask, std::uint32_t t_mask) {
    int n = 0;
    split_checked(s_mask, t_mask, n);
    std::vector<std::uint32_t> m{0};
    const auto s1 = subsets_of_size(s_mask, 1);
    const auto s2 = subsets_of_size(s_mask, 2);
    const auto t1 = subsets_of_size(t_mask, 1);
    const auto t2 = subsets_of_size(t_mask, 2);
    m.insert(m.end(), s2.begin(), s2.end());
    m.insert(m.end(), t2.begin(), t2.end());
    append_join(m, s2, t1);
    append_join(m, s1, t2);
    return SetFamily(n, std::move(m));
}

SetFamily construct_c3(std::uint32_t s_mask, std::uint32_t t_mask) {
    int n = 0;
    split_checked(s_mask, t_mask, n);
    std::vector<std::uint32_t> m = subsets_of_size(s_mask | t_mask, 1);
    const auto s1 = subsets_of_size(s_mask, 1);
    const auto s2 = subsets_of_size(s_mask, 2);
    const auto t1 = subsets_of_size(t_mask, 1);
    const auto t2 = subsets_of_size(t_mask, 2);
    m.insert(m.end(), s2.begin(), s2.end());
    m.insert(m.end(), t2.begin(), t2.end());
    append_join(m, s2, t1);
    append_join(m, s1, t2);
    return SetFamily(n, std::move(m));
}

SetFamily conjugate(const SetFamily& f) {
    const std::uint32_t full = f.full_mask();
    std::vector<std::uint32_t> m;
    m.reserve(f.members.size());
    for (auto x : f.members) m.push_back(full & ~x);
    return SetFamily(f.n, std::move(m));
}

HostPoset inclusion_host(const SetFamily& f) {
    PairList pairs;
    const int sz = static_cast<int>(f.members.size());
    for (int i = 0; i < sz; ++i)
        for (int j = 0; j < sz; ++j)
            if (i != j && (f.members[static_cast<std::size_t>(i)] & ~f.members[static_cast<std::size_t>(j)]) == 0 &&
                f.members[static_cast<std::size_t>(i)] != f.members[static_cast<std::size_t>(j)])
                pairs.emplace_back(i, j);
    return HostPoset(sz, pairs);
}

bool is_pattern_free(const SetFamily& f, const PosetPattern& p) {
    return !embeds(p, inclusion_host(f)).has_value();
}

bool diamond_free_fast(const SetFamily& f, int k) {
    if (k < 2) throw std::invalid_argument("diamond_free_fast: k >= 2 required");
    const auto& m = f.members;
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j) {
            if (i == j || (m[i] & ~m[j]) != 0) continue;  // need m[i] proper subset of m[j]
            int between = 0;
            for (auto y : m)
                if (y != m[i] && y != m[j] && (m[i] & ~y) == 0 && (y & ~m[j]) == 0) ++between;
            if (between > k - 1) return false;
        }
    return true;
}

int interval_count(const SetFamily& f, std::uint32_t x, std::uint32_t z) {
    if (x == z || (x & ~z) != 0) throw std::invalid_argument("interval_count: x must be a proper subset of z");
    int c = 0;
    for (auto y : f.members)
        if (y != x && y != z && (x & ~y) == 0 && (y & ~z) == 0) ++c;
    return c;
}

SizeBound lubell_size_bound(int n, const Rat& m) {
    ground_checked(n);
    if (m <= 0) throw std::invalid_argument("lubell_size_bound: cap must be positive");
    const Int mid = binomial(n, n / 2);
    const Rat coarse = m * mid;
    SizeBound b;
    b.coarse = numerator(coarse) / denominator(coarse);  // floor: both positive
    if (denominator(m) == 1 && numerator(m) <= n + 1) b.refined = sigma(n, numerator(m).convert_to<int>());
    return b;
}

BoundsReport dk_bounds(int k) {
    if (k < 2) throw std::invalid_argument("dk_bounds: k >= 2 required");
    int m = 0;
    while ((1ll << m) < k + 2) ++m;  // ceil(log2(k+2))
    const Int mid = binomial(m, m / 2);
    BoundsReport r;
    r.k = k;
    r.m = m;
    if (Int(k) <= (Int(1) << m) - mid - 1) {
        r.case_tag = BoundsReport::CaseTag::case1;
        r.lower = m;
        r.upper = m;
    } else {
        r.case_tag = BoundsReport::CaseTag::case2;
        r.lower = m;
        r.upper = Rat(m + 1) - Rat((Int(1) << m) - k - 1, mid);
    }
    return r;
}

}  // namespace subposet
