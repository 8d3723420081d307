#include "subposet/poset.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>

#include "subposet/family.hpp"

namespace subposet {

namespace {

constexpr int kMaxPatternSize = 32;

std::vector<std::uint32_t> close_bits(int n, const PairList& pairs) {
    if (n < 0 || n > kMaxPatternSize) throw std::invalid_argument("poset size out of range");
    std::vector<std::uint32_t> up(static_cast<std::size_t>(n), 0);
    for (auto [u, v] : pairs) {
        if (u < 0 || u >= n || v < 0 || v >= n) throw std::invalid_argument("pair label out of range");
        if (u == v) throw std::invalid_argument("relation is not irreflexive");
        up[static_cast<std::size_t>(u)] |= 1u << v;
    }
    // Warshall closure on 32-bit rows.
    for (int k = 0; k < n; ++k)
        for (int u = 0; u < n; ++u)
            if ((up[u] >> k) & 1u) up[u] |= up[k];
    for (int u = 0; u < n; ++u)
        if ((up[u] >> u) & 1u) throw std::invalid_argument("cycle detected: relation has no antisymmetric closure");
    return up;
}

}  // namespace

PairList transitive_closure(const PairList& pairs, int element_count) {
    auto up = close_bits(element_count, pairs);
    PairList out;
    for (int u = 0; u < element_count; ++u)
        for (int v = 0; v < element_count; ++v)
            if ((up[u] >> v) & 1u) out.emplace_back(u, v);
    return out;
}

PosetPattern PosetPattern::from_pairs(int element_count, const PairList& pairs, std::string name) {
    PosetPattern p;
    p.count_ = element_count;
    p.name_ = std::move(name);
    p.up_ = close_bits(element_count, pairs);
    p.down_.assign(static_cast<std::size_t>(element_count), 0);
    for (int u = 0; u < element_count; ++u)
        for (int v = 0; v < element_count; ++v)
            if (p.less(u, v)) p.down_[static_cast<std::size_t>(v)] |= 1u << u;
    return p;
}

PosetPattern PosetPattern::chain(int k) {
    if (k < 1) throw std::invalid_argument("chain: k >= 1 required");
    PairList pairs;
    for (int i = 0; i + 1 < k; ++i) pairs.emplace_back(i, i + 1);
    return from_pairs(k, pairs, "chain:" + std::to_string(k));
}

PosetPattern PosetPattern::diamond(int k) {
    if (k < 2) throw std::invalid_argument("diamond: k >= 2 required");
    PairList pairs;
    for (int i = 1; i <= k; ++i) {
        pairs.emplace_back(0, i);
        pairs.emplace_back(i, k + 1);
    }
    return from_pairs(k + 2, pairs, "diamond:" + std::to_string(k));
}

PosetPattern PosetPattern::fork(int r) {
    if (r < 2) throw std::invalid_argument("fork: r >= 2 required");
    PairList pairs;
    for (int i = 1; i <= r; ++i) pairs.emplace_back(0, i);
    return from_pairs(r + 1, pairs, "fork:" + std::to_string(r));
}

PosetPattern PosetPattern::butterfly() {
    return from_pairs(4, {{0, 2}, {0, 3}, {1, 2}, {1, 3}}, "butterfly");
}

PosetPattern PosetPattern::n_poset() {
    return from_pairs(4, {{0, 1}, {2, 1}, {2, 3}}, "nposet");
}

PosetPattern PosetPattern::j_poset() {
    return from_pairs(4, {{1, 0}, {1, 2}, {2, 3}}, "jposet");
}

PosetPattern PosetPattern::harp(const std::vector<int>& lengths) {
    if (lengths.empty()) throw std::invalid_argument("harp: at least one path");
    std::string name = "harp:";
    int interior = 0;
    for (std::size_t i = 0; i < lengths.size(); ++i) {
        if (lengths[i] < 3) throw std::invalid_argument("harp: every path length >= 3");
        interior += lengths[i] - 2;
        name += (i ? "," : "") + std::to_string(lengths[i]);
    }
    const int n = interior + 2;  // shared bottom and top
    const int top = n - 1;
    PairList pairs;
    int next = 1;
    for (int len : lengths) {
        int prev = 0;
        for (int j = 0; j < len - 2; ++j) {
            pairs.emplace_back(prev, next);
            prev = next++;
        }
        pairs.emplace_back(prev, top);
    }
    return from_pairs(n, pairs, name);
}

PairList PosetPattern::pairs() const {
    PairList out;
    for (int u = 0; u < count_; ++u)
        for (int v = 0; v < count_; ++v)
            if (less(u, v)) out.emplace_back(u, v);
    return out;
}

int PosetPattern::pair_count() const {
    int c = 0;
    for (int u = 0; u < count_; ++u) c += std::popcount(up_[static_cast<std::size_t>(u)]);
    return c;
}

HostPoset::HostPoset(int element_count, const PairList& strict_pairs) : count_(element_count) {
    if (element_count < 0) throw std::invalid_argument("host size negative");
    words_ = std::max(1, (element_count + 63) / 64);
    std::vector<std::vector<std::uint64_t>> rows(
        static_cast<std::size_t>(element_count),
        std::vector<std::uint64_t>(static_cast<std::size_t>(words_), 0));
    for (auto [u, v] : strict_pairs) {
        if (u < 0 || u >= element_count || v < 0 || v >= element_count)
            throw std::invalid_argument("pair label out of range");
        if (u == v) throw std::invalid_argument("relation is not irreflexive");
        rows[static_cast<std::size_t>(u)][static_cast<std::size_t>(v) >> 6] |= 1ull << (v & 63);
    }
    for (int k = 0; k < element_count; ++k)
        for (int u = 0; u < element_count; ++u)
            if ((rows[u][static_cast<std::size_t>(k) >> 6] >> (k & 63)) & 1u)
                for (int w = 0; w < words_; ++w) rows[u][w] |= rows[k][w];
    up_.assign(static_cast<std::size_t>(element_count) * words_, 0);
    down_.assign(static_cast<std::size_t>(element_count) * words_, 0);
    up_count_.assign(static_cast<std::size_t>(element_count), 0);
    down_count_.assign(static_cast<std::size_t>(element_count), 0);
    for (int u = 0; u < element_count; ++u) {
        if ((rows[u][static_cast<std::size_t>(u) >> 6] >> (u & 63)) & 1u)
            throw std::invalid_argument("cycle detected: relation has no antisymmetric closure");
        for (int w = 0; w < words_; ++w) up_[static_cast<std::size_t>(u) * words_ + w] = rows[u][w];
        for (int v = 0; v < element_count; ++v)
            if ((rows[u][static_cast<std::size_t>(v) >> 6] >> (v & 63)) & 1u)
                down_[static_cast<std::size_t>(v) * words_ + (static_cast<std::size_t>(u) >> 6)] |=
                    1ull << (u & 63);
    }
    for (int u = 0; u < element_count; ++u) {
        int uc = 0, dc = 0;
        for (int w = 0; w < words_; ++w) {
            uc += std::popcount(up_row(u)[w]);
            dc += std::popcount(down_row(u)[w]);
        }
        up_count_[static_cast<std::size_t>(u)] = uc;
        down_count_[static_cast<std::size_t>(u)] = dc;
    }
}

bool EmbeddingWitness::verify(const PosetPattern& pattern, const HostPoset& host) const {
    if (static_cast<int>(mapping.size()) != pattern.size()) return false;
    for (std::size_t i = 0; i < mapping.size(); ++i) {
        if (mapping[i] < 0 || mapping[i] >= host.size()) return false;
        for (std::size_t j = 0; j < mapping.size(); ++j) {
            if (i != j && mapping[i] == mapping[j]) return false;
            if (pattern.less(static_cast<int>(i), static_cast<int>(j)) &&
                !host.less(mapping[i], mapping[j]))
                return false;
        }
    }
    return true;
}

int height(const PosetPattern& p) {
    const int n = p.size();
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return std::popcount(p.down_set(a)) < std::popcount(p.down_set(b));
    });
    std::vector<int> len(static_cast<std::size_t>(n), 1);
    int best = 0;
    for (int u : order) {
        for (int v = 0; v < n; ++v)
            if (p.less(v, u))
                len[static_cast<std::size_t>(u)] =
                    std::max(len[static_cast<std::size_t>(u)], len[static_cast<std::size_t>(v)] + 1);
        best = std::max(best, len[static_cast<std::size_t>(u)]);
    }
    return best;
}

namespace {

// Backtracking over pattern elements in a topological order. At each step the
// candidate set is the intersection of host up-rows of already-placed
// pattern predecessors, filtered by up-/down-set size counts. Weak-subposet
// semantics: pattern incomparability constrains nothing.
struct Embedder {
    const PosetPattern& pat;
    const HostPoset& host;
    std::vector<int> order;
    std::vector<int> assignment;
    std::vector<std::uint64_t> used;
    std::vector<std::uint64_t> cand;  // per-depth candidate rows, depth-major
    int pinned_pe = -1, pinned_he = -1;

    Embedder(const PosetPattern& p, const HostPoset& h) : pat(p), host(h) {
        const int n = pat.size();
        order.resize(static_cast<std::size_t>(n));
        std::iota(order.begin(), order.end(), 0);
        // Topological by down-set size; most-constrained first inside a level.
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            const int da = std::popcount(pat.down_set(a)), db = std::popcount(pat.down_set(b));
            if (da != db) return da < db;
            const int ca = std::popcount(pat.up_set(a)), cb = std::popcount(pat.up_set(b));
            if (ca != cb) return ca > cb;
            return a < b;
        });
        assignment.assign(static_cast<std::size_t>(n), -1);
        used.assign(static_cast<std::size_t>(host.words()), 0);
        cand.assign(static_cast<std::size_t>(n) * host.words(), 0);
    }

    bool admissible(int pe, int he) const {
        return host.up_count(he) >= std::popcount(pat.up_set(pe)) &&
               host.down_count(he) >= std::popcount(pat.down_set(pe));
    }

    bool try_assign(std::size_t step, int pe, int he) {
        assignment[static_cast<std::size_t>(pe)] = he;
        used[static_cast<std::size_t>(he) >> 6] |= 1ull << (he & 63);
        const bool ok = place(step + 1);
        if (!ok) {
            used[static_cast<std::size_t>(he) >> 6] &= ~(1ull << (he & 63));
            assignment[static_cast<std::size_t>(pe)] = -1;
        }
        return ok;
    }

    bool place(std::size_t step) {
        if (step == order.size()) return true;
        const int pe = order[step];
        if (pe == pinned_pe) {
            const int he = pinned_he;
            if ((used[static_cast<std::size_t>(he) >> 6] >> (he & 63)) & 1u) return false;
            if (!admissible(pe, he)) return false;
            const std::uint32_t preds = pat.down_set(pe);
            for (int q = 0; q < pat.size(); ++q)
                if (((preds >> q) & 1u) && !host.less(assignment[static_cast<std::size_t>(q)], he))
                    return false;
            return try_assign(step, pe, he);
        }
        const int W = host.words();
        std::uint64_t* row = cand.data() + step * static_cast<std::size_t>(W);
        for (int w = 0; w < W; ++w) row[w] = ~0ull;
        const int tail = host.size() & 63;
        if (tail) row[W - 1] = (1ull << tail) - 1;
        const std::uint32_t preds = pat.down_set(pe);
        for (int q = 0; q < pat.size(); ++q)
            if ((preds >> q) & 1u) {
                const std::uint64_t* up = host.up_row(assignment[static_cast<std::size_t>(q)]);
                for (int w = 0; w < W; ++w) row[w] &= up[w];
            }
        for (int w = 0; w < W; ++w) {
            std::uint64_t bits = row[w] & ~used[static_cast<std::size_t>(w)];
            while (bits) {
                const int he = (w << 6) + std::countr_zero(bits);
                bits &= bits - 1;
                if (!admissible(pe, he)) continue;
                if (try_assign(step, pe, he)) return true;
            }
        }
        return false;
    }
};

}  // namespace

std::optional<EmbeddingWitness> embeds(const PosetPattern& pattern, const HostPoset& host) {
    if (pattern.size() == 0) return EmbeddingWitness{{}};
    if (pattern.size() > host.size()) return std::nullopt;
    Embedder e(pattern, host);
    if (!e.place(0)) return std::nullopt;
    return EmbeddingWitness{e.assignment};
}

std::optional<EmbeddingWitness> embeds_using(const PosetPattern& pattern, const HostPoset& host,
                                             int forced) {
    if (forced < 0 || forced >= host.size()) throw std::invalid_argument("forced element out of range");
    if (pattern.size() == 0) return std::nullopt;  // the empty image never uses `forced`
    if (pattern.size() > host.size()) return std::nullopt;
    Embedder e(pattern, host);
    e.pinned_he = forced;
    for (int pe = 0; pe < pattern.size(); ++pe) {
        e.pinned_pe = pe;
        if (e.place(0)) return EmbeddingWitness{e.assignment};
    }
    return std::nullopt;
}

int e_lower(const PosetPattern& pattern, int n_max) {
    if (n_max < 1 || n_max > 10) throw std::invalid_argument("e_lower: 1 <= n_max <= 10 required");
    int best = 0;
    for (int m = 1; m <= n_max + 1; ++m) {
        bool free_everywhere = true;
        for (int n = std::max(1, m - 1); n <= n_max && free_everywhere; ++n) {
            for (auto variant : {LevelVariant::low, LevelVariant::high}) {
                const SetFamily levels = middle_levels(n, m, variant);
                if (!is_pattern_free(levels, pattern)) {
                    free_everywhere = false;
                    break;
                }
                if ((n + m) % 2 != 0) break;  // one variant only
            }
        }
        if (!free_everywhere) break;  // B(n,m-1) sits inside B(n,m): monotone
        best = m;
    }
    return best;
}

}  // namespace subposet
