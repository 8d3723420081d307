#include "subposet/search.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <chrono>
#include <cstdlib>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <stdexcept>
#include <thread>

namespace subposet {

namespace {

constexpr int kMaxSearchGround = 6;  // the whole universe fits one 64-bit word
constexpr int kMaxCanonicalGround = 8;

inline std::uint64_t bit(std::uint32_t m) { return std::uint64_t{1} << m; }

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("SUBPOSET_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

enum class OracleKind { chain, diamond, generic };

struct PatternInfo {
    OracleKind kind = OracleKind::generic;
    int chain_k = 0;
    int diamond_k = 0;
};

// Chains and diamonds get dedicated incremental freeness checks; the
// structural test also catches aliases such as the all-threes harp.
PatternInfo classify(const PosetPattern& p, bool chain_fast) {
    const int sz = p.size();
    PatternInfo info;
    if (p.pair_count() == sz * (sz - 1) / 2) {
        if (chain_fast) {
            info.kind = OracleKind::chain;
            info.chain_k = sz;
        }
        return info;
    }
    if (sz >= 4) {
        int bottom = -1, top = -1;
        for (int u = 0; u < sz; ++u) {
            if (std::popcount(p.up_set(u)) == sz - 1) bottom = u;
            if (std::popcount(p.down_set(u)) == sz - 1) top = u;
        }
        if (bottom >= 0 && top >= 0 && bottom != top) {
            bool middles = true;
            for (int u = 0; u < sz && middles; ++u) {
                if (u == bottom || u == top) continue;
                if (p.up_set(u) != (1u << top) || p.down_set(u) != (1u << bottom)) middles = false;
            }
            if (middles) {
                info.kind = OracleKind::diamond;
                info.diamond_k = sz - 2;
            }
        }
    }
    return info;
}

struct Tables {
    int n = 0, M = 0;
    std::int64_t scale = 1;                    // lcm of the binomials of n
    std::array<std::int64_t, 64> contrib{};    // scale / C(n, |mask|)
    std::array<std::uint8_t, 64> order{};      // branch position -> mask
    std::array<std::uint8_t, 64> pos_of{};     // mask -> branch position
    std::array<std::uint64_t, 64> subs_of{};   // all submasks, the mask included
    std::array<std::uint64_t, 64> sups_of{};
    std::array<std::uint64_t, 65> tail_pos{};  // position-space suffix masks
    std::array<std::uint8_t, 64> by_pop{};     // masks by (popcount, value)
    std::vector<std::array<std::uint8_t, 64>> pos_perm;  // non-identity relabelings

    explicit Tables(int n_in, bool symmetry) : n(n_in) {
        M = 1 << n;
        std::vector<std::int64_t> binom(static_cast<std::size_t>(n) + 1);
        for (int k = 0; k <= n; ++k) binom[static_cast<std::size_t>(k)] = static_cast<std::int64_t>(binomial_u64(n, k));
        for (int k = 0; k <= n; ++k) scale = std::lcm(scale, binom[static_cast<std::size_t>(k)]);
        for (int m = 0; m < M; ++m)
            contrib[static_cast<std::size_t>(m)] = scale / binom[static_cast<std::size_t>(std::popcount(static_cast<unsigned>(m)))];
        std::array<std::uint8_t, 64> idx{};
        for (int m = 0; m < M; ++m) idx[static_cast<std::size_t>(m)] = static_cast<std::uint8_t>(m);
        std::sort(idx.begin(), idx.begin() + M, [&](std::uint8_t a, std::uint8_t b) {
            const int da = std::abs(2 * std::popcount(static_cast<unsigned>(a)) - n);
            const int db = std::abs(2 * std::popcount(static_cast<unsigned>(b)) - n);
            if (da != db) return da < db;
            return a < b;
        });
        order = idx;
        for (int p = 0; p < M; ++p) pos_of[order[static_cast<std::size_t>(p)]] = static_cast<std::uint8_t>(p);
        for (int m = 0; m < M; ++m) {
            std::uint64_t subs = 0;
            std::uint32_t sub = static_cast<std::uint32_t>(m);
            while (true) {
                subs |= bit(sub);
                if (sub == 0) break;
                sub = (sub - 1) & static_cast<std::uint32_t>(m);
            }
            subs_of[static_cast<std::size_t>(m)] = subs;
            const std::uint32_t comp = static_cast<std::uint32_t>((M - 1) & ~m);
            std::uint64_t sups = 0;
            std::uint32_t add = comp;
            while (true) {
                sups |= bit(static_cast<std::uint32_t>(m) | add);
                if (add == 0) break;
                add = (add - 1) & comp;
            }
            sups_of[static_cast<std::size_t>(m)] = sups;
        }
        for (int p = 0; p <= M; ++p)
            tail_pos[static_cast<std::size_t>(p)] =
                p >= 64 ? 0 : (~std::uint64_t{0} << p) & (M == 64 ? ~std::uint64_t{0} : (bit(static_cast<std::uint32_t>(M)) - 1));
        std::array<std::uint8_t, 64> pops = order;
        std::sort(pops.begin(), pops.begin() + M, [&](std::uint8_t a, std::uint8_t b) {
            const int pa = std::popcount(static_cast<unsigned>(a)), pb = std::popcount(static_cast<unsigned>(b));
            if (pa != pb) return pa < pb;
            return a < b;
        });
        by_pop = pops;
        if (symmetry) {
            std::vector<int> perm(static_cast<std::size_t>(n));
            std::iota(perm.begin(), perm.end(), 0);
            while (std::next_permutation(perm.begin(), perm.end())) {
                std::array<std::uint8_t, 64> table{};
                for (int m = 0; m < M; ++m) {
                    std::uint32_t img = 0;
                    std::uint32_t rest = static_cast<std::uint32_t>(m);
                    while (rest) {
                        const int i = std::countr_zero(rest);
                        rest &= rest - 1;
                        img |= 1u << perm[static_cast<std::size_t>(i)];
                    }
                    table[static_cast<std::size_t>(pos_of[static_cast<std::size_t>(m)])] = pos_of[static_cast<std::size_t>(img)];
                }
                pos_perm.push_back(table);
            }
        }
    }
};

enum class Mode { optimize, enumerate_maximal, find_size };

struct SearchCtx {
    const Tables* T;
    const PosetPattern* pattern;
    PatternInfo pinfo;
    Objective objective = Objective::cardinality;
    Mode mode = Mode::optimize;
    bool prune_lubell = true;
    bool use_symmetry = true;
    int sym_depth = 64;
    std::int64_t cap_scaled = -1;  // -1: no mass cap available
    int target = 0;
    std::uint64_t shard_node_budget = std::numeric_limits<std::uint64_t>::max();
    bool has_deadline = false;
    std::chrono::steady_clock::time_point deadline;
    std::uint64_t base_mask = 0, base_pos = 0;
    std::int64_t base_lub = 0;
    std::atomic<int>* found_shard = nullptr;  // find_size early-out coordination
};

struct ShardState {
    int shard_index = 0;
    std::int64_t best = std::numeric_limits<std::int64_t>::min();
    std::set<std::uint64_t> best_words;
    std::vector<std::pair<std::uint64_t, std::int64_t>> maximal;  // word, scaled mass
    std::optional<std::uint64_t> found;
    std::uint64_t nodes = 0;
    bool completed = true;
    bool aborted = false;
};

// ---- incremental freeness -------------------------------------------------

int chain_reach(const Tables& T, std::uint64_t world, std::uint32_t u, bool upward) {
    const std::uint64_t set = world & (upward ? T.sups_of[u] : T.subs_of[u]) & ~bit(u);
    if (!set) return 0;
    std::array<std::uint8_t, 64> len{};
    int best = 0;
    for (int i = 0; i < T.M; ++i) {
        // popcount order gives subsets before supersets, reversed when upward
        const std::uint32_t m = T.by_pop[static_cast<std::size_t>(upward ? T.M - 1 - i : i)];
        if (!((set >> m) & 1u)) continue;
        int l = 1;
        std::uint64_t inner = set & (upward ? T.sups_of[m] : T.subs_of[m]) & ~bit(m);
        // inner elements were all processed earlier in this sweep
        while (inner) {
            const int x = std::countr_zero(inner);
            inner &= inner - 1;
            l = std::max(l, len[static_cast<std::size_t>(x)] + 1);
        }
        len[static_cast<std::size_t>(m)] = static_cast<std::uint8_t>(l);
        best = std::max(best, l);
    }
    return best;
}

bool diamond_add_ok(const Tables& T, std::uint64_t fam, std::uint32_t u, int k) {
    const std::uint64_t between_cap = static_cast<std::uint64_t>(k - 1);
    const std::uint64_t below = fam & T.subs_of[u] & ~bit(u);
    const std::uint64_t above = fam & T.sups_of[u] & ~bit(u);
    std::uint64_t xs = below;
    while (xs) {
        const std::uint32_t x = static_cast<std::uint32_t>(std::countr_zero(xs));
        xs &= xs - 1;
        const std::uint64_t mid_xu = T.subs_of[u] & T.sups_of[x] & ~bit(x) & ~bit(u);
        if (static_cast<std::uint64_t>(std::popcount(fam & mid_xu)) > between_cap) return false;
        std::uint64_t zs = above;
        while (zs) {
            const std::uint32_t z = static_cast<std::uint32_t>(std::countr_zero(zs));
            zs &= zs - 1;
            const std::uint64_t mid_xz = T.subs_of[z] & T.sups_of[x] & ~bit(x) & ~bit(z);
            if (static_cast<std::uint64_t>(std::popcount(fam & mid_xz)) + 1 > between_cap) return false;
        }
    }
    std::uint64_t zs = above;
    while (zs) {
        const std::uint32_t z = static_cast<std::uint32_t>(std::countr_zero(zs));
        zs &= zs - 1;
        const std::uint64_t mid_uz = T.subs_of[z] & T.sups_of[u] & ~bit(u) & ~bit(z);
        if (static_cast<std::uint64_t>(std::popcount(fam & mid_uz)) > between_cap) return false;
    }
    return true;
}

// Weak-subposet embedding over a one-word family, with one host element
// pinned into the image. Pattern elements are placed in topological order.
struct WordEmbedder {
    const Tables& T;
    const PosetPattern& pat;
    std::vector<int> order;

    WordEmbedder(const Tables& t, const PosetPattern& p) : T(t), pat(p) {
        order.resize(static_cast<std::size_t>(p.size()));
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            const int da = std::popcount(pat.down_set(a)), db = std::popcount(pat.down_set(b));
            if (da != db) return da < db;
            const int ca = std::popcount(pat.up_set(a)), cb = std::popcount(pat.up_set(b));
            if (ca != cb) return ca > cb;
            return a < b;
        });
    }

    bool search(std::uint64_t word, std::uint32_t forced) const {
        const int psz = pat.size();
        if (std::popcount(word) < psz) return false;
        std::array<std::uint32_t, 32> image{};
        std::array<bool, 32> placed{};
        for (int pin = 0; pin < psz; ++pin) {
            placed.fill(false);
            if (dfs(word, forced, pin, 0, image, placed)) return true;
        }
        return false;
    }

  private:
    bool dfs(std::uint64_t word, std::uint32_t forced, int pin, std::size_t step,
             std::array<std::uint32_t, 32>& image, std::array<bool, 32>& placed) const {
        if (step == order.size()) return true;
        const int pe = order[static_cast<std::size_t>(step)];
        std::uint64_t cand;
        if (pe == pin) {
            cand = bit(forced) & word;
        } else {
            cand = word;
        }
        const std::uint32_t preds = pat.down_set(pe);
        std::uint32_t rest = preds;
        while (rest) {
            const int q = std::countr_zero(rest);
            rest &= rest - 1;
            cand &= T.sups_of[image[static_cast<std::size_t>(q)]] & ~bit(image[static_cast<std::size_t>(q)]);
        }
        // exclude used hosts
        for (int q = 0; q < pat.size(); ++q)
            if (placed[static_cast<std::size_t>(q)]) cand &= ~bit(image[static_cast<std::size_t>(q)]);
        if (pin >= 0 && pe != pin && !placed[static_cast<std::size_t>(pin)]) cand &= ~bit(forced);
        while (cand) {
            const std::uint32_t he = static_cast<std::uint32_t>(std::countr_zero(cand));
            cand &= cand - 1;
            image[static_cast<std::size_t>(pe)] = he;
            placed[static_cast<std::size_t>(pe)] = true;
            if (dfs(word, forced, pin, step + 1, image, placed)) return true;
            placed[static_cast<std::size_t>(pe)] = false;
        }
        return false;
    }
};

struct Searcher {
    SearchCtx ctx;
    std::unique_ptr<WordEmbedder> embedder;

    bool add_ok(std::uint64_t fam, std::uint32_t u) const {
        switch (ctx.pinfo.kind) {
            case OracleKind::chain:
                return chain_reach(*ctx.T, fam, u, false) + chain_reach(*ctx.T, fam, u, true) + 1 <=
                       ctx.pinfo.chain_k - 1;
            case OracleKind::diamond:
                return diamond_add_ok(*ctx.T, fam, u, ctx.pinfo.diamond_k);
            case OracleKind::generic:
                return !embedder->search(fam | bit(u), u);
        }
        return false;
    }

    bool is_lex_min(std::uint64_t fam_pos) const {
        for (const auto& table : ctx.T->pos_perm) {
            std::uint64_t g = 0, bits = fam_pos;
            while (bits) {
                const int p = std::countr_zero(bits);
                bits &= bits - 1;
                g |= std::uint64_t{1} << table[static_cast<std::size_t>(p)];
            }
            const std::uint64_t d = g ^ fam_pos;
            if (d && ((d & (~d + 1)) & g)) return false;
        }
        return true;
    }

    void dfs(ShardState& st, std::uint64_t fam_mask, std::uint64_t fam_pos, std::int64_t mass,
             std::uint64_t cand_mask, std::uint64_t cand_pos, int start_pos, int depth) const {
        if (!st.completed || st.aborted) return;
        ++st.nodes;
        if (st.nodes > ctx.shard_node_budget) {
            st.completed = false;
            return;
        }
        if ((st.nodes & 1023u) == 0) {
            if (ctx.has_deadline && std::chrono::steady_clock::now() > ctx.deadline) {
                st.completed = false;
                return;
            }
            if (ctx.found_shard && ctx.found_shard->load(std::memory_order_relaxed) < st.shard_index) {
                st.aborted = true;
                return;
            }
        }
        if (ctx.use_symmetry && depth <= ctx.sym_depth && !is_lex_min(fam_pos)) return;

        const int members = std::popcount(fam_mask);
        switch (ctx.mode) {
            case Mode::optimize: {
                const std::int64_t value = ctx.objective == Objective::cardinality ? members : mass;
                if (value > st.best) {
                    st.best = value;
                    st.best_words.clear();
                    st.best_words.insert(fam_mask);
                } else if (value == st.best) {
                    st.best_words.insert(fam_mask);
                }
                break;
            }
            case Mode::enumerate_maximal:
                if (cand_mask == 0) st.maximal.emplace_back(fam_mask, mass);
                break;
            case Mode::find_size:
                if (members == ctx.target) {
                    st.found = fam_mask;
                    return;
                }
                break;
        }

        const std::uint64_t tail = cand_pos & ctx.T->tail_pos[static_cast<std::size_t>(start_pos)];
        if (ctx.mode != Mode::enumerate_maximal) {
            const std::int64_t floor_value =
                ctx.mode == Mode::find_size
                    ? static_cast<std::int64_t>(ctx.target)
                    : st.best;
            if (ctx.objective == Objective::cardinality || ctx.mode == Mode::find_size) {
                std::int64_t bound = members + std::popcount(tail);
                if (ctx.prune_lubell && ctx.cap_scaled >= 0) {
                    std::int64_t budget = ctx.cap_scaled - mass;
                    int take = 0;
                    std::uint64_t bits = tail;
                    while (bits) {
                        const int p = std::countr_zero(bits);
                        bits &= bits - 1;
                        const std::int64_t c = ctx.T->contrib[ctx.T->order[static_cast<std::size_t>(p)]];
                        if (c > budget) break;  // contributions ascend along positions
                        budget -= c;
                        ++take;
                    }
                    bound = std::min<std::int64_t>(bound, members + take);
                }
                if (bound < floor_value) return;
            } else if (ctx.prune_lubell) {
                std::int64_t pot = mass;
                std::uint64_t bits = tail;
                while (bits) {
                    const int p = std::countr_zero(bits);
                    bits &= bits - 1;
                    pot += ctx.T->contrib[ctx.T->order[static_cast<std::size_t>(p)]];
                }
                if (ctx.cap_scaled >= 0) pot = std::min(pot, std::max(ctx.cap_scaled, mass));
                if (pot < floor_value) return;
            }
        }

        std::uint64_t iter = tail;
        while (iter) {
            const int p = std::countr_zero(iter);
            iter &= iter - 1;
            const std::uint32_t u = ctx.T->order[static_cast<std::size_t>(p)];
            const std::uint64_t child_mask = fam_mask | bit(u);
            const std::uint64_t child_pos = fam_pos | (std::uint64_t{1} << p);
            // Children keep only still-compatible candidates. Maximal mode
            // filters the full set so leaf maximality is literal; the other
            // modes only ever branch on later positions.
            std::uint64_t next_mask = 0, next_pos = 0;
            std::uint64_t scan_bits;
            if (ctx.mode == Mode::enumerate_maximal) {
                scan_bits = cand_mask & ~bit(u);
            } else {
                scan_bits = 0;
                std::uint64_t later = cand_pos & ctx.T->tail_pos[static_cast<std::size_t>(p + 1)];
                while (later) {
                    const int q = std::countr_zero(later);
                    later &= later - 1;
                    scan_bits |= bit(ctx.T->order[static_cast<std::size_t>(q)]);
                }
            }
            while (scan_bits) {
                const int v = std::countr_zero(scan_bits);
                scan_bits &= scan_bits - 1;
                if (add_ok(child_mask, static_cast<std::uint32_t>(v))) {
                    next_mask |= bit(static_cast<std::uint32_t>(v));
                    next_pos |= std::uint64_t{1} << ctx.T->pos_of[static_cast<std::size_t>(v)];
                }
            }
            dfs(st, child_mask, child_pos, mass + ctx.T->contrib[u], next_mask, next_pos, p + 1,
                depth + 1);
            if (!st.completed || st.aborted) return;
            if (ctx.mode == Mode::find_size && st.found) return;
        }
    }
};

}  // namespace

// canonical form: explicit minimisation over all relabelings
SetFamily canonical_form(const SetFamily& f) {
    if (f.n > kMaxCanonicalGround)
        throw std::invalid_argument("canonical_form capped at n <= 8");
    std::vector<int> perm(static_cast<std::size_t>(f.n));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::uint32_t> best = f.members;  // identity relabeling
    std::vector<std::uint32_t> image(f.members.size());
    while (std::next_permutation(perm.begin(), perm.end())) {
        for (std::size_t i = 0; i < f.members.size(); ++i) {
            std::uint32_t img = 0, rest = f.members[i];
            while (rest) {
                const int b = std::countr_zero(rest);
                rest &= rest - 1;
                img |= 1u << perm[static_cast<std::size_t>(b)];
            }
            image[i] = img;
        }
        std::sort(image.begin(), image.end());
        if (std::lexicographical_compare(image.begin(), image.end(), best.begin(), best.end()))
            best = image;
    }
    return SetFamily(f.n, std::move(best));
}

namespace {

int checked_search_ground(int n) {
    if (n < 1 || n > kMaxSearchGround)
        throw std::invalid_argument("searches are capped at 1 <= n <= 6");
    return n;
}

struct PreparedSearch {
    Tables tables;
    Searcher searcher;
    std::vector<std::uint32_t> root_cands;
    int thread_count = 1;

    PreparedSearch(int n, const PosetPattern& pattern, const SearchConfig& config, Objective obj,
                   Mode mode, bool require_empty, int target)
        : tables(checked_search_ground(n), config.use_symmetry) {
        if (pattern.size() == 0) throw std::invalid_argument("empty pattern");
        SearchCtx& ctx = searcher.ctx;
        ctx.T = &tables;
        ctx.pattern = &pattern;
        ctx.pinfo = classify(pattern, config.prune_height);
        if (ctx.pinfo.kind == OracleKind::generic)
            searcher.embedder = std::make_unique<WordEmbedder>(tables, pattern);
        ctx.objective = obj;
        ctx.mode = mode;
        ctx.prune_lubell = config.prune_lubell;
        ctx.use_symmetry = config.use_symmetry;
        ctx.sym_depth = mode == Mode::enumerate_maximal ? 64 : (n <= 4 ? 64 : (n == 5 ? 8 : 6));
        ctx.target = target;

        // Mass cap: family height cannot reach the pattern size, and for
        // diamonds the interval-count argument yields a sharper cap.
        std::optional<Rat> cap;
        if (config.prune_height) cap = Rat(pattern.size() - 1);
        if (config.prune_lubell && ctx.pinfo.kind == OracleKind::diamond) {
            const Rat dk = dk_bounds(ctx.pinfo.diamond_k).upper;
            if (!cap || dk < *cap) cap = dk;
        }
        if (cap) {
            const Rat scaled = *cap * tables.scale;
            ctx.cap_scaled = (numerator(scaled) / denominator(scaled)).convert_to<std::int64_t>();
        }

        if (require_empty) {
            ctx.base_mask = bit(0);
            ctx.base_pos = std::uint64_t{1} << tables.pos_of[0];
            ctx.base_lub = tables.contrib[0];
        }
        if (require_empty) {
            const SetFamily base(n, {0u});
            if (!is_pattern_free(base, pattern))
                throw std::invalid_argument("the required base family already contains the pattern");
        }

        std::uint64_t universe = tables.M == 64 ? ~std::uint64_t{0} : bit(static_cast<std::uint32_t>(tables.M)) - 1;
        universe &= ~ctx.base_mask;
        if (config.exclude_full_set) universe &= ~bit(static_cast<std::uint32_t>(tables.M - 1));
        std::uint64_t rest = universe;
        while (rest) {
            const std::uint32_t u = static_cast<std::uint32_t>(std::countr_zero(rest));
            rest &= rest - 1;
            if (searcher.add_ok(ctx.base_mask, u)) root_cands.push_back(u);
        }
        thread_count = resolve_threads(config.thread_budget);
        if (config.time_limit) {
            ctx.has_deadline = true;
            ctx.deadline = std::chrono::steady_clock::now() + *config.time_limit;
        }
        if (config.node_limit) {
            const std::uint64_t shards = std::max<std::uint64_t>(1, root_cands.size());
            ctx.shard_node_budget = std::max<std::uint64_t>(1, *config.node_limit / shards);
        }
    }

    // Runs one shard per root candidate; shards never share bound state, so
    // results are identical for every thread budget.
    std::vector<ShardState> run(std::int64_t seed_best) {
        const int shard_count = static_cast<int>(root_cands.size());
        std::vector<ShardState> states(static_cast<std::size_t>(shard_count));
        std::atomic<int> next{0};
        std::atomic<int> found_shard{std::numeric_limits<int>::max()};
        if (searcher.ctx.mode == Mode::find_size) searcher.ctx.found_shard = &found_shard;
        auto worker = [&] {
            while (true) {
                const int i = next.fetch_add(1);
                if (i >= shard_count) break;
                ShardState& st = states[static_cast<std::size_t>(i)];
                st.shard_index = i;
                st.best = seed_best;
                if (searcher.ctx.found_shard &&
                    searcher.ctx.found_shard->load(std::memory_order_relaxed) < i) {
                    st.aborted = true;
                    continue;
                }
                const SearchCtx& ctx = searcher.ctx;
                const std::uint32_t u = root_cands[static_cast<std::size_t>(i)];
                const int p0 = ctx.T->pos_of[u];
                const std::uint64_t fam_mask = ctx.base_mask | bit(u);
                const std::uint64_t fam_pos = ctx.base_pos | (std::uint64_t{1} << p0);
                std::uint64_t next_mask = 0, next_pos = 0;
                for (std::uint32_t v : root_cands) {
                    if (v == u) continue;
                    if (ctx.mode != Mode::enumerate_maximal && ctx.T->pos_of[v] < p0) continue;
                    if (searcher.add_ok(fam_mask, v)) {
                        next_mask |= bit(v);
                        next_pos |= std::uint64_t{1} << ctx.T->pos_of[v];
                    }
                }
                searcher.dfs(st, fam_mask, fam_pos, ctx.base_lub + ctx.T->contrib[u], next_mask,
                             next_pos, p0 + 1, 1);
                if (st.found) {
                    int expect = found_shard.load();
                    while (i < expect && !found_shard.compare_exchange_weak(expect, i)) {
                    }
                }
            }
        };
        std::vector<std::thread> pool;
        const int tc = std::min(thread_count, std::max(1, shard_count));
        for (int t = 1; t < tc; ++t) pool.emplace_back(worker);
        worker();
        for (auto& th : pool) th.join();
        return states;
    }
};

SetFamily word_to_family(int n, std::uint64_t word) {
    std::vector<std::uint32_t> members;
    while (word) {
        members.push_back(static_cast<std::uint32_t>(std::countr_zero(word)));
        word &= word - 1;
    }
    return SetFamily(n, std::move(members));
}

std::vector<SetFamily> canonical_witnesses(int n, const std::set<std::uint64_t>& words) {
    std::set<std::vector<std::uint32_t>> seen;
    for (auto w : words) seen.insert(canonical_form(word_to_family(n, w)).members);
    std::vector<SetFamily> out;
    for (const auto& m : seen) out.emplace_back(n, m);
    return out;
}

// Deterministic incumbent from the explicit constructions; any value from a
// valid family only tightens the strict bound test without losing witnesses.
std::int64_t greedy_incumbent(int n, const PosetPattern& pattern, const SearchConfig& config,
                              Objective obj, bool require_empty, const Tables& T) {
    std::vector<SetFamily> candidates;
    for (int k = 1; k <= n + 1; ++k) {
        candidates.push_back(middle_levels(n, k, LevelVariant::low));
        if ((n + k) % 2 == 0) candidates.push_back(middle_levels(n, k, LevelVariant::high));
    }
    for (int s = 1; s < n; ++s) {
        const std::uint32_t smask = (1u << s) - 1;
        const std::uint32_t tmask = ((1u << n) - 1) & ~smask;
        for (auto* ctor : {&construct_c1, &construct_c2, &construct_c3}) {
            const SetFamily fam = (*ctor)(smask, tmask);
            candidates.push_back(fam);
            candidates.push_back(conjugate(fam));
        }
    }
    std::int64_t best = std::numeric_limits<std::int64_t>::min();
    for (const auto& fam : candidates) {
        if (require_empty && !fam.contains(0)) continue;
        if (config.exclude_full_set && fam.contains(fam.full_mask())) continue;
        if (!is_pattern_free(fam, pattern)) continue;
        std::int64_t value = 0;
        if (obj == Objective::cardinality) {
            value = static_cast<std::int64_t>(fam.size());
        } else {
            for (auto m : fam.members) value += T.contrib[m];
        }
        best = std::max(best, value);
    }
    return best;
}

SearchOutcome run_optimize(int n, const PosetPattern& pattern, const SearchConfig& config,
                           Objective obj, bool require_empty) {
    PreparedSearch prep(n, pattern, config, obj, Mode::optimize, require_empty, 0);
    const Tables& T = prep.tables;
    const SearchCtx& ctx = prep.searcher.ctx;
    const std::int64_t root_value =
        obj == Objective::cardinality ? std::popcount(ctx.base_mask) : ctx.base_lub;
    std::int64_t seed = root_value;
    const std::int64_t greedy = greedy_incumbent(n, pattern, config, obj, require_empty, T);
    seed = std::max(seed, greedy);
    auto states = prep.run(seed);

    SearchOutcome out;
    out.objective = obj;
    out.nodes_explored = 1;
    std::int64_t best = root_value;
    std::set<std::uint64_t> words;
    if (root_value >= best) words.insert(ctx.base_mask);
    bool completed = true;
    for (const auto& st : states) {
        out.nodes_explored += st.nodes;
        completed = completed && st.completed;
        if (st.best > best) {
            best = st.best;
            words = st.best_words;
        } else if (st.best == best) {
            words.insert(st.best_words.begin(), st.best_words.end());
        }
    }
    out.completed = completed;
    out.optimum = obj == Objective::cardinality ? Rat(best) : Rat(Int(best), Int(T.scale));
    out.witnesses = canonical_witnesses(n, words);
    return out;
}

}  // namespace

SearchOutcome la_exact(int n, const PosetPattern& pattern, const SearchConfig& config) {
    return run_optimize(n, pattern, config, Objective::cardinality, false);
}

SearchOutcome max_lubell(int n, const PosetPattern& pattern, bool require_empty_member,
                         const SearchConfig& config) {
    return run_optimize(n, pattern, config, Objective::lubell, require_empty_member);
}

std::vector<MaximalClass> enumerate_maximal_pfree(int n, const PosetPattern& pattern,
                                                  bool require_empty_member,
                                                  const SearchConfig& config) {
    if (n > 5) throw std::invalid_argument("enumerate_maximal_pfree capped at n <= 5");
    PreparedSearch prep(n, pattern, config, Objective::lubell, Mode::enumerate_maximal,
                        require_empty_member, 0);
    auto states = prep.run(std::numeric_limits<std::int64_t>::min());
    bool completed = true;
    std::map<std::vector<std::uint32_t>, Rat> classes;
    // the base family itself is maximal exactly when nothing is addable
    if (prep.root_cands.empty()) {
        const SetFamily base = word_to_family(n, prep.searcher.ctx.base_mask);
        classes.emplace(canonical_form(base).members, lubell(base));
    }
    for (const auto& st : states) {
        completed = completed && st.completed && !st.aborted;
        for (const auto& [word, mass] : st.maximal) {
            SetFamily fam = canonical_form(word_to_family(n, word));
            classes.emplace(std::move(fam.members), Rat(Int(mass), Int(prep.tables.scale)));
        }
    }
    if (!completed) throw std::runtime_error("enumeration hit a node or time limit");
    std::vector<MaximalClass> out;
    for (const auto& [members, mass] : classes)
        out.push_back(MaximalClass{SetFamily(n, members), mass});
    return out;
}

FindResult find_family_of_size(int n, const PosetPattern& pattern, int target,
                               const SearchConfig& config) {
    if (target < 0) throw std::invalid_argument("target must be nonnegative");
    PreparedSearch prep(n, pattern, config, Objective::cardinality, Mode::find_size, false, target);
    FindResult res;
    res.nodes_explored = 1;
    if (std::popcount(prep.searcher.ctx.base_mask) == target) {
        res.family = word_to_family(n, prep.searcher.ctx.base_mask);
        res.completed = true;
        return res;
    }
    auto states = prep.run(std::numeric_limits<std::int64_t>::min());
    int found_at = std::numeric_limits<int>::max();
    for (std::size_t i = 0; i < states.size(); ++i)
        if (states[i].found) {
            found_at = static_cast<int>(i);
            break;
        }
    bool completed = true;
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (static_cast<int>(i) <= found_at) res.nodes_explored += states[i].nodes;
        if (static_cast<int>(i) < found_at) completed = completed && states[i].completed;
    }
    if (found_at < std::numeric_limits<int>::max()) {
        res.family = word_to_family(n, *states[static_cast<std::size_t>(found_at)].found);
        res.completed = true;
    } else {
        for (const auto& st : states) completed = completed && st.completed && !st.aborted;
        res.completed = completed;
    }
    return res;
}

bool verify_extremal_uniqueness(int n, const PosetPattern& pattern, int expected_m,
                                const SearchConfig& config) {
    const SearchOutcome outcome = la_exact(n, pattern, config);
    if (!outcome.completed) throw std::runtime_error("extremal search did not complete");
    std::set<std::vector<std::uint32_t>> middles;
    middles.insert(canonical_form(middle_levels(n, expected_m, LevelVariant::low)).members);
    middles.insert(canonical_form(middle_levels(n, expected_m, LevelVariant::high)).members);
    if (outcome.witnesses.empty()) return false;
    for (const auto& w : outcome.witnesses)
        if (!middles.count(w.members)) return false;
    return true;
}

}  // namespace subposet
