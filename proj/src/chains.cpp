#include "subposet/chains.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace subposet {

namespace {

void check_enumeration_cap(int n) {
    if (n < 1 || n > kMaxChainEnumeration)
        throw std::invalid_argument("chain enumeration capped at n <= 8");
}

std::uint64_t factorial_u64(int n) {
    std::uint64_t r = 1;
    for (int i = 2; i <= n; ++i) r *= static_cast<std::uint64_t>(i);
    return r;
}

// SplitMix64; keying each sample by (seed, sample index) makes the sample
// stream independent of thread sharding.
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t s) : state(s) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    // Unbiased bounded draw by rejection.
    std::uint32_t below(std::uint32_t bound) {
        const std::uint64_t limit = ~0ull - ~0ull % bound;
        std::uint64_t v;
        do {
            v = next();
        } while (v >= limit);
        return static_cast<std::uint32_t>(v % bound);
    }
};

std::string set_string(std::uint32_t mask) {
    std::string s = "{";
    bool first = true;
    while (mask) {
        const int i = std::countr_zero(mask);
        mask &= mask - 1;
        if (!first) s += ',';
        s += std::to_string(i + 1);
        first = false;
    }
    return s + "}";
}

// Chains from the bottom to S whose proper prefixes all avoid the family.
std::vector<std::uint64_t> down_chain_counts(const SetFamily& f) {
    const std::size_t size = std::size_t{1} << f.n;
    std::vector<std::uint64_t> d(size, 0);
    d[0] = 1;
    for (std::uint32_t s = 1; s < size; ++s) {
        std::uint64_t total = 0;
        std::uint32_t bits = s;
        while (bits) {
            const std::uint32_t sub = s & ~(bits & (~bits + 1));
            bits &= bits - 1;
            if (!f.contains(sub)) total += d[sub];
        }
        d[s] = total;
    }
    return d;
}

// Chains from S to the top whose sets strictly above S all avoid the family.
std::vector<std::uint64_t> up_chain_counts(const SetFamily& f) {
    const std::uint32_t full = f.full_mask();
    const std::size_t size = std::size_t{1} << f.n;
    std::vector<std::uint64_t> u(size, 0);
    u[full] = 1;
    for (std::uint32_t s = full; s-- > 0;) {
        std::uint64_t total = 0;
        std::uint32_t rest = full & ~s;
        while (rest) {
            const std::uint32_t sup = s | (rest & (~rest + 1));
            rest &= rest - 1;
            if (!f.contains(sup)) total += u[sup];
        }
        u[s] = total;
    }
    return u;
}

}  // namespace

void for_each_chain(int n, const std::function<void(const FullChain&)>& fn) {
    check_enumeration_cap(n);
    FullChain c;
    c.order.resize(static_cast<std::size_t>(n));
    std::iota(c.order.begin(), c.order.end(), std::uint8_t{0});
    do {
        fn(c);
    } while (std::next_permutation(c.order.begin(), c.order.end()));
}

std::vector<FullChain> enumerate_chains(int n) {
    std::vector<FullChain> out;
    out.reserve(factorial_u64(n <= kMaxChainEnumeration ? n : 0));
    for_each_chain(n, [&](const FullChain& c) { out.push_back(c); });
    return out;
}

int meet_count(const SetFamily& f, const FullChain& c) {
    if (static_cast<int>(c.order.size()) != f.n)
        throw std::invalid_argument("chain ground size mismatch");
    int hits = f.contains(0) ? 1 : 0;
    std::uint32_t prefix = 0;
    for (auto e : c.order) {
        prefix |= 1u << e;
        if (f.contains(prefix)) ++hits;
    }
    return hits;
}

Rat lubell_via_chains(const SetFamily& f) {
    check_enumeration_cap(f.n);
    std::uint64_t total = 0;
    for_each_chain(f.n, [&](const FullChain& c) { total += static_cast<std::uint64_t>(meet_count(f, c)); });
    return Rat(Int(total), Int(factorial_u64(f.n)));
}

MonteCarloEstimate lubell_monte_carlo(const SetFamily& f, std::uint64_t samples,
                                      std::uint64_t seed, int threads) {
    if (samples < 1) throw std::invalid_argument("monte carlo: samples >= 1 required");
    if (threads < 1) threads = 1;
    const auto run_range = [&](std::uint64_t begin, std::uint64_t end, std::uint64_t& sum,
                               std::uint64_t& sum_sq) {
        std::vector<std::uint8_t> perm(static_cast<std::size_t>(f.n));
        for (std::uint64_t i = begin; i < end; ++i) {
            SplitMix64 rng(seed * 0x9e3779b97f4a7c15ull + i * 0xd1b54a32d192ed03ull + 0x2545f4914f6cdd1dull);
            std::iota(perm.begin(), perm.end(), std::uint8_t{0});
            for (int j = f.n - 1; j > 0; --j)
                std::swap(perm[static_cast<std::size_t>(j)],
                          perm[rng.below(static_cast<std::uint32_t>(j + 1))]);
            FullChain c{perm};
            const auto hits = static_cast<std::uint64_t>(meet_count(f, c));
            sum += hits;
            sum_sq += hits * hits;
        }
    };
    std::uint64_t sum = 0, sum_sq = 0;
    if (threads == 1 || samples < 1024) {
        run_range(0, samples, sum, sum_sq);
    } else {
        std::vector<std::uint64_t> sums(static_cast<std::size_t>(threads), 0),
            sqs(static_cast<std::size_t>(threads), 0);
        std::vector<std::thread> pool;
        const std::uint64_t per = samples / static_cast<std::uint64_t>(threads);
        for (int t = 0; t < threads; ++t) {
            const std::uint64_t b = per * static_cast<std::uint64_t>(t);
            const std::uint64_t e = (t + 1 == threads) ? samples : b + per;
            pool.emplace_back([&, t, b, e] { run_range(b, e, sums[static_cast<std::size_t>(t)], sqs[static_cast<std::size_t>(t)]); });
        }
        for (auto& th : pool) th.join();
        for (int t = 0; t < threads; ++t) {
            sum += sums[static_cast<std::size_t>(t)];
            sum_sq += sqs[static_cast<std::size_t>(t)];
        }
    }
    MonteCarloEstimate est;
    est.samples = samples;
    est.estimate = Rat(Int(sum), Int(samples));
    if (samples >= 2) {
        const Int N(samples);
        // variance of the mean: (N*sum_sq - sum^2) / (N^2 (N-1)), exact
        const Int num = N * Int(sum_sq) - Int(sum) * Int(sum);
        const Int den = N * N * (N - 1);
        if (num > 0) {
            const Rat var(num, den);
            // ceil(sqrt(p*q))/q is an upper enclosure of sqrt(p/q)
            const Int p = numerator(var), q = denominator(var);
            const Int pq = p * q;
            Int root = boost::multiprecision::sqrt(pq);
            if (root * root < pq) ++root;
            est.stderr_bound = Rat(root, q);
        } else {
            est.stderr_bound = 0;
        }
    } else {
        est.stderr_bound = 0;
    }
    return est;
}

std::string ChainBlockReport::key_string() const {
    switch (kind) {
        case Kind::deleted_element:
            return "del:" + std::to_string(deleted + 1);
        case Kind::min_element:
            return "min:" + set_string(lo);
        case Kind::minmax_pair:
            return "minmax:" + set_string(lo) + "-" + set_string(hi);
        case Kind::empty_block:
            return "empty";
    }
    return "?";
}

std::string format_block(const ChainBlockReport& b) {
    return "block " + b.key_string() + " chains=" + b.chain_count.str() +
           " avg=" + rat_string(b.average_meet);
}

std::vector<ChainBlockReport> partition_by_deleted_element(const SetFamily& f) {
    if (f.n < 2) throw std::invalid_argument("deleted-element partition needs n >= 2");
    check_enumeration_cap(f.n);
    const bool has_full = f.contains(f.full_mask());
    const Int per_block(factorial_u64(f.n - 1));
    std::vector<ChainBlockReport> out;
    for (int i = 0; i < f.n; ++i) {
        // Restriction to the ground set without i, bits above i shifted down.
        std::vector<std::uint32_t> rest;
        const std::uint32_t low = (1u << i) - 1;
        for (auto m : f.members)
            if (!((m >> i) & 1u)) rest.push_back((m & low) | ((m >> 1) & ~low));
        const SetFamily fi(f.n - 1, std::move(rest));
        ChainBlockReport b;
        b.kind = ChainBlockReport::Kind::deleted_element;
        b.deleted = i;
        b.chain_count = per_block;
        b.average_meet = lubell(fi) + (has_full ? 1 : 0);
        out.push_back(std::move(b));
    }
    return out;
}

std::vector<ChainBlockReport> min_partition(const SetFamily& f) {
    check_enumeration_cap(f.n);
    const auto down = down_chain_counts(f);
    std::vector<ChainBlockReport> out;
    for (auto a : f.members) {
        const int rest = f.n - std::popcount(a);
        ChainBlockReport b;
        b.kind = ChainBlockReport::Kind::min_element;
        b.lo = a;
        b.chain_count = Int(down[a]) * Int(factorial_u64(rest));
        // The members above a, shifted to the ground [n] \ a, form a family
        // containing the empty set; its Lubell mass is the block average.
        Rat avg = 1;
        for (auto x : f.members)
            if (x != a && (a & ~x) == 0) avg += Rat(1, binomial(rest, std::popcount(x & ~a)));
        b.average_meet = avg;
        out.push_back(std::move(b));
    }
    ChainBlockReport empty;
    empty.kind = ChainBlockReport::Kind::empty_block;
    empty.chain_count = f.contains(f.full_mask()) ? Int(0) : Int(down[f.full_mask()]);
    empty.average_meet = 0;
    out.push_back(std::move(empty));
    return out;
}

std::vector<ChainBlockReport> minmax_partition(const SetFamily& f) {
    check_enumeration_cap(f.n);
    const auto down = down_chain_counts(f);
    const auto up = up_chain_counts(f);
    std::vector<ChainBlockReport> out;
    for (auto a : f.members)
        for (auto b : f.members) {
            if ((a & ~b) != 0) continue;  // need a subset of b
            ChainBlockReport blk;
            blk.kind = ChainBlockReport::Kind::minmax_pair;
            blk.lo = a;
            blk.hi = b;
            const int gap = std::popcount(b & ~a);
            blk.chain_count = Int(down[a]) * Int(factorial_u64(gap)) * Int(up[b]);
            if (blk.chain_count == 0) continue;
            if (a == b) {
                blk.average_meet = 1;
            } else {
                Rat avg = 2;
                for (auto s : f.members)
                    if (s != a && s != b && (a & ~s) == 0 && (s & ~b) == 0)
                        avg += Rat(1, binomial(gap, std::popcount(s & ~a)));
                blk.average_meet = avg;
            }
            out.push_back(std::move(blk));
        }
    ChainBlockReport empty;
    empty.kind = ChainBlockReport::Kind::empty_block;
    empty.chain_count = f.contains(f.full_mask()) ? Int(0) : Int(down[f.full_mask()]);
    empty.average_meet = 0;
    out.push_back(std::move(empty));
    return out;
}

}  // namespace subposet
