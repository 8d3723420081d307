#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <map>
#include <random>
#include <set>

#include "subposet/chains.hpp"
#include "subposet/family.hpp"

using namespace subposet;

namespace {

SetFamily random_family(std::mt19937& rng, int n, int percent = 30) {
    std::vector<std::uint32_t> members;
    for (std::uint32_t m = 0; m < (1u << n); ++m)
        if (static_cast<int>(rng() % 100) < percent) members.push_back(m);
    return SetFamily(n, std::move(members));
}

// Independent oracle: classify every full chain directly and average the
// meet counts per block.
struct BlockStats {
    Int chains = 0;
    Int meet_total = 0;
};

std::uint32_t chain_min_member(const SetFamily& f, const FullChain& c) {
    std::uint32_t prefix = 0;
    if (f.contains(0)) return 0;
    for (auto e : c.order) {
        prefix |= 1u << e;
        if (f.contains(prefix)) return prefix;
    }
    return ~0u;  // no meet
}

std::uint32_t chain_max_member(const SetFamily& f, const FullChain& c) {
    std::uint32_t prefix = 0, best = f.contains(0) ? 0 : ~0u;
    for (auto e : c.order) {
        prefix |= 1u << e;
        if (f.contains(prefix)) best = prefix;
    }
    return best;
}

void check_against_oracle(const std::vector<ChainBlockReport>& blocks,
                          const std::map<std::string, BlockStats>& oracle, const SetFamily& f) {
    Int total_chains = 0;
    for (const auto& b : blocks) {
        total_chains += b.chain_count;
        const auto it = oracle.find(b.key_string());
        if (it == oracle.end()) {
            CHECK(b.chain_count == 0);
            continue;
        }
        CHECK(b.chain_count == it->second.chains);
        if (it->second.chains != 0)
            CHECK(b.average_meet == Rat(it->second.meet_total, it->second.chains));
    }
    Int fact = 1;
    for (int i = 2; i <= f.n; ++i) fact *= i;
    CHECK(total_chains == fact);
    // every oracle block with chains appears
    std::set<std::string> keys;
    for (const auto& b : blocks) keys.insert(b.key_string());
    for (const auto& [key, stats] : oracle)
        if (stats.chains != 0) CHECK(keys.count(key) == 1);
}

Rat weighted_mean(const std::vector<ChainBlockReport>& blocks) {
    Rat total = 0;
    Int chains = 0;
    for (const auto& b : blocks) {
        total += b.average_meet * Rat(b.chain_count);
        chains += b.chain_count;
    }
    return total / Rat(chains);
}

}  // namespace

TEST_CASE("chain enumeration") {
    CHECK(enumerate_chains(3).size() == 6);
    CHECK(enumerate_chains(1).size() == 1);
    std::set<std::vector<std::uint8_t>> distinct;
    for (const auto& c : enumerate_chains(4)) distinct.insert(c.order);
    CHECK(distinct.size() == 24);
    CHECK_THROWS_AS(enumerate_chains(9), std::invalid_argument);
}

TEST_CASE("meet count") {
    const SetFamily b32 = middle_levels(3, 2);
    for (const auto& c : enumerate_chains(3)) CHECK(meet_count(b32, c) == 2);
    const SetFamily ends(4, {0, 15});
    for (const auto& c : enumerate_chains(4)) CHECK(meet_count(ends, c) == 2);
    const SetFamily one(3, {1});  // {1}
    CHECK(meet_count(one, FullChain{{1, 0, 2}}) == 0);
    CHECK(meet_count(one, FullChain{{0, 1, 2}}) == 1);
    CHECK_THROWS_AS(meet_count(one, FullChain{{0, 1, 2, 3}}), std::invalid_argument);
}

TEST_CASE("chain average equals the closed form") {
    CHECK(lubell_via_chains(construct_c1(0b0011, 0b1100)) == Rat(7, 3));
    CHECK(lubell_via_chains(SetFamily(5, {0})) == 1);
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 40; ++trial) {
        const SetFamily f = random_family(rng, 1 + static_cast<int>(rng() % 6));
        CHECK(lubell_via_chains(f) == lubell(f));
    }
}

TEST_CASE("monte carlo estimator") {
    const SetFamily b202 = middle_levels(20, 2);
    const auto est = lubell_monte_carlo(b202, 20000, 99);
    CHECK(est.estimate == 2);       // B(n,2) meets every chain exactly twice
    CHECK(est.stderr_bound == 0);
    const auto again = lubell_monte_carlo(b202, 20000, 99);
    CHECK(est.estimate == again.estimate);

    const std::uint32_t s10 = (1u << 10) - 1;
    const SetFamily c1 = construct_c1(s10, ((1u << 20) - 1) & ~s10);
    const Rat truth = lubell(c1);
    CHECK(truth == Rat(2) + Rat(100, 380));
    const auto mc = lubell_monte_carlo(c1, 100000, 7);
    Rat err = mc.estimate - truth;
    if (err < 0) err = -err;
    CHECK(err <= 5 * mc.stderr_bound);
    // sharding across workers must not change the sample stream
    const auto sharded = lubell_monte_carlo(c1, 100000, 7, 3);
    CHECK(sharded.estimate == mc.estimate);
    CHECK(sharded.stderr_bound == mc.stderr_bound);
    CHECK_THROWS_AS(lubell_monte_carlo(c1, 0, 1), std::invalid_argument);
}

TEST_CASE("deleted-element partition") {
    const SetFamily b42 = middle_levels(4, 2);
    const auto blocks = partition_by_deleted_element(b42);
    REQUIRE(blocks.size() == 4);
    for (const auto& b : blocks) {
        CHECK(b.average_meet == 2);
        CHECK(b.chain_count == 6);
    }
    std::mt19937 rng(31337);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 5);
        const SetFamily f = random_family(rng, n);
        const auto parts = partition_by_deleted_element(f);
        CHECK(weighted_mean(parts) == lubell(f));
        // restriction identity, with the top set's meet added back when present
        const Rat top = f.contains(f.full_mask()) ? 1 : 0;
        for (int i = 0; i < n; ++i) {
            std::vector<std::uint32_t> rest;
            const std::uint32_t low = (1u << i) - 1;
            for (auto m : f.members)
                if (!((m >> i) & 1u)) rest.push_back((m & low) | ((m >> 1) & ~low));
            CHECK(parts[static_cast<std::size_t>(i)].average_meet == lubell(SetFamily(n - 1, rest)) + top);
        }
    }
    CHECK_THROWS_AS(partition_by_deleted_element(SetFamily(1, {0})), std::invalid_argument);
}

TEST_CASE("deleted-element partition against direct classification") {
    std::mt19937 rng(8);
    for (int trial = 0; trial < 15; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 4);
        const SetFamily f = random_family(rng, n);
        std::map<std::string, BlockStats> oracle;
        for (const auto& c : enumerate_chains(n)) {
            const int omitted = c.order.back();
            auto& s = oracle["del:" + std::to_string(omitted + 1)];
            s.chains += 1;
            s.meet_total += meet_count(f, c);
        }
        check_against_oracle(partition_by_deleted_element(f), oracle, f);
    }
}

TEST_CASE("min partition") {
    // a single empty-set member swallows every chain
    const auto only_empty = min_partition(SetFamily(4, {0}));
    REQUIRE(only_empty.size() == 2);
    CHECK(only_empty[0].key_string() == "min:{}");
    CHECK(only_empty[0].chain_count == 24);
    CHECK(only_empty[0].average_meet == 1);
    CHECK(only_empty[1].key_string() == "empty");
    CHECK(only_empty[1].chain_count == 0);

    const auto no_members = min_partition(SetFamily(3, {}));
    REQUIRE(no_members.size() == 1);
    CHECK(no_members[0].key_string() == "empty");
    CHECK(no_members[0].chain_count == 6);
    CHECK(no_members[0].average_meet == 0);

    // B(3,2): the block of {1} has average 1 + lubell over ground {2,3}
    const SetFamily b32 = middle_levels(3, 2);
    for (const auto& b : min_partition(b32)) {
        if (b.key_string() == "min:{1}") {
            CHECK(b.chain_count == 2);
            CHECK(b.average_meet == 2);
        }
    }
}

TEST_CASE("min partition against direct classification") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 5);
        const SetFamily f = random_family(rng, n, 35);
        std::map<std::string, BlockStats> oracle;
        for (const auto& c : enumerate_chains(n)) {
            const std::uint32_t min_m = chain_min_member(f, c);
            ChainBlockReport key;
            if (min_m == ~0u) {
                key.kind = ChainBlockReport::Kind::empty_block;
            } else {
                key.kind = ChainBlockReport::Kind::min_element;
                key.lo = min_m;
            }
            auto& s = oracle[key.key_string()];
            s.chains += 1;
            s.meet_total += meet_count(f, c);
        }
        const auto blocks = min_partition(f);
        check_against_oracle(blocks, oracle, f);
        if (!f.members.empty()) CHECK(weighted_mean(blocks) == lubell(f));
        // the restriction identity: block average is the mass of the up-set
        // family moved to the ground set [n] minus the block key
        for (const auto& b : blocks) {
            if (b.kind != ChainBlockReport::Kind::min_element) continue;
            std::vector<std::uint32_t> shifted;
            for (auto x : f.members) {
                if ((b.lo & ~x) != 0 || x == b.lo) continue;
                std::uint32_t rest = x & ~b.lo, packed = 0;
                int out = 0;
                for (int i = 0; i < f.n; ++i) {
                    if ((b.lo >> i) & 1u) continue;
                    if ((rest >> i) & 1u) packed |= 1u << out;
                    ++out;
                }
                shifted.push_back(packed);
            }
            const int ground = f.n - std::popcount(b.lo);
            if (ground >= 1)
                CHECK(b.average_meet == 1 + lubell(SetFamily(ground, shifted)));
            else
                CHECK(b.average_meet == 1);
        }
    }
}

TEST_CASE("minmax partition") {
    const auto ends = minmax_partition(SetFamily(4, {0, 15}));
    REQUIRE(ends.size() == 2);
    CHECK(ends[0].key_string() == "minmax:{}-{1,2,3,4}");
    CHECK(ends[0].chain_count == 24);
    CHECK(ends[0].average_meet == 2);
    CHECK(ends[1].key_string() == "empty");

    std::mt19937 rng(123);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 5);
        const SetFamily f = random_family(rng, n, 35);
        std::map<std::string, BlockStats> oracle;
        for (const auto& c : enumerate_chains(n)) {
            const std::uint32_t lo = chain_min_member(f, c);
            ChainBlockReport key;
            if (lo == ~0u) {
                key.kind = ChainBlockReport::Kind::empty_block;
            } else {
                key.kind = ChainBlockReport::Kind::minmax_pair;
                key.lo = lo;
                key.hi = chain_max_member(f, c);
            }
            auto& s = oracle[key.key_string()];
            s.chains += 1;
            s.meet_total += meet_count(f, c);
        }
        const auto blocks = minmax_partition(f);
        check_against_oracle(blocks, oracle, f);
        if (!f.members.empty()) CHECK(weighted_mean(blocks) == lubell(f));
    }
}

TEST_CASE("baseball principle: the total average never beats the best block") {
    std::mt19937 rng(55);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 4);
        const SetFamily f = random_family(rng, n, 40);
        if (f.members.empty()) continue;
        const Rat total = lubell(f);
        for (auto blocks : {partition_by_deleted_element(f), min_partition(f), minmax_partition(f)}) {
            Rat best = 0;
            for (const auto& b : blocks)
                if (b.chain_count != 0 && b.average_meet > best) best = b.average_meet;
            CHECK(total <= best);
        }
    }
}

TEST_CASE("block record format") {
    const SetFamily b32 = middle_levels(3, 2);
    const auto blocks = min_partition(b32);
    REQUIRE(!blocks.empty());
    CHECK(format_block(blocks[0]) == "block min:{1} chains=2 avg=2/1");
}
