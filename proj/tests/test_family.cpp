#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <random>
#include <set>

#include "subposet/chains.hpp"
#include "subposet/family.hpp"

using namespace subposet;

namespace {

SetFamily random_family(std::mt19937& rng, int n) {
    std::vector<std::uint32_t> members;
    const std::uint32_t full = (1u << n) - 1;
    for (std::uint32_t m = 0; m <= full; ++m)
        if (rng() % 100 < 30) members.push_back(m);
    return SetFamily(n, std::move(members));
}

std::uint32_t set_of(std::initializer_list<int> elems) {
    std::uint32_t m = 0;
    for (int e : elems) m |= 1u << (e - 1);
    return m;
}

}  // namespace

TEST_CASE("family construction invariants") {
    CHECK_THROWS_AS(SetFamily(3, {1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(SetFamily(2, {4}), std::invalid_argument);
    CHECK_THROWS_AS(SetFamily(0, {}), std::invalid_argument);
    CHECK_THROWS_AS(SetFamily(31, {}), std::invalid_argument);
    const SetFamily f(3, {5, 1, 2});
    CHECK(f.members == std::vector<std::uint32_t>{1, 2, 5});
}

TEST_CASE("lubell closed form") {
    CHECK(lubell(SetFamily(5, {})) == 0);
    CHECK(lubell(middle_levels(4, 2)) == 2);
    CHECK(lubell(construct_c1(set_of({1, 2}), set_of({3, 4}))) == Rat(7, 3));
}

TEST_CASE("family height") {
    CHECK(family_height(middle_levels(5, 2)) == 2);
    CHECK(family_height(SetFamily(4, {0, set_of({1}), set_of({1, 2}), set_of({1, 2, 3, 4})})) == 4);
    CHECK(family_height(middle_levels(5, 1)) == 1);  // an antichain
    CHECK(family_height(SetFamily(4, {})) == 0);
}

TEST_CASE("sigma") {
    CHECK(sigma(4, 2) == 10);
    CHECK(sigma(6, 2) == 35);
    // independent route: direct binomial sum over the middle sizes
    Int direct = 0;
    for (int s : {1, 2, 3}) direct += binomial(5, s);
    CHECK(sigma(5, 3) == direct);
    CHECK(sigma(5, 3) == 25);
    CHECK(sigma(4, 0) == 0);
    CHECK(sigma(4, 5) == 16);
    CHECK_THROWS_AS(sigma(4, 6), std::invalid_argument);
}

TEST_CASE("middle levels") {
    const SetFamily low = middle_levels(4, 2, LevelVariant::low);
    const SetFamily high = middle_levels(4, 2, LevelVariant::high);
    CHECK(low.size() == 10);
    CHECK(high.size() == 10);
    for (auto m : low.members) CHECK((std::popcount(m) == 1 || std::popcount(m) == 2));
    for (auto m : high.members) CHECK((std::popcount(m) == 2 || std::popcount(m) == 3));
    CHECK(middle_levels(5, 2, LevelVariant::low) == middle_levels(5, 2, LevelVariant::high));
    for (int n = 1; n <= 10; ++n)
        for (int k = 1; k <= n + 1; ++k) {
            CHECK(Int(middle_levels(n, k, LevelVariant::low).size()) == sigma(n, k));
            CHECK(Int(middle_levels(n, k, LevelVariant::high).size()) == sigma(n, k));
        }
}

TEST_CASE("whole middle levels have integral mass") {
    for (int n = 1; n <= 12; ++n)
        for (int k = 1; k <= n + 1; ++k) CHECK(lubell(middle_levels(n, k)) == k);
}

TEST_CASE("construction members and masses") {
    const SetFamily c1 = construct_c1(set_of({1, 2}), set_of({3, 4}));
    const std::set<std::uint32_t> want{0,
                                       set_of({1}),
                                       set_of({2}),
                                       set_of({1, 3}),
                                       set_of({1, 4}),
                                       set_of({2, 3}),
                                       set_of({2, 4}),
                                       set_of({3, 4})};
    CHECK(std::set<std::uint32_t>(c1.members.begin(), c1.members.end()) == want);

    // independent route for C2([2], {3,4,5}): count the members per size
    const SetFamily c2 = construct_c2(set_of({1, 2}), set_of({3, 4, 5}));
    Rat per_size = 0;
    std::vector<int> count(6, 0);
    for (auto m : c2.members) ++count[static_cast<std::size_t>(std::popcount(m))];
    for (int s = 0; s <= 5; ++s)
        if (count[static_cast<std::size_t>(s)]) per_size += Rat(count[static_cast<std::size_t>(s)], binomial(5, s));
    CHECK(per_size == Rat(23, 10));
    CHECK(lubell(c2) == Rat(23, 10));

    // C3([3], {4,5,6}): formula plus the chain-average oracle
    const SetFamily c3 = construct_c3(set_of({1, 2, 3}), set_of({4, 5, 6}));
    CHECK(lubell(c3) == Rat(23, 10));
    CHECK(lubell_via_chains(c3) == Rat(23, 10));

    CHECK_THROWS_AS(construct_c1(0b011, 0b110), std::invalid_argument);  // overlap
    CHECK_THROWS_AS(construct_c1(0b111, 0), std::invalid_argument);      // empty part
    CHECK_THROWS_AS(construct_c1(0b001, 0b100), std::invalid_argument);  // union misses an element
    CHECK_NOTHROW(construct_c2(0b101, 0b010));  // S={1,3}, T={2}: still a partition
}

TEST_CASE("conjugate") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const SetFamily f = random_family(rng, 1 + static_cast<int>(rng() % 6));
        CHECK(conjugate(conjugate(f)) == f);
        CHECK(lubell(conjugate(f)) == lubell(f));
    }
    CHECK(conjugate(middle_levels(5, 2)) == middle_levels(5, 2));
    CHECK(conjugate(SetFamily(3, {0})) == SetFamily(3, {7}));
}

TEST_CASE("pattern freeness") {
    CHECK(is_pattern_free(middle_levels(4, 2), PosetPattern::butterfly()));
    const SetFamily full_b2(2, {0, 1, 2, 3});
    CHECK_FALSE(is_pattern_free(full_b2, PosetPattern::diamond(2)));
    CHECK(is_pattern_free(construct_c2(set_of({1, 2}), set_of({3, 4})), PosetPattern::diamond(2)));
}

TEST_CASE("diamond interval checker") {
    const SetFamily f(3, {0, 1, 2, 4, 7});  // {}, {1}, {2}, {3}, {1,2,3}
    CHECK_FALSE(diamond_free_fast(f, 3));
    CHECK(diamond_free_fast(f, 4));
    CHECK_FALSE(diamond_free_fast(SetFamily(2, {0, 1, 2, 3}), 2));
    for (int k : {2, 3, 4, 5, 6}) {
        const int m = dk_bounds(k).m;
        for (int n = m; n <= 6; ++n) CHECK(diamond_free_fast(middle_levels(n, m), k));
    }
}

TEST_CASE("diamond checker agrees with the embedder") {
    std::mt19937 rng(404);
    for (int trial = 0; trial < 250; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 6);
        const SetFamily f = random_family(rng, n);
        for (int k = 2; k <= 5; ++k)
            CHECK(diamond_free_fast(f, k) == is_pattern_free(f, PosetPattern::diamond(k)));
    }
}

TEST_CASE("interval count") {
    const SetFamily b2(2, {0, 1, 2, 3});
    CHECK(interval_count(b2, 0, 3) == 2);
    CHECK(interval_count(b2, 1, 3) == 0);
    const SetFamily c1 = construct_c1(set_of({1, 2}), set_of({3, 4}));
    CHECK(interval_count(c1, 0, set_of({1, 3})) == 1);
    CHECK_THROWS_AS(interval_count(b2, 3, 0), std::invalid_argument);
    CHECK_THROWS_AS(interval_count(b2, 1, 1), std::invalid_argument);
}

TEST_CASE("size bound from a mass cap") {
    const SizeBound b1 = lubell_size_bound(4, 2);
    CHECK(b1.coarse == 12);
    REQUIRE(b1.refined.has_value());
    CHECK(*b1.refined == 10);
    const SizeBound b2 = lubell_size_bound(7, Rat(241, 105));
    CHECK(b2.coarse == 80);
    CHECK_FALSE(b2.refined.has_value());
    const SizeBound b3 = lubell_size_bound(6, 2);
    CHECK(b3.coarse == 40);
    CHECK(*b3.refined == 35);
    CHECK_THROWS_AS(lubell_size_bound(4, 0), std::invalid_argument);
}

TEST_CASE("k-diamond bound report") {
    const BoundsReport r2 = dk_bounds(2);
    CHECK(r2.m == 2);
    CHECK(r2.case_tag == BoundsReport::CaseTag::case2);
    CHECK(r2.upper == Rat(5, 2));
    const BoundsReport r3 = dk_bounds(3);
    CHECK(r3.m == 3);
    CHECK(r3.case_tag == BoundsReport::CaseTag::case1);
    CHECK(r3.upper == 3);
    const BoundsReport r6 = dk_bounds(6);
    CHECK(r6.m == 3);
    CHECK(r6.case_tag == BoundsReport::CaseTag::case2);
    CHECK(r6.upper == Rat(11, 3));
    for (int k = 2; k <= 40; ++k) {
        const BoundsReport r = dk_bounds(k);
        CHECK((Int(1) << (r.m - 1)) < k + 2);
        CHECK((Int(1) << r.m) >= k + 2);
        CHECK(r.lower <= r.upper);
        const bool in_case1 = Int(k) <= (Int(1) << r.m) - binomial(r.m, r.m / 2) - 1;
        CHECK((r.case_tag == BoundsReport::CaseTag::case1) == in_case1);
        CHECK(Int(k) >= (Int(1) << (r.m - 1)) - 1);
    }
}

TEST_CASE("lubell is additive and strictly monotone") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 5);
        const SetFamily f = random_family(rng, n);
        // split into two disjoint halves
        std::vector<std::uint32_t> a, b;
        for (std::size_t i = 0; i < f.members.size(); ++i)
            (i % 2 ? a : b).push_back(f.members[i]);
        CHECK(lubell(SetFamily(n, a)) + lubell(SetFamily(n, b)) == lubell(f));
        // adding any absent member strictly increases the mass
        for (std::uint32_t m = 0; m < (1u << n); ++m) {
            if (f.contains(m)) continue;
            auto grown = f.members;
            grown.push_back(m);
            CHECK(lubell(SetFamily(n, grown)) > lubell(f));
            break;
        }
    }
}

TEST_CASE("balanced-construction inequality sweep") {
    for (int n = 4; n <= 12; ++n) {
        const Rat value = Rat(2) + Rat(Int((n + 1) / 2) * (n / 2), Int(n) * (n - 1)) - Rat(1, binomial(n, 3));
        CHECK(value < Rat(25, 11));
    }
}
