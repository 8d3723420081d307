#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "subposet/claims.hpp"
#include "subposet/io.hpp"

using namespace subposet;

namespace {

std::string tmp_file(const std::string& name, const std::string& content) {
    const std::string path = "io_test_" + name;
    std::ofstream out(path);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("family files round-trip") {
    std::mt19937 rng(42);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 8);
        std::vector<std::uint32_t> members;
        for (std::uint32_t m = 0; m < (1u << n); ++m)
            if (rng() % 100 < 40) members.push_back(m);
        const SetFamily f(n, members);
        std::stringstream ss(family_to_string(f));
        CHECK(load_family(ss) == f);
    }
}

TEST_CASE("family parse errors name the line") {
    {
        std::stringstream ss("family 3\n1,x\n");
        CHECK_THROWS_WITH_AS(load_family(ss), doctest::Contains("line 2"), std::invalid_argument);
    }
    {
        std::stringstream ss("family 3\n1\n4\n");
        CHECK_THROWS_WITH_AS(load_family(ss), doctest::Contains("line 3"), std::invalid_argument);
    }
    {
        std::stringstream ss("household 3\n");
        CHECK_THROWS_AS(load_family(ss), std::invalid_argument);
    }
    {
        std::stringstream ss("family 3\n1\n1\n");  // duplicate member
        CHECK_THROWS_AS(load_family(ss), std::invalid_argument);
    }
    {
        std::stringstream ss("family 3\n1,1\n");  // repeated element
        CHECK_THROWS_AS(load_family(ss), std::invalid_argument);
    }
    {
        std::stringstream ss("");
        CHECK_THROWS_AS(load_family(ss), std::invalid_argument);
    }
}

TEST_CASE("empty family file") {
    std::stringstream ss("family 4\n");
    const SetFamily f = load_family(ss);
    CHECK(f.n == 4);
    CHECK(f.size() == 0);
}

TEST_CASE("poset DSL round-trip and closure") {
    const PosetPattern harp = PosetPattern::harp({4, 3});
    std::stringstream ss(pattern_to_string(harp));
    const PosetPattern loaded = load_pattern(ss);
    CHECK(loaded.size() == harp.size());
    CHECK(loaded.pairs() == harp.pairs());
    CHECK(loaded.name() == "harp:4,3");

    std::stringstream cover("poset tri 3\n0 < 1\n1 < 2\n");
    const PosetPattern closed = load_pattern(cover);
    CHECK(closed.less(0, 2));  // closure applied on load
    CHECK(closed.pair_count() == 3);

    std::stringstream cyc("poset bad 2\n0 < 1\n1 < 0\n");
    CHECK_THROWS_AS(load_pattern(cyc), std::invalid_argument);
    std::stringstream junk("poset bad 2\n0 <= 1\n");
    CHECK_THROWS_AS(load_pattern(junk), std::invalid_argument);
}

TEST_CASE("pattern specs") {
    CHECK(parse_pattern_spec("chain:4").size() == 4);
    CHECK(parse_pattern_spec("diamond:2").pair_count() == 5);
    CHECK(parse_pattern_spec("fork:3").size() == 4);
    CHECK(parse_pattern_spec("butterfly").size() == 4);
    CHECK(parse_pattern_spec("nposet").pair_count() == 3);
    CHECK(parse_pattern_spec("jposet").pair_count() == 4);
    CHECK(parse_pattern_spec("harp:4,3").size() == 5);
    CHECK_THROWS_AS(parse_pattern_spec("pentagon"), std::invalid_argument);
    CHECK_THROWS_AS(parse_pattern_spec("chain:x"), std::invalid_argument);
    CHECK_THROWS_AS(parse_pattern_spec("diamond"), std::invalid_argument);

    const std::string path = tmp_file("pattern.poset", pattern_to_string(PosetPattern::n_poset()));
    const PosetPattern from_file = parse_pattern_spec("@" + path);
    CHECK(from_file.pairs() == PosetPattern::n_poset().pairs());
    std::remove(path.c_str());
}

TEST_CASE("construction specs") {
    const SetFamily c1 = parse_family_construct_spec("c1:s=2,n=4");
    CHECK(c1.size() == 8);
    CHECK(lubell(c1) == Rat(7, 3));
    CHECK(parse_family_construct_spec("middle:n=4,k=2").members ==
          middle_levels(4, 2, LevelVariant::low).members);
    CHECK(parse_family_construct_spec("middle:n=4,k=2,variant=high").members ==
          middle_levels(4, 2, LevelVariant::high).members);
    CHECK_THROWS_AS(parse_family_construct_spec("c1:s=4,n=4"), std::invalid_argument);
    CHECK_THROWS_AS(parse_family_construct_spec("middle:n=4"), std::invalid_argument);
    CHECK_THROWS_AS(parse_family_construct_spec("c9:s=1,n=3"), std::invalid_argument);
}

TEST_CASE("outcome serialization shape") {
    const SearchOutcome out = la_exact(4, PosetPattern::chain(3));
    const std::string text = serialize_outcome(out, "la", 4, "chain:3");
    CHECK(text.rfind("search la n=4 pattern=chain:3 optimum=10/1 completed=true nodes=", 0) == 0);
    CHECK(text.find("family 4\n") != std::string::npos);
}

TEST_CASE("claims: corrupted expected table fails with both values shown") {
    const std::string good = R"({"version":1,"claims":[
      {"id":"dk-bounds-spots","description":"spot values","kind":"compute","expected":"5/2;3/1;11/3"}]})";
    const std::string bad = R"({"version":1,"claims":[
      {"id":"dk-bounds-spots","description":"spot values","kind":"compute","expected":"9/9;3/1;11/3"}]})";
    const std::string good_path = tmp_file("claims_ok.json", good);
    const std::string bad_path = tmp_file("claims_bad.json", bad);

    ClaimOptions opts;
    opts.claims_path = good_path;
    auto results = run_all_claims(opts);
    REQUIRE(results.size() == 1);
    CHECK(results[0].status == ClaimResult::Status::pass);

    opts.claims_path = bad_path;
    results = run_all_claims(opts);
    REQUIRE(results.size() == 1);
    CHECK(results[0].status == ClaimResult::Status::fail);
    CHECK(results[0].expected == "9/9;3/1;11/3");
    CHECK(results[0].computed == "5/2;3/1;11/3");
    std::ostringstream table;
    print_claims(table, results, false);
    CHECK(table.str().find("expected=[9/9;3/1;11/3] computed=[5/2;3/1;11/3]") != std::string::npos);
    CHECK(claims_exit_code(results) == 1);

    std::remove(good_path.c_str());
    std::remove(bad_path.c_str());
}

TEST_CASE("claims: zero budget skips searches, formula checks still pass") {
    const std::string mixed = R"({"version":1,"claims":[
      {"id":"dk-bounds-spots","description":"spot values","kind":"compute","expected":"5/2;3/1;11/3"},
      {"id":"d-values","description":"d values","kind":"search","budget_ms":10000,"expected":"5/2;7/3;7/3"}]})";
    const std::string path = tmp_file("claims_budget.json", mixed);
    ClaimOptions opts;
    opts.claims_path = path;
    opts.budget_seconds = 0;
    const auto results = run_all_claims(opts);
    REQUIRE(results.size() == 2);
    CHECK(results[0].status == ClaimResult::Status::pass);
    CHECK(results[1].status == ClaimResult::Status::skipped);
    CHECK(claims_exit_code(results) == 0);
    std::remove(path.c_str());
}

TEST_CASE("claims: missing or malformed file") {
    ClaimOptions opts;
    opts.claims_path = "does_not_exist.json";
    CHECK_THROWS_AS(run_all_claims(opts), std::invalid_argument);
    const std::string path = tmp_file("claims_junk.json", "not json at all");
    opts.claims_path = path;
    CHECK_THROWS_AS(run_all_claims(opts), std::invalid_argument);
    std::remove(path.c_str());
}
