#include "subposet/claims.hpp"

#include <bit>
#include <chrono>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "subposet/chains.hpp"
#include "subposet/family.hpp"
#include "subposet/io.hpp"
#include "subposet/poset.hpp"
#include "subposet/search.hpp"

namespace subposet {

namespace {

using nlohmann::json;

struct ClaimSpec {
    std::string id, description, expected, kind;
    std::int64_t budget_ms = 0;
};

struct Reply {
    std::string computed;
    std::string note;
    bool partial = false;  // a limit fired; computed holds the best-so-far
};

SetFamily random_family(std::mt19937_64& rng) {
    const int n = static_cast<int>(rng() % 7) + 1;
    const double density = 0.1 + 0.8 * (static_cast<double>(rng() % 1000) / 1000.0);
    std::vector<std::uint32_t> members;
    const std::uint32_t full = (1u << n) - 1;
    for (std::uint32_t m = 0; m <= full; ++m)
        if (static_cast<double>(rng() % 1000000) / 1000000.0 < density) members.push_back(m);
    return SetFamily(n, std::move(members));
}

std::uint32_t prefix_mask(int s) { return (1u << s) - 1; }

SetFamily construction(int which, int s, int n) {
    const std::uint32_t sm = prefix_mask(s);
    const std::uint32_t tm = ((1u << n) - 1) & ~sm;
    switch (which) {
        case 1: return construct_c1(sm, tm);
        case 2: return construct_c2(sm, tm);
        default: return construct_c3(sm, tm);
    }
}

std::string canon_string(const SetFamily& f) {
    std::string s;
    for (auto m : canonical_form(f).members) s += std::to_string(m) + ".";
    return s;
}

// ---- claim implementations -------------------------------------------------

Reply claim_lubell_chain_identity(const SearchConfig&) {
    std::mt19937_64 rng(20110828);
    int mismatches = 0, cases = 0;
    for (int i = 0; i < 200; ++i) {
        const SetFamily f = random_family(rng);
        ++cases;
        if (lubell_via_chains(f) != lubell(f)) ++mismatches;
    }
    for (int n = 2; n <= 7; ++n)
        for (int s = 1; s < n; ++s)
            for (int which : {1, 2, 3}) {
                const SetFamily f = construction(which, s, n);
                ++cases;
                if (lubell_via_chains(f) != lubell(f)) ++mismatches;
            }
    Reply r;
    r.computed = "mismatches=" + std::to_string(mismatches);
    r.note = std::to_string(cases) + " families checked";
    return r;
}

Reply claim_d_values(const SearchConfig& cfg) {
    Reply r;
    std::string parts;
    bool partial = false;
    for (int n : {2, 3, 4}) {
        const SearchOutcome out = max_lubell(n, PosetPattern::diamond(2), false, cfg);
        partial = partial || !out.completed;
        parts += (parts.empty() ? "" : ";") + rat_string(out.optimum);
    }
    r.computed = parts;
    r.partial = partial;
    return r;
}

Reply claim_delta4(const SearchConfig& cfg) {
    const SearchOutcome out = max_lubell(4, PosetPattern::diamond(2), true, cfg);
    Reply r;
    r.partial = !out.completed;
    std::set<std::string> expected_classes{canon_string(construction(1, 2, 4)),
                                           canon_string(construction(2, 2, 4))};
    std::set<std::string> got;
    for (const auto& w : out.witnesses) got.insert(canon_string(w));
    r.computed = rat_string(out.optimum) + ";" +
                 (got == expected_classes ? "classes={C1(2,2),C2(2,2)}" : "classes=unexpected");
    r.note = std::to_string(out.witnesses.size()) + " extremal classes";
    return r;
}

Reply claim_delta5(const SearchConfig& cfg) {
    const SearchOutcome out = max_lubell(5, PosetPattern::diamond(2), true, cfg);
    Reply r;
    r.partial = !out.completed;
    r.computed = out.completed ? rat_string(out.optimum)
                               : "incomplete(best=" + rat_string(out.optimum) + ")";
    if (out.completed) {
        const Rat delta4 = max_lubell(4, PosetPattern::diamond(2), true, cfg).optimum;
        r.note = std::string("nonincreasing vs delta_4: ") +
                 (out.optimum <= delta4 ? "holds" : "violated");
        if (out.optimum > delta4) r.computed += ";monotonicity-violated";
    }
    return r;
}

Reply claim_n4_enumeration(const SearchConfig& cfg) {
    const auto classes = enumerate_maximal_pfree(4, PosetPattern::diamond(2), true, cfg);
    Rat top = 0;
    for (const auto& c : classes) top = std::max(top, c.lubell_value);
    Rat rest = 0;
    for (const auto& c : classes)
        if (c.lubell_value < top) rest = std::max(rest, c.lubell_value);
    Reply r;
    const bool ok = top == Rat(7, 3) && rest <= Rat(9, 4);
    r.computed = ok ? "top=7/3 rest<=9/4"
                    : "top=" + rat_string(top) + " rest=" + rat_string(rest);
    r.note = "classes=" + std::to_string(classes.size()) +
             " (literature count: 17; inclusion-maximal interpretation, equality not asserted)";
    return r;
}

Reply claim_erdos(const SearchConfig& cfg) {
    int matches = 0, cases = 0;
    bool partial = false;
    for (int n = 1; n <= 5; ++n)
        for (int k = 2; k <= 4; ++k) {
            if (n < k - 1) continue;
            ++cases;
            const SearchOutcome out = la_exact(n, PosetPattern::chain(k), cfg);
            partial = partial || !out.completed;
            if (out.completed && out.optimum == Rat(sigma(n, k - 1))) ++matches;
        }
    Reply r;
    r.computed = std::to_string(matches) + "/" + std::to_string(cases);
    r.partial = partial;
    return r;
}

SetFamily butterfly_exception_family() {
    std::vector<std::uint32_t> members{0b0001, 0b0010, 0b1101, 0b1110};
    for (std::uint32_t m = 0; m < 16; ++m)
        if (std::popcount(m) == 2) members.push_back(m);
    return SetFamily(4, std::move(members));
}

Reply claim_butterfly_la(const SearchConfig& cfg) {
    const SearchOutcome a = la_exact(3, PosetPattern::butterfly(), cfg);
    const SearchOutcome b = la_exact(4, PosetPattern::butterfly(), cfg);
    Reply r;
    r.partial = !a.completed || !b.completed;
    r.computed = rat_string(a.optimum) + ";" + rat_string(b.optimum);
    return r;
}

Reply claim_butterfly_family(const SearchConfig&) {
    const SetFamily f = butterfly_exception_family();
    Reply r;
    r.computed = std::string(is_pattern_free(f, PosetPattern::butterfly()) ? "free" : "contains") +
                 ";size=" + std::to_string(f.size());
    return r;
}

Reply claim_butterfly_unique4(const SearchConfig& cfg) {
    Reply r;
    r.computed = verify_extremal_uniqueness(4, PosetPattern::butterfly(), 2, cfg) ? "true" : "false";
    return r;
}

Reply claim_butterfly_n5(const SearchConfig& cfg) {
    const SearchOutcome out = la_exact(5, PosetPattern::butterfly(), cfg);
    Reply r;
    if (!out.completed) {
        r.partial = true;
        r.computed = "incomplete(best=" + rat_string(out.optimum) + ")";
        return r;
    }
    const bool unique = verify_extremal_uniqueness(5, PosetPattern::butterfly(), 2, cfg);
    r.computed = rat_string(out.optimum) + (unique ? ";unique" : ";not-unique");
    return r;
}

Reply claim_diamond_case1_n4(const SearchConfig& cfg) {
    Reply r;
    std::string parts;
    for (int k : {3, 4}) {
        const SearchOutcome out = la_exact(4, PosetPattern::diamond(k), cfg);
        if (!out.completed) {
            r.partial = true;
            continue;
        }
        const bool unique = verify_extremal_uniqueness(4, PosetPattern::diamond(k), 3, cfg);
        parts += (parts.empty() ? "" : ";") + rat_string(out.optimum) +
                 (unique ? ";unique" : ";not-unique");
    }
    r.computed = parts;
    return r;
}

Reply claim_diamond3_n5(const SearchConfig& cfg) {
    const SearchOutcome out = la_exact(5, PosetPattern::diamond(3), cfg);
    Reply r;
    r.partial = !out.completed;
    r.computed = out.completed ? rat_string(out.optimum)
                               : "incomplete(best=" + rat_string(out.optimum) + ")";
    return r;
}

Reply claim_bound_consistency(const SearchConfig& cfg) {
    int violations = 0, cases = 0;
    bool partial = false;
    const std::vector<std::pair<int, int>> runs{{4, 2}, {4, 3}, {4, 4}, {5, 3}};
    for (auto [n, k] : runs) {
        const SearchOutcome out = la_exact(n, PosetPattern::diamond(k), cfg);
        if (!out.completed) {
            partial = true;
            continue;
        }
        ++cases;
        const SizeBound bound = lubell_size_bound(n, dk_bounds(k).upper);
        if (Rat(bound.best()) < out.optimum) ++violations;
    }
    Reply r;
    r.computed = "violations=" + std::to_string(violations);
    r.note = std::to_string(cases) + " completed searches checked";
    r.partial = partial;
    return r;
}

Reply claim_harp(const SearchConfig& cfg) {
    const SearchOutcome out = la_exact(4, PosetPattern::harp({4, 3}), cfg);
    Reply r;
    if (!out.completed) {
        r.partial = true;
        r.computed = "incomplete";
        return r;
    }
    const bool unique = verify_extremal_uniqueness(4, PosetPattern::harp({4, 3}), 3, cfg);
    r.computed = rat_string(out.optimum) + (unique ? ";unique" : ";not-unique");
    return r;
}

Reply claim_construction_sweep(const SearchConfig&) {
    int mismatches = 0, cases = 0;
    for (int n = 4; n <= 12; ++n)
        for (int s = 1; s < n; ++s) {
            const int t = n - s;
            const Rat mass = Rat(2) + Rat(Int(s) * t, Int(n) * (n - 1));
            const Int c1_size = 1 + s + s * t + binomial(t, 2);
            const Int c23_tail = binomial(s, 2) + binomial(t, 2) + binomial(s, 2) * t + s * binomial(t, 2);
            for (int which : {1, 2, 3}) {
                const SetFamily f = construction(which, s, n);
                ++cases;
                const Int want_size = which == 1 ? c1_size : (which == 2 ? Int(1) + c23_tail : Int(n) + c23_tail);
                if (lubell(f) != mass || Int(f.size()) != want_size || !diamond_free_fast(f, 2))
                    ++mismatches;
            }
        }
    Reply r;
    r.computed = "mismatches=" + std::to_string(mismatches);
    r.note = std::to_string(cases) + " constructions checked";
    return r;
}

Reply claim_claim1_inequality(const SearchConfig&) {
    bool holds = true;
    for (int n = 4; n <= 12; ++n) {
        const Rat lhs = Rat(2) + Rat(Int((n + 1) / 2) * (n / 2), Int(n) * (n - 1)) - Rat(1, binomial(n, 3));
        if (!(lhs < Rat(25, 11))) holds = false;
    }
    Reply r;
    r.computed = holds ? "holds" : "violated";
    return r;
}

Reply claim_dk_spots(const SearchConfig&) {
    Reply r;
    r.computed = rat_string(dk_bounds(2).upper) + ";" + rat_string(dk_bounds(3).upper) + ";" +
                 rat_string(dk_bounds(6).upper);
    return r;
}

Reply claim_delta_lower_bounds(const SearchConfig&) {
    int mismatches = 0;
    for (int n = 4; n <= 12; ++n) {
        const int s = (n + 1) / 2;
        const SetFamily f = construction(1, s, n);
        const Rat want = Rat(2) + Rat(Int(s) * (n - s), Int(n) * (n - 1));
        if (!f.contains(0) || lubell(f) != want || !diamond_free_fast(f, 2)) ++mismatches;
    }
    Reply r;
    r.computed = "mismatches=" + std::to_string(mismatches);
    return r;
}

Reply claim_jposet(const SearchConfig& cfg) {
    const SearchOutcome a = la_exact(3, PosetPattern::j_poset(), cfg);
    const SearchOutcome b = la_exact(4, PosetPattern::j_poset(), cfg);
    Reply r;
    r.partial = !a.completed || !b.completed;
    r.computed = rat_string(a.optimum) + ";" + rat_string(b.optimum);
    return r;
}

Reply claim_size36(const SearchConfig& cfg) {
    const FindResult res = find_family_of_size(6, PosetPattern::diamond(2), 36, cfg);
    Reply r;
    if (res.family) {
        const bool ok = res.family->size() == 36 && diamond_free_fast(*res.family, 2) &&
                        is_pattern_free(*res.family, PosetPattern::diamond(2));
        r.computed = ok ? "found;free-by-both-checkers" : "found;verification-failed";
        return r;
    }
    if (!res.completed) {
        r.partial = true;
        r.computed = "unknown(limit fired)";
        return r;
    }
    r.computed = "absent(conclusive)";
    return r;
}

using ClaimFn = std::function<Reply(const SearchConfig&)>;

const std::map<std::string, ClaimFn>& registry() {
    static const std::map<std::string, ClaimFn> reg{
        {"lubell-chain-identity", claim_lubell_chain_identity},
        {"d-values", claim_d_values},
        {"delta4", claim_delta4},
        {"delta5-conditional", claim_delta5},
        {"n4-enumeration", claim_n4_enumeration},
        {"erdos-sweep", claim_erdos},
        {"butterfly-la", claim_butterfly_la},
        {"butterfly-exceptional-family", claim_butterfly_family},
        {"butterfly-uniqueness-n4", claim_butterfly_unique4},
        {"butterfly-n5-conditional", claim_butterfly_n5},
        {"diamond-case1-n4", claim_diamond_case1_n4},
        {"diamond3-n5-conditional", claim_diamond3_n5},
        {"diamond-bound-consistency", claim_bound_consistency},
        {"harp-la", claim_harp},
        {"construction-formula-sweep", claim_construction_sweep},
        {"claim1-inequality", claim_claim1_inequality},
        {"dk-bounds-spots", claim_dk_spots},
        {"delta-lower-bounds", claim_delta_lower_bounds},
        {"jposet-la", claim_jposet},
        {"size36-stretch", claim_size36},
    };
    return reg;
}

}  // namespace

std::vector<ClaimResult> run_all_claims(const ClaimOptions& options) {
    std::ifstream in(options.claims_path);
    if (!in) throw std::invalid_argument("cannot open claims file: " + options.claims_path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw std::invalid_argument("claims file is not valid JSON: " + std::string(e.what()));
    }
    std::vector<ClaimSpec> specs;
    for (const auto& c : doc.at("claims")) {
        ClaimSpec s;
        s.id = c.at("id").get<std::string>();
        s.description = c.at("description").get<std::string>();
        s.expected = c.at("expected").get<std::string>();
        s.kind = c.value("kind", "compute");
        s.budget_ms = c.value("budget_ms", std::int64_t{0});
        specs.push_back(std::move(s));
    }

    double remaining = options.budget_seconds;
    std::vector<ClaimResult> results;
    for (const auto& spec : specs) {
        ClaimResult res;
        res.claim_id = spec.id;
        res.description = spec.description;
        res.expected = spec.expected;
        const auto it = registry().find(spec.id);
        if (it == registry().end()) {
            res.status = ClaimResult::Status::fail;
            res.computed = "no implementation for claim id";
            results.push_back(std::move(res));
            continue;
        }
        const bool is_search = spec.kind == "search";
        if (is_search && remaining <= 0) {
            res.status = ClaimResult::Status::skipped;
            res.computed = "skipped (budget exhausted)";
            results.push_back(std::move(res));
            continue;
        }
        SearchConfig cfg;
        cfg.thread_budget = options.threads;
        if (is_search) {
            const double allowed = std::min(remaining, spec.budget_ms > 0
                                                           ? static_cast<double>(spec.budget_ms) / 1000.0
                                                           : remaining);
            cfg.time_limit =
                std::chrono::milliseconds(static_cast<std::int64_t>(allowed * 1000.0));
        }
        const auto t0 = std::chrono::steady_clock::now();
        Reply reply;
        try {
            reply = it->second(cfg);
        } catch (const std::exception& e) {
            reply.computed = std::string("exception: ") + e.what();
        }
        res.elapsed_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (is_search) remaining -= res.elapsed_seconds;
        res.computed = reply.computed;
        res.note = reply.note;
        if (reply.partial)
            res.status = ClaimResult::Status::partial;
        else
            res.status = res.computed == res.expected ? ClaimResult::Status::pass
                                                      : ClaimResult::Status::fail;
        results.push_back(std::move(res));
    }
    return results;
}

std::string status_string(ClaimResult::Status s) {
    switch (s) {
        case ClaimResult::Status::pass: return "PASS";
        case ClaimResult::Status::fail: return "FAIL";
        case ClaimResult::Status::skipped: return "SKIP";
        case ClaimResult::Status::partial: return "PARTIAL";
    }
    return "?";
}

void print_claims(std::ostream& out, const std::vector<ClaimResult>& results, bool json_mode) {
    if (json_mode) {
        for (const auto& r : results) {
            json j{{"id", r.claim_id},
                   {"description", r.description},
                   {"expected", r.expected},
                   {"computed", r.computed},
                   {"status", status_string(r.status)},
                   {"elapsed_seconds", r.elapsed_seconds}};
            if (!r.note.empty()) j["note"] = r.note;
            out << j.dump() << "\n";
        }
        return;
    }
    int pass = 0, fail = 0, skip = 0, partial = 0;
    for (const auto& r : results) {
        out << status_string(r.status) << " " << r.claim_id << ": " << r.description << "\n";
        out << "     expected=[" << r.expected << "] computed=[" << r.computed << "]";
        char buf[32];
        std::snprintf(buf, sizeof buf, " (%.2fs)", r.elapsed_seconds);
        out << buf << "\n";
        if (!r.note.empty()) out << "     # " << r.note << "\n";
        switch (r.status) {
            case ClaimResult::Status::pass: ++pass; break;
            case ClaimResult::Status::fail: ++fail; break;
            case ClaimResult::Status::skipped: ++skip; break;
            case ClaimResult::Status::partial: ++partial; break;
        }
    }
    out << pass << " passed, " << fail << " failed, " << partial << " partial, " << skip
        << " skipped\n";
}

int claims_exit_code(const std::vector<ClaimResult>& results) {
    bool any_fail = false, any_partial = false;
    for (const auto& r : results) {
        any_fail = any_fail || r.status == ClaimResult::Status::fail;
        any_partial = any_partial || r.status == ClaimResult::Status::partial;
    }
    if (any_fail) return 1;
    if (any_partial) return 3;
    return 0;
}

}  // namespace subposet
