#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "subposet/chains.hpp"
#include "subposet/claims.hpp"
#include "subposet/family.hpp"
#include "subposet/io.hpp"
#include "subposet/poset.hpp"
#include "subposet/search.hpp"

using namespace subposet;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitPartial = 3;

std::string default_claims_path() {
    if (const char* env = std::getenv("SUBPOSET_CLAIMS")) return env;
    return "data/claims.json";
}

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw std::invalid_argument("cannot open output file: " + out_path);
    out << text;
}

struct SearchArgs {
    int n = 0;
    std::string pattern_spec;
    std::string objective;
    bool require_empty = false;
    int target = 0;
    bool no_symmetry = false, no_lubell_prune = false, no_height_prune = false;
    bool exclude_full_set = false;
    int threads = 0;
    double time_limit = 0;
    std::uint64_t node_limit = 0;
    bool json = false;

    SearchConfig config() const {
        SearchConfig cfg;
        cfg.use_symmetry = !no_symmetry;
        cfg.prune_lubell = !no_lubell_prune;
        cfg.prune_height = !no_height_prune;
        cfg.exclude_full_set = exclude_full_set;
        cfg.thread_budget = threads;
        if (time_limit > 0)
            cfg.time_limit = std::chrono::milliseconds(static_cast<std::int64_t>(time_limit * 1000));
        if (node_limit > 0) cfg.node_limit = node_limit;
        return cfg;
    }
};

nlohmann::json outcome_json(const SearchOutcome& r, const std::string& objective, int n,
                            const std::string& pattern) {
    nlohmann::json witnesses = nlohmann::json::array();
    for (const auto& w : r.witnesses) {
        nlohmann::json fam = nlohmann::json::array();
        for (auto m : w.members) {
            nlohmann::json set = nlohmann::json::array();
            for (int i = 0; i < w.n; ++i)
                if ((m >> i) & 1u) set.push_back(i + 1);
            fam.push_back(set);
        }
        witnesses.push_back(fam);
    }
    return nlohmann::json{{"objective", objective}, {"n", n},       {"pattern", pattern},
                          {"optimum", rat_string(r.optimum)},       {"completed", r.completed},
                          {"nodes", r.nodes_explored},              {"witnesses", witnesses}};
}

int run_search(const SearchArgs& args) {
    const PosetPattern pattern = parse_pattern_spec(args.pattern_spec);
    const SearchConfig cfg = args.config();
    SearchOutcome outcome;
    if (args.objective == "la") {
        outcome = la_exact(args.n, pattern, cfg);
    } else if (args.objective == "maxlubell") {
        outcome = max_lubell(args.n, pattern, args.require_empty, cfg);
    } else {  // size
        const FindResult res = find_family_of_size(args.n, pattern, args.target, cfg);
        outcome.objective = Objective::cardinality;
        outcome.completed = res.completed;
        outcome.nodes_explored = res.nodes_explored;
        if (res.family) {
            outcome.optimum = Rat(args.target);
            outcome.witnesses.push_back(canonical_form(*res.family));
        } else {
            outcome.optimum = 0;
        }
    }
    if (args.json)
        std::cout << outcome_json(outcome, args.objective, args.n, args.pattern_spec).dump() << "\n";
    else
        std::cout << serialize_outcome(outcome, args.objective, args.n, args.pattern_spec);
    return outcome.completed ? kExitOk : kExitPartial;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact searches and chain calculus for forbidden-subposet problems"};
    app.require_subcommand(1);

    // lubell <family-file>
    std::string lubell_file;
    auto* cmd_lubell = app.add_subcommand("lubell", "exact Lubell mass, size and height of a family file");
    cmd_lubell->add_option("file", lubell_file, "family file")->required();

    // family <construct-spec> [--out]
    std::string construct_spec, family_out;
    auto* cmd_family = app.add_subcommand("family", "materialize a named construction as a family file");
    cmd_family->add_option("spec", construct_spec,
                           "c1:s=2,n=4 | c2:s=2,n=5 | c3:s=3,n=6 | middle:n=4,k=2[,variant=high]")
        ->required();
    cmd_family->add_option("--out", family_out, "output path (default stdout)");

    // pattern <spec> [--out]
    std::string pattern_spec_arg, pattern_out;
    auto* cmd_pattern = app.add_subcommand("pattern", "print a named pattern in the poset DSL");
    cmd_pattern->add_option("spec", pattern_spec_arg, "chain:4 | diamond:2 | fork:3 | butterfly | nposet | jposet | harp:4,3 | @file")
        ->required();
    cmd_pattern->add_option("--out", pattern_out, "output path (default stdout)");

    // check --family --pattern
    std::string check_family, check_pattern;
    auto* cmd_check = app.add_subcommand("check", "pattern-freeness of a family file");
    cmd_check->add_option("--family", check_family, "family file")->required();
    cmd_check->add_option("--pattern", check_pattern, "pattern spec")->required();

    // chains <mode> --family ...
    std::string chains_mode, chains_family;
    std::uint64_t mc_samples = 100000, mc_seed = 1;
    int chains_threads = 0;
    auto* cmd_chains = app.add_subcommand("chains", "full-chain calculus over a family");
    cmd_chains->add_option("mode", chains_mode, "lubell | mc | deleted | min | minmax")->required();
    cmd_chains->add_option("--family", chains_family, "family file")->required();
    cmd_chains->add_option("--samples", mc_samples, "sample count for mc");
    cmd_chains->add_option("--seed", mc_seed, "seed for mc");
    cmd_chains->add_option("--threads", chains_threads, "worker threads for mc");

    // search <objective> --n --pattern ...
    SearchArgs sargs;
    auto* cmd_search = app.add_subcommand("search", "exact branch-and-bound searches");
    cmd_search->add_option("objective", sargs.objective, "la | maxlubell | size")
        ->required()
        ->check(CLI::IsMember({"la", "maxlubell", "size"}));
    cmd_search->add_option("--n", sargs.n, "ground set size")->required();
    cmd_search->add_option("--pattern", sargs.pattern_spec, "pattern spec")->required();
    cmd_search->add_flag("--require-empty", sargs.require_empty, "restrict to families containing {}");
    cmd_search->add_option("--target", sargs.target, "target size for the size objective");
    cmd_search->add_flag("--no-symmetry", sargs.no_symmetry, "disable orderly symmetry reduction");
    cmd_search->add_flag("--no-lubell-prune", sargs.no_lubell_prune, "disable the mass bound");
    cmd_search->add_flag("--no-height-prune", sargs.no_height_prune, "disable the height cap");
    cmd_search->add_flag("--exclude-full-set", sargs.exclude_full_set, "drop [n] from the universe");
    cmd_search->add_option("--threads", sargs.threads, "thread budget (0 = SUBPOSET_THREADS/hardware)");
    cmd_search->add_option("--time-limit", sargs.time_limit, "seconds before reporting a partial result");
    cmd_search->add_option("--node-limit", sargs.node_limit, "total node budget");
    cmd_search->add_flag("--json", sargs.json, "machine-readable output");

    // verify
    double budget = 600;
    std::string claims_path = default_claims_path();
    bool verify_json = false;
    int verify_threads = 0;
    auto* cmd_verify = app.add_subcommand("verify", "run the full claim table");
    cmd_verify->add_option("--budget", budget, "seconds available to search-backed claims");
    cmd_verify->add_option("--claims", claims_path, "expected-value table");
    cmd_verify->add_option("--threads", verify_threads, "thread budget");
    cmd_verify->add_flag("--json", verify_json, "one JSON record per claim");

    // probe --n
    int probe_n = 4;
    int probe_threads = 0;
    double probe_time = 120;
    auto* cmd_probe = app.add_subcommand("probe", "max Lubell mass over all 2-diamond-free families, vs the balanced-construction value");
    cmd_probe->add_option("--n", probe_n, "ground set size (complete probe for n <= 5)")->required();
    cmd_probe->add_option("--threads", probe_threads, "thread budget");
    cmd_probe->add_option("--time-limit", probe_time, "seconds before reporting a partial result");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*cmd_lubell) {
            const SetFamily f = load_family_file(lubell_file);
            std::cout << "lubell=" << rat_string(lubell(f)) << " size=" << f.size()
                      << " height=" << family_height(f) << "\n";
            return kExitOk;
        }
        if (*cmd_family) {
            write_output(family_to_string(parse_family_construct_spec(construct_spec)), family_out);
            return kExitOk;
        }
        if (*cmd_pattern) {
            write_output(pattern_to_string(parse_pattern_spec(pattern_spec_arg)), pattern_out);
            return kExitOk;
        }
        if (*cmd_check) {
            const SetFamily f = load_family_file(check_family);
            const PosetPattern p = parse_pattern_spec(check_pattern);
            const bool free = is_pattern_free(f, p);
            std::cout << "pattern_free=" << (free ? "true" : "false");
            if (check_pattern.rfind("diamond:", 0) == 0) {
                const int k = std::stoi(check_pattern.substr(8));
                std::cout << " interval_check=" << (diamond_free_fast(f, k) ? "true" : "false");
            }
            std::cout << "\n";
            return kExitOk;
        }
        if (*cmd_chains) {
            const SetFamily f = load_family_file(chains_family);
            if (chains_mode == "lubell") {
                std::cout << "lubell=" << rat_string(lubell_via_chains(f)) << "\n";
            } else if (chains_mode == "mc") {
                const auto est = lubell_monte_carlo(f, mc_samples, mc_seed,
                                                    chains_threads > 0 ? chains_threads : 1);
                std::cout << "estimate=" << rat_string(est.estimate)
                          << " stderr<=" << rat_string(est.stderr_bound) << " samples=" << est.samples
                          << "\n";
            } else {
                std::vector<ChainBlockReport> blocks;
                if (chains_mode == "deleted")
                    blocks = partition_by_deleted_element(f);
                else if (chains_mode == "min")
                    blocks = min_partition(f);
                else if (chains_mode == "minmax")
                    blocks = minmax_partition(f);
                else
                    throw std::invalid_argument("unknown chains mode: " + chains_mode);
                for (const auto& b : blocks) std::cout << format_block(b) << "\n";
            }
            return kExitOk;
        }
        if (*cmd_search) return run_search(sargs);
        if (*cmd_verify) {
            ClaimOptions opts;
            opts.claims_path = claims_path;
            opts.budget_seconds = budget;
            opts.threads = verify_threads;
            const auto results = run_all_claims(opts);
            print_claims(std::cout, results, verify_json);
            return claims_exit_code(results);
        }
        if (*cmd_probe) {
            SearchConfig cfg;
            cfg.thread_budget = probe_threads;
            cfg.time_limit =
                std::chrono::milliseconds(static_cast<std::int64_t>(probe_time * 1000));
            const SearchOutcome out = max_lubell(probe_n, PosetPattern::diamond(2), false, cfg);
            const Rat conjectured =
                Rat(2) + Rat(Int(probe_n) * probe_n / 4, Int(probe_n) * (probe_n - 1));
            std::cout << "n=" << probe_n << " max=" << rat_string(out.optimum)
                      << " completed=" << (out.completed ? "true" : "false")
                      << " conjectured=" << rat_string(conjectured) << "\n";
            // expected extremal shapes: balanced constructions and conjugates
            std::set<std::vector<std::uint32_t>> shapes;
            for (int s : {probe_n / 2, (probe_n + 1) / 2}) {
                const std::uint32_t sm = (1u << s) - 1;
                const std::uint32_t tm = ((1u << probe_n) - 1) & ~sm;
                for (auto* ctor : {&construct_c1, &construct_c2, &construct_c3}) {
                    shapes.insert(canonical_form((*ctor)(sm, tm)).members);
                    shapes.insert(canonical_form(conjugate((*ctor)(sm, tm))).members);
                }
            }
            bool all_expected = true;
            for (const auto& w : out.witnesses) {
                const bool known = shapes.count(w.members) > 0;
                all_expected = all_expected && known;
                std::cout << "witness " << (known ? "(balanced construction or conjugate)" : "(other)")
                          << ":\n"
                          << family_to_string(w);
            }
            std::cout << "all_extremal_classes_expected="
                      << (out.completed ? (all_expected ? "true" : "false") : "unknown") << "\n";
            return out.completed ? kExitOk : kExitPartial;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFail;
    }
    return kExitUsage;
}
