#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "subposet/family.hpp"
#include "subposet/poset.hpp"
#include "subposet/rational.hpp"

namespace subposet {

/// Knobs for the branch-and-bound searches. The optional prunes never change
/// an optimum, only the work done to reach it; structural assumptions such as
/// dropping [n] from the universe stay opt-in so unconditional optima remain
/// obtainable.
struct SearchConfig {
    bool prune_lubell = true;   // fractional mass bound on open candidates
    bool prune_height = true;   // height-capped budget + chain fast path
    bool use_symmetry = true;   // orderly (lex-min orbit) generation
    bool exclude_full_set = false;
    int thread_budget = 0;      // 0 = SUBPOSET_THREADS env or hardware count
    std::optional<std::uint64_t> node_limit;
    std::optional<std::chrono::milliseconds> time_limit;
};

enum class Objective { cardinality, lubell };

/// Result of an exact search. Witnesses are canonical forms in lexicographic
/// order; completed=false only when a node or time limit fired, in which case
/// optimum is the best value proven so far.
struct SearchOutcome {
    Objective objective = Objective::cardinality;
    Rat optimum;
    std::vector<SetFamily> witnesses;
    std::uint64_t nodes_explored = 0;
    bool completed = true;
};

/// Lexicographically minimal sorted mask sequence over all n! relabelings of
/// the ground set (n <= 8).
SetFamily canonical_form(const SetFamily& f);

/// Largest size of a pattern-free family in the n-cube (n <= 6). With
/// use_symmetry the witness list covers every extremal family up to
/// relabeling.
SearchOutcome la_exact(int n, const PosetPattern& pattern, const SearchConfig& config = {});

/// Maximum Lubell mass over pattern-free families, optionally restricted to
/// families containing the empty set (n <= 6).
SearchOutcome max_lubell(int n, const PosetPattern& pattern, bool require_empty_member,
                         const SearchConfig& config = {});

/// One inclusion-maximal pattern-free family per relabeling class (n <= 5),
/// each annotated with its exact Lubell mass.
struct MaximalClass {
    SetFamily family;  // canonical form
    Rat lubell_value;
};
std::vector<MaximalClass> enumerate_maximal_pfree(int n, const PosetPattern& pattern,
                                                  bool require_empty_member,
                                                  const SearchConfig& config = {});

/// Searches for a pattern-free family of exactly `target` members. Absence is
/// conclusive only when completed is true.
struct FindResult {
    std::optional<SetFamily> family;
    bool completed = true;
    std::uint64_t nodes_explored = 0;
};
FindResult find_family_of_size(int n, const PosetPattern& pattern, int target,
                               const SearchConfig& config = {});

/// True iff every extremal pattern-free family equals a middle-level family
/// B(n, expected_m) up to relabeling.
bool verify_extremal_uniqueness(int n, const PosetPattern& pattern, int expected_m,
                                const SearchConfig& config = {});

}  // namespace subposet
