#pragma once

#include <iosfwd>
#include <string>

#include "subposet/family.hpp"
#include "subposet/poset.hpp"
#include "subposet/search.hpp"

namespace subposet {

// Family files:
//   family <n>
//   1,3,4        one member per line, elements 1-based
//   {}           the empty set
// Load/store round-trips are the identity on canonical form.
SetFamily load_family(std::istream& in);
SetFamily load_family_file(const std::string& path);
void store_family(std::ostream& out, const SetFamily& f);
std::string family_to_string(const SetFamily& f);

// Poset DSL, one pattern per file; closure is applied on load:
//   poset <name> <element_count>
//   <u> < <v>
PosetPattern load_pattern(std::istream& in);
PosetPattern load_pattern_file(const std::string& path);
std::string pattern_to_string(const PosetPattern& p);

/// Named pattern specs: chain:4, diamond:2, fork:3, butterfly, nposet,
/// jposet, harp:4,3 — or @file to load the DSL.
PosetPattern parse_pattern_spec(const std::string& spec);

/// Construction specs: c1:s=2,n=4 (S = [s]), c2:..., c3:...,
/// middle:n=4,k=2[,variant=low|high].
SetFamily parse_family_construct_spec(const std::string& spec);

/// Header line plus witness family blocks:
///   search <objective> n=<n> pattern=<name> optimum=<p>/<q> completed=<bool> nodes=<int>
std::string serialize_outcome(const SearchOutcome& outcome, const std::string& objective_name,
                              int n, const std::string& pattern_name);

}  // namespace subposet
