#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace subposet {

/// One verified quantitative claim. Passing means the computed string equals
/// the expected string from the claims data file exactly.
struct ClaimResult {
    std::string claim_id;
    std::string description;
    std::string expected;
    std::string computed;
    enum class Status { pass, fail, skipped, partial } status = Status::skipped;
    std::string note;         // free-text context, not part of the comparison
    double elapsed_seconds = 0.0;
};

struct ClaimOptions {
    std::string claims_path;      // expected-value table (JSON)
    double budget_seconds = 600;  // total budget for search-backed claims
    int threads = 0;              // 0 = default resolution
};

/// Runs every claim in the data file. Search-backed claims are skipped once
/// the budget is exhausted and report partial when a limit fires mid-run.
std::vector<ClaimResult> run_all_claims(const ClaimOptions& options);

std::string status_string(ClaimResult::Status s);
void print_claims(std::ostream& out, const std::vector<ClaimResult>& results, bool json);

/// 0 all pass, 1 any fail, 3 no fails but a limit fired somewhere.
int claims_exit_code(const std::vector<ClaimResult>& results);

}  // namespace subposet
