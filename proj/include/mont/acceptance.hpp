/**
 * Release gate for the toolkit: every exit criterion as an executable
 * check with the tolerance it is judged at.
 *
 * The criteria pin down, in order: the critical rescaled energy, the
 * critical-point table for the first six levels, the level-quotient
 * minima, the closed-form eigenvalue bounds, structural facts about the
 * located critical points, the integral-identity suite, semiclassical
 * convergence along an alpha sweep, the limiting second derivative at
 * high critical points, the ground-state derivative rate in the
 * small-coupling regime, the solver unit oracles, and the large-alpha
 * eigenvalue asymptotics.
 *
 * The harness is shared by the `verify` subcommand of the CLI and by the
 * acceptance test binary, so both always agree on what "green" means.
 */
#pragma once

#include <string>
#include <vector>

namespace mont::acceptance {

/// Outcome of one criterion.  `detail` holds the measured values the
/// verdict was based on, formatted for a human reading the table.
struct CriterionResult {
    int id = 0;
    std::string name;
    std::string detail;
    bool pass = false;
};

/// Execute all criteria in order.  Criteria are independent: a failure in
/// one never short-circuits the rest, and a thrown solver error is
/// converted into a failed result carrying the exception text.
std::vector<CriterionResult> run_all();

/// True when every entry passed.
bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace mont::acceptance
