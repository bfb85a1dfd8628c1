#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "klsym/report.hpp"

namespace klsym {

struct GridPoint {
    int n = 2;
    std::int64_t p = 3;
    int e = 1;
    int k = 0;
    ComputeOptions compute;
};

/// Grid syntax: semicolon-separated groups of space/comma separated
/// `key=value` terms with `k=a..b` ranges and `p=3|5|7` lists, e.g.
/// "n=2 p=3|5|7 k=0..10; n=3 p=7 k=2..3 mode=trust-degree".
std::vector<GridPoint> parse_grid(const std::string& spec);

/// Runs every grid point and aggregates pass/fail; an empty spec runs the
/// built-in acceptance suite (the full criteria battery).
nlohmann::json run_verify(KlStore& store, const std::string& grid_spec, int jobs);

/// The acceptance battery: degree formula grid, closed-form cross-checks,
/// polynomiality/integrality, the n=2 decomposition and functional equation,
/// weight purity, bad factors, congruences, and the oracle equivalences.
/// One entry per criterion, `ok` iff all pass.
nlohmann::json run_acceptance(KlStore& store, int jobs);

}  // namespace klsym
