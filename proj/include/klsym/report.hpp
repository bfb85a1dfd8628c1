#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "klsym/global_l.hpp"

namespace klsym {

struct ReportOptions {
    int n = 2;
    std::int64_t p = 3;
    int e = 1;
    int k = 1;
    ComputeOptions compute;
    double weight_tol = 1e-6;
    bool timings = true;  // the only non-deterministic report field
};

/// Runs the full pipeline for one (n, p, e, k) and returns the verification
/// record: computed L, predicted degree, bad factors, M_k, functional
/// equation data, weight histogram, and one entry per check.
nlohmann::json run_compute_report(KlStore& store, const ReportOptions& options);

/// True when every non-skipped check in the report passed.
bool report_ok(const nlohmann::json& report);

/// Human-readable rendering of a compute report or a verify summary.
std::string render_text(const nlohmann::json& doc);

}  // namespace klsym
