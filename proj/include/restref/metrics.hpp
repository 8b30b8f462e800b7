#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "restref/engine.hpp"

namespace restref {

struct DefectRecord {
    std::string op_id;
    int status = 0;  // 5xx
    std::string normalized_message;
    bool has_stack_trace = false;
    nlohmann::json request_snapshot;
};

struct IterationStats {
    int iteration = 0;
    std::size_t issued = 0, skipped = 0;
    std::size_t c2xx = 0, c3xx = 0, c4xx = 0, c5xx = 0, c0 = 0;
};

struct Metrics {
    double oc = 0;      // % of operations with >= 1 2xx-or-5xx response
    double oc_2xx = 0;  // % with >= 1 2xx
    std::size_t total_hits = 0;
    std::size_t operation_count = 0;  // original (pre-deletion) denominator
    std::vector<IterationStats> iterations;
    std::vector<DefectRecord> defects;
};

// Frame-pattern heuristic: >= 2 "at token(...)" lines, or "Traceback", or
// "Exception".
bool has_stack_trace(const std::string& body);

// Denominator is the model's original operation count, never the surviving
// one.
Metrics compute_metrics(const std::vector<ExecutionReport>& reports, const SpecModel& model);

nlohmann::json metrics_to_json(const Metrics& m);  // carries report_version
std::optional<Metrics> metrics_from_json(const nlohmann::json& j);
std::string metrics_to_text(const Metrics& m);  // per-iteration 2xx/4xx/5xx table

// 0 <= oc_2xx <= oc <= 100 and hit totals consistent across iterations.
bool metrics_invariants_ok(const Metrics& m);

}  // namespace restref
