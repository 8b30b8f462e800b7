#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "restref/analyzer.hpp"
#include "restref/engine.hpp"
#include "restref/metrics.hpp"
#include "restref/model.hpp"

namespace restref {

// The execution-parameter dictionary (JSON file), with CLI
// overrides applied on top.
struct PipelineConfig {
    std::string base_url;
    std::vector<std::pair<std::string, std::string>> static_headers;
    double timeout_s = 10;
    std::size_t hit_budget = SIZE_MAX;
    int max_iterations = 10;  // safety cap over the subset-convergence rule
    std::uint64_t seed = 0;
    int k_data_scenarios = 2;
    std::string inference_url;  // empty = rule-based backend only
};

PipelineConfig load_exec_params(const std::string& path);

struct IterationReport {
    int iteration = 0;
    std::size_t c2xx = 0, c4xx = 0, c5xx = 0;
    std::size_t issued = 0;
    std::vector<std::string> new_constraints;  // human-readable descriptions
    std::size_t new_unique_failures = 0;
    std::size_t cumulative_failures = 0;
    bool converged = false;
};

struct PipelineResult {
    SpecModel model;
    std::vector<IterationReport> iterations;
    std::vector<ExecutionReport> exec_reports;
    std::vector<FailureRecord> failures;  // cumulative, deterministic order
    Metrics metrics;
    std::size_t hits_used = 0;
};

// The generate -> execute -> analyze -> refine loop. Terminates on the first
// iteration whose failure set is a subset of the cumulative set, on
// max_iterations, or on budget exhaustion. ConnectivityError propagates with
// whatever reports were completed attached to the exception-free partial
// result path in the CLI.
PipelineResult run_pipeline(SpecModel model, const PipelineConfig& config,
                            const FailureAnalyzer& analyzer = FailureAnalyzer{});

// One analysis pass: classify each failure, apply the verdict action to the
// model. Deterministic application order (op_id, status, message). Timeouts
// (status 0) are never classified.
void analyze_failures(SpecModel& model, const std::vector<FailureRecord>& run_failures,
                      const FailureAnalyzer& analyzer,
                      std::vector<std::string>* new_constraints = nullptr);

}  // namespace restref
