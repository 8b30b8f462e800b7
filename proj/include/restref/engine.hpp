#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "restref/analyzer.hpp"
#include "restref/datagen.hpp"
#include "restref/model.hpp"
#include "restref/selection.hpp"
#include "restref/sequence.hpp"

namespace restref {

// StatusInRange check; FieldPresent is reserved for response-shape checks.
struct ResponseCheck {
    std::string op_id;
    int low = 200;
    int high = 399;
};

struct TestCase {
    SequenceScenario seq;
    std::map<std::string, ParameterScenario> params;  // op -> scenario (keys == seq.ops)
    std::map<std::string, DataScenario> data;
    std::vector<ResponseCheck> checks;
    std::vector<ProducerConsumerConstraint> deps;  // runtime injection edges
};

// Scenario bundle for one operation as produced by the generator stage.
struct OpScenarios {
    std::vector<ParameterScenario> params;
    std::vector<std::vector<DataScenario>> data;  // data[i] belongs to params[i]
    ParameterScenario prereq;                     // all-mandatory
    DataScenario prereq_data;
};

struct RequestPlan {
    HttpMethod method = HttpMethod::Get;
    std::string path;  // path params substituted
    std::vector<std::pair<std::string, std::string>> query;
    std::vector<std::pair<std::string, std::string>> headers;
    std::string body;
    std::string content_type;  // empty when no body
    std::vector<std::pair<std::string, std::string>> form;  // FORMDATA fields
};

// consumer param id -> value observed from a producer response.
struct RunState {
    std::map<std::string, nlohmann::json> bindings;
    std::vector<std::string> misses;  // unfulfilled dependency notes
};

struct MissingPathValue : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConnectivityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RequestLogEntry {
    std::string op_id;
    int status = 0;  // 0 = timeout / transport failure
    double latency_ms = 0;
    std::string body;  // truncated at 64 KiB
    bool check_passed = false;
    bool skipped = false;  // budget exhaustion
};

struct ExecutionReport {
    int iteration = 0;
    std::vector<RequestLogEntry> entries;
    std::size_t issued = 0;
    std::size_t skipped = 0;
    std::size_t c2xx = 0, c3xx = 0, c4xx = 0, c5xx = 0, c0 = 0;
};

struct ExecOptions {
    std::string base_url;  // e.g. http://127.0.0.1:8080
    std::vector<std::pair<std::string, std::string>> static_headers;
    double timeout_s = 10;
    std::size_t hit_budget = SIZE_MAX;  // run-wide; hits_used carries across iterations
    int iteration = 0;
};

// Cartesian product per target operation: its sequence x parameter scenarios
// x data scenarios. Prerequisite operations always ride with their
// all-mandatory scenario. Operations with zero scenarios yield zero tests.
std::vector<TestCase> generate_tests(const SpecModel& model,
                                     const std::vector<SequenceScenario>& sequences,
                                     const std::map<std::string, OpScenarios>& scenarios);

// Materializes one HTTP request. Throws MissingPathValue when a path
// parameter has neither data nor an injected binding.
RequestPlan build_request(const Operation& op, const ParameterScenario& scenario,
                          const DataScenario& data, const RunState& state);

// Stores producer response values addressed by each dep's output path under
// the consumer parameter binding. Missing paths log a miss and leave the
// consumer on generated data.
void inject_dependencies(const Operation& producer, int status, const std::string& body,
                         const std::vector<ProducerConsumerConstraint>& deps, RunState& state);

// Runs the cases sequentially. `hits_used` accumulates across calls and is
// checked against options.hit_budget before every request.
std::pair<ExecutionReport, std::vector<FailureRecord>> execute_tests(
    const std::vector<TestCase>& testcases, const SpecModel& model, const ExecOptions& options,
    std::size_t& hits_used);

// Dotted descent into a JSON value; arrays take their first element.
std::optional<nlohmann::json> json_path_lookup(const nlohmann::json& root, const std::string& path);

}  // namespace restref
