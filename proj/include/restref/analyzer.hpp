#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "restref/constraints.hpp"
#include "restref/model.hpp"

namespace restref {

struct FailureRecord {
    std::string op_id;
    int status = 0;
    std::string message;             // raw response body text
    std::string normalized_message;  // literals masked; uniqueness key
    nlohmann::json request_snapshot; // parameter scenario + data values

    // Uniqueness key per the convergence condition.
    auto key() const { return std::tie(op_id, status, normalized_message); }
    bool operator<(const FailureRecord& other) const { return key() < other.key(); }
};

enum class VerdictAction {
    AddConstraint,
    RemoveOperation,
    RemoveParameter,
    RequestUserInput,
    ReportDefect,
    RegenerateData,
    Ignore,
};

const char* to_string(VerdictAction a);

struct AnalyzerVerdict {
    ConstraintCategory category = ConstraintCategory::Unhandled;
    std::optional<Constraint> constraint;
    VerdictAction action = VerdictAction::ReportDefect;
    std::string target_op;     // for RemoveOperation / RegenerateData
    std::string target_param;  // for RemoveParameter
    std::string note;
};

// Masks quoted literals, numbers, UUIDs and emails with typed placeholders.
// Deterministic and idempotent; makes "unique failure response" well-defined.
std::string normalize_message(const std::string& message);

// Drops tags from HTML error pages, keeping the visible text.
std::string strip_html(const std::string& body);

// Pluggable second-stage backend consulted when the rule chain yields
// Unhandled. The HTTP implementation lives in inference.hpp.
class AnalyzerBackend {
  public:
    virtual ~AnalyzerBackend() = default;
    virtual std::optional<ConstraintCategory> classify(const std::string& message, int status,
                                                       const nlohmann::json& context) = 0;
    virtual std::vector<std::string> match_entities(const std::string& message,
                                                    const std::vector<std::string>& candidates) = 0;
};

class FailureAnalyzer {
  public:
    FailureAnalyzer() = default;
    explicit FailureAnalyzer(std::shared_ptr<AnalyzerBackend> fallback)
        : fallback_(std::move(fallback)) {}

    // Rule chain first; fallback backend only when the rules say Unhandled.
    // Never throws; unclassifiable input is Unhandled.
    ConstraintCategory classify_failure(const FailureRecord& f, const Operation& op) const;

    // Candidate ids the message refers to, best match first. Stages: exact
    // name, case/underscore-insensitive, token-overlap >= 0.6, backend.
    std::vector<std::string> identify_target_parameters(
        const std::string& message, const std::vector<const InputParameter*>& candidates) const;

    std::optional<ProducerConsumerConstraint> infer_producer_consumer(
        const FailureRecord& f, const Operation& consumer, const SpecModel& model) const;

    std::optional<Constraint> extract_relational_constraint(
        const std::string& message, const std::vector<std::string>& target_ids,
        const Operation& op) const;

    std::optional<Constraint> split_nested_constraint(const std::string& message,
                                                      const Operation& op,
                                                      const SpecModel& model) const;

    AnalyzerVerdict handle_blank_response(const FailureRecord& f, const Operation& op,
                                          const SpecModel& model) const;

    // Full verdict: classification plus entity identification plus action.
    AnalyzerVerdict analyze(const FailureRecord& f, const Operation& op,
                            const SpecModel& model) const;

  private:
    std::shared_ptr<AnalyzerBackend> fallback_;
};

// Exposed for the nested-split path and tests: classification of a clause
// fragment as data condition, presence condition or selection constraint.
enum class ClauseKind { DataCondition, PresenceCondition, Selection, Unknown };
ClauseKind classify_clause(const std::string& clause);

}  // namespace restref
