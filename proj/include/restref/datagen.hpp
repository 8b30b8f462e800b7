#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "restref/model.hpp"
#include "restref/selection.hpp"

namespace restref {

enum class ValueSource { SpecExample, RealisticProvider, Solver, Random };

const char* to_string(ValueSource s);

// Concrete value assignment for one parameter scenario.
struct DataScenario {
    std::string target_op;
    std::map<std::string, nlohmann::json> assignment;  // param_id -> value
    std::map<std::string, ValueSource> provenance;
};

using DataConstraint = std::variant<DataArithmeticConstraint, DataNonArithmeticConstraint>;

struct UnsatisfiableData : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Unconditional data constraints whose parameters are all selected, plus the
// conditional halves of category-12/13 constraints whose presence side holds
// on the scenario.
std::vector<DataConstraint> gather_data_constraints(const ParameterScenario& scenario,
                                                    const Operation& op);

// Presence-level truth of a parameter-selection constraint on a scenario.
bool selection_holds(const ParamSelection& sel, const ParameterScenario& scenario);

struct DataGenOptions {
    std::uint64_t seed = 0;
    std::uint64_t salt = 0;  // bumped to force fresh values (blank-4xx refresh)
    int k = 2;               // data scenarios per parameter scenario
};

// k value assignments for the scenario. Source priority per parameter:
// spec examples (when constraint-compatible) -> deterministic realistic
// provider -> constraint repair. Identical assignments collapse. Throws
// UnsatisfiableData when the constraints stay violated even after dropping
// the newest one.
std::vector<DataScenario> generate_data(const ParameterScenario& scenario, const Operation& op,
                                        const std::vector<DataConstraint>& constraints,
                                        const DataGenOptions& options = {});

// Independent evaluator used as the oracle: does every constraint hold on
// the assignment? Constraints over absent parameters hold vacuously.
bool data_satisfies(const std::map<std::string, nlohmann::json>& assignment,
                    const std::vector<DataConstraint>& constraints);

}  // namespace restref
