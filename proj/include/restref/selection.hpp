#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "restref/model.hpp"

namespace restref {

// 0/1 selection variable per input parameter of one operation.
struct SelectionVar {
    std::string param_id;
    bool mandatory = false;
};

// x_var must equal `value`.
struct UnitClause {
    int var;
    bool value;
};

// x_if = 1 implies x_then = 1.
struct ImplicationClause {
    int if_var;
    int then_var;
};

// sum(triggers) > 0 implies sum(targets) > 0.
struct OrClauseEnc {
    std::vector<int> triggers;
    std::vector<int> targets;
};

// sum(vars) > 0 implies sum(vars) = 1.
struct OneClauseEnc {
    std::vector<int> vars;
};

// sum(vars) = 0 or sum(vars) = n.
struct AllOrNoneClauseEnc {
    std::vector<int> vars;
};

// x_p2 = int(b2) implies x_p1 = int(b1).
struct CondClauseEnc {
    int p1;
    bool b1;
    int p2;
    bool b2;
};

using SelectionClause =
    std::variant<UnitClause, ImplicationClause, OrClauseEnc, OneClauseEnc, AllOrNoneClauseEnc,
                 CondClauseEnc>;

// DataInfluenced-ParamSelection splits the problem into alternative clause
// sets: an assignment is admissible when it satisfies the base clauses plus
// at least one alternative extension.
struct SelectionProblem {
    std::string opname;
    std::vector<SelectionVar> vars;
    std::vector<SelectionClause> base;
    std::vector<std::vector<SelectionClause>> alternatives{{}};

    std::size_t size() const { return vars.size(); }
    int var_index(const std::string& param_id) const;
};

bool clause_satisfied(const SelectionClause& c, const std::vector<bool>& assignment);
bool assignment_admissible(const SelectionProblem& p, const std::vector<bool>& assignment);

enum class ScenarioKind { Maximal, Minimal, OptionalCovering };

struct ParameterScenario {
    std::string target_op;
    std::vector<std::string> selected;  // sorted param ids
    ScenarioKind kind = ScenarioKind::Minimal;

    bool contains(const std::string& param_id) const;
    bool operator==(const ParameterScenario& other) const {
        return target_op == other.target_op && selected == other.selected;
    }
};

struct InfeasibleMandatory : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SolveOptions {
    std::size_t max_maximal = 8;       // cap on maximal scenarios per operation
    std::size_t enumeration_limit = 16;  // exhaustive below, branch-and-bound above
};

// Builds the pseudo-Boolean selection problem for one operation: mandatory
// unit clauses, schema-nesting implications, and the encodings of
// Or/One/AllOrNone/Conditional plus the alternative split for
// DataInfluenced-ParamSelection constraints.
SelectionProblem encode_selection_constraints(const Operation& op);

// Prerequisite operations get the single all-mandatory scenario. Targets get
// every maximal-cardinality scenario (capped), one minimal scenario, and a
// minimal scenario covering each otherwise-uncovered optional parameter.
// Throws InfeasibleMandatory when the all-mandatory assignment violates the
// clauses.
std::vector<ParameterScenario> solve_parameter_scenarios(const SelectionProblem& problem,
                                                         bool is_prerequisite,
                                                         const SolveOptions& options = {});

}  // namespace restref
