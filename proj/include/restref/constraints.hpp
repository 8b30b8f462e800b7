#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace restref {

// The 14 response categories. Rows 2,4-8,10-13 carry constraint payloads;
// 1, 3, 9 and 14 are action-only verdicts.
enum class ConstraintCategory {
    ConfigurationAuthentication = 1,
    ProducerConsumer = 2,
    UnsupportedOperation = 3,
    AdditionalMandatory = 4,
    Or = 5,
    One = 6,
    AllOrNone = 7,
    ConditionalParameterRequired = 8,
    ParameterUnknown = 9,
    DataArithmetic = 10,
    DataNonArithmetic = 11,
    DataInfluencedParamSelection = 12,
    ParameterInfluencedDataValues = 13,
    Unhandled = 14,
};

constexpr int kCategoryCount = 14;

const char* to_string(ConstraintCategory c);
std::optional<ConstraintCategory> category_from_string(const std::string& name);

enum class RelOp { Lt, Le, Gt, Ge, Eq, Ne };

const char* to_string(RelOp op);
RelOp negate_relop(RelOp op);

enum class DataProperty { Categorical, Unique, Format };

const char* to_string(DataProperty p);

struct ProducerConsumerConstraint {
    std::string producer_op;
    std::string producer_param_path;  // e.g. "placeOrder.200.id"
    std::string consumer_op;
    std::string consumer_param_id;  // e.g. "deleteorder.path.orderId"

    bool operator==(const ProducerConsumerConstraint&) const = default;
};

struct AdditionalMandatoryConstraint {
    std::string param_id;
    bool operator==(const AdditionalMandatoryConstraint&) const = default;
};

struct OrConstraint {
    std::vector<std::string> param_ids;
    bool operator==(const OrConstraint&) const = default;
};

struct OneConstraint {
    std::vector<std::string> param_ids;
    bool operator==(const OneConstraint&) const = default;
};

struct AllOrNoneConstraint {
    std::vector<std::string> param_ids;
    bool operator==(const AllOrNoneConstraint&) const = default;
};

// p2 present/absent as stated implies p1 present/absent as stated.
struct ConditionalRequiredConstraint {
    std::string p1_id;
    bool p1_present = true;
    std::string p2_id;
    bool p2_present = true;
    bool operator==(const ConditionalRequiredConstraint&) const = default;
};

// Right-hand side of a relational data constraint: another parameter, a
// numeric constant, a string constant, or a list of constants.
struct ParamRef {
    std::string param_id;
    bool operator==(const ParamRef&) const = default;
};

using ArithRhs = std::variant<ParamRef, double, std::string, std::vector<std::string>>;

struct DataArithmeticConstraint {
    std::string lhs_param_id;
    RelOp op = RelOp::Eq;
    ArithRhs rhs;
    bool operator==(const DataArithmeticConstraint&) const = default;
};

struct DataNonArithmeticConstraint {
    std::string param_id;
    DataProperty property = DataProperty::Categorical;
    std::vector<std::string> values;
    bool operator==(const DataNonArithmeticConstraint&) const = default;
};

// Presence literal usable as the PC side of a nested constraint.
struct ParamPresence {
    std::string param_id;
    bool present = true;
    bool operator==(const ParamPresence&) const = default;
};

using ParamSelection = std::variant<ParamPresence, OrConstraint, OneConstraint,
                                    AllOrNoneConstraint, ConditionalRequiredConstraint,
                                    AdditionalMandatoryConstraint>;

// DataArithmetic antecedent implies a parameter-selection consequent.
struct DataInfluencedSelectionConstraint {
    DataArithmeticConstraint antecedent;
    ParamSelection consequent;
    bool operator==(const DataInfluencedSelectionConstraint&) const = default;
};

// Parameter-selection antecedent implies a DataArithmetic consequent.
struct ParamInfluencedDataConstraint {
    ParamSelection antecedent;
    DataArithmeticConstraint consequent;
    bool operator==(const ParamInfluencedDataConstraint&) const = default;
};

using Constraint =
    std::variant<ProducerConsumerConstraint, AdditionalMandatoryConstraint, OrConstraint,
                 OneConstraint, AllOrNoneConstraint, ConditionalRequiredConstraint,
                 DataArithmeticConstraint, DataNonArithmeticConstraint,
                 DataInfluencedSelectionConstraint, ParamInfluencedDataConstraint>;

ConstraintCategory category_of(const Constraint& c);

// Canonical form sorts unordered argument lists so One(a,b) == One(b,a).
Constraint canonical(const Constraint& c);
bool structurally_equal(const Constraint& a, const Constraint& b);

// All parameter ids a constraint mentions (consumer side only for
// ProducerConsumer; producer paths are output references).
std::vector<std::string> referenced_param_ids(const Constraint& c);
// Operation names the constraint mentions (nonempty only for ProducerConsumer).
std::vector<std::string> referenced_ops(const Constraint& c);

// Removes a parameter id from list-style constraints. Returns the surviving
// constraint, or nullopt when it degenerates (arity < 2 or the removed id was
// essential).
std::optional<Constraint> without_param(const Constraint& c, const std::string& param_id);

nlohmann::json to_json(const Constraint& c);
std::optional<Constraint> constraint_from_json(const nlohmann::json& j);

std::string describe(const Constraint& c);

}  // namespace restref
