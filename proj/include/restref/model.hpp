#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "restref/constraints.hpp"

namespace restref {

enum class HttpMethod { Post, Get, Put, Patch, Delete };

const char* to_string(HttpMethod m);
std::optional<HttpMethod> method_from_string(std::string s);

enum class ParamLoc { Body, Path, Query, Header, FormData };

const char* to_string(ParamLoc l);

struct ValueConstraints {
    std::optional<double> minimum;
    std::optional<double> maximum;
    std::optional<std::string> format;   // email, ipv4, date-time, ...
    std::optional<std::string> pattern;
    std::vector<std::string> enum_values;
};

struct InputParameter {
    std::string pname;        // dotted path for unrolled body fields
    std::string ptype;        // integer | number | boolean | string | object | array
    bool is_required = false;
    ParamLoc loc = ParamLoc::Query;
    ValueConstraints pc;
    std::vector<nlohmann::json> examples;
    std::string id;           // lower(opname) + "." + loc + "." + pname
    bool tombstoned = false;  // removed parameters stay resolvable for old records
    bool recursive_truncated = false;
    // Dotted prefix of the enclosing object ("" for top level); used for
    // schema-nesting clauses.
    std::string parent_path;
    // Required flag of the field within its immediate schema (is_required is
    // the conjunction along the whole path).
    bool required_in_parent = false;
};

struct OutputParameter {
    std::string pname;  // dotted path within the response body
    std::string ptype;
    std::string responsecode;  // "200", "2xx", "default", ...
};

struct SchemaField {
    std::string fname;
    std::string ftype;
    bool is_required = false;
    ValueConstraints fieldconstraint;
};

struct Schema {
    std::string sname;
    std::vector<SchemaField> fields;
};

struct Operation {
    std::string opname;
    std::string path;
    std::vector<std::string> tags;
    HttpMethod method = HttpMethod::Get;
    std::vector<InputParameter> inputs;
    std::vector<OutputParameter> outputs;
    std::vector<Constraint> local_constraints;
    std::string body_media_type;  // e.g. application/json; empty when no body
    bool needs_user_input = false;

    const InputParameter* find_input(const std::string& param_id) const;
    std::vector<const InputParameter*> live_inputs() const;
};

struct UnresolvedEntity : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnknownOperation : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnknownParameter : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class SpecModel {
  public:
    std::vector<Operation> operations;
    std::vector<Schema> schemas;
    std::vector<Constraint> global_constraints;
    std::vector<std::string> warnings;
    // Operations whose data scenarios should be regenerated with a fresh salt
    // next iteration (blank-4xx handling).
    std::set<std::string> data_refresh_ops;
    // Operation count at load time; metric denominators never change after.
    std::size_t original_operation_count = 0;

    Operation* find_operation(const std::string& opname);
    const Operation* find_operation(const std::string& opname) const;

    // Resolves a parameter id of the form <opname-lowered>.<loc>.<pname>.
    const InputParameter* find_parameter(const std::string& param_id) const;
    InputParameter* find_parameter(const std::string& param_id);
    const Operation* owner_of_parameter(const std::string& param_id) const;

    // Inserts into the owning operation's local constraints, or the global
    // set for ProducerConsumer. Idempotent under structural equality.
    // Throws UnresolvedEntity when a referenced id does not resolve.
    void add_constraint(const Constraint& c);

    // Removes the operation and every constraint referencing it.
    void remove_operation(const std::string& opname);

    // Tombstones the parameter; constraints over only this parameter are
    // dropped, list constraints shed the id (and drop if they degenerate).
    void remove_parameter(const std::string& param_id);

    // Exactly the ProducerConsumer constraints currently known, insertion
    // order preserved. No inference happens here.
    std::vector<ProducerConsumerConstraint> extract_dependencies() const;

    // Referential integrity: every constraint id resolves (tombstones count).
    bool constraint_resolves(const Constraint& c) const;

    std::vector<const Constraint*> all_constraints() const;

    // Serializes the refined model; learned constraints appear under the
    // vendor extension key "x-learned-constraints".
    nlohmann::json export_json() const;

    static std::string make_param_id(const std::string& opname, ParamLoc loc,
                                     const std::string& pname);
};

}  // namespace restref
