#include "restref/model.hpp"

#include <algorithm>
#include <cctype>

namespace restref {

namespace {

std::string to_lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

}  // namespace

const char* to_string(HttpMethod m) {
    switch (m) {
        case HttpMethod::Post: return "POST";
        case HttpMethod::Get: return "GET";
        case HttpMethod::Put: return "PUT";
        case HttpMethod::Patch: return "PATCH";
        case HttpMethod::Delete: return "DELETE";
    }
    return "GET";
}

std::optional<HttpMethod> method_from_string(std::string s) {
    s = to_lower(s);
    if (s == "post") return HttpMethod::Post;
    if (s == "get") return HttpMethod::Get;
    if (s == "put") return HttpMethod::Put;
    if (s == "patch") return HttpMethod::Patch;
    if (s == "delete") return HttpMethod::Delete;
    return std::nullopt;
}

const char* to_string(ParamLoc l) {
    switch (l) {
        case ParamLoc::Body: return "body";
        case ParamLoc::Path: return "path";
        case ParamLoc::Query: return "query";
        case ParamLoc::Header: return "header";
        case ParamLoc::FormData: return "formData";
    }
    return "query";
}

std::string SpecModel::make_param_id(const std::string& opname, ParamLoc loc,
                                     const std::string& pname) {
    return to_lower(opname) + "." + to_lower(to_string(loc)) + "." + pname;
}

const InputParameter* Operation::find_input(const std::string& param_id) const {
    for (const auto& p : inputs)
        if (p.id == param_id) return &p;
    return nullptr;
}

std::vector<const InputParameter*> Operation::live_inputs() const {
    std::vector<const InputParameter*> out;
    for (const auto& p : inputs)
        if (!p.tombstoned) out.push_back(&p);
    return out;
}

Operation* SpecModel::find_operation(const std::string& opname) {
    for (auto& op : operations)
        if (op.opname == opname) return &op;
    return nullptr;
}

const Operation* SpecModel::find_operation(const std::string& opname) const {
    for (const auto& op : operations)
        if (op.opname == opname) return &op;
    return nullptr;
}

const InputParameter* SpecModel::find_parameter(const std::string& param_id) const {
    for (const auto& op : operations)
        if (const auto* p = op.find_input(param_id)) return p;
    return nullptr;
}

InputParameter* SpecModel::find_parameter(const std::string& param_id) {
    for (auto& op : operations)
        for (auto& p : op.inputs)
            if (p.id == param_id) return &p;
    return nullptr;
}

const Operation* SpecModel::owner_of_parameter(const std::string& param_id) const {
    for (const auto& op : operations)
        if (op.find_input(param_id)) return &op;
    return nullptr;
}

bool SpecModel::constraint_resolves(const Constraint& c) const {
    for (const auto& id : referenced_param_ids(c))
        if (!find_parameter(id)) return false;
    for (const auto& opname : referenced_ops(c))
        if (!find_operation(opname)) return false;
    return true;
}

void SpecModel::add_constraint(const Constraint& c) {
    if (!constraint_resolves(c))
        throw UnresolvedEntity("constraint references an unknown entity: " + describe(c));

    auto contains = [&](const std::vector<Constraint>& set) {
        return std::any_of(set.begin(), set.end(),
                           [&](const Constraint& e) { return structurally_equal(e, c); });
    };

    if (std::holds_alternative<ProducerConsumerConstraint>(c)) {
        if (!contains(global_constraints)) global_constraints.push_back(c);
        return;
    }

    // Parameter and data constraints attach to the operation owning the
    // first referenced parameter.
    auto ids = referenced_param_ids(c);
    const Operation* owner = ids.empty() ? nullptr : owner_of_parameter(ids.front());
    if (!owner) throw UnresolvedEntity("constraint has no resolvable owner: " + describe(c));
    Operation* op = find_operation(owner->opname);
    if (!contains(op->local_constraints)) {
        op->local_constraints.push_back(c);
        // AdditionalMandatory also flips the required flag so scenario
        // generation treats the parameter as mandatory.
        if (auto* m = std::get_if<AdditionalMandatoryConstraint>(&c)) {
            if (auto* p = find_parameter(m->param_id)) p->is_required = true;
        }
    }
}

void SpecModel::remove_operation(const std::string& opname) {
    auto it = std::find_if(operations.begin(), operations.end(),
                           [&](const Operation& op) { return op.opname == opname; });
    if (it == operations.end()) throw UnknownOperation("no such operation: " + opname);

    // Drop parameter ids owned by the operation so cross-operation
    // constraints (nested variants) referencing them fall away too.
    std::vector<std::string> gone_ids;
    for (const auto& p : it->inputs) gone_ids.push_back(p.id);
    operations.erase(it);

    auto mentions_gone = [&](const Constraint& c) {
        auto ops = referenced_ops(c);
        if (std::find(ops.begin(), ops.end(), opname) != ops.end()) return true;
        for (const auto& id : referenced_param_ids(c))
            if (std::find(gone_ids.begin(), gone_ids.end(), id) != gone_ids.end()) return true;
        return false;
    };
    std::erase_if(global_constraints, mentions_gone);
    for (auto& op : operations) std::erase_if(op.local_constraints, mentions_gone);
    data_refresh_ops.erase(opname);
}

void SpecModel::remove_parameter(const std::string& param_id) {
    InputParameter* p = find_parameter(param_id);
    if (!p) throw UnknownParameter("no such parameter: " + param_id);
    p->tombstoned = true;

    auto rewrite = [&](std::vector<Constraint>& set) {
        std::vector<Constraint> next;
        for (const auto& c : set) {
            auto kept = without_param(c, param_id);
            if (kept) next.push_back(*kept);
        }
        set = std::move(next);
    };
    rewrite(global_constraints);
    for (auto& op : operations) rewrite(op.local_constraints);
}

std::vector<ProducerConsumerConstraint> SpecModel::extract_dependencies() const {
    std::vector<ProducerConsumerConstraint> out;
    for (const auto& c : global_constraints)
        if (const auto* pc = std::get_if<ProducerConsumerConstraint>(&c)) out.push_back(*pc);
    return out;
}

std::vector<const Constraint*> SpecModel::all_constraints() const {
    std::vector<const Constraint*> out;
    for (const auto& c : global_constraints) out.push_back(&c);
    for (const auto& op : operations)
        for (const auto& c : op.local_constraints) out.push_back(&c);
    return out;
}

nlohmann::json SpecModel::export_json() const {
    nlohmann::json j;
    j["operations"] = nlohmann::json::array();
    for (const auto& op : operations) {
        nlohmann::json jo;
        jo["opname"] = op.opname;
        jo["path"] = op.path;
        jo["method"] = to_string(op.method);
        if (!op.tags.empty()) jo["tags"] = op.tags;
        jo["inputs"] = nlohmann::json::array();
        for (const auto& p : op.inputs) {
            nlohmann::json jp{{"pname", p.pname}, {"ptype", p.ptype}, {"required", p.is_required},
                              {"loc", to_string(p.loc)}, {"id", p.id}};
            if (p.tombstoned) jp["tombstoned"] = true;
            if (!p.examples.empty()) jp["examples"] = p.examples;
            jo["inputs"].push_back(std::move(jp));
        }
        jo["outputs"] = nlohmann::json::array();
        for (const auto& o : op.outputs)
            jo["outputs"].push_back({{"pname", o.pname}, {"ptype", o.ptype}, {"responsecode", o.responsecode}});
        jo["x-learned-constraints"] = nlohmann::json::array();
        for (const auto& c : op.local_constraints) jo["x-learned-constraints"].push_back(to_json(c));
        j["operations"].push_back(std::move(jo));
    }
    j["x-learned-constraints"] = nlohmann::json::array();
    for (const auto& c : global_constraints) j["x-learned-constraints"].push_back(to_json(c));
    return j;
}

}  // namespace restref
