#include "restref/constraints.hpp"

#include <sstream>

#include <nlohmann/json.hpp>

namespace restref {

using nlohmann::json;

const char* to_string(ConstraintCategory c) {
    switch (c) {
        case ConstraintCategory::ConfigurationAuthentication: return "ConfigurationAuthentication";
        case ConstraintCategory::ProducerConsumer: return "ProducerConsumer";
        case ConstraintCategory::UnsupportedOperation: return "UnsupportedOperation";
        case ConstraintCategory::AdditionalMandatory: return "AdditionalMandatory";
        case ConstraintCategory::Or: return "Or";
        case ConstraintCategory::One: return "One";
        case ConstraintCategory::AllOrNone: return "AllOrNone";
        case ConstraintCategory::ConditionalParameterRequired: return "ConditionalParameterRequired";
        case ConstraintCategory::ParameterUnknown: return "ParameterUnknown";
        case ConstraintCategory::DataArithmetic: return "DataArithmetic";
        case ConstraintCategory::DataNonArithmetic: return "DataNonArithmetic";
        case ConstraintCategory::DataInfluencedParamSelection: return "DataInfluencedParamSelection";
        case ConstraintCategory::ParameterInfluencedDataValues: return "ParameterInfluencedDataValues";
        case ConstraintCategory::Unhandled: return "Unhandled";
    }
    return "Unhandled";
}

std::optional<ConstraintCategory> category_from_string(const std::string& name) {
    for (int i = 1; i <= kCategoryCount; ++i) {
        auto c = static_cast<ConstraintCategory>(i);
        if (name == to_string(c)) return c;
    }
    return std::nullopt;
}

const char* to_string(RelOp op) {
    switch (op) {
        case RelOp::Lt: return "<";
        case RelOp::Le: return "<=";
        case RelOp::Gt: return ">";
        case RelOp::Ge: return ">=";
        case RelOp::Eq: return "=";
        case RelOp::Ne: return "!=";
    }
    return "=";
}

RelOp negate_relop(RelOp op) {
    switch (op) {
        case RelOp::Lt: return RelOp::Ge;
        case RelOp::Le: return RelOp::Gt;
        case RelOp::Gt: return RelOp::Le;
        case RelOp::Ge: return RelOp::Lt;
        case RelOp::Eq: return RelOp::Ne;
        case RelOp::Ne: return RelOp::Eq;
    }
    return op;
}

const char* to_string(DataProperty p) {
    switch (p) {
        case DataProperty::Categorical: return "categorical";
        case DataProperty::Unique: return "unique";
        case DataProperty::Format: return "format";
    }
    return "categorical";
}

ConstraintCategory category_of(const Constraint& c) {
    struct Visitor {
        ConstraintCategory operator()(const ProducerConsumerConstraint&) const { return ConstraintCategory::ProducerConsumer; }
        ConstraintCategory operator()(const AdditionalMandatoryConstraint&) const { return ConstraintCategory::AdditionalMandatory; }
        ConstraintCategory operator()(const OrConstraint&) const { return ConstraintCategory::Or; }
        ConstraintCategory operator()(const OneConstraint&) const { return ConstraintCategory::One; }
        ConstraintCategory operator()(const AllOrNoneConstraint&) const { return ConstraintCategory::AllOrNone; }
        ConstraintCategory operator()(const ConditionalRequiredConstraint&) const { return ConstraintCategory::ConditionalParameterRequired; }
        ConstraintCategory operator()(const DataArithmeticConstraint&) const { return ConstraintCategory::DataArithmetic; }
        ConstraintCategory operator()(const DataNonArithmeticConstraint&) const { return ConstraintCategory::DataNonArithmetic; }
        ConstraintCategory operator()(const DataInfluencedSelectionConstraint&) const { return ConstraintCategory::DataInfluencedParamSelection; }
        ConstraintCategory operator()(const ParamInfluencedDataConstraint&) const { return ConstraintCategory::ParameterInfluencedDataValues; }
    };
    return std::visit(Visitor{}, c);
}

namespace {

ParamSelection canonical_selection(ParamSelection s) {
    if (auto* o = std::get_if<OrConstraint>(&s)) std::sort(o->param_ids.begin(), o->param_ids.end());
    if (auto* o = std::get_if<OneConstraint>(&s)) std::sort(o->param_ids.begin(), o->param_ids.end());
    if (auto* o = std::get_if<AllOrNoneConstraint>(&s)) std::sort(o->param_ids.begin(), o->param_ids.end());
    return s;
}

}  // namespace

Constraint canonical(const Constraint& c) {
    Constraint out = c;
    if (auto* o = std::get_if<OrConstraint>(&out)) {
        std::sort(o->param_ids.begin(), o->param_ids.end());
    } else if (auto* o = std::get_if<OneConstraint>(&out)) {
        std::sort(o->param_ids.begin(), o->param_ids.end());
    } else if (auto* o = std::get_if<AllOrNoneConstraint>(&out)) {
        std::sort(o->param_ids.begin(), o->param_ids.end());
    } else if (auto* n = std::get_if<DataInfluencedSelectionConstraint>(&out)) {
        n->consequent = canonical_selection(n->consequent);
    } else if (auto* n = std::get_if<ParamInfluencedDataConstraint>(&out)) {
        n->antecedent = canonical_selection(n->antecedent);
    }
    return out;
}

bool structurally_equal(const Constraint& a, const Constraint& b) {
    return canonical(a) == canonical(b);
}

namespace {

void collect_selection_params(const ParamSelection& s, std::vector<std::string>& out) {
    if (auto* p = std::get_if<ParamPresence>(&s)) {
        out.push_back(p->param_id);
    } else if (auto* o = std::get_if<OrConstraint>(&s)) {
        out.insert(out.end(), o->param_ids.begin(), o->param_ids.end());
    } else if (auto* o = std::get_if<OneConstraint>(&s)) {
        out.insert(out.end(), o->param_ids.begin(), o->param_ids.end());
    } else if (auto* o = std::get_if<AllOrNoneConstraint>(&s)) {
        out.insert(out.end(), o->param_ids.begin(), o->param_ids.end());
    } else if (auto* cc = std::get_if<ConditionalRequiredConstraint>(&s)) {
        out.push_back(cc->p1_id);
        out.push_back(cc->p2_id);
    } else if (auto* m = std::get_if<AdditionalMandatoryConstraint>(&s)) {
        out.push_back(m->param_id);
    }
}

void collect_arith_params(const DataArithmeticConstraint& d, std::vector<std::string>& out) {
    out.push_back(d.lhs_param_id);
    if (auto* r = std::get_if<ParamRef>(&d.rhs)) out.push_back(r->param_id);
}

}  // namespace

std::vector<std::string> referenced_param_ids(const Constraint& c) {
    std::vector<std::string> out;
    if (auto* pc = std::get_if<ProducerConsumerConstraint>(&c)) {
        out.push_back(pc->consumer_param_id);
    } else if (auto* m = std::get_if<AdditionalMandatoryConstraint>(&c)) {
        out.push_back(m->param_id);
    } else if (auto* o = std::get_if<OrConstraint>(&c)) {
        out = o->param_ids;
    } else if (auto* o = std::get_if<OneConstraint>(&c)) {
        out = o->param_ids;
    } else if (auto* o = std::get_if<AllOrNoneConstraint>(&c)) {
        out = o->param_ids;
    } else if (auto* cc = std::get_if<ConditionalRequiredConstraint>(&c)) {
        out = {cc->p1_id, cc->p2_id};
    } else if (auto* d = std::get_if<DataArithmeticConstraint>(&c)) {
        collect_arith_params(*d, out);
    } else if (auto* d = std::get_if<DataNonArithmeticConstraint>(&c)) {
        out.push_back(d->param_id);
    } else if (auto* n = std::get_if<DataInfluencedSelectionConstraint>(&c)) {
        collect_arith_params(n->antecedent, out);
        collect_selection_params(n->consequent, out);
    } else if (auto* n = std::get_if<ParamInfluencedDataConstraint>(&c)) {
        collect_selection_params(n->antecedent, out);
        collect_arith_params(n->consequent, out);
    }
    return out;
}

std::vector<std::string> referenced_ops(const Constraint& c) {
    if (auto* pc = std::get_if<ProducerConsumerConstraint>(&c)) {
        return {pc->producer_op, pc->consumer_op};
    }
    return {};
}

namespace {

std::optional<std::vector<std::string>> drop_id(const std::vector<std::string>& ids,
                                                const std::string& victim) {
    std::vector<std::string> kept;
    for (const auto& id : ids)
        if (id != victim) kept.push_back(id);
    if (kept.size() == ids.size()) return ids;  // untouched
    if (kept.size() < 2) return std::nullopt;   // degenerate
    return kept;
}

}  // namespace

std::optional<Constraint> without_param(const Constraint& c, const std::string& param_id) {
    auto mentions = referenced_param_ids(c);
    if (std::find(mentions.begin(), mentions.end(), param_id) == mentions.end()) return c;

    if (auto* o = std::get_if<OrConstraint>(&c)) {
        auto kept = drop_id(o->param_ids, param_id);
        if (!kept) return std::nullopt;
        return Constraint{OrConstraint{*kept}};
    }
    if (auto* o = std::get_if<OneConstraint>(&c)) {
        auto kept = drop_id(o->param_ids, param_id);
        if (!kept) return std::nullopt;
        return Constraint{OneConstraint{*kept}};
    }
    if (auto* o = std::get_if<AllOrNoneConstraint>(&c)) {
        auto kept = drop_id(o->param_ids, param_id);
        if (!kept) return std::nullopt;
        return Constraint{AllOrNoneConstraint{*kept}};
    }
    // All other shapes mention the parameter essentially; drop the constraint.
    return std::nullopt;
}

namespace {

json rhs_to_json(const ArithRhs& r) {
    if (auto* p = std::get_if<ParamRef>(&r)) return json{{"param", p->param_id}};
    if (auto* d = std::get_if<double>(&r)) return json{{"const", *d}};
    if (auto* s = std::get_if<std::string>(&r)) return json{{"const", *s}};
    return json{{"consts", std::get<std::vector<std::string>>(r)}};
}

std::optional<ArithRhs> rhs_from_json(const json& j) {
    if (j.contains("param")) return ArithRhs{ParamRef{j["param"].get<std::string>()}};
    if (j.contains("const")) {
        if (j["const"].is_number()) return ArithRhs{j["const"].get<double>()};
        return ArithRhs{j["const"].get<std::string>()};
    }
    if (j.contains("consts")) return ArithRhs{j["consts"].get<std::vector<std::string>>()};
    return std::nullopt;
}

json arith_to_json(const DataArithmeticConstraint& d) {
    return json{{"lhs", d.lhs_param_id}, {"relop", to_string(d.op)}, {"rhs", rhs_to_json(d.rhs)}};
}

std::optional<RelOp> relop_from_string(const std::string& s) {
    for (RelOp op : {RelOp::Lt, RelOp::Le, RelOp::Gt, RelOp::Ge, RelOp::Eq, RelOp::Ne})
        if (s == to_string(op)) return op;
    return std::nullopt;
}

std::optional<DataArithmeticConstraint> arith_from_json(const json& j) {
    DataArithmeticConstraint d;
    if (!j.contains("lhs") || !j.contains("relop") || !j.contains("rhs")) return std::nullopt;
    d.lhs_param_id = j["lhs"].get<std::string>();
    auto op = relop_from_string(j["relop"].get<std::string>());
    auto rhs = rhs_from_json(j["rhs"]);
    if (!op || !rhs) return std::nullopt;
    d.op = *op;
    d.rhs = *rhs;
    return d;
}

json selection_to_json(const ParamSelection& s);
std::optional<ParamSelection> selection_from_json(const json& j);

json selection_to_json(const ParamSelection& s) {
    if (auto* p = std::get_if<ParamPresence>(&s))
        return json{{"kind", "Presence"}, {"param", p->param_id}, {"present", p->present}};
    if (auto* o = std::get_if<OrConstraint>(&s)) return json{{"kind", "Or"}, {"params", o->param_ids}};
    if (auto* o = std::get_if<OneConstraint>(&s)) return json{{"kind", "One"}, {"params", o->param_ids}};
    if (auto* o = std::get_if<AllOrNoneConstraint>(&s))
        return json{{"kind", "AllOrNone"}, {"params", o->param_ids}};
    if (auto* c = std::get_if<ConditionalRequiredConstraint>(&s))
        return json{{"kind", "Conditional"}, {"p1", c->p1_id}, {"p1_present", c->p1_present},
                    {"p2", c->p2_id}, {"p2_present", c->p2_present}};
    auto& m = std::get<AdditionalMandatoryConstraint>(s);
    return json{{"kind", "Mandatory"}, {"param", m.param_id}};
}

std::optional<ParamSelection> selection_from_json(const json& j) {
    auto kind = j.value("kind", "");
    if (kind == "Presence")
        return ParamSelection{ParamPresence{j["param"].get<std::string>(), j.value("present", true)}};
    if (kind == "Or") return ParamSelection{OrConstraint{j["params"].get<std::vector<std::string>>()}};
    if (kind == "One") return ParamSelection{OneConstraint{j["params"].get<std::vector<std::string>>()}};
    if (kind == "AllOrNone")
        return ParamSelection{AllOrNoneConstraint{j["params"].get<std::vector<std::string>>()}};
    if (kind == "Conditional")
        return ParamSelection{ConditionalRequiredConstraint{
            j["p1"].get<std::string>(), j.value("p1_present", true),
            j["p2"].get<std::string>(), j.value("p2_present", true)}};
    if (kind == "Mandatory")
        return ParamSelection{AdditionalMandatoryConstraint{j["param"].get<std::string>()}};
    return std::nullopt;
}

}  // namespace

json to_json(const Constraint& c) {
    json j;
    j["category"] = to_string(category_of(c));
    if (auto* pc = std::get_if<ProducerConsumerConstraint>(&c)) {
        j["producer_op"] = pc->producer_op;
        j["producer_param"] = pc->producer_param_path;
        j["consumer_op"] = pc->consumer_op;
        j["consumer_param"] = pc->consumer_param_id;
    } else if (auto* m = std::get_if<AdditionalMandatoryConstraint>(&c)) {
        j["param"] = m->param_id;
    } else if (auto* o = std::get_if<OrConstraint>(&c)) {
        j["params"] = o->param_ids;
    } else if (auto* o = std::get_if<OneConstraint>(&c)) {
        j["params"] = o->param_ids;
    } else if (auto* o = std::get_if<AllOrNoneConstraint>(&c)) {
        j["params"] = o->param_ids;
    } else if (auto* cc = std::get_if<ConditionalRequiredConstraint>(&c)) {
        j["p1"] = cc->p1_id;
        j["p1_present"] = cc->p1_present;
        j["p2"] = cc->p2_id;
        j["p2_present"] = cc->p2_present;
    } else if (auto* d = std::get_if<DataArithmeticConstraint>(&c)) {
        j.update(arith_to_json(*d));
    } else if (auto* d = std::get_if<DataNonArithmeticConstraint>(&c)) {
        j["param"] = d->param_id;
        j["property"] = to_string(d->property);
        j["values"] = d->values;
    } else if (auto* n = std::get_if<DataInfluencedSelectionConstraint>(&c)) {
        j["antecedent"] = arith_to_json(n->antecedent);
        j["consequent"] = selection_to_json(n->consequent);
    } else if (auto* n = std::get_if<ParamInfluencedDataConstraint>(&c)) {
        j["antecedent"] = selection_to_json(n->antecedent);
        j["consequent"] = arith_to_json(n->consequent);
    }
    return j;
}

std::optional<Constraint> constraint_from_json(const json& j) {
    if (!j.is_object()) return std::nullopt;
    auto cat = category_from_string(j.value("category", ""));
    if (!cat) return std::nullopt;
    try {
        switch (*cat) {
            case ConstraintCategory::ProducerConsumer:
                return Constraint{ProducerConsumerConstraint{
                    j["producer_op"].get<std::string>(), j["producer_param"].get<std::string>(),
                    j["consumer_op"].get<std::string>(), j["consumer_param"].get<std::string>()}};
            case ConstraintCategory::AdditionalMandatory:
                return Constraint{AdditionalMandatoryConstraint{j["param"].get<std::string>()}};
            case ConstraintCategory::Or:
                return Constraint{OrConstraint{j["params"].get<std::vector<std::string>>()}};
            case ConstraintCategory::One:
                return Constraint{OneConstraint{j["params"].get<std::vector<std::string>>()}};
            case ConstraintCategory::AllOrNone:
                return Constraint{AllOrNoneConstraint{j["params"].get<std::vector<std::string>>()}};
            case ConstraintCategory::ConditionalParameterRequired:
                return Constraint{ConditionalRequiredConstraint{
                    j["p1"].get<std::string>(), j.value("p1_present", true),
                    j["p2"].get<std::string>(), j.value("p2_present", true)}};
            case ConstraintCategory::DataArithmetic: {
                auto d = arith_from_json(j);
                if (!d) return std::nullopt;
                return Constraint{*d};
            }
            case ConstraintCategory::DataNonArithmetic: {
                DataNonArithmeticConstraint d;
                d.param_id = j["param"].get<std::string>();
                auto prop = j.value("property", "categorical");
                d.property = prop == "unique"   ? DataProperty::Unique
                             : prop == "format" ? DataProperty::Format
                                                : DataProperty::Categorical;
                d.values = j.value("values", std::vector<std::string>{});
                return Constraint{d};
            }
            case ConstraintCategory::DataInfluencedParamSelection: {
                auto a = arith_from_json(j["antecedent"]);
                auto s = selection_from_json(j["consequent"]);
                if (!a || !s) return std::nullopt;
                return Constraint{DataInfluencedSelectionConstraint{*a, *s}};
            }
            case ConstraintCategory::ParameterInfluencedDataValues: {
                auto s = selection_from_json(j["antecedent"]);
                auto a = arith_from_json(j["consequent"]);
                if (!a || !s) return std::nullopt;
                return Constraint{ParamInfluencedDataConstraint{*s, *a}};
            }
            default:
                return std::nullopt;
        }
    } catch (const json::exception&) {
        return std::nullopt;
    }
}

std::string describe(const Constraint& c) {
    return to_json(c).dump();
}

}  // namespace restref
