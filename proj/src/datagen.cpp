#include "restref/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

namespace restref {

const char* to_string(ValueSource s) {
    switch (s) {
        case ValueSource::SpecExample: return "spec-example";
        case ValueSource::RealisticProvider: return "realistic-provider";
        case ValueSource::Solver: return "solver";
        case ValueSource::Random: return "random";
    }
    return "?";
}

bool selection_holds(const ParamSelection& sel, const ParameterScenario& scenario) {
    auto present = [&](const std::string& id) { return scenario.contains(id); };
    if (auto* p = std::get_if<ParamPresence>(&sel)) return present(p->param_id) == p->present;
    if (auto* o = std::get_if<OrConstraint>(&sel))
        return std::any_of(o->param_ids.begin(), o->param_ids.end(), present);
    if (auto* o = std::get_if<OneConstraint>(&sel))
        return std::count_if(o->param_ids.begin(), o->param_ids.end(), present) == 1;
    if (auto* o = std::get_if<AllOrNoneConstraint>(&sel)) {
        auto n = std::count_if(o->param_ids.begin(), o->param_ids.end(), present);
        return n == 0 || n == static_cast<long>(o->param_ids.size());
    }
    if (auto* c = std::get_if<ConditionalRequiredConstraint>(&sel)) {
        if (present(c->p2_id) != c->p2_present) return true;
        return present(c->p1_id) == c->p1_present;
    }
    return present(std::get<AdditionalMandatoryConstraint>(sel).param_id);
}

namespace {

bool all_selected(const std::vector<std::string>& ids, const ParameterScenario& s) {
    return std::all_of(ids.begin(), ids.end(),
                       [&](const std::string& id) { return s.contains(id); });
}

std::vector<std::string> arith_ids(const DataArithmeticConstraint& c) {
    std::vector<std::string> ids{c.lhs_param_id};
    if (auto* r = std::get_if<ParamRef>(&c.rhs)) ids.push_back(r->param_id);
    return ids;
}

}  // namespace

std::vector<DataConstraint> gather_data_constraints(const ParameterScenario& scenario,
                                                    const Operation& op) {
    std::vector<DataConstraint> out;
    for (const auto& c : op.local_constraints) {
        if (auto* a = std::get_if<DataArithmeticConstraint>(&c)) {
            if (all_selected(arith_ids(*a), scenario)) out.push_back(*a);
        } else if (auto* n = std::get_if<DataNonArithmeticConstraint>(&c)) {
            if (scenario.contains(n->param_id)) out.push_back(*n);
        } else if (auto* pid = std::get_if<ParamInfluencedDataConstraint>(&c)) {
            if (selection_holds(pid->antecedent, scenario) &&
                all_selected(arith_ids(pid->consequent), scenario))
                out.push_back(pid->consequent);
        } else if (auto* dis = std::get_if<DataInfluencedSelectionConstraint>(&c)) {
            if (selection_holds(dis->consequent, scenario) &&
                all_selected(arith_ids(dis->antecedent), scenario))
                out.push_back(dis->antecedent);
        }
    }
    // Value-range facts from the spec itself ride along as constraints too.
    return out;
}

namespace {

std::optional<double> as_number(const nlohmann::json& v) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        try {
            std::size_t pos = 0;
            const auto& s = v.get_ref<const std::string&>();
            double d = std::stod(s, &pos);
            if (pos == s.size()) return d;
        } catch (...) {
        }
    }
    return std::nullopt;
}

std::string as_string(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

bool rel_holds(RelOp op, double a, double b) {
    switch (op) {
        case RelOp::Lt: return a < b;
        case RelOp::Le: return a <= b;
        case RelOp::Gt: return a > b;
        case RelOp::Ge: return a >= b;
        case RelOp::Eq: return a == b;
        case RelOp::Ne: return a != b;
    }
    return false;
}

bool looks_like_email(const std::string& s) {
    auto at = s.find('@');
    return at != std::string::npos && at > 0 && s.find('.', at) != std::string::npos;
}

bool looks_like_ipv4(const std::string& s) {
    int dots = 0;
    for (char c : s) {
        if (c == '.') ++dots;
        else if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return dots == 3;
}

bool looks_like_datetime(const std::string& s) {
    // yyyy-mm-dd at minimum
    return s.size() >= 10 && std::isdigit((unsigned char)s[0]) && s[4] == '-' && s[7] == '-';
}

bool format_matches(const std::string& format, const std::string& value) {
    if (format == "email") return looks_like_email(value);
    if (format == "ipv4") return looks_like_ipv4(value);
    if (format == "date-time" || format == "date") return looks_like_datetime(value);
    return !value.empty();
}

bool constraint_holds(const DataConstraint& c,
                      const std::map<std::string, nlohmann::json>& a) {
    if (auto* arith = std::get_if<DataArithmeticConstraint>(&c)) {
        auto lhs_it = a.find(arith->lhs_param_id);
        if (lhs_it == a.end()) return true;  // vacuous
        if (auto* ref = std::get_if<ParamRef>(&arith->rhs)) {
            auto rhs_it = a.find(ref->param_id);
            if (rhs_it == a.end()) return true;
            auto ln = as_number(lhs_it->second), rn = as_number(rhs_it->second);
            if (ln && rn) return rel_holds(arith->op, *ln, *rn);
            if (arith->op == RelOp::Eq) return lhs_it->second == rhs_it->second;
            if (arith->op == RelOp::Ne) return lhs_it->second != rhs_it->second;
            return false;
        }
        if (auto* num = std::get_if<double>(&arith->rhs)) {
            auto ln = as_number(lhs_it->second);
            return ln && rel_holds(arith->op, *ln, *num);
        }
        if (auto* str = std::get_if<std::string>(&arith->rhs)) {
            if (arith->op == RelOp::Eq) return as_string(lhs_it->second) == *str;
            if (arith->op == RelOp::Ne) return as_string(lhs_it->second) != *str;
            auto ln = as_number(lhs_it->second), rn = as_number(nlohmann::json(*str));
            return ln && rn && rel_holds(arith->op, *ln, *rn);
        }
        auto& list = std::get<std::vector<std::string>>(arith->rhs);
        bool in = std::find(list.begin(), list.end(), as_string(lhs_it->second)) != list.end();
        return arith->op == RelOp::Ne ? !in : in;
    }
    auto& na = std::get<DataNonArithmeticConstraint>(c);
    auto it = a.find(na.param_id);
    if (it == a.end()) return true;
    std::string v = as_string(it->second);
    switch (na.property) {
        case DataProperty::Categorical:
            return std::find(na.values.begin(), na.values.end(), v) != na.values.end();
        case DataProperty::Unique:
            return !v.empty();  // freshness comes from the salted generator
        case DataProperty::Format:
            return format_matches(na.values.empty() ? "" : na.values.front(), v);
    }
    return true;
}

}  // namespace

bool data_satisfies(const std::map<std::string, nlohmann::json>& assignment,
                    const std::vector<DataConstraint>& constraints) {
    return std::all_of(constraints.begin(), constraints.end(),
                       [&](const DataConstraint& c) { return constraint_holds(c, assignment); });
}

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
}

std::uint64_t key_of(const DataGenOptions& opt, const std::string& op, const std::string& param,
                     int k) {
    std::uint64_t h = opt.seed;
    h = mix(h, opt.salt);
    h = mix(h, std::hash<std::string>{}(op));
    h = mix(h, std::hash<std::string>{}(param));
    h = mix(h, static_cast<std::uint64_t>(k));
    return h;
}

// Name-keyed realistic dictionaries. Deliberately narrow: a name that is not
// recognized falls back to a synthetic token, so unsupported values get sent
// (and the resulting 4xx teaches the categorical constraint).
const std::map<std::string, std::vector<std::string>, std::less<>> kNameDictionary = {
    {"city", {"pune", "london", "boston", "madrid"}},
    {"country", {"india", "france", "japan", "brazil"}},
    {"name", {"alice", "bob", "carol", "dave"}},
    {"username", {"alice", "bob", "carol", "dave"}},
    {"firstname", {"alice", "bob", "carol", "dave"}},
    {"lastname", {"stone", "rivera", "patel", "kim"}},
    {"email", {"alice@example.com", "bob@example.com"}},
    {"phone", {"555-0100", "555-0101"}},
    {"street", {"1 main st", "22 oak ave"}},
    {"state", {"ca", "ma", "wa"}},
};

std::string last_name_segment(const std::string& pname) {
    auto pos = pname.rfind('.');
    std::string leaf = pos == std::string::npos ? pname : pname.substr(pos + 1);
    std::transform(leaf.begin(), leaf.end(), leaf.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return leaf;
}

nlohmann::json provider_value(const InputParameter& p, std::uint64_t key) {
    std::mt19937_64 rng(key);
    if (!p.pc.enum_values.empty())
        return p.pc.enum_values[rng() % p.pc.enum_values.size()];
    if (p.ptype == "integer" || p.ptype == "number") {
        double lo = p.pc.minimum.value_or(0), hi = p.pc.maximum.value_or(1000);
        if (lo > hi) std::swap(lo, hi);
        double v = lo + static_cast<double>(rng() % 1001) / 1000.0 * (hi - lo);
        if (p.ptype == "integer") return static_cast<long long>(std::llround(v));
        return v;
    }
    if (p.ptype == "boolean") return rng() % 2 == 0;
    if (p.ptype == "array") return nlohmann::json::array({"item-" + std::to_string(rng() % 100)});
    if (p.ptype == "object") return nlohmann::json::object();
    // strings: format first, then the name dictionary, then a synthetic token
    std::string fmt = p.pc.format.value_or("");
    if (fmt == "email") return "user" + std::to_string(rng() % 90 + 10) + "@example.com";
    if (fmt == "ipv4")
        return std::to_string(rng() % 223 + 1) + "." + std::to_string(rng() % 255) + "." +
               std::to_string(rng() % 255) + "." + std::to_string(rng() % 255);
    if (fmt == "date-time")
        return "2026-0" + std::to_string(rng() % 9 + 1) + "-1" + std::to_string(rng() % 9) +
               "T12:00:00Z";
    if (fmt == "date") return "2026-0" + std::to_string(rng() % 9 + 1) + "-10";
    if (fmt == "uuid") {
        char buf[37];
        std::snprintf(buf, sizeof buf, "%08llx-%04llx-4%03llx-8%03llx-%012llx",
                      (unsigned long long)(rng() & 0xffffffff), (unsigned long long)(rng() & 0xffff),
                      (unsigned long long)(rng() & 0xfff), (unsigned long long)(rng() & 0xfff),
                      (unsigned long long)(rng() & 0xffffffffffffull));
        return std::string(buf);
    }
    std::string leaf = last_name_segment(p.pname);
    if (auto it = kNameDictionary.find(leaf); it != kNameDictionary.end())
        return it->second[rng() % it->second.size()];
    return leaf + "-" + std::to_string(rng() % 900 + 100);
}

// Rewrites values so the failing constraints hold. Best-effort, iterated by
// the caller.
void repair(std::map<std::string, nlohmann::json>& a, const DataConstraint& c,
            std::map<std::string, ValueSource>& prov, std::uint64_t key) {
    std::mt19937_64 rng(key);
    if (auto* arith = std::get_if<DataArithmeticConstraint>(&c)) {
        auto lhs = a.find(arith->lhs_param_id);
        if (lhs == a.end()) return;
        auto set_lhs = [&](nlohmann::json v) {
            lhs->second = std::move(v);
            prov[arith->lhs_param_id] = ValueSource::Solver;
        };
        if (auto* num = std::get_if<double>(&arith->rhs)) {
            switch (arith->op) {
                case RelOp::Lt: set_lhs(*num - 1); break;
                case RelOp::Le: set_lhs(*num); break;
                case RelOp::Gt: set_lhs(*num + 1); break;
                case RelOp::Ge: set_lhs(*num); break;
                case RelOp::Eq: set_lhs(*num); break;
                case RelOp::Ne: set_lhs(*num + 1); break;
            }
            if (lhs->second.is_number_float() &&
                lhs->second.get<double>() == std::floor(lhs->second.get<double>()))
                lhs->second = static_cast<long long>(lhs->second.get<double>());
            return;
        }
        if (auto* str = std::get_if<std::string>(&arith->rhs)) {
            if (arith->op == RelOp::Ne)
                set_lhs(*str + "-x");
            else
                set_lhs(*str);
            return;
        }
        if (auto* list = std::get_if<std::vector<std::string>>(&arith->rhs)) {
            if (!list->empty()) set_lhs((*list)[rng() % list->size()]);
            return;
        }
        auto& ref = std::get<ParamRef>(arith->rhs);
        auto rhs = a.find(ref.param_id);
        if (rhs == a.end()) return;
        auto rn = as_number(rhs->second);
        if (!rn) {
            if (arith->op == RelOp::Eq) set_lhs(rhs->second);
            if (arith->op == RelOp::Ne) set_lhs(as_string(rhs->second) + "-x");
            return;
        }
        switch (arith->op) {
            case RelOp::Lt: set_lhs(*rn - 1); break;
            case RelOp::Le: set_lhs(*rn); break;
            case RelOp::Gt: set_lhs(*rn + 1); break;
            case RelOp::Ge: set_lhs(*rn); break;
            case RelOp::Eq: set_lhs(*rn); break;
            case RelOp::Ne: set_lhs(*rn + 1); break;
        }
        return;
    }
    auto& na = std::get<DataNonArithmeticConstraint>(c);
    auto it = a.find(na.param_id);
    if (it == a.end()) return;
    switch (na.property) {
        case DataProperty::Categorical:
            if (!na.values.empty()) {
                it->second = na.values[rng() % na.values.size()];
                prov[na.param_id] = ValueSource::Solver;
            }
            break;
        case DataProperty::Unique:
            it->second = as_string(it->second) + "-" + std::to_string(rng() % 100000);
            prov[na.param_id] = ValueSource::Solver;
            break;
        case DataProperty::Format: {
            std::string fmt = na.values.empty() ? "" : na.values.front();
            InputParameter tmp;
            tmp.pname = na.param_id;
            tmp.ptype = "string";
            tmp.pc.format = fmt;
            it->second = provider_value(tmp, rng());
            prov[na.param_id] = ValueSource::Solver;
            break;
        }
    }
}

// A unique-property parameter gets a salt-distinguished suffix so repeated
// runs do not collide server-side.
void apply_uniqueness(std::map<std::string, nlohmann::json>& a,
                      const std::vector<DataConstraint>& constraints,
                      const DataGenOptions& opt, const std::string& op, int k) {
    for (const auto& c : constraints) {
        auto* na = std::get_if<DataNonArithmeticConstraint>(&c);
        if (!na || na->property != DataProperty::Unique) continue;
        auto it = a.find(na->param_id);
        if (it == a.end()) continue;
        it->second = as_string(it->second) + "-" +
                     std::to_string(key_of(opt, op, na->param_id, k) % 1000000);
    }
}

}  // namespace

std::vector<DataScenario> generate_data(const ParameterScenario& scenario, const Operation& op,
                                        const std::vector<DataConstraint>& constraints,
                                        const DataGenOptions& options) {
    std::vector<DataScenario> out;
    auto active = constraints;
    bool retried = false;

    for (int k = 0; k < options.k; ++k) {
        DataScenario ds;
        ds.target_op = scenario.target_op;
        for (const auto& id : scenario.selected) {
            const InputParameter* p = op.find_input(id);
            if (!p) continue;
            std::uint64_t key = key_of(options, op.opname, id, k);
            nlohmann::json value;
            ValueSource src = ValueSource::RealisticProvider;
            bool placed = false;
            if (!p->examples.empty()) {
                // spec example, if compatible with the active constraints
                const auto& ex = p->examples[static_cast<std::size_t>(k) % p->examples.size()];
                std::map<std::string, nlohmann::json> trial = ds.assignment;
                trial[id] = ex;
                if (data_satisfies(trial, active)) {
                    value = ex;
                    src = ValueSource::SpecExample;
                    placed = true;
                }
            }
            if (!placed) value = provider_value(*p, key);
            ds.assignment[id] = value;
            ds.provenance[id] = src;
        }

        // constraint repair passes
        for (int pass = 0; pass < 4 && !data_satisfies(ds.assignment, active); ++pass) {
            for (const auto& c : active)
                if (!constraint_holds(c, ds.assignment))
                    repair(ds.assignment, c, ds.provenance,
                           key_of(options, op.opname, "repair", k * 10 + pass));
        }
        if (!data_satisfies(ds.assignment, active)) {
            if (!retried && !active.empty()) {
                // quarantine the newest constraint and redo this scenario once
                active.pop_back();
                retried = true;
                --k;
                continue;
            }
            throw UnsatisfiableData("contradictory data constraints for " + op.opname);
        }
        apply_uniqueness(ds.assignment, active, options, op.opname, k);

        bool duplicate = std::any_of(out.begin(), out.end(), [&](const DataScenario& other) {
            return other.assignment == ds.assignment;
        });
        if (!duplicate) out.push_back(std::move(ds));
    }
    return out;
}

}  // namespace restref
