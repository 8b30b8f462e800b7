#include "restref/selection.hpp"

#include <algorithm>
#include <bit>
#include <set>

namespace restref {

int SelectionProblem::var_index(const std::string& param_id) const {
    for (std::size_t i = 0; i < vars.size(); ++i)
        if (vars[i].param_id == param_id) return static_cast<int>(i);
    return -1;
}

bool ParameterScenario::contains(const std::string& param_id) const {
    return std::binary_search(selected.begin(), selected.end(), param_id);
}

bool clause_satisfied(const SelectionClause& c, const std::vector<bool>& a) {
    if (auto* u = std::get_if<UnitClause>(&c)) return a[u->var] == u->value;
    if (auto* imp = std::get_if<ImplicationClause>(&c)) return !a[imp->if_var] || a[imp->then_var];
    if (auto* o = std::get_if<OrClauseEnc>(&c)) {
        bool triggered = std::any_of(o->triggers.begin(), o->triggers.end(),
                                     [&](int v) { return a[v]; });
        if (!triggered) return true;
        return std::any_of(o->targets.begin(), o->targets.end(), [&](int v) { return a[v]; });
    }
    if (auto* one = std::get_if<OneClauseEnc>(&c)) {
        int count = 0;
        for (int v : one->vars) count += a[v] ? 1 : 0;
        return count <= 1;
    }
    if (auto* an = std::get_if<AllOrNoneClauseEnc>(&c)) {
        int count = 0;
        for (int v : an->vars) count += a[v] ? 1 : 0;
        return count == 0 || count == static_cast<int>(an->vars.size());
    }
    auto& cond = std::get<CondClauseEnc>(c);
    if (a[cond.p2] != cond.b2) return true;
    return a[cond.p1] == cond.b1;
}

bool assignment_admissible(const SelectionProblem& p, const std::vector<bool>& a) {
    for (const auto& c : p.base)
        if (!clause_satisfied(c, a)) return false;
    for (const auto& alt : p.alternatives) {
        bool ok = std::all_of(alt.begin(), alt.end(),
                              [&](const SelectionClause& c) { return clause_satisfied(c, a); });
        if (ok) return true;
    }
    return p.alternatives.empty();
}

namespace {

// Translation of one parameter-selection constraint into clauses. Unresolved
// ids (e.g. quarantined parameters) make the translation empty.
std::vector<SelectionClause> selection_clauses(const ParamSelection& s,
                                               const SelectionProblem& p,
                                               const std::vector<int>& optional_vars) {
    std::vector<SelectionClause> out;
    auto idx = [&](const std::string& id) { return p.var_index(id); };
    if (auto* pr = std::get_if<ParamPresence>(&s)) {
        int v = idx(pr->param_id);
        if (v >= 0) out.push_back(UnitClause{v, pr->present});
    } else if (auto* o = std::get_if<OrConstraint>(&s)) {
        OrClauseEnc enc;
        enc.triggers = optional_vars;
        for (const auto& id : o->param_ids)
            if (int v = idx(id); v >= 0) enc.targets.push_back(v);
        if (enc.targets.size() >= 2) out.push_back(enc);
    } else if (auto* o = std::get_if<OneConstraint>(&s)) {
        OneClauseEnc enc;
        for (const auto& id : o->param_ids)
            if (int v = idx(id); v >= 0) enc.vars.push_back(v);
        if (enc.vars.size() >= 2) out.push_back(enc);
    } else if (auto* o = std::get_if<AllOrNoneConstraint>(&s)) {
        AllOrNoneClauseEnc enc;
        for (const auto& id : o->param_ids)
            if (int v = idx(id); v >= 0) enc.vars.push_back(v);
        if (enc.vars.size() >= 2) out.push_back(enc);
    } else if (auto* c = std::get_if<ConditionalRequiredConstraint>(&s)) {
        int p1 = idx(c->p1_id), p2 = idx(c->p2_id);
        if (p1 >= 0 && p2 >= 0) out.push_back(CondClauseEnc{p1, c->p1_present, p2, c->p2_present});
    } else if (auto* m = std::get_if<AdditionalMandatoryConstraint>(&s)) {
        int v = idx(m->param_id);
        if (v >= 0) out.push_back(UnitClause{v, true});
    }
    return out;
}

std::vector<std::string> arith_param_ids(const DataArithmeticConstraint& d) {
    std::vector<std::string> out{d.lhs_param_id};
    if (auto* r = std::get_if<ParamRef>(&d.rhs)) out.push_back(r->param_id);
    return out;
}

}  // namespace

SelectionProblem encode_selection_constraints(const Operation& op) {
    SelectionProblem p;
    p.opname = op.opname;
    for (const auto& param : op.inputs) {
        if (param.tombstoned) continue;
        p.vars.push_back(SelectionVar{param.id, param.is_required});
    }

    std::vector<int> optional_vars;
    for (std::size_t i = 0; i < p.vars.size(); ++i) {
        if (p.vars[i].mandatory)
            p.base.push_back(UnitClause{static_cast<int>(i), true});
        else
            optional_vars.push_back(static_cast<int>(i));
    }

    // Schema nesting: an optional field at 1 forces the mandatory siblings of
    // its immediate schema to 1.
    for (const auto& param : op.inputs) {
        if (param.tombstoned || param.is_required || param.parent_path.empty()) continue;
        int self = p.var_index(param.id);
        if (self < 0) continue;
        for (const auto& sibling : op.inputs) {
            if (sibling.tombstoned || sibling.id == param.id) continue;
            if (sibling.parent_path != param.parent_path || sibling.loc != param.loc) continue;
            if (!sibling.required_in_parent) continue;
            int other = p.var_index(sibling.id);
            if (other >= 0) p.base.push_back(ImplicationClause{self, other});
        }
    }

    for (const auto& c : op.local_constraints) {
        if (auto* o = std::get_if<OrConstraint>(&c)) {
            auto clauses = selection_clauses(ParamSelection{*o}, p, optional_vars);
            p.base.insert(p.base.end(), clauses.begin(), clauses.end());
        } else if (auto* o = std::get_if<OneConstraint>(&c)) {
            auto clauses = selection_clauses(ParamSelection{*o}, p, optional_vars);
            p.base.insert(p.base.end(), clauses.begin(), clauses.end());
        } else if (auto* o = std::get_if<AllOrNoneConstraint>(&c)) {
            auto clauses = selection_clauses(ParamSelection{*o}, p, optional_vars);
            p.base.insert(p.base.end(), clauses.begin(), clauses.end());
        } else if (auto* cc = std::get_if<ConditionalRequiredConstraint>(&c)) {
            auto clauses = selection_clauses(ParamSelection{*cc}, p, optional_vars);
            p.base.insert(p.base.end(), clauses.begin(), clauses.end());
        } else if (auto* m = std::get_if<AdditionalMandatoryConstraint>(&c)) {
            auto clauses = selection_clauses(ParamSelection{*m}, p, optional_vars);
            p.base.insert(p.base.end(), clauses.begin(), clauses.end());
        } else if (auto* n = std::get_if<DataInfluencedSelectionConstraint>(&c)) {
            // Two alternative worlds: the consequent holds with the
            // antecedent's parameters forced present, or the constraint is
            // omitted entirely.
            std::vector<SelectionClause> with;
            for (const auto& id : arith_param_ids(n->antecedent))
                if (int v = p.var_index(id); v >= 0) with.push_back(UnitClause{v, true});
            auto cons = selection_clauses(n->consequent, p, optional_vars);
            with.insert(with.end(), cons.begin(), cons.end());

            std::vector<std::vector<SelectionClause>> expanded;
            for (const auto& alt : p.alternatives) {
                auto extended = alt;
                extended.insert(extended.end(), with.begin(), with.end());
                expanded.push_back(std::move(extended));
                expanded.push_back(alt);  // world without the constraint
            }
            p.alternatives = std::move(expanded);
        }
        // DataArithmetic / DataNonArithmetic / ParameterInfluencedDataValues
        // shape data scenarios, not selection.
    }
    return p;
}

namespace {

// Tri-valued feasibility: can a partial assignment (-1 unknown) still be
// completed to satisfy the clause? Sound, not necessarily tight.
bool clause_feasible(const SelectionClause& c, const std::vector<signed char>& a) {
    if (auto* u = std::get_if<UnitClause>(&c))
        return a[u->var] == -1 || (a[u->var] == 1) == u->value;
    if (auto* imp = std::get_if<ImplicationClause>(&c))
        return !(a[imp->if_var] == 1 && a[imp->then_var] == 0);
    if (auto* o = std::get_if<OrClauseEnc>(&c)) {
        bool triggered = std::any_of(o->triggers.begin(), o->triggers.end(),
                                     [&](int v) { return a[v] == 1; });
        if (!triggered) return true;
        return std::any_of(o->targets.begin(), o->targets.end(), [&](int v) { return a[v] != 0; });
    }
    if (auto* one = std::get_if<OneClauseEnc>(&c)) {
        int count = 0;
        for (int v : one->vars) count += a[v] == 1 ? 1 : 0;
        return count <= 1;
    }
    if (auto* an = std::get_if<AllOrNoneClauseEnc>(&c)) {
        bool some_on = false, some_off = false;
        for (int v : an->vars) {
            if (a[v] == 1) some_on = true;
            if (a[v] == 0) some_off = true;
        }
        return !(some_on && some_off);
    }
    auto& cond = std::get<CondClauseEnc>(c);
    if (a[cond.p2] == -1 || a[cond.p1] == -1) return true;
    if ((a[cond.p2] == 1) != cond.b2) return true;
    return (a[cond.p1] == 1) == cond.b1;
}

struct AltSearch {
    const SelectionProblem& problem;
    const std::vector<SelectionClause>& alt;

    bool feasible(const std::vector<signed char>& partial) const {
        for (const auto& c : problem.base)
            if (!clause_feasible(c, partial)) return false;
        for (const auto& c : alt)
            if (!clause_feasible(c, partial)) return false;
        return true;
    }

    bool satisfied(const std::vector<bool>& full) const {
        for (const auto& c : problem.base)
            if (!clause_satisfied(c, full)) return false;
        for (const auto& c : alt)
            if (!clause_satisfied(c, full)) return false;
        return true;
    }

    // Branch-and-bound for an extreme-cardinality solution; forced_var (if
    // any) is pinned to 1.
    std::optional<std::vector<bool>> extreme(bool maximize, int forced_var) const {
        const int n = static_cast<int>(problem.size());
        std::vector<signed char> partial(n, -1);
        if (forced_var >= 0) partial[forced_var] = 1;
        std::optional<std::vector<bool>> best;
        int best_card = maximize ? -1 : n + 1;

        std::function<void(int, int)> dfs = [&](int var, int count) {
            if (!feasible(partial)) return;
            if (var == n) {
                std::vector<bool> full(n);
                for (int i = 0; i < n; ++i) full[i] = partial[i] == 1;
                if (!satisfied(full)) return;
                if ((maximize && count > best_card) || (!maximize && count < best_card)) {
                    best_card = count;
                    best = full;
                }
                return;
            }
            if (maximize && count + (n - var) <= best_card) return;
            if (!maximize && count >= best_card) return;
            if (partial[var] != -1) {
                dfs(var + 1, count + (partial[var] == 1 ? 1 : 0));
                return;
            }
            // explore the branch matching the objective first
            signed char order[2] = {maximize ? (signed char)1 : (signed char)0,
                                    maximize ? (signed char)0 : (signed char)1};
            for (signed char v : order) {
                partial[var] = v;
                dfs(var + 1, count + (v == 1 ? 1 : 0));
                partial[var] = -1;
            }
        };
        dfs(0, forced_var >= 0 ? 1 : 0);
        // forced var counted once dfs reaches it; recompute not needed since
        // count tracks assigned ones as we pass them
        return best;
    }

    // All solutions with exactly `card` selected, up to `limit`.
    void enumerate_cardinality(int card, std::size_t limit,
                               std::vector<std::vector<bool>>& out) const {
        const int n = static_cast<int>(problem.size());
        std::vector<signed char> partial(n, -1);
        std::function<void(int, int)> dfs = [&](int var, int count) {
            if (out.size() >= limit) return;
            if (count > card) return;
            if (count + (n - var) < card) return;
            if (!feasible(partial)) return;
            if (var == n) {
                std::vector<bool> full(n);
                for (int i = 0; i < n; ++i) full[i] = partial[i] == 1;
                if (count == card && satisfied(full)) out.push_back(full);
                return;
            }
            for (signed char v : {(signed char)1, (signed char)0}) {
                partial[var] = v;
                dfs(var + 1, count + (v == 1 ? 1 : 0));
                partial[var] = -1;
            }
        };
        dfs(0, 0);
    }
};

std::vector<std::string> selected_ids(const SelectionProblem& p, const std::vector<bool>& a) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i]) out.push_back(p.vars[i].param_id);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

std::vector<ParameterScenario> solve_parameter_scenarios(const SelectionProblem& problem,
                                                         bool is_prerequisite,
                                                         const SolveOptions& options) {
    const std::size_t n = problem.size();

    std::vector<bool> mandatory_only(n, false);
    for (std::size_t i = 0; i < n; ++i) mandatory_only[i] = problem.vars[i].mandatory;
    if (!assignment_admissible(problem, mandatory_only))
        throw InfeasibleMandatory("all-mandatory assignment violates the learned constraints for " +
                                  problem.opname);

    if (is_prerequisite) {
        ParameterScenario s;
        s.target_op = problem.opname;
        s.selected = selected_ids(problem, mandatory_only);
        s.kind = ScenarioKind::Minimal;
        return {s};
    }

    // The full satisfying set, as sorted selected-id vectors.
    std::vector<std::vector<std::string>> sat;
    if (n <= options.enumeration_limit) {
        const std::uint64_t total = std::uint64_t{1} << n;
        for (std::uint64_t mask = 0; mask < total; ++mask) {
            std::vector<bool> a(n);
            for (std::size_t i = 0; i < n; ++i) a[i] = (mask >> i) & 1;
            if (assignment_admissible(problem, a)) sat.push_back(selected_ids(problem, a));
        }
    } else {
        // Branch-and-bound per alternative: extremes plus the maximal layer.
        std::set<std::vector<std::string>> pool;
        int global_max = -1;
        for (const auto& alt : problem.alternatives) {
            AltSearch search{problem, alt};
            if (auto best = search.extreme(true, -1)) {
                int card = static_cast<int>(std::count(best->begin(), best->end(), true));
                global_max = std::max(global_max, card);
            }
        }
        for (const auto& alt : problem.alternatives) {
            AltSearch search{problem, alt};
            std::vector<std::vector<bool>> layer;
            if (global_max >= 0)
                search.enumerate_cardinality(global_max, options.max_maximal * 4, layer);
            for (const auto& a : layer) pool.insert(selected_ids(problem, a));
            if (auto best = search.extreme(false, -1)) pool.insert(selected_ids(problem, *best));
            for (std::size_t i = 0; i < n; ++i) {
                if (problem.vars[i].mandatory) continue;
                if (auto best = search.extreme(false, static_cast<int>(i)))
                    pool.insert(selected_ids(problem, *best));
            }
        }
        sat.assign(pool.begin(), pool.end());
    }
    if (sat.empty()) return {};

    std::sort(sat.begin(), sat.end());
    sat.erase(std::unique(sat.begin(), sat.end()), sat.end());

    std::size_t max_card = 0, min_card = n + 1;
    for (const auto& s : sat) {
        max_card = std::max(max_card, s.size());
        min_card = std::min(min_card, s.size());
    }

    std::vector<ParameterScenario> out;
    auto push_unique = [&](std::vector<std::string> ids, ScenarioKind kind) {
        for (const auto& existing : out)
            if (existing.selected == ids) return;
        out.push_back(ParameterScenario{problem.opname, std::move(ids), kind});
    };

    // (a) maximal-cardinality scenarios, lexicographic order, capped
    std::vector<std::vector<std::string>> maximal;
    for (const auto& s : sat)
        if (s.size() == max_card) maximal.push_back(s);
    std::sort(maximal.begin(), maximal.end());
    for (std::size_t i = 0; i < maximal.size() && i < options.max_maximal; ++i)
        push_unique(maximal[i], ScenarioKind::Maximal);

    // (b) one minimal-cardinality scenario (lexicographically first)
    std::vector<std::string> minimal;
    bool have_minimal = false;
    for (const auto& s : sat) {
        if (s.size() != min_card) continue;
        if (!have_minimal || s < minimal) {
            minimal = s;
            have_minimal = true;
        }
    }
    if (have_minimal) push_unique(minimal, ScenarioKind::Minimal);

    // (c) a minimal scenario covering each not-yet-covered optional parameter
    for (const auto& var : problem.vars) {
        if (var.mandatory) continue;
        bool covered = std::any_of(out.begin(), out.end(), [&](const ParameterScenario& s) {
            return s.contains(var.param_id);
        });
        if (covered) continue;
        std::vector<std::string> best;
        bool found = false;
        for (const auto& s : sat) {
            if (!std::binary_search(s.begin(), s.end(), var.param_id)) continue;
            if (!found || s.size() < best.size() || (s.size() == best.size() && s < best)) {
                best = s;
                found = true;
            }
        }
        if (found) push_unique(best, ScenarioKind::OptionalCovering);
    }
    return out;
}

}  // namespace restref
