#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "restref/selection.hpp"

using namespace restref;

namespace {

std::vector<std::string> ids_of(const SelectionProblem& p, const std::vector<bool>& a) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i]) out.push_back(p.vars[i].param_id);
    std::sort(out.begin(), out.end());
    return out;
}

// Brute-force reference: enumerate every assignment, then apply the pinned
// filtering rules (maximal layer capped + one minimal + optional covering).
std::vector<ParameterScenario> oracle_scenarios(const SelectionProblem& problem,
                                                const SolveOptions& opt = {}) {
    const std::size_t n = problem.size();
    std::vector<std::vector<std::string>> sat;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        std::vector<bool> a(n);
        for (std::size_t i = 0; i < n; ++i) a[i] = (mask >> i) & 1;
        if (assignment_admissible(problem, a)) sat.push_back(ids_of(problem, a));
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
    auto push = [&](const std::vector<std::string>& ids, ScenarioKind kind) {
        for (const auto& e : out)
            if (e.selected == ids) return;
        out.push_back(ParameterScenario{problem.opname, ids, kind});
    };

    std::size_t emitted = 0;
    for (const auto& s : sat) {  // sat is sorted, so this walks lexicographically
        if (s.size() != max_card) continue;
        if (emitted++ >= opt.max_maximal) break;
        push(s, ScenarioKind::Maximal);
    }
    for (const auto& s : sat)
        if (s.size() == min_card) {
            push(s, ScenarioKind::Minimal);
            break;
        }
    for (const auto& var : problem.vars) {
        if (var.mandatory) continue;
        bool covered = false;
        for (const auto& e : out) covered = covered || e.contains(var.param_id);
        if (covered) continue;
        const std::vector<std::string>* best = nullptr;
        for (const auto& s : sat) {
            if (!std::binary_search(s.begin(), s.end(), var.param_id)) continue;
            if (!best || s.size() < best->size()) best = &s;
        }
        if (best) push(*best, ScenarioKind::OptionalCovering);
    }
    return out;
}

SelectionProblem random_problem(std::mt19937& rng) {
    SelectionProblem p;
    p.opname = "randomOp";
    std::uniform_int_distribution<int> nd(1, 12);
    const int n = nd(rng);
    std::uniform_int_distribution<int> coin(0, 9);
    for (int i = 0; i < n; ++i) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "randomop.query.p%02d", i);
        bool mandatory = coin(rng) < 3;
        p.vars.push_back(SelectionVar{buf, mandatory});
        if (mandatory) p.base.push_back(UnitClause{i, true});
    }
    auto pick = [&] { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
    auto subset = [&](std::size_t min_size) {
        min_size = std::min<std::size_t>(min_size, static_cast<std::size_t>(n));
        std::vector<int> vs;
        for (int i = 0; i < n; ++i)
            if (coin(rng) < 4) vs.push_back(i);
        while (vs.size() < min_size) {
            int v = pick();
            if (std::find(vs.begin(), vs.end(), v) == vs.end()) vs.push_back(v);
        }
        return vs;
    };
    auto random_clause = [&]() -> SelectionClause {
        switch (std::uniform_int_distribution<int>(0, 4)(rng)) {
            case 0: return ImplicationClause{pick(), pick()};
            case 1: return OrClauseEnc{subset(1), subset(1)};
            case 2: return OneClauseEnc{subset(2)};
            case 3: return AllOrNoneClauseEnc{subset(2)};
            default: return CondClauseEnc{pick(), coin(rng) < 5, pick(), coin(rng) < 5};
        }
    };
    int extra = std::uniform_int_distribution<int>(0, 4)(rng);
    for (int i = 0; i < extra; ++i) p.base.push_back(random_clause());

    if (coin(rng) < 3) {
        // alternative split, as a data-influenced selection constraint makes it
        std::vector<SelectionClause> with{UnitClause{pick(), true}, random_clause()};
        std::vector<std::vector<SelectionClause>> expanded;
        for (const auto& alt : p.alternatives) {
            auto ext = alt;
            ext.insert(ext.end(), with.begin(), with.end());
            expanded.push_back(ext);
            expanded.push_back(alt);
        }
        p.alternatives = std::move(expanded);
    }
    return p;
}

Operation three_param_op() {
    Operation op;
    op.opname = "probe";
    op.path = "/probe";
    for (const char* name : {"p1", "p2", "p3"}) {
        InputParameter p;
        p.pname = name;
        p.ptype = "string";
        p.loc = ParamLoc::Query;
        p.id = SpecModel::make_param_id("probe", ParamLoc::Query, name);
        op.inputs.push_back(p);
    }
    return op;
}

}  // namespace

TEST_CASE("clause semantics") {
    std::vector<bool> a{true, false, true};
    CHECK(clause_satisfied(UnitClause{0, true}, a));
    CHECK_FALSE(clause_satisfied(UnitClause{1, true}, a));
    CHECK(clause_satisfied(ImplicationClause{1, 0}, a));   // false antecedent
    CHECK(clause_satisfied(ImplicationClause{0, 2}, a));
    CHECK_FALSE(clause_satisfied(ImplicationClause{0, 1}, a));
    CHECK(clause_satisfied(OrClauseEnc{{1}, {1}}, a));     // not triggered
    CHECK(clause_satisfied(OrClauseEnc{{0}, {2}}, a));
    CHECK_FALSE(clause_satisfied(OrClauseEnc{{0}, {1}}, a));
    CHECK_FALSE(clause_satisfied(OneClauseEnc{{0, 2}}, a));
    CHECK(clause_satisfied(OneClauseEnc{{0, 1}}, a));
    CHECK(clause_satisfied(OneClauseEnc{{1}}, a));         // zero selected is fine
    CHECK_FALSE(clause_satisfied(AllOrNoneClauseEnc{{0, 1}}, a));
    CHECK(clause_satisfied(AllOrNoneClauseEnc{{0, 2}}, a));
    CHECK(clause_satisfied(CondClauseEnc{0, true, 1, true}, a));   // p2 absent
    CHECK_FALSE(clause_satisfied(CondClauseEnc{1, true, 0, true}, a));
}

TEST_CASE("alternatives: one satisfied world suffices") {
    SelectionProblem p;
    p.opname = "alt";
    p.vars = {SelectionVar{"alt.query.a", false}, SelectionVar{"alt.query.b", false}};
    p.alternatives = {{UnitClause{0, true}}, {UnitClause{1, true}}};
    CHECK(assignment_admissible(p, {true, false}));
    CHECK(assignment_admissible(p, {false, true}));
    CHECK_FALSE(assignment_admissible(p, {false, false}));
    p.base.push_back(UnitClause{0, false});
    CHECK_FALSE(assignment_admissible(p, {true, false}));  // base always applies
}

TEST_CASE("spot check: One(p1,p3) over {p1,p2,p3}") {
    Operation op = three_param_op();
    op.local_constraints.push_back(OneConstraint{{"probe.query.p1", "probe.query.p3"}});
    auto problem = encode_selection_constraints(op);
    auto scenarios = solve_parameter_scenarios(problem, false);

    std::vector<std::vector<std::string>> maximal;
    for (const auto& s : scenarios)
        if (s.kind == ScenarioKind::Maximal) maximal.push_back(s.selected);
    REQUIRE(maximal.size() == 2);
    CHECK(maximal[0] == std::vector<std::string>{"probe.query.p1", "probe.query.p2"});
    CHECK(maximal[1] == std::vector<std::string>{"probe.query.p2", "probe.query.p3"});
}

TEST_CASE("mandatory contradiction raises InfeasibleMandatory") {
    Operation op = three_param_op();
    op.inputs[0].is_required = true;
    op.inputs[2].is_required = true;
    op.local_constraints.push_back(OneConstraint{{"probe.query.p1", "probe.query.p3"}});
    auto problem = encode_selection_constraints(op);
    CHECK_THROWS_AS(solve_parameter_scenarios(problem, false), InfeasibleMandatory);
    CHECK_THROWS_AS(solve_parameter_scenarios(problem, true), InfeasibleMandatory);
}

TEST_CASE("prerequisites get the single all-mandatory scenario") {
    Operation op = three_param_op();
    op.inputs[1].is_required = true;
    auto scenarios = solve_parameter_scenarios(encode_selection_constraints(op), true);
    REQUIRE(scenarios.size() == 1);
    CHECK(scenarios[0].selected == std::vector<std::string>{"probe.query.p2"});
}

TEST_CASE("schema nesting: optional field forces required siblings") {
    Operation op;
    op.opname = "nest";
    op.path = "/nest";
    auto body = [&](const char* pname, bool req_in_parent, const char* parent) {
        InputParameter p;
        p.pname = pname;
        p.ptype = "string";
        p.loc = ParamLoc::Body;
        p.id = SpecModel::make_param_id("nest", ParamLoc::Body, pname);
        p.parent_path = parent;
        p.required_in_parent = req_in_parent;
        return p;
    };
    op.inputs = {body("ship.city", true, "ship"), body("ship.zip", false, "ship")};
    auto problem = encode_selection_constraints(op);

    // zip selected without city violates the nesting implication
    CHECK_FALSE(assignment_admissible(problem, {false, true}));
    CHECK(assignment_admissible(problem, {true, true}));
    CHECK(assignment_admissible(problem, {false, false}));
    // city alone is fine: only optional members force their required siblings
    CHECK(assignment_admissible(problem, {true, false}));
}

TEST_CASE("data-influenced selection splits into alternatives") {
    Operation op;
    op.opname = "page";
    op.path = "/page";
    for (const char* name : {"limit", "offset", "page"}) {
        InputParameter p;
        p.pname = name;
        p.ptype = "integer";
        p.loc = ParamLoc::Query;
        p.id = SpecModel::make_param_id("page", ParamLoc::Query, name);
        op.inputs.push_back(p);
    }
    op.local_constraints.push_back(DataInfluencedSelectionConstraint{
        DataArithmeticConstraint{"page.query.limit", RelOp::Lt, 10.0},
        OneConstraint{{"page.query.page", "page.query.offset"}}});
    auto problem = encode_selection_constraints(op);
    REQUIRE(problem.alternatives.size() == 2);
    // without limit the constraint cannot trigger, so page+offset together stay legal
    CHECK(assignment_admissible(problem, {false, true, true}));
    CHECK(assignment_admissible(problem, {true, true, false}));
    CHECK(assignment_admissible(problem, {true, true, true}));
}

TEST_CASE("solver equals brute-force oracle on 200 random problems") {
    std::mt19937 rng(20260825);
    int checked = 0, infeasible = 0;
    for (int trial = 0; trial < 200; ++trial) {
        SelectionProblem p = random_problem(rng);
        std::vector<bool> mandatory(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) mandatory[i] = p.vars[i].mandatory;
        if (!assignment_admissible(p, mandatory)) {
            CHECK_THROWS_AS(solve_parameter_scenarios(p, false), InfeasibleMandatory);
            ++infeasible;
            continue;
        }
        auto expected = oracle_scenarios(p);
        auto actual = solve_parameter_scenarios(p, false);
        REQUIRE(actual.size() == expected.size());
        for (std::size_t i = 0; i < actual.size(); ++i) {
            CHECK(actual[i].selected == expected[i].selected);
            CHECK(actual[i].kind == expected[i].kind);
        }
        ++checked;
    }
    CHECK(checked + infeasible == 200);
    CHECK(checked >= 100);  // the generator must mostly produce feasible problems
}

TEST_CASE("branch-and-bound path: properties above the enumeration limit") {
    // 18 variables exceeds the exhaustive limit of 16
    SelectionProblem p;
    p.opname = "big";
    for (int i = 0; i < 18; ++i) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "big.query.p%02d", i);
        bool mandatory = i < 2;
        p.vars.push_back(SelectionVar{buf, mandatory});
        if (mandatory) p.base.push_back(UnitClause{i, true});
    }
    p.base.push_back(OneClauseEnc{{2, 3}});
    p.base.push_back(AllOrNoneClauseEnc{{4, 5, 6}});
    auto scenarios = solve_parameter_scenarios(p, false);
    REQUIRE_FALSE(scenarios.empty());

    std::size_t max_seen = 0;
    bool has_minimal = false;
    for (const auto& s : scenarios) {
        // every emitted scenario must be admissible
        std::vector<bool> a(p.size(), false);
        for (const auto& id : s.selected) a[p.var_index(id)] = true;
        CHECK(assignment_admissible(p, a));
        max_seen = std::max(max_seen, s.selected.size());
        if (s.kind == ScenarioKind::Minimal) {
            has_minimal = true;
            CHECK(s.selected.size() == 2);  // just the mandatory pair
        }
    }
    CHECK(max_seen == 17);  // One(p02,p03) excludes exactly one variable
    CHECK(has_minimal);

    // every optional variable is covered by some scenario
    for (const auto& var : p.vars) {
        if (var.mandatory) continue;
        bool covered = false;
        for (const auto& s : scenarios) covered = covered || s.contains(var.param_id);
        CHECK_MESSAGE(covered, var.param_id);
    }
}
