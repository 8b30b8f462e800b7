#include "restref/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include "restref/datagen.hpp"
#include "restref/sequence.hpp"

namespace restref {

PipelineConfig load_exec_params(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open exec params file: " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    PipelineConfig c;
    c.base_url = j.value("base_url", "");
    if (j.contains("headers"))
        for (auto& [k, v] : j["headers"].items())
            c.static_headers.emplace_back(k, v.get<std::string>());
    c.timeout_s = j.value("timeout_s", 10.0);
    if (j.contains("hit_budget")) c.hit_budget = j["hit_budget"].get<std::size_t>();
    c.max_iterations = j.value("max_iterations", 10);
    c.seed = j.value("seed", std::uint64_t{0});
    c.k_data_scenarios = j.value("k_data_scenarios", 2);
    c.inference_url = j.value("inference_url", "");
    if (c.max_iterations < 1) throw std::runtime_error("max_iterations must be >= 1");
    return c;
}

void analyze_failures(SpecModel& model, const std::vector<FailureRecord>& run_failures,
                      const FailureAnalyzer& analyzer,
                      std::vector<std::string>* new_constraints) {
    auto ordered = run_failures;
    std::sort(ordered.begin(), ordered.end());
    for (const auto& f : ordered) {
        if (f.status == 0) continue;  // transport/timeout, not a constraint signal
        Operation* op = model.find_operation(f.op_id);
        if (!op) continue;
        AnalyzerVerdict v = analyzer.analyze(f, *op, model);
        switch (v.action) {
            case VerdictAction::AddConstraint:
                if (v.constraint) {
                    try {
                        std::size_t before = model.all_constraints().size();
                        model.add_constraint(*v.constraint);
                        if (new_constraints && model.all_constraints().size() > before)
                            new_constraints->push_back(describe(*v.constraint));
                    } catch (const UnresolvedEntity& e) {
                        model.warnings.push_back(std::string("dropped unresolvable constraint: ") +
                                                 e.what());
                    }
                }
                break;
            case VerdictAction::RemoveOperation:
                if (!v.target_op.empty()) model.remove_operation(v.target_op);
                break;
            case VerdictAction::RemoveParameter:
                if (!v.target_param.empty()) model.remove_parameter(v.target_param);
                break;
            case VerdictAction::RequestUserInput:
                op->needs_user_input = true;
                break;
            case VerdictAction::RegenerateData:
                model.data_refresh_ops.insert(v.target_op.empty() ? f.op_id : v.target_op);
                break;
            case VerdictAction::ReportDefect:
            case VerdictAction::Ignore:
                break;
        }
    }
}

namespace {

// Drops the newest local constraint of the operation until the all-mandatory
// assignment is admissible again.
void quarantine_until_feasible(SpecModel& model, Operation& op) {
    while (!op.local_constraints.empty()) {
        SelectionProblem problem = encode_selection_constraints(op);
        std::vector<bool> mandatory(problem.size());
        for (std::size_t i = 0; i < problem.size(); ++i) mandatory[i] = problem.vars[i].mandatory;
        if (assignment_admissible(problem, mandatory)) return;
        model.warnings.push_back("quarantined contradictory constraint on " + op.opname + ": " +
                                 describe(op.local_constraints.back()));
        op.local_constraints.pop_back();
    }
}

}  // namespace

PipelineResult run_pipeline(SpecModel model, const PipelineConfig& config,
                            const FailureAnalyzer& analyzer) {
    PipelineResult result;
    std::set<std::tuple<std::string, int, std::string>> cumulative;
    std::map<std::string, std::uint64_t> salt;  // per-op data refresh counter
    std::size_t hits_used = 0;

    for (int iteration = 1; iteration <= config.max_iterations; ++iteration) {
        auto deps = model.extract_dependencies();
        auto sequences = generate_sequences(deps, model);

        // operations waiting on credentials sit the iteration out
        auto excluded = [&](const std::string& opname) {
            const Operation* op = model.find_operation(opname);
            return !op || op->needs_user_input;
        };
        sequences.erase(std::remove_if(sequences.begin(), sequences.end(),
                                       [&](const SequenceScenario& s) {
                                           return std::any_of(s.ops.begin(), s.ops.end(), excluded);
                                       }),
                        sequences.end());

        // which operations appear as prerequisites anywhere
        std::set<std::string> prereq_ops;
        for (const auto& s : sequences)
            for (const auto& opname : s.ops)
                if (opname != s.target_op) prereq_ops.insert(opname);

        std::map<std::string, OpScenarios> scenarios;
        for (auto& op : model.operations) {
            if (op.needs_user_input) continue;
            SelectionProblem problem = encode_selection_constraints(op);
            std::vector<ParameterScenario> params;
            try {
                params = solve_parameter_scenarios(problem, false);
            } catch (const InfeasibleMandatory&) {
                quarantine_until_feasible(model, op);
                problem = encode_selection_constraints(op);
                params = solve_parameter_scenarios(problem, false);
            }
            OpScenarios bundle;
            bundle.params = std::move(params);

            DataGenOptions dgo;
            dgo.seed = config.seed;
            dgo.salt = salt[op.opname];
            dgo.k = config.k_data_scenarios;
            for (const auto& scenario : bundle.params) {
                auto constraints = gather_data_constraints(scenario, op);
                try {
                    bundle.data.push_back(generate_data(scenario, op, constraints, dgo));
                } catch (const UnsatisfiableData& e) {
                    model.warnings.push_back(std::string("data generation failed: ") + e.what());
                    bundle.data.push_back({});
                }
            }
            if (prereq_ops.count(op.opname)) {
                bundle.prereq = solve_parameter_scenarios(problem, true).front();
                auto constraints = gather_data_constraints(bundle.prereq, op);
                DataGenOptions one = dgo;
                one.k = 1;
                auto d = generate_data(bundle.prereq, op, constraints, one);
                if (!d.empty()) bundle.prereq_data = d.front();
            }
            scenarios[op.opname] = std::move(bundle);
        }

        auto tests = generate_tests(model, sequences, scenarios);

        ExecOptions exec;
        exec.base_url = config.base_url;
        exec.static_headers = config.static_headers;
        exec.timeout_s = config.timeout_s;
        exec.hit_budget = config.hit_budget;
        exec.iteration = iteration;
        auto [report, run_failures] = execute_tests(tests, model, exec, hits_used);
        result.exec_reports.push_back(report);

        // convergence: does this run add anything new?
        std::vector<FailureRecord> fresh;
        for (const auto& f : run_failures)
            if (!cumulative.count(f.key())) fresh.push_back(f);
        bool converged = fresh.empty();

        IterationReport ir;
        ir.iteration = iteration;
        ir.c2xx = report.c2xx;
        ir.c4xx = report.c4xx;
        ir.c5xx = report.c5xx;
        ir.issued = report.issued;
        ir.new_unique_failures = fresh.size();
        ir.converged = converged;

        if (!converged) {
            model.data_refresh_ops.clear();
            analyze_failures(model, fresh, analyzer, &ir.new_constraints);
            for (const auto& opname : model.data_refresh_ops) ++salt[opname];
        }
        for (auto& f : fresh) {
            cumulative.insert(f.key());
            result.failures.push_back(std::move(f));
        }
        ir.cumulative_failures = cumulative.size();
        result.iterations.push_back(std::move(ir));

        if (converged || hits_used >= config.hit_budget) break;
    }

    std::sort(result.failures.begin(), result.failures.end());
    result.hits_used = hits_used;
    result.metrics = compute_metrics(result.exec_reports, model);
    result.model = std::move(model);
    return result;
}

}  // namespace restref
