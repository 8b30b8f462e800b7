#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "restref/fixtures.hpp"
#include "restref/inference.hpp"
#include "restref/metrics.hpp"
#include "restref/openapi.hpp"
#include "restref/pipeline.hpp"

namespace fs = std::filesystem;
using namespace restref;

namespace {

int cmd_run(const std::string& spec_path, const std::string& exec_params_path,
            std::optional<std::uint64_t> seed, std::optional<std::size_t> hit_budget,
            std::optional<int> max_iterations, const std::string& inference_url,
            const std::string& out_dir) {
    PipelineConfig config = load_exec_params(exec_params_path);
    if (seed) config.seed = *seed;
    if (hit_budget) config.hit_budget = *hit_budget;
    if (max_iterations) config.max_iterations = *max_iterations;
    if (!inference_url.empty()) config.inference_url = inference_url;

    SpecModel model = load_spec_file(spec_path);
    for (const auto& w : model.warnings) std::cerr << "warning: " << w << "\n";

    FailureAnalyzer analyzer = config.inference_url.empty()
                                   ? FailureAnalyzer{}
                                   : FailureAnalyzer{std::make_shared<InferenceService>(
                                         config.inference_url)};

    PipelineResult result;
    try {
        result = run_pipeline(std::move(model), config, analyzer);
    } catch (const ConnectivityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    fs::create_directories(out_dir);
    std::ofstream(fs::path(out_dir) / "refined-spec.json")
        << result.model.export_json().dump(2) << "\n";
    std::ofstream(fs::path(out_dir) / "metrics.json")
        << metrics_to_json(result.metrics).dump(2) << "\n";

    nlohmann::json iters = nlohmann::json::array();
    for (const auto& it : result.iterations)
        iters.push_back({{"iteration", it.iteration},
                         {"issued", it.issued},
                         {"2xx", it.c2xx},
                         {"4xx", it.c4xx},
                         {"5xx", it.c5xx},
                         {"new_constraints", it.new_constraints},
                         {"new_unique_failures", it.new_unique_failures},
                         {"cumulative_failures", it.cumulative_failures},
                         {"converged", it.converged}});
    std::ofstream(fs::path(out_dir) / "iterations.json") << iters.dump(2) << "\n";

    {
        std::ofstream log(fs::path(out_dir) / "requests.jsonl");
        for (const auto& r : result.exec_reports)
            for (const auto& e : r.entries)
                log << nlohmann::json{{"iteration", r.iteration},
                                      {"op", e.op_id},
                                      {"status", e.status},
                                      {"latency_ms", e.latency_ms},
                                      {"check_passed", e.check_passed},
                                      {"skipped", e.skipped}}
                           .dump()
                    << "\n";
    }

    nlohmann::json defects = nlohmann::json::array();
    for (const auto& d : result.metrics.defects)
        defects.push_back({{"op", d.op_id},
                           {"status", d.status},
                           {"message", d.normalized_message},
                           {"has_stack_trace", d.has_stack_trace}});
    std::ofstream(fs::path(out_dir) / "defects.json") << defects.dump(2) << "\n";

    std::cout << metrics_to_text(result.metrics);
    std::cout << "iterations: " << result.iterations.size()
              << (result.iterations.empty() || !result.iterations.back().converged
                      ? " (stopped before convergence)"
                      : " (converged)")
              << "\n";
    return 0;
}

int cmd_report(const std::string& run_dir, const std::string& format) {
    std::ifstream in(fs::path(run_dir) / "metrics.json");
    if (!in) {
        std::cerr << "error: no metrics.json in " << run_dir << "\n";
        return 1;
    }
    auto parsed = nlohmann::json::parse(in, nullptr, false);
    auto metrics = parsed.is_discarded() ? std::nullopt : metrics_from_json(parsed);
    if (!metrics) {
        std::cerr << "error: metrics.json is not a recognized report\n";
        return 1;
    }
    if (format == "json")
        std::cout << metrics_to_json(*metrics).dump(2) << "\n";
    else
        std::cout << metrics_to_text(*metrics);
    if (!metrics_invariants_ok(*metrics)) {
        std::cerr << "error: metric invariants violated\n";
        return 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"black-box REST API test refinement"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run the refinement loop against a live service");
    std::string spec_path, exec_params_path, inference_url, out_dir = "run-out";
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> hit_budget;
    std::optional<int> max_iterations;
    run->add_option("--spec", spec_path, "OpenAPI document (json/yaml)")->required();
    run->add_option("--exec-params", exec_params_path, "execution parameters json")->required();
    run->add_option("--seed", seed, "data generation seed");
    run->add_option("--hit-budget", hit_budget, "max HTTP requests for the whole run");
    run->add_option("--max-iterations", max_iterations, "safety cap on refinement iterations");
    run->add_option("--inference-url", inference_url, "optional classification service endpoint");
    run->add_option("--out", out_dir, "output directory");

    auto* report = app.add_subcommand("report", "render a saved run directory");
    std::string run_dir, format = "text";
    report->add_option("dir", run_dir, "run directory")->required();
    report->add_option("--format", format, "text|json")
        ->check(CLI::IsMember({"text", "json"}));

    auto* fixtures = app.add_subcommand("fixtures", "built-in mock services");
    auto* fx_list = fixtures->add_subcommand("list", "list fixture names");
    auto* fx_serve = fixtures->add_subcommand("serve", "serve a fixture until interrupted");
    std::string fixture_name;
    int port = 8080;
    fx_serve->add_option("name", fixture_name, "fixture name")->required();
    fx_serve->add_option("--port", port, "listen port");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return cmd_run(spec_path, exec_params_path, seed, hit_budget, max_iterations,
                           inference_url, out_dir);
        if (report->parsed()) return cmd_report(run_dir, format);
        if (fixtures->parsed()) {
            if (fx_list->parsed()) {
                for (const auto& name : fixture_names())
                    std::cout << name << "  -  " << fixture_spec(name).description << "\n";
                return 0;
            }
            if (fx_serve->parsed()) {
                auto service = serve_fixture(fixture_name, port);
                std::cout << "serving fixture '" << fixture_name << "' on "
                          << service->base_url() << " (ctrl-c to stop)\n";
                while (true) std::this_thread::sleep_for(std::chrono::seconds(1));
            }
        }
    } catch (const std::out_of_range&) {
        std::cerr << "error: unknown fixture '" << fixture_name << "'\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
