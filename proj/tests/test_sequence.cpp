#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "restref/sequence.hpp"

using namespace restref;

namespace {

Operation op_named(const std::string& name, HttpMethod method = HttpMethod::Get) {
    Operation op;
    op.opname = name;
    op.method = method;
    op.path = "/" + name;
    return op;
}

ProducerConsumerConstraint edge(const std::string& from, const std::string& to,
                                const std::string& param = "id") {
    ProducerConsumerConstraint d;
    d.producer_op = from;
    d.producer_param_path = from + ".200." + param;
    d.consumer_op = to;
    std::string lowered = to;
    for (auto& c : lowered) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    d.consumer_param_id = lowered + ".path." + param;
    return d;
}

// Independent check that an ordering is a topological sort of the used edges.
bool is_topological(const SequenceScenario& s) {
    std::map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < s.ops.size(); ++i) pos[s.ops[i]] = i;
    if (!pos.count(s.target_op) || pos[s.target_op] != s.ops.size() - 1) return false;
    for (const auto& d : s.deps) {
        if (!pos.count(d.producer_op) || !pos.count(d.consumer_op)) return false;
        if (pos[d.producer_op] >= pos[d.consumer_op]) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("simple chain orders producers before consumers") {
    SpecModel model;
    model.operations = {op_named("createA", HttpMethod::Post), op_named("useA"),
                        op_named("lonely")};
    std::vector<ProducerConsumerConstraint> deps{edge("createA", "useA")};
    auto seqs = generate_sequences(deps, model);
    REQUIRE(seqs.size() == 3);

    // sorted by length: the two singletons first
    CHECK(seqs[0].ops.size() == 1);
    CHECK(seqs[1].ops.size() == 1);
    REQUIRE(seqs[2].ops.size() == 2);
    CHECK(seqs[2].target_op == "useA");
    CHECK(seqs[2].ops == std::vector<std::string>{"createA", "useA"});
    REQUIRE(seqs[2].deps.size() == 1);
    CHECK(seqs[2].deps[0] == deps[0]);
}

TEST_CASE("diamond dependencies include every prerequisite once") {
    SpecModel model;
    model.operations = {op_named("root", HttpMethod::Post), op_named("left", HttpMethod::Post),
                        op_named("right", HttpMethod::Post), op_named("sink")};
    std::vector<ProducerConsumerConstraint> deps{
        edge("root", "left"), edge("root", "right"),
        edge("left", "sink", "leftId"), edge("right", "sink", "rightId")};
    auto seqs = generate_sequences(deps, model);
    const SequenceScenario* sink = nullptr;
    for (const auto& s : seqs)
        if (s.target_op == "sink") sink = &s;
    REQUIRE(sink != nullptr);
    CHECK(sink->ops.size() == 4);  // root appears once, not twice
    CHECK(is_topological(*sink));
}

TEST_CASE("random DAGs: every sequence is a topological order of its closure") {
    std::mt19937 rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        int n = std::uniform_int_distribution<int>(2, 10)(rng);
        SpecModel model;
        for (int i = 0; i < n; ++i)
            model.operations.push_back(
                op_named("op" + std::to_string(i),
                         i % 2 ? HttpMethod::Post : HttpMethod::Get));
        // forward edges only, so the graph is a DAG by construction
        std::vector<ProducerConsumerConstraint> deps;
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                if (std::uniform_int_distribution<int>(0, 9)(rng) < 3)
                    deps.push_back(edge("op" + std::to_string(a), "op" + std::to_string(b),
                                        "id" + std::to_string(a)));
        auto seqs = generate_sequences(deps, model);
        REQUIRE(seqs.size() == static_cast<std::size_t>(n));

        std::set<std::string> targets;
        for (const auto& s : seqs) {
            targets.insert(s.target_op);
            REQUIRE_FALSE(s.ops.empty());
            CHECK(is_topological(s));

            // the op set equals the reverse reachable set of the target
            std::set<std::string> closure{s.target_op};
            bool grew = true;
            while (grew) {
                grew = false;
                for (const auto& d : s.deps)
                    if (closure.count(d.consumer_op) && closure.insert(d.producer_op).second)
                        grew = true;
            }
            CHECK(std::set<std::string>(s.ops.begin(), s.ops.end()) == closure);
        }
        CHECK(targets.size() == static_cast<std::size_t>(n));  // one sequence per op

        // sorted by increasing prerequisite count
        for (std::size_t i = 1; i < seqs.size(); ++i)
            CHECK(seqs[i - 1].ops.size() <= seqs[i].ops.size());
        CHECK(model.warnings.empty());  // DAG input never triggers cycle breaking
    }
}

TEST_CASE("one producer per consumer parameter, best score wins") {
    SpecModel model;
    Operation bulk = op_named("listThings", HttpMethod::Get);
    bulk.outputs.push_back(OutputParameter{"id", "array", "200"});
    Operation create = op_named("createThing", HttpMethod::Post);
    create.outputs.push_back(OutputParameter{"id", "integer", "200"});
    model.operations = {bulk, create, op_named("getThing")};

    // the array producer is learned first, the better one second
    std::vector<ProducerConsumerConstraint> deps{edge("listThings", "getThing"),
                                                 edge("createThing", "getThing")};
    auto seqs = generate_sequences(deps, model);
    const SequenceScenario* get = nullptr;
    for (const auto& s : seqs)
        if (s.target_op == "getThing") get = &s;
    REQUIRE(get != nullptr);
    CHECK(get->ops == std::vector<std::string>{"createThing", "getThing"});
    REQUIRE(get->deps.size() == 1);
    CHECK(get->deps[0].producer_op == "createThing");
}

TEST_CASE("cycles break by dropping the newest edge") {
    SpecModel model;
    model.operations = {op_named("alpha", HttpMethod::Post), op_named("beta", HttpMethod::Post)};
    std::vector<ProducerConsumerConstraint> deps{edge("alpha", "beta"), edge("beta", "alpha")};
    auto seqs = generate_sequences(deps, model);
    REQUIRE(seqs.size() == 2);
    for (const auto& s : seqs) {
        REQUIRE_FALSE(s.ops.empty());
        CHECK(is_topological(s));
    }
    // the older edge alpha->beta survives
    const SequenceScenario* beta = nullptr;
    for (const auto& s : seqs)
        if (s.target_op == "beta") beta = &s;
    REQUIRE(beta != nullptr);
    CHECK(beta->ops == std::vector<std::string>{"alpha", "beta"});
    bool warned = false;
    for (const auto& w : model.warnings)
        if (w.find("cyclic") != std::string::npos) warned = true;
    CHECK(warned);
}

TEST_CASE("edges to removed operations are ignored") {
    SpecModel model;
    model.operations = {op_named("survivor")};
    std::vector<ProducerConsumerConstraint> deps{edge("ghost", "survivor")};
    auto seqs = generate_sequences(deps, model);
    REQUIRE(seqs.size() == 1);
    CHECK(seqs[0].ops == std::vector<std::string>{"survivor"});
    CHECK(seqs[0].deps.empty());
}

TEST_CASE("self-loops never help") {
    SpecModel model;
    model.operations = {op_named("reflexive", HttpMethod::Post)};
    std::vector<ProducerConsumerConstraint> deps{edge("reflexive", "reflexive")};
    auto seqs = generate_sequences(deps, model);
    REQUIRE(seqs.size() == 1);
    CHECK(seqs[0].ops == std::vector<std::string>{"reflexive"});
    CHECK(seqs[0].deps.empty());
}
