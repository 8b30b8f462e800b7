#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <httplib.h>

#include <atomic>
#include <thread>

#include "restref/engine.hpp"

using namespace restref;

namespace {

InputParameter make_param(const std::string& opname, ParamLoc loc, const std::string& pname,
                          const std::string& ptype = "string") {
    InputParameter p;
    p.pname = pname;
    p.ptype = ptype;
    p.loc = loc;
    p.id = SpecModel::make_param_id(opname, loc, pname);
    return p;
}

ParameterScenario scenario_of(const Operation& op, std::vector<std::string> ids) {
    ParameterScenario s;
    s.target_op = op.opname;
    s.selected = std::move(ids);
    std::sort(s.selected.begin(), s.selected.end());
    return s;
}

}  // namespace

TEST_CASE("json_path_lookup walks objects and takes first array elements") {
    auto doc = nlohmann::json::parse(R"({
      "id": 7,
      "items": [{"sku": "a1", "nested": {"qty": 2}}, {"sku": "b2"}],
      "meta": {"tags": ["x", "y"]}
    })");
    CHECK(json_path_lookup(doc, "id") == nlohmann::json(7));
    CHECK(json_path_lookup(doc, "items.sku") == nlohmann::json("a1"));  // first element
    CHECK(json_path_lookup(doc, "items.nested.qty") == nlohmann::json(2));
    CHECK(json_path_lookup(doc, "meta.tags") == nlohmann::json("x"));
    CHECK_FALSE(json_path_lookup(doc, "missing").has_value());
    CHECK_FALSE(json_path_lookup(doc, "items.ghost").has_value());
    CHECK_FALSE(json_path_lookup(nlohmann::json::array(), "id").has_value());
}

TEST_CASE("build_request re-nests dotted body paths") {
    Operation op;
    op.opname = "placeOrder";
    op.method = HttpMethod::Post;
    op.path = "/store/order";
    op.body_media_type = "application/json";
    op.inputs = {make_param("placeOrder", ParamLoc::Body, "order.petId", "integer"),
                 make_param("placeOrder", ParamLoc::Body, "order.ship.city"),
                 make_param("placeOrder", ParamLoc::Body, "order.quantity", "integer")};

    DataScenario data;
    data.assignment = {{"placeorder.body.order.petId", 42},
                       {"placeorder.body.order.ship.city", "Pune"}};
    auto plan = build_request(op,
                              scenario_of(op, {"placeorder.body.order.petId",
                                               "placeorder.body.order.ship.city"}),
                              data, RunState{});
    CHECK(plan.method == HttpMethod::Post);
    CHECK(plan.content_type == "application/json");
    auto body = nlohmann::json::parse(plan.body);
    CHECK(body == nlohmann::json::parse(R"({"order":{"petId":42,"ship":{"city":"Pune"}}})"));
}

TEST_CASE("build_request substitutes and encodes path parameters") {
    Operation op;
    op.opname = "getOrder";
    op.method = HttpMethod::Get;
    op.path = "/order/{orderId}";
    op.inputs = {make_param("getOrder", ParamLoc::Path, "orderId")};

    DataScenario data;
    data.assignment = {{"getorder.path.orderId", "a b/c"}};
    auto plan = build_request(op, scenario_of(op, {"getorder.path.orderId"}), data, RunState{});
    CHECK(plan.path == "/order/a%20b%2Fc");

    // missing path value is a hard error, not a malformed request
    CHECK_THROWS_AS(build_request(op, scenario_of(op, {}), DataScenario{}, RunState{}),
                    MissingPathValue);
}

TEST_CASE("injected bindings override generated data and fill unselected params") {
    Operation op;
    op.opname = "getOrder";
    op.method = HttpMethod::Get;
    op.path = "/order/{orderId}";
    op.inputs = {make_param("getOrder", ParamLoc::Path, "orderId"),
                 make_param("getOrder", ParamLoc::Query, "verbose")};

    RunState state;
    state.bindings["getorder.path.orderId"] = 5123;
    state.bindings["getorder.query.verbose"] = "true";

    // neither parameter is selected or has data; bindings still apply
    auto plan = build_request(op, scenario_of(op, {}), DataScenario{}, state);
    CHECK(plan.path == "/order/5123");
    REQUIRE(plan.query.size() == 1);
    CHECK(plan.query[0] == std::pair<std::string, std::string>{"verbose", "true"});
}

TEST_CASE("form bodies use the leaf segment of dotted names") {
    Operation op;
    op.opname = "check";
    op.method = HttpMethod::Post;
    op.path = "/check";
    op.body_media_type = "application/x-www-form-urlencoded";
    op.inputs = {make_param("check", ParamLoc::FormData, "body.text"),
                 make_param("check", ParamLoc::FormData, "language")};

    DataScenario data;
    data.assignment = {{"check.formdata.body.text", "hello there"},
                       {"check.formdata.language", "en"}};
    auto plan = build_request(
        op, scenario_of(op, {"check.formdata.body.text", "check.formdata.language"}), data,
        RunState{});
    CHECK(plan.content_type == "application/x-www-form-urlencoded");
    CHECK(plan.body == "text=hello%20there&language=en");
}

TEST_CASE("inject_dependencies matches codes exactly, by family, and default") {
    Operation producer;
    producer.opname = "createThing";

    auto dep = [&](const std::string& code) {
        ProducerConsumerConstraint d;
        d.producer_op = "createThing";
        d.producer_param_path = "createThing." + code + ".id";
        d.consumer_op = "getThing";
        d.consumer_param_id = "getthing.path.thingId";
        return d;
    };

    RunState exact;
    inject_dependencies(producer, 201, R"({"id": 9})", {dep("201")}, exact);
    CHECK(exact.bindings.at("getthing.path.thingId") == nlohmann::json(9));

    RunState family;
    inject_dependencies(producer, 201, R"({"id": 9})", {dep("2xx")}, family);
    CHECK(family.bindings.count("getthing.path.thingId") == 1);

    RunState fallback;
    inject_dependencies(producer, 200, R"({"id": 9})", {dep("default")}, fallback);
    CHECK(fallback.bindings.count("getthing.path.thingId") == 1);

    RunState mismatch;
    inject_dependencies(producer, 404, R"({"id": 9})", {dep("200")}, mismatch);
    CHECK(mismatch.bindings.empty());

    // array responses bind the first element's field
    RunState arr;
    inject_dependencies(producer, 200, R"([{"id": 3}, {"id": 4}])", {dep("200")}, arr);
    CHECK(arr.bindings.at("getthing.path.thingId") == nlohmann::json(3));

    RunState miss;
    inject_dependencies(producer, 200, R"({"other": 1})", {dep("200")}, miss);
    CHECK(miss.bindings.empty());
    REQUIRE_FALSE(miss.misses.empty());

    RunState notjson;
    inject_dependencies(producer, 200, "<html>ok</html>", {dep("200")}, notjson);
    CHECK(notjson.bindings.empty());
    CHECK_FALSE(notjson.misses.empty());
}

TEST_CASE("execute_tests: budgets, sequencing and failure dedup against a live server") {
    httplib::Server server;
    std::atomic<int> creates{0};
    server.Post("/thing", [&](const httplib::Request&, httplib::Response& res) {
        res.set_content("{\"id\": " + std::to_string(100 + creates++) + "}",
                        "application/json");
    });
    server.Get(R"(/thing/(\d+))", [&](const httplib::Request& req, httplib::Response& res) {
        res.set_content("{\"id\": " + req.matches[1].str() + "}", "application/json");
    });
    server.Get("/always400", [](const httplib::Request&, httplib::Response& res) {
        res.status = 400;
        res.set_content("the limit parameter is wrong", "text/plain");
    });
    int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread t([&] { server.listen_after_bind(); });
    while (!server.is_running()) std::this_thread::sleep_for(std::chrono::milliseconds(5));

    SpecModel model;
    Operation create;
    create.opname = "createThing";
    create.method = HttpMethod::Post;
    create.path = "/thing";
    create.outputs.push_back(OutputParameter{"id", "integer", "200"});
    Operation get;
    get.opname = "getThing";
    get.method = HttpMethod::Get;
    get.path = "/thing/{thingId}";
    get.inputs = {make_param("getThing", ParamLoc::Path, "thingId", "integer")};
    Operation bad;
    bad.opname = "badThing";
    bad.method = HttpMethod::Get;
    bad.path = "/always400";
    model.operations = {create, get, bad};

    ProducerConsumerConstraint dep;
    dep.producer_op = "createThing";
    dep.producer_param_path = "createThing.200.id";
    dep.consumer_op = "getThing";
    dep.consumer_param_id = "getthing.path.thingId";

    auto make_case = [&](std::vector<std::string> ops, const std::string& target,
                         bool with_dep) {
        TestCase tc;
        tc.seq.target_op = target;
        tc.seq.ops = std::move(ops);
        if (with_dep) {
            tc.seq.deps = {dep};
            tc.deps = {dep};
        }
        for (const auto& o : tc.seq.ops) {
            tc.params[o] = ParameterScenario{o, {}, ScenarioKind::Minimal};
            tc.data[o] = DataScenario{};
            tc.checks.push_back(ResponseCheck{o});
        }
        return tc;
    };

    SUBCASE("dependency injection carries the produced id") {
        std::vector<TestCase> cases{make_case({"createThing", "getThing"}, "getThing", true)};
        ExecOptions opt;
        opt.base_url = "http://127.0.0.1:" + std::to_string(port);
        std::size_t hits = 0;
        auto [report, failures] = execute_tests(cases, model, opt, hits);
        CHECK(report.issued == 2);
        CHECK(report.c2xx == 2);
        CHECK(failures.empty());
        CHECK(hits == 2);
    }

    SUBCASE("hit budget skips the overflow and repeats dedupe") {
        std::vector<TestCase> cases{make_case({"badThing"}, "badThing", false),
                                    make_case({"badThing"}, "badThing", false),
                                    make_case({"createThing"}, "createThing", false)};
        ExecOptions opt;
        opt.base_url = "http://127.0.0.1:" + std::to_string(port);
        opt.hit_budget = 2;
        std::size_t hits = 0;
        auto [report, failures] = execute_tests(cases, model, opt, hits);
        CHECK(report.issued == 2);
        CHECK(report.skipped == 1);
        CHECK(hits == 2);
        // identical 400 bodies collapse to one unique failure
        REQUIRE(failures.size() == 1);
        CHECK(failures[0].op_id == "badThing");
        CHECK(failures[0].status == 400);
    }

    SUBCASE("budget accumulates across calls") {
        std::vector<TestCase> cases{make_case({"createThing"}, "createThing", false)};
        ExecOptions opt;
        opt.base_url = "http://127.0.0.1:" + std::to_string(port);
        opt.hit_budget = 3;
        std::size_t hits = 2;  // two already spent in an earlier iteration
        auto [report, failures] = execute_tests(cases, model, opt, hits);
        CHECK(report.issued == 1);
        CHECK(hits == 3);
        auto [report2, failures2] = execute_tests(cases, model, opt, hits);
        CHECK(report2.issued == 0);
        CHECK(report2.skipped == 1);
    }

    server.stop();
    t.join();
}

TEST_CASE("unreachable service raises ConnectivityError") {
    SpecModel model;
    Operation op;
    op.opname = "ping";
    op.method = HttpMethod::Get;
    op.path = "/ping";
    model.operations = {op};
    TestCase tc;
    tc.seq.target_op = "ping";
    tc.seq.ops = {"ping"};
    tc.params["ping"] = ParameterScenario{"ping", {}, ScenarioKind::Minimal};
    tc.data["ping"] = DataScenario{};
    ExecOptions opt;
    opt.base_url = "http://127.0.0.1:9";  // discard port, nothing listens
    opt.timeout_s = 2;
    std::size_t hits = 0;
    CHECK_THROWS_AS(execute_tests({tc}, model, opt, hits), ConnectivityError);
}

TEST_CASE("generate_tests crosses sequences with parameter and data scenarios") {
    SpecModel model;
    Operation op;
    op.opname = "solo";
    op.method = HttpMethod::Get;
    op.path = "/solo";
    model.operations = {op};

    SequenceScenario seq;
    seq.target_op = "solo";
    seq.ops = {"solo"};

    OpScenarios bundle;
    bundle.params = {ParameterScenario{"solo", {}, ScenarioKind::Minimal},
                     ParameterScenario{"solo", {"solo.query.x"}, ScenarioKind::Maximal}};
    bundle.data = {{DataScenario{}, DataScenario{}}, {DataScenario{}}};
    std::map<std::string, OpScenarios> scenarios{{"solo", bundle}};

    auto tests = generate_tests(model, {seq}, scenarios);
    CHECK(tests.size() == 3);  // 2 data scenarios + 1
    for (const auto& tc : tests) {
        CHECK(tc.seq.target_op == "solo");
        REQUIRE(tc.checks.size() == 1);
        CHECK(tc.checks[0].op_id == "solo");
        CHECK(tc.checks[0].low == 200);
        CHECK(tc.checks[0].high == 399);
    }
}
