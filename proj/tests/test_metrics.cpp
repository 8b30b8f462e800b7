#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "restref/metrics.hpp"

using namespace restref;

namespace {

RequestLogEntry entry(const std::string& op, int status, const std::string& body = "") {
    RequestLogEntry e;
    e.op_id = op;
    e.status = status;
    e.body = body;
    return e;
}

ExecutionReport report_of(int iteration, std::vector<RequestLogEntry> entries) {
    ExecutionReport r;
    r.iteration = iteration;
    for (const auto& e : entries) {
        if (e.status >= 200 && e.status < 300) ++r.c2xx;
        else if (e.status >= 300 && e.status < 400) ++r.c3xx;
        else if (e.status >= 400 && e.status < 500) ++r.c4xx;
        else if (e.status >= 500) ++r.c5xx;
        else ++r.c0;
        ++r.issued;
    }
    r.entries = std::move(entries);
    return r;
}

}  // namespace

TEST_CASE("stack trace detection") {
    CHECK(has_stack_trace("Traceback (most recent call last):\n  File \"x.py\""));
    CHECK(has_stack_trace("Exception in thread main"));
    CHECK(has_stack_trace("error\n at com.example.Handler.handle(Handler.java:10)\n"
                          " at com.example.Server.run(Server.java:20)"));
    // a single frame-looking line is not a trace
    CHECK_FALSE(has_stack_trace("look at parse(input) for details"));
    CHECK_FALSE(has_stack_trace("internal failure"));
    CHECK_FALSE(has_stack_trace(""));
}

TEST_CASE("coverage counts 5xx as reached but not as 2xx") {
    SpecModel model;
    for (const char* n : {"a", "b", "c", "d"}) {
        Operation op;
        op.opname = n;
        model.operations.push_back(op);
    }
    model.original_operation_count = 4;

    auto m = compute_metrics(
        {report_of(1, {entry("a", 200), entry("b", 500, "boom"), entry("c", 404)}),
         report_of(2, {entry("a", 200), entry("c", 404)})},
        model);
    // a reached 2xx, b reached 5xx, c only 4xx, d untouched
    CHECK(m.oc == doctest::Approx(50.0));
    CHECK(m.oc_2xx == doctest::Approx(25.0));
    CHECK(m.total_hits == 5);
    CHECK(m.operation_count == 4);
    REQUIRE(m.iterations.size() == 2);
    CHECK(m.iterations[0].issued == 3);
    CHECK(m.iterations[1].c4xx == 1);
    CHECK(metrics_invariants_ok(m));
}

TEST_CASE("denominator stays the original operation count after deletions") {
    SpecModel model;
    Operation op;
    op.opname = "survivor";
    model.operations.push_back(op);
    model.original_operation_count = 5;  // four were removed during refinement
    auto m = compute_metrics({report_of(1, {entry("survivor", 200)})}, model);
    CHECK(m.operation_count == 5);
    CHECK(m.oc == doctest::Approx(20.0));
}

TEST_CASE("duplicate defects collapse by normalized message") {
    SpecModel model;
    model.original_operation_count = 1;
    auto m = compute_metrics(
        {report_of(1, {entry("x", 500, "failed for id 12"), entry("x", 500, "failed for id 99"),
                       entry("x", 500, "different entirely")})},
        model);
    CHECK(m.defects.size() == 2);  // literal ids are masked before keying
}

TEST_CASE("skipped entries do not count toward coverage") {
    SpecModel model;
    Operation op;
    op.opname = "z";
    model.operations.push_back(op);
    model.original_operation_count = 1;
    RequestLogEntry skipped;
    skipped.op_id = "z";
    skipped.skipped = true;
    ExecutionReport r;
    r.iteration = 1;
    r.entries = {skipped};
    r.skipped = 1;
    auto m = compute_metrics({r}, model);
    CHECK(m.oc == doctest::Approx(0.0));
    CHECK(m.total_hits == 0);
}

TEST_CASE("json round trip") {
    SpecModel model;
    model.original_operation_count = 2;
    auto m = compute_metrics(
        {report_of(1, {entry("a", 200), entry("b", 503,
                                              "Exception at com.x.Y.z(Y.java:1)")})},
        model);
    auto j = metrics_to_json(m);
    CHECK(j.at("report_version") == 1);
    auto back = metrics_from_json(j);
    REQUIRE(back.has_value());
    CHECK(back->oc == m.oc);
    CHECK(back->oc_2xx == m.oc_2xx);
    CHECK(back->total_hits == m.total_hits);
    CHECK(back->operation_count == m.operation_count);
    REQUIRE(back->iterations.size() == m.iterations.size());
    CHECK(back->iterations[0].c5xx == 1);
    REQUIRE(back->defects.size() == 1);
    CHECK(back->defects[0].has_stack_trace);

    CHECK_FALSE(metrics_from_json(nlohmann::json{{"report_version", 99}}).has_value());
    CHECK_FALSE(metrics_from_json(nlohmann::json::array()).has_value());
}

TEST_CASE("invariant violations are caught") {
    Metrics bad;
    bad.oc = 50;
    bad.oc_2xx = 60;  // 2xx coverage cannot exceed overall coverage
    CHECK_FALSE(metrics_invariants_ok(bad));

    Metrics mismatch;
    mismatch.total_hits = 10;
    IterationStats it;
    it.issued = 4;
    mismatch.iterations = {it};
    CHECK_FALSE(metrics_invariants_ok(mismatch));

    Metrics fine;
    fine.oc = 100;
    fine.oc_2xx = 90;
    fine.total_hits = 4;
    fine.iterations = {it};
    CHECK(metrics_invariants_ok(fine));
}

TEST_CASE("text report mentions coverage and defects") {
    SpecModel model;
    model.original_operation_count = 1;
    auto m = compute_metrics({report_of(1, {entry("boom", 500, "kaput")})}, model);
    auto text = metrics_to_text(m);
    CHECK(text.find("oc=") != std::string::npos);
    CHECK(text.find("boom") != std::string::npos);
    CHECK(text.find("kaput") != std::string::npos);
}
