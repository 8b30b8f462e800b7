#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <httplib.h>

#include <set>

#include "restref/fixtures.hpp"
#include "restref/metrics.hpp"
#include "restref/openapi.hpp"

using namespace restref;

TEST_CASE("catalog lists the expected fixtures") {
    auto names = fixture_names();
    std::set<std::string> set(names.begin(), names.end());
    for (const char* expected : {"langtool", "petstore", "staged", "kitchen", "blank404",
                                 "blank400", "all200", "random", "metrics20"})
        CHECK_MESSAGE(set.count(expected) == 1, expected);
    CHECK_THROWS_AS(fixture_spec("no-such-fixture"), std::out_of_range);
}

TEST_CASE("every fixture document parses into a usable model") {
    for (const auto& name : fixture_names()) {
        const FixtureSpec& fx = fixture_spec(name);
        SpecModel model = load_spec(fx.document, fx.format);
        CHECK_MESSAGE(!model.operations.empty(), name);
        // ground truth only references things the document defines
        for (const auto& c : fx.ground_truth)
            CHECK_MESSAGE(model.constraint_resolves(c), name << ": " << describe(c));
    }
}

TEST_CASE("ground truths span the constraint-bearing categories") {
    std::set<ConstraintCategory> seen;
    for (const auto& name : fixture_names())
        for (const auto& c : fixture_spec(name).ground_truth) seen.insert(category_of(c));
    for (ConstraintCategory cat :
         {ConstraintCategory::ProducerConsumer, ConstraintCategory::AdditionalMandatory,
          ConstraintCategory::Or, ConstraintCategory::One, ConstraintCategory::AllOrNone,
          ConstraintCategory::ConditionalParameterRequired, ConstraintCategory::DataArithmetic,
          ConstraintCategory::DataNonArithmetic,
          ConstraintCategory::DataInfluencedParamSelection,
          ConstraintCategory::ParameterInfluencedDataValues})
        CHECK_MESSAGE(seen.count(cat) == 1, to_string(cat));

    // the action-only categories (1, 3, 9, 14) appear as scripted endpoints
    // instead of constraints; the kitchen fixture carries them
    const std::string& doc = fixture_spec("kitchen").document;
    for (const char* opid : {"securePing", "legacyPing", "ping", "oracle"})
        CHECK_MESSAGE(doc.find(opid) != std::string::npos, opid);
}

TEST_CASE("ground_truth_check is insensitive to argument order") {
    std::vector<Constraint> truth{OneConstraint{{"op.query.a", "op.query.b"}},
                                  AllOrNoneConstraint{{"op.query.x", "op.query.y"}}};
    std::vector<Constraint> learned{AllOrNoneConstraint{{"op.query.y", "op.query.x"}},
                                    OneConstraint{{"op.query.b", "op.query.a"}}};
    auto r = ground_truth_check(learned, truth);
    CHECK(r.exact());
    CHECK(r.equivalent == 2);

    auto partial = ground_truth_check({learned[0]}, truth);
    CHECK_FALSE(partial.complete());
    REQUIRE(partial.missing.size() == 1);
    CHECK(structurally_equal(partial.missing[0], truth[0]));

    std::vector<Constraint> noisy = learned;
    noisy.push_back(AdditionalMandatoryConstraint{"op.query.z"});
    auto extra = ground_truth_check(noisy, truth);
    CHECK(extra.complete());
    CHECK_FALSE(extra.exact());
    REQUIRE(extra.extra.size() == 1);
}

TEST_CASE("serving a fixture answers scripted requests") {
    auto service = serve_fixture("langtool");  // port 0: pick any free port
    REQUIRE(service->port() > 0);

    httplib::Client client(service->base_url());
    auto langs = client.Get("/v2/languages");
    REQUIRE(langs);
    CHECK(langs->status == 200);

    // missing mandatory form field
    auto bad = client.Post("/v2/check", "", "application/x-www-form-urlencoded");
    REQUIRE(bad);
    CHECK(bad->status == 400);

    auto good = client.Post("/v2/check", "language=en&text=hi",
                            "application/x-www-form-urlencoded");
    REQUIRE(good);
    CHECK(good->status == 200);
}

TEST_CASE("each serve starts from fresh state") {
    auto probe = [](FixtureService& svc) {
        httplib::Client client(svc.base_url());
        auto res = client.Post("/store/order", R"({"petId": 1})", "application/json");
        REQUIRE(res);
        REQUIRE(res->status == 200);
        return nlohmann::json::parse(res->body).at("id").get<long long>();
    };
    auto first = serve_fixture("petstore");
    long long a = probe(*first);
    first.reset();
    auto second = serve_fixture("petstore");
    long long b = probe(*second);
    CHECK(a == b);  // id counters restart, runs are reproducible
}

TEST_CASE("blank fixtures really answer blank bodies") {
    auto svc404 = serve_fixture("blank404");
    httplib::Client c404(svc404->base_url());
    auto miss = c404.Get("/gadgets/999999");
    REQUIRE(miss);
    CHECK(miss->status == 404);
    CHECK(miss->body.empty());

    auto svc400 = serve_fixture("blank400");
    httplib::Client c400(svc400->base_url());
    auto always = c400.Get("/scan");
    REQUIRE(always);
    CHECK(always->status == 400);
    CHECK(always->body.empty());
}

TEST_CASE("metrics fixture has the 20-operation split") {
    const FixtureSpec& fx = fixture_spec("metrics20");
    SpecModel model = load_spec(fx.document, fx.format);
    CHECK(model.operations.size() == 20);

    auto svc = serve_fixture("metrics20");
    httplib::Client client(svc->base_url());
    auto ok = client.Get("/m01");
    REQUIRE(ok);
    CHECK(ok->status == 200);
    auto boom = client.Get("/m19");
    REQUIRE(boom);
    CHECK(boom->status == 500);
    CHECK(has_stack_trace(boom->body));
}

TEST_CASE("random fixture changes its message on every request") {
    auto svc = serve_fixture("random");
    httplib::Client client(svc->base_url());
    auto first = client.Get("/chaos");
    auto second = client.Get("/chaos");
    REQUIRE(first);
    REQUIRE(second);
    CHECK(first->status == 400);
    CHECK(second->status == 400);
    CHECK(first->body != second->body);
}
