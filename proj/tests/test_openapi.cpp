#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <map>
#include <sstream>

#include "restref/fixtures.hpp"
#include "restref/openapi.hpp"

using namespace restref;

namespace {

SpecModel load_petstore() {
    std::ifstream in(std::string(TESTDATA_DIR) + "/petstore.json");
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return load_spec(ss.str(), SpecFormat::Json);
}

}  // namespace

TEST_CASE("petstore document: 20 operations with the expected method mix") {
    SpecModel model = load_petstore();
    CHECK(model.operations.size() == 20);
    CHECK(model.original_operation_count == 20);

    std::map<HttpMethod, int> methods;
    for (const auto& op : model.operations) ++methods[op.method];
    CHECK(methods[HttpMethod::Get] == 8);
    CHECK(methods[HttpMethod::Post] == 7);
    CHECK(methods[HttpMethod::Put] == 2);
    CHECK(methods[HttpMethod::Delete] == 3);
}

TEST_CASE("parameter ids use lowercased operation names") {
    SpecModel model = load_petstore();
    const Operation* del = model.find_operation("deleteOrder");
    REQUIRE(del != nullptr);
    REQUIRE(del->inputs.size() == 1);
    CHECK(del->inputs[0].id == "deleteorder.path.orderId");
    CHECK(del->inputs[0].loc == ParamLoc::Path);
    CHECK(del->inputs[0].is_required);

    CHECK(model.find_parameter("deleteorder.path.orderId") != nullptr);
    CHECK(model.owner_of_parameter("deleteorder.path.orderId") == del);
    CHECK(model.find_parameter("deleteorder.path.nope") == nullptr);
}

TEST_CASE("body schemas unroll to dotted parameters under the schema name") {
    SpecModel model = load_petstore();
    const Operation* place = model.find_operation("placeOrder");
    REQUIRE(place != nullptr);
    CHECK(place->body_media_type == "application/json");

    const InputParameter* pet_id = place->find_input("placeorder.body.order.petId");
    REQUIRE(pet_id != nullptr);
    CHECK(pet_id->pname == "order.petId");
    CHECK(pet_id->loc == ParamLoc::Body);
    CHECK(pet_id->is_required);  // schema marks petId required
    CHECK(pet_id->parent_path == "order");
    CHECK(pet_id->required_in_parent);

    const InputParameter* quantity = place->find_input("placeorder.body.order.quantity");
    REQUIRE(quantity != nullptr);
    CHECK_FALSE(quantity->is_required);
    CHECK(quantity->pc.minimum == 1.0);
    CHECK(quantity->pc.maximum == 10.0);

    const InputParameter* status = place->find_input("placeorder.body.order.status");
    REQUIRE(status != nullptr);
    CHECK(status->pc.enum_values ==
          std::vector<std::string>{"placed", "approved", "delivered"});
}

TEST_CASE("nested refs unroll transitively with combined required flags") {
    SpecModel model = load_petstore();
    const Operation* add = model.find_operation("addPet");
    REQUIRE(add != nullptr);
    const InputParameter* cat_name = add->find_input("addpet.body.pet.category.name");
    REQUIRE(cat_name != nullptr);
    // category itself is optional, so the nested field cannot be required overall
    CHECK_FALSE(cat_name->is_required);
    CHECK(cat_name->parent_path == "pet.category");

    const InputParameter* name = add->find_input("addpet.body.pet.name");
    REQUIRE(name != nullptr);
    CHECK(name->is_required);
    REQUIRE_FALSE(name->examples.empty());
    CHECK(name->examples[0] == nlohmann::json("doggie"));
}

TEST_CASE("response schemas unroll into outputs, arrays flattened") {
    SpecModel model = load_petstore();
    const Operation* get = model.find_operation("getOrderById");
    REQUIRE(get != nullptr);
    bool has_id = false;
    for (const auto& out : get->outputs)
        if (out.pname == "id" && out.responsecode == "200") has_id = true;
    CHECK(has_id);

    // array-of-Pet responses still expose the element fields
    const Operation* find = model.find_operation("findPetsByStatus");
    REQUIRE(find != nullptr);
    bool has_pet_id = false;
    for (const auto& out : find->outputs)
        if (out.pname == "id") has_pet_id = true;
    CHECK(has_pet_id);
}

TEST_CASE("yaml documents load the same way") {
    const FixtureSpec& fx = fixture_spec("langtool");
    REQUIRE(fx.format == SpecFormat::Yaml);
    SpecModel model = load_spec(fx.document, SpecFormat::Yaml);
    CHECK(model.operations.size() == 2);
    const Operation* check = model.find_operation("check");
    REQUIRE(check != nullptr);
    const InputParameter* lang = check->find_input("check.formdata.language");
    REQUIRE(lang != nullptr);
    CHECK(lang->is_required);
}

TEST_CASE("recursive schemas truncate at the depth limit") {
    const char* doc = R"json({
      "swagger": "2.0",
      "info": {"title": "t", "version": "1"},
      "definitions": {
        "Node": {"type": "object", "properties": {
          "label": {"type": "string"},
          "next": {"$ref": "#/definitions/Node"}}}
      },
      "paths": {"/n": {"post": {"operationId": "putNode",
        "parameters": [{"name": "body", "in": "body", "required": true,
                        "schema": {"$ref": "#/definitions/Node"}}],
        "responses": {"200": {"description": "ok"}}}}}
    })json";
    SpecModel model = load_spec(doc, SpecFormat::Json, LoadOptions{.schema_depth_limit = 3});
    const Operation* op = model.find_operation("putNode");
    REQUIRE(op != nullptr);
    CHECK(op->find_input("putnode.body.node.label") != nullptr);
    CHECK(op->find_input("putnode.body.node.next.label") != nullptr);
    bool truncated = false;
    std::size_t deepest = 0;
    for (const auto& p : op->inputs) {
        truncated = truncated || p.recursive_truncated;
        deepest = std::max(deepest,
                           static_cast<std::size_t>(std::count(p.pname.begin(), p.pname.end(), '.')));
    }
    CHECK(truncated);
    CHECK(deepest <= 3);
    bool warned = false;
    for (const auto& w : model.warnings)
        if (w.find("recursion") != std::string::npos) warned = true;
    CHECK(warned);
}

TEST_CASE("unsupported constructs produce warnings, not failures") {
    const char* doc = R"json({
      "openapi": "3.0.0",
      "info": {"title": "t", "version": "1"},
      "paths": {"/x": {"get": {"operationId": "getX",
        "responses": {"200": {"description": "ok"}}}}},
      "webhooks": {"ping": {}}
    })json";
    SpecModel model = load_spec(doc, SpecFormat::Json);
    CHECK(model.operations.size() == 1);
}

TEST_CASE("malformed documents raise ParseError") {
    CHECK_THROWS_AS(load_spec("{not json", SpecFormat::Json), ParseError);
    CHECK_THROWS_AS(load_spec("[1, 2]", SpecFormat::Json), ParseError);
    // documents without paths are degenerate but loadable
    CHECK(load_spec(R"({"openapi": "3.0.0"})", SpecFormat::Json).operations.empty());
}

TEST_CASE("yaml_to_json conversion") {
    auto j = yaml_to_json("a: 1\nb:\n  - x\n  - true\n");
    CHECK(j["a"] == 1);
    CHECK(j["b"][0] == "x");
    CHECK(j["b"][1] == true);
}
