#include "restref/fixtures.hpp"

#include <atomic>
#include <chrono>
#include <map>
#include <set>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace restref {

namespace {

using nlohmann::json;

void ok_json(httplib::Response& res, const json& body) {
    res.status = 200;
    res.set_content(body.dump(), "application/json");
}

void fail_text(httplib::Response& res, int status, const std::string& message) {
    res.status = status;
    res.set_content(message, "text/plain");
}

long param_long(const httplib::Request& req, const std::string& name, long fallback) {
    if (!req.has_param(name)) return fallback;
    try {
        return std::stol(req.get_param_value(name));
    } catch (...) {
        return fallback;
    }
}

// ---------------------------------------------------------------------------
// langtool-like: POST /v2/check with One(text, data) and a categorical
// language parameter; GET /v2/languages.

const char* kLangtoolDoc = R"yaml(
swagger: "2.0"
info:
  title: language check fixture
  version: "1.0"
paths:
  /v2/check:
    post:
      operationId: check
      consumes:
        - application/x-www-form-urlencoded
      parameters:
        - name: language
          in: formData
          type: string
          required: true
        - name: text
          in: formData
          type: string
        - name: data
          in: formData
          type: string
      responses:
        "200":
          description: ok
          schema:
            type: object
            properties:
              matches:
                type: array
                items:
                  type: object
  /v2/languages:
    get:
      operationId: languages
      responses:
        "200":
          description: ok
          schema:
            type: array
            items:
              type: object
              properties:
                name:
                  type: string
                code:
                  type: string
)yaml";

const std::set<std::string> kLanguages = {"en", "fr", "de", "es"};

void bind_langtool(httplib::Server& server) {
    server.Post("/v2/check", [](const httplib::Request& req, httplib::Response& res) {
        bool has_text = req.has_param("text");
        bool has_data = req.has_param("data");
        if (has_text && has_data)
            return fail_text(res, 400, "Error: Only one of 'text' or 'data' can be specified");
        std::string lang = req.get_param_value("language");
        if (!kLanguages.count(lang))
            return fail_text(res, 400,
                             "Error: '" + lang +
                                 "' is not a supported language. Supported values are: 'en', "
                                 "'fr', 'de', 'es'");
        ok_json(res, json{{"matches", json::array()}});
    });
    server.Get("/v2/languages", [](const httplib::Request&, httplib::Response& res) {
        ok_json(res, json::array({{{"name", "English"}, {"code", "en"}},
                                  {{"name", "French"}, {"code", "fr"}},
                                  {{"name", "German"}, {"code", "de"}},
                                  {{"name", "Spanish"}, {"code", "es"}}}));
    });
}

// ---------------------------------------------------------------------------
// petstore-like: placeOrder produces order ids, deleteOrder requires one.

const char* kPetstoreDoc = R"json({
  "swagger": "2.0",
  "info": {"title": "order store fixture", "version": "1.0"},
  "definitions": {
    "Order": {
      "type": "object",
      "required": ["petId"],
      "properties": {
        "id": {"type": "integer"},
        "petId": {"type": "integer"},
        "quantity": {"type": "integer"}
      }
    }
  },
  "paths": {
    "/store/order": {
      "post": {
        "operationId": "placeOrder",
        "parameters": [
          {"in": "body", "name": "body", "schema": {"$ref": "#/definitions/Order"}}
        ],
        "responses": {
          "200": {"description": "ok", "schema": {"$ref": "#/definitions/Order"}}
        }
      }
    },
    "/store/order/{orderId}": {
      "delete": {
        "operationId": "deleteOrder",
        "parameters": [
          {"name": "orderId", "in": "path", "required": true, "type": "integer"}
        ],
        "responses": {
          "200": {"description": "deleted"},
          "404": {"description": "missing"}
        }
      }
    }
  }
})json";

struct OrderStore {
    std::set<long> ids;
    long next = 5000;  // far above generated integers, so random ids always miss
};

void bind_petstore(httplib::Server& server) {
    auto store = std::make_shared<OrderStore>();
    server.Post("/store/order", [store](const httplib::Request& req, httplib::Response& res) {
        json body = json::parse(req.body, nullptr, false);
        long id = store->next++;
        store->ids.insert(id);
        json order = body.is_object() && body.contains("order") ? body["order"] : json::object();
        order["id"] = id;
        ok_json(res, order);
    });
    server.Delete(R"(/store/order/(-?\d+))",
                  [store](const httplib::Request& req, httplib::Response& res) {
                      long id = std::stol(req.matches[1].str());
                      if (!store->ids.count(id)) return fail_text(res, 404, "Order Not Found");
                      store->ids.erase(id);
                      ok_json(res, json{{"deleted", id}});
                  });
}

// ---------------------------------------------------------------------------
// staged: five operations layering producer-consumer, One and categorical
// constraints.

const char* kStagedDoc = R"json({
  "swagger": "2.0",
  "info": {"title": "widget service fixture", "version": "1.0"},
  "definitions": {
    "Widget": {
      "type": "object",
      "required": ["name"],
      "properties": {
        "id": {"type": "integer"},
        "name": {"type": "string"}
      }
    }
  },
  "paths": {
    "/widgets": {
      "post": {
        "operationId": "createWidget",
        "parameters": [
          {"in": "body", "name": "body", "schema": {"$ref": "#/definitions/Widget"}}
        ],
        "responses": {
          "200": {"description": "ok", "schema": {"$ref": "#/definitions/Widget"}}
        }
      },
      "get": {
        "operationId": "searchWidgets",
        "parameters": [
          {"name": "city", "in": "query", "type": "string"},
          {"name": "zipcode", "in": "query", "type": "string"}
        ],
        "responses": {
          "200": {"description": "ok"}
        }
      }
    },
    "/widgets/{widgetId}": {
      "get": {
        "operationId": "getWidget",
        "parameters": [
          {"name": "widgetId", "in": "path", "required": true, "type": "integer"}
        ],
        "responses": {
          "200": {"description": "ok", "schema": {"$ref": "#/definitions/Widget"}},
          "404": {"description": "missing"}
        }
      },
      "delete": {
        "operationId": "deleteWidget",
        "parameters": [
          {"name": "widgetId", "in": "path", "required": true, "type": "integer"}
        ],
        "responses": {
          "200": {"description": "ok"},
          "404": {"description": "missing"}
        }
      }
    },
    "/translate": {
      "post": {
        "operationId": "translate",
        "parameters": [
          {"name": "text", "in": "query", "required": true, "type": "string"},
          {"name": "lang", "in": "query", "required": true, "type": "string"}
        ],
        "responses": {
          "200": {"description": "ok"}
        }
      }
    }
  }
})json";

struct WidgetStore {
    std::map<long, std::string> widgets;
    long next = 5000;
};

void bind_staged(httplib::Server& server) {
    auto store = std::make_shared<WidgetStore>();
    server.Post("/widgets", [store](const httplib::Request& req, httplib::Response& res) {
        json body = json::parse(req.body, nullptr, false);
        long id = store->next++;
        std::string name = "widget";
        if (body.is_object() && body.contains("widget") && body["widget"].contains("name") &&
            body["widget"]["name"].is_string())
            name = body["widget"]["name"].get<std::string>();
        store->widgets[id] = name;
        ok_json(res, json{{"id", id}, {"name", name}});
    });
    server.Get("/widgets", [](const httplib::Request& req, httplib::Response& res) {
        if (req.has_param("city") && req.has_param("zipcode"))
            return fail_text(res, 400, "Only one of 'city' or 'zipcode' can be specified");
        ok_json(res, json::array());
    });
    server.Get(R"(/widgets/(-?\d+))", [store](const httplib::Request& req, httplib::Response& res) {
        long id = std::stol(req.matches[1].str());
        auto it = store->widgets.find(id);
        if (it == store->widgets.end()) return fail_text(res, 404, "Widget Not Found");
        ok_json(res, json{{"id", id}, {"name", it->second}});
    });
    server.Delete(R"(/widgets/(-?\d+))",
                  [store](const httplib::Request& req, httplib::Response& res) {
                      long id = std::stol(req.matches[1].str());
                      if (!store->widgets.count(id)) return fail_text(res, 404, "Widget Not Found");
                      store->widgets.erase(id);
                      ok_json(res, json{{"deleted", id}});
                  });
    server.Post("/translate", [](const httplib::Request& req, httplib::Response& res) {
        std::string lang = req.get_param_value("lang");
        if (lang != "en" && lang != "de")
            return fail_text(res, 400,
                             "Error: '" + lang +
                                 "' is not a supported language. Supported values are: 'en', 'de'");
        ok_json(res, json{{"translated", req.get_param_value("text")}});
    });
}

// ---------------------------------------------------------------------------
// kitchen: one operation per remaining category.

const char* kKitchenDoc = R"json({
  "swagger": "2.0",
  "info": {"title": "category sampler fixture", "version": "1.0"},
  "paths": {
    "/secure": {
      "get": {
        "operationId": "securePing",
        "responses": {"200": {"description": "ok"}}
      }
    },
    "/legacy": {
      "get": {
        "operationId": "legacyPing",
        "responses": {"200": {"description": "ok"}}
      }
    },
    "/form": {
      "post": {
        "operationId": "submitForm",
        "parameters": [
          {"name": "apikey", "in": "query", "type": "string"},
          {"name": "payload", "in": "query", "type": "string"}
        ],
        "responses": {"200": {"description": "ok"}}
      }
    },
    "/notify": {
      "post": {
        "operationId": "notify",
        "parameters": [
          {"name": "email_address", "in": "query", "type": "string"},
          {"name": "phone", "in": "query", "type": "string"}
        ],
        "responses": {"200": {"description": "ok"}}
      }
    },
    "/locate": {
      "get": {
        "operationId": "locate",
        "parameters": [
          {"name": "lat", "in": "query", "type": "number"},
          {"name": "lng", "in": "query", "type": "number"}
        ],
        "responses": {"200": {"description": "ok"}}
      }
    },
    "/items": {
      "get": {
        "operationId": "filterList",
        "parameters": [
          {"name": "filter", "in": "query", "type": "string"},
          {"name": "sort", "in": "query", "type": "string"}
        ],
        "responses": {"200": {"description": "ok"}}
      }
    },
    "/ping": {
      "get": {
        "operationId": "ping",
        "parameters": [
          {"name": "debug", "in": "query", "type": "string"}
        ],
        "responses": {"200": {"description": "ok"}}
      }
    },
    "/range": {
      "get": {
        "operationId": "range",
        "parameters": [
          {"name": "min", "in": "query", "type": "integer"},
          {"name": "max", "in": "query", "type": "integer"}
        ],
        "responses": {"200": {"description": "ok"}}
      }
    },
    "/page": {
      "get": {
        "operationId": "page",
        "parameters": [
          {"name": "limit", "in": "query", "type": "integer"},
          {"name": "page", "in": "query", "type": "integer"},
          {"name": "offset", "in": "query", "type": "integer"}
        ],
        "responses": {"200": {"description": "ok"}}
      }
    },
    "/media": {
      "post": {
        "operationId": "media",
        "parameters": [
          {"name": "type", "in": "query", "type": "string"},
          {"name": "thumbnail", "in": "query", "type": "string"}
        ],
        "responses": {"200": {"description": "ok"}}
      }
    },
    "/oracle": {
      "get": {
        "operationId": "oracle",
        "responses": {"200": {"description": "ok"}}
      }
    }
  }
})json";

void bind_kitchen(httplib::Server& server) {
    server.Get("/secure", [](const httplib::Request&, httplib::Response& res) {
        fail_text(res, 401, "Full authentication is required to access this resource");
    });
    server.Get("/legacy", [](const httplib::Request&, httplib::Response& res) {
        fail_text(res, 405, "Request method 'GET' not supported");
    });
    server.Post("/form", [](const httplib::Request& req, httplib::Response& res) {
        if (!req.has_param("apikey")) return fail_text(res, 400, "Parameter 'apikey' is required");
        ok_json(res, json{{"ok", true}});
    });
    server.Post("/notify", [](const httplib::Request& req, httplib::Response& res) {
        if (!req.has_param("email_address") && !req.has_param("phone"))
            return fail_text(res, 400,
                             "At least one of 'email_address' or 'phone' must be provided");
        ok_json(res, json{{"ok", true}});
    });
    server.Get("/locate", [](const httplib::Request& req, httplib::Response& res) {
        if (req.has_param("lat") != req.has_param("lng"))
            return fail_text(res, 400, "Parameters 'lat' and 'lng' must be specified together");
        ok_json(res, json{{"ok", true}});
    });
    server.Get("/items", [](const httplib::Request& req, httplib::Response& res) {
        if (req.has_param("filter") && !req.has_param("sort"))
            return fail_text(res, 400, "If filter is given, then sort must also be given");
        ok_json(res, json::array());
    });
    server.Get("/ping", [](const httplib::Request& req, httplib::Response& res) {
        if (req.has_param("debug"))
            return fail_text(res, 400, "Received unknown parameter: debug");
        ok_json(res, json{{"pong", true}});
    });
    server.Get("/range", [](const httplib::Request& req, httplib::Response& res) {
        if (req.has_param("min") && req.has_param("max") &&
            param_long(req, "min", 0) > param_long(req, "max", 0))
            return fail_text(res, 400, "'min' cannot be greater than 'max'");
        ok_json(res, json{{"ok", true}});
    });
    server.Get("/page", [](const httplib::Request& req, httplib::Response& res) {
        if (req.has_param("limit") && param_long(req, "limit", 0) < 10) {
            int picked = (req.has_param("page") ? 1 : 0) + (req.has_param("offset") ? 1 : 0);
            if (picked != 1)
                return fail_text(
                    res, 400,
                    "If limit is less than 10, only one of page or offset must be specified");
        }
        ok_json(res, json::array());
    });
    server.Post("/media", [](const httplib::Request& req, httplib::Response& res) {
        if (req.has_param("thumbnail") && req.get_param_value("type") != "link")
            return fail_text(res, 400, "If thumbnail is present, type must be set to 'link'");
        ok_json(res, json{{"ok", true}});
    });
    server.Get("/oracle", [](const httplib::Request&, httplib::Response& res) {
        fail_text(res, 400, "Computer says no");
    });
}

// ---------------------------------------------------------------------------
// blank-response fixtures.

const char* kBlank404Doc = R"json({
  "swagger": "2.0",
  "info": {"title": "blank 404 fixture", "version": "1.0"},
  "definitions": {
    "Gadget": {
      "type": "object",
      "required": ["label"],
      "properties": {
        "id": {"type": "integer"},
        "label": {"type": "string"}
      }
    }
  },
  "paths": {
    "/gadgets": {
      "post": {
        "operationId": "createGadget",
        "parameters": [
          {"in": "body", "name": "body", "schema": {"$ref": "#/definitions/Gadget"}}
        ],
        "responses": {
          "200": {"description": "ok", "schema": {"$ref": "#/definitions/Gadget"}}
        }
      }
    },
    "/gadgets/{gadgetId}": {
      "get": {
        "operationId": "getGadget",
        "parameters": [
          {"name": "gadgetId", "in": "path", "required": true, "type": "integer"}
        ],
        "responses": {
          "200": {"description": "ok", "schema": {"$ref": "#/definitions/Gadget"}},
          "404": {"description": "missing"}
        }
      }
    }
  }
})json";

void bind_blank404(httplib::Server& server) {
    auto store = std::make_shared<std::map<long, std::string>>();
    auto next = std::make_shared<long>(5000);
    server.Post("/gadgets", [store, next](const httplib::Request& req, httplib::Response& res) {
        json body = json::parse(req.body, nullptr, false);
        long id = (*next)++;
        std::string label = "gadget";
        if (body.is_object() && body.contains("gadget") && body["gadget"].contains("label") &&
            body["gadget"]["label"].is_string())
            label = body["gadget"]["label"].get<std::string>();
        (*store)[id] = label;
        ok_json(res, json{{"id", id}, {"label", label}});
    });
    server.Get(R"(/gadgets/(-?\d+))", [store](const httplib::Request& req, httplib::Response& res) {
        long id = std::stol(req.matches[1].str());
        auto it = store->find(id);
        if (it == store->end()) {
            res.status = 404;  // deliberately empty body
            return;
        }
        ok_json(res, json{{"id", id}, {"label", it->second}});
    });
}

const char* kBlank400Doc = R"json({
  "swagger": "2.0",
  "info": {"title": "blank 400 fixture", "version": "1.0"},
  "paths": {
    "/scan": {
      "get": {
        "operationId": "scan",
        "parameters": [
          {"name": "seed", "in": "query", "type": "string"}
        ],
        "responses": {"200": {"description": "ok"}}
      }
    }
  }
})json";

void bind_blank400(httplib::Server& server) {
    server.Get("/scan", [](const httplib::Request&, httplib::Response& res) {
        res.status = 400;  // empty body: engine must fall back to status heuristics
    });
}

// ---------------------------------------------------------------------------
// termination fixtures.

const char* kAll200Doc = R"json({
  "swagger": "2.0",
  "info": {"title": "all-pass fixture", "version": "1.0"},
  "paths": {
    "/alpha": {
      "get": {
        "operationId": "alphaPing",
        "responses": {"200": {"description": "ok"}}
      }
    },
    "/beta": {
      "post": {
        "operationId": "betaPing",
        "parameters": [
          {"name": "note", "in": "query", "type": "string"}
        ],
        "responses": {"200": {"description": "ok"}}
      }
    }
  }
})json";

void bind_all200(httplib::Server& server) {
    server.Get("/alpha", [](const httplib::Request&, httplib::Response& res) {
        ok_json(res, json{{"ok", true}});
    });
    server.Post("/beta", [](const httplib::Request&, httplib::Response& res) {
        ok_json(res, json{{"ok", true}});
    });
}

const char* kRandomDoc = R"json({
  "swagger": "2.0",
  "info": {"title": "fresh-message fixture", "version": "1.0"},
  "paths": {
    "/chaos": {
      "get": {
        "operationId": "chaos",
        "responses": {"200": {"description": "ok"}}
      }
    }
  }
})json";

void bind_random(httplib::Server& server) {
    auto counter = std::make_shared<std::atomic<unsigned>>(0);
    server.Get("/chaos", [counter](const httplib::Request&, httplib::Response& res) {
        // alphabetic suffix so number masking cannot collapse the messages
        unsigned n = counter->fetch_add(1);
        std::string suffix;
        do {
            suffix.push_back(static_cast<char>('a' + n % 26));
            n /= 26;
        } while (n > 0);
        fail_text(res, 400, "failure variant " + suffix);
    });
}

// ---------------------------------------------------------------------------
// metrics20: 18 operations answering 2xx, two answering only 5xx.

std::string make_metrics20_doc() {
    json doc{{"swagger", "2.0"},
             {"info", {{"title", "coverage metrics fixture"}, {"version", "1.0"}}},
             {"paths", json::object()}};
    for (int i = 1; i <= 20; ++i) {
        char id[8];
        std::snprintf(id, sizeof id, "op%02d", i);
        char path[8];
        std::snprintf(path, sizeof path, "/m%02d", i);
        doc["paths"][path] = {
            {"get",
             {{"operationId", id}, {"responses", {{"200", {{"description", "ok"}}}}}}}};
    }
    return doc.dump(2);
}

void bind_metrics20(httplib::Server& server) {
    for (int i = 1; i <= 18; ++i) {
        char path[8];
        std::snprintf(path, sizeof path, "/m%02d", i);
        server.Get(path, [](const httplib::Request&, httplib::Response& res) {
            ok_json(res, json{{"ok", true}});
        });
    }
    server.Get("/m19", [](const httplib::Request&, httplib::Response& res) {
        fail_text(res, 500,
                  "Exception in thread main\n"
                  " at com.example.Handler.handle(Handler.java:42)\n"
                  " at com.example.Server.run(Server.java:10)");
    });
    server.Get("/m20", [](const httplib::Request&, httplib::Response& res) {
        fail_text(res, 500, "internal failure");
    });
}

// ---------------------------------------------------------------------------

std::map<std::string, FixtureSpec> build_catalog() {
    std::map<std::string, FixtureSpec> catalog;

    catalog["langtool"] = FixtureSpec{
        "langtool",
        "text-check service: One(text, data) plus a categorical language parameter",
        kLangtoolDoc,
        SpecFormat::Yaml,
        {Constraint{OneConstraint{{"check.formdata.data", "check.formdata.text"}}},
         Constraint{DataNonArithmeticConstraint{"check.formdata.language",
                                                DataProperty::Categorical,
                                                {"en", "fr", "de", "es"}}}},
        bind_langtool};

    catalog["petstore"] = FixtureSpec{
        "petstore",
        "order store: deleteOrder consumes the id produced by placeOrder",
        kPetstoreDoc,
        SpecFormat::Json,
        {Constraint{ProducerConsumerConstraint{"placeOrder", "placeOrder.200.id", "deleteOrder",
                                               "deleteorder.path.orderId"}}},
        bind_petstore};

    catalog["staged"] = FixtureSpec{
        "staged",
        "five operations layering producer-consumer, One and categorical constraints",
        kStagedDoc,
        SpecFormat::Json,
        {Constraint{ProducerConsumerConstraint{"createWidget", "createWidget.200.id", "getWidget",
                                               "getwidget.path.widgetId"}},
         Constraint{ProducerConsumerConstraint{"createWidget", "createWidget.200.id",
                                               "deleteWidget", "deletewidget.path.widgetId"}},
         Constraint{OneConstraint{{"searchwidgets.query.city", "searchwidgets.query.zipcode"}}},
         Constraint{DataNonArithmeticConstraint{"translate.query.lang", DataProperty::Categorical,
                                                {"en", "de"}}}},
        bind_staged};

    catalog["kitchen"] = FixtureSpec{
        "kitchen",
        "one operation per remaining response category",
        kKitchenDoc,
        SpecFormat::Json,
        {Constraint{AdditionalMandatoryConstraint{"submitform.query.apikey"}},
         Constraint{OrConstraint{{"notify.query.email_address", "notify.query.phone"}}},
         Constraint{AllOrNoneConstraint{{"locate.query.lat", "locate.query.lng"}}},
         Constraint{ConditionalRequiredConstraint{"filterlist.query.sort", true,
                                                  "filterlist.query.filter", true}},
         Constraint{DataArithmeticConstraint{"range.query.min", RelOp::Le,
                                             ParamRef{"range.query.max"}}},
         Constraint{DataInfluencedSelectionConstraint{
             DataArithmeticConstraint{"page.query.limit", RelOp::Lt, 10.0},
             OneConstraint{{"page.query.offset", "page.query.page"}}}},
         Constraint{ParamInfluencedDataConstraint{
             ParamPresence{"media.query.thumbnail", true},
             DataArithmeticConstraint{"media.query.type", RelOp::Eq, std::string("link")}}}},
        bind_kitchen};

    catalog["blank404"] = FixtureSpec{
        "blank404",
        "missing resource answered with an empty-body 404",
        kBlank404Doc,
        SpecFormat::Json,
        {Constraint{ProducerConsumerConstraint{"createGadget", "createGadget.200.id", "getGadget",
                                               "getgadget.path.gadgetId"}}},
        bind_blank404};

    catalog["blank400"] = FixtureSpec{"blank400",
                                      "empty-body 400 on every request: a data issue, no constraint",
                                      kBlank400Doc,
                                      SpecFormat::Json,
                                      {},
                                      bind_blank400};

    catalog["all200"] = FixtureSpec{
        "all200", "every request passes", kAll200Doc, SpecFormat::Json, {}, bind_all200};

    catalog["random"] = FixtureSpec{"random",
                                    "a fresh failure message per request; never converges",
                                    kRandomDoc,
                                    SpecFormat::Json,
                                    {},
                                    bind_random};

    catalog["metrics20"] = FixtureSpec{"metrics20",
                                       "20 operations: 18 reach 2xx, 2 reach only 5xx",
                                       make_metrics20_doc(),
                                       SpecFormat::Json,
                                       {},
                                       bind_metrics20};

    return catalog;
}

std::map<std::string, FixtureSpec>& catalog() {
    static std::map<std::string, FixtureSpec> c = build_catalog();
    return c;
}

}  // namespace

std::vector<std::string> fixture_names() {
    std::vector<std::string> names;
    for (const auto& [name, spec] : catalog()) names.push_back(name);
    return names;
}

const FixtureSpec& fixture_spec(const std::string& name) { return catalog().at(name); }

struct FixtureService::Impl {
    httplib::Server server;
    std::thread thread;
};

FixtureService::FixtureService(const FixtureSpec& spec, int port)
    : spec_(spec), impl_(std::make_unique<Impl>()) {
    spec_.bind(impl_->server);
    if (port == 0) {
        port_ = impl_->server.bind_to_any_port("127.0.0.1");
        if (port_ <= 0) throw BindError("cannot bind a port for fixture " + spec_.name);
    } else {
        if (!impl_->server.bind_to_port("127.0.0.1", port))
            throw BindError("cannot bind port " + std::to_string(port));
        port_ = port;
    }
    impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
    for (int i = 0; i < 100 && !impl_->server.is_running(); ++i)
        std::this_thread::sleep_for(std::chrono::milliseconds(10));
}

FixtureService::~FixtureService() {
    if (impl_) {
        impl_->server.stop();
        if (impl_->thread.joinable()) impl_->thread.join();
    }
}

std::unique_ptr<FixtureService> serve_fixture(const std::string& name, int port) {
    return std::make_unique<FixtureService>(fixture_spec(name), port);
}

MatchReport ground_truth_check(const std::vector<Constraint>& learned,
                               const std::vector<Constraint>& truth) {
    MatchReport report;
    std::vector<bool> matched(learned.size(), false);
    for (const auto& t : truth) {
        bool found = false;
        for (std::size_t i = 0; i < learned.size(); ++i) {
            if (structurally_equal(learned[i], t)) {
                matched[i] = true;
                found = true;
            }
        }
        if (found)
            ++report.equivalent;
        else
            report.missing.push_back(t);
    }
    for (std::size_t i = 0; i < learned.size(); ++i)
        if (!matched[i]) report.extra.push_back(learned[i]);
    return report;
}

}  // namespace restref
