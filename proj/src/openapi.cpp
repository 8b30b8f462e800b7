#include "restref/openapi.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <regex>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace restref {

using nlohmann::json;

namespace {

std::string to_lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

json yaml_node_to_json(const YAML::Node& node) {
    switch (node.Type()) {
        case YAML::NodeType::Null:
            return nullptr;
        case YAML::NodeType::Scalar: {
            const std::string& s = node.Scalar();
            // Quoted scalars stay strings; plain scalars get the usual YAML
            // type resolution.
            if (node.Tag() == "!") return s;
            static const std::regex int_re(R"(^-?\d+$)");
            static const std::regex float_re(R"(^-?\d*\.\d+([eE][+-]?\d+)?$)");
            if (s == "true" || s == "True") return true;
            if (s == "false" || s == "False") return false;
            if (s == "null" || s == "~" || s.empty()) return nullptr;
            if (std::regex_match(s, int_re)) {
                try {
                    return std::stoll(s);
                } catch (const std::exception&) {
                    return s;
                }
            }
            if (std::regex_match(s, float_re)) {
                try {
                    return std::stod(s);
                } catch (const std::exception&) {
                    return s;
                }
            }
            return s;
        }
        case YAML::NodeType::Sequence: {
            json arr = json::array();
            for (const auto& item : node) arr.push_back(yaml_node_to_json(item));
            return arr;
        }
        case YAML::NodeType::Map: {
            json obj = json::object();
            for (const auto& kv : node) obj[kv.first.as<std::string>()] = yaml_node_to_json(kv.second);
            return obj;
        }
        default:
            return nullptr;
    }
}

ValueConstraints parse_value_constraints(const json& node) {
    ValueConstraints vc;
    if (node.contains("minimum") && node["minimum"].is_number())
        vc.minimum = node["minimum"].get<double>();
    if (node.contains("maximum") && node["maximum"].is_number())
        vc.maximum = node["maximum"].get<double>();
    if (node.contains("format") && node["format"].is_string())
        vc.format = node["format"].get<std::string>();
    if (node.contains("pattern") && node["pattern"].is_string())
        vc.pattern = node["pattern"].get<std::string>();
    if (node.contains("enum") && node["enum"].is_array()) {
        for (const auto& v : node["enum"]) {
            if (v.is_string())
                vc.enum_values.push_back(v.get<std::string>());
            else
                vc.enum_values.push_back(v.dump());
        }
    }
    return vc;
}

std::vector<json> parse_examples(const json& node) {
    std::vector<json> out;
    if (node.contains("example")) out.push_back(node["example"]);
    if (node.contains("examples")) {
        const auto& ex = node["examples"];
        if (ex.is_array()) {
            for (const auto& v : ex) out.push_back(v);
        } else if (ex.is_object()) {
            // 3.x style: {name: {value: ...}}
            for (const auto& [k, v] : ex.items()) {
                (void)k;
                if (v.is_object() && v.contains("value"))
                    out.push_back(v["value"]);
                else
                    out.push_back(v);
            }
        }
    }
    if (node.contains("default")) out.push_back(node["default"]);
    return out;
}

// Loader context shared while walking one document.
struct Loader {
    const json& doc;
    SpecModel& model;
    LoadOptions options;
    json schema_table = json::object();  // name -> raw schema node

    std::string resolve_ref_name(const std::string& ref) const {
        auto pos = ref.find_last_of('/');
        return pos == std::string::npos ? ref : ref.substr(pos + 1);
    }

    const json* lookup_schema(const std::string& name) const {
        auto it = schema_table.find(name);
        return it == schema_table.end() ? nullptr : &*it;
    }

    // Unrolls `schema` into dotted parameters under `prefix`. `depth` counts
    // schema levels (the root of the body is level 1).
    void unroll(const json& schema, const std::string& prefix, bool required_so_far, int depth,
                ParamLoc loc, const std::string& opname, std::vector<InputParameter>& out,
                std::vector<std::string>& ref_stack, bool required_here = true) {
        json node = schema;
        std::string ref_name;
        if (node.contains("$ref")) {
            std::string ref = node["$ref"].get<std::string>();
            if (ref.rfind("#/", 0) != 0) {
                model.warnings.push_back("skipping remote $ref: " + ref);
                return;
            }
            ref_name = resolve_ref_name(ref);
            const json* target = lookup_schema(ref_name);
            if (!target) {
                model.warnings.push_back("unresolved $ref: " + ref);
                return;
            }
            node = *target;
        }

        std::string type = node.value("type", node.contains("properties") ? "object" : "string");
        if (type == "object" || node.contains("properties")) {
            if (depth > options.schema_depth_limit) {
                InputParameter p;
                p.pname = prefix;
                p.ptype = "object";
                p.is_required = required_so_far;
                p.loc = loc;
                p.id = SpecModel::make_param_id(opname, loc, prefix);
                p.recursive_truncated = true;
                p.required_in_parent = required_here;
                auto dot = prefix.find_last_of('.');
                p.parent_path = dot == std::string::npos ? "" : prefix.substr(0, dot);
                out.push_back(std::move(p));
                model.warnings.push_back("schema recursion truncated at " + prefix);
                return;
            }
            std::vector<std::string> required_fields;
            if (node.contains("required") && node["required"].is_array())
                for (const auto& r : node["required"]) required_fields.push_back(r.get<std::string>());
            if (!node.contains("properties")) return;
            if (!ref_name.empty()) ref_stack.push_back(ref_name);
            for (const auto& [fname, fschema] : node["properties"].items()) {
                bool freq = std::find(required_fields.begin(), required_fields.end(), fname) !=
                            required_fields.end();
                std::string child = prefix.empty() ? fname : prefix + "." + fname;
                unroll(fschema, child, required_so_far && freq, depth + 1, loc, opname, out,
                       ref_stack, freq);
            }
            if (!ref_name.empty()) ref_stack.pop_back();
            return;
        }

        InputParameter p;
        p.pname = prefix;
        p.ptype = type;
        p.is_required = required_so_far;
        p.loc = loc;
        p.pc = parse_value_constraints(node);
        p.examples = parse_examples(node);
        p.id = SpecModel::make_param_id(opname, loc, prefix);
        p.required_in_parent = required_here;
        auto dot = prefix.find_last_of('.');
        p.parent_path = dot == std::string::npos ? "" : prefix.substr(0, dot);
        out.push_back(std::move(p));
    }

    void unroll_outputs(const json& schema, const std::string& prefix, const std::string& code,
                        int depth, std::vector<OutputParameter>& out) {
        json node = schema;
        if (node.contains("$ref")) {
            const json* target = lookup_schema(resolve_ref_name(node["$ref"].get<std::string>()));
            if (!target) return;
            node = *target;
        }
        std::string type = node.value("type", node.contains("properties") ? "object" : "string");
        if (type == "array" && node.contains("items")) {
            unroll_outputs(node["items"], prefix, code, depth, out);
            return;
        }
        if ((type == "object" || node.contains("properties")) && node.contains("properties")) {
            if (depth > options.schema_depth_limit) return;
            for (const auto& [fname, fschema] : node["properties"].items()) {
                std::string child = prefix.empty() ? fname : prefix + "." + fname;
                unroll_outputs(fschema, child, code, depth + 1, out);
            }
            return;
        }
        if (!prefix.empty()) out.push_back(OutputParameter{prefix, type, code});
    }

    void build_schema_table() {
        if (doc.contains("definitions") && doc["definitions"].is_object())
            for (const auto& [name, schema] : doc["definitions"].items()) schema_table[name] = schema;
        if (doc.contains("components") && doc["components"].is_object() &&
            doc["components"].contains("schemas"))
            for (const auto& [name, schema] : doc["components"]["schemas"].items())
                schema_table[name] = schema;

        for (const auto& [name, schema] : schema_table.items()) {
            Schema s;
            s.sname = name;
            std::vector<std::string> required_fields;
            if (schema.contains("required") && schema["required"].is_array())
                for (const auto& r : schema["required"]) required_fields.push_back(r.get<std::string>());
            if (schema.contains("properties")) {
                for (const auto& [fname, fschema] : schema["properties"].items()) {
                    SchemaField f;
                    f.fname = fname;
                    if (fschema.contains("$ref"))
                        f.ftype = resolve_ref_name(fschema["$ref"].get<std::string>());
                    else
                        f.ftype = fschema.value("type", "string");
                    f.is_required = std::find(required_fields.begin(), required_fields.end(), fname) !=
                                    required_fields.end();
                    f.fieldconstraint = parse_value_constraints(fschema);
                    s.fields.push_back(std::move(f));
                }
            }
            model.schemas.push_back(std::move(s));
        }
    }

    std::string synthesize_opname(const std::string& method, const std::string& path) const {
        std::string name = to_lower(method);
        for (char c : path) {
            if (std::isalnum(static_cast<unsigned char>(c)))
                name.push_back(c);
            else if (c == '/' || c == '{' || c == '}')
                name.push_back('_');
        }
        return name;
    }

    void parse_parameter(const json& pnode, const std::string& opname, Operation& op) {
        std::string in = pnode.value("in", "query");
        if (in == "body") {
            // OpenAPI 2.0 body parameter
            if (pnode.contains("schema")) parse_body_schema(pnode["schema"], opname, op);
            return;
        }
        ParamLoc loc = ParamLoc::Query;
        if (in == "path")
            loc = ParamLoc::Path;
        else if (in == "header")
            loc = ParamLoc::Header;
        else if (in == "formData")
            loc = ParamLoc::FormData;
        else if (in == "cookie") {
            model.warnings.push_back("skipping cookie parameter in " + opname);
            return;
        }

        InputParameter p;
        p.pname = pnode.value("name", "");
        p.loc = loc;
        p.is_required = loc == ParamLoc::Path || pnode.value("required", false);
        const json& type_node = pnode.contains("schema") ? pnode["schema"] : pnode;
        p.ptype = type_node.value("type", "string");
        p.pc = parse_value_constraints(type_node);
        auto ex = parse_examples(pnode);
        auto ex2 = parse_examples(type_node);
        ex.insert(ex.end(), ex2.begin(), ex2.end());
        p.examples = std::move(ex);
        p.id = SpecModel::make_param_id(opname, loc, p.pname);
        p.required_in_parent = p.is_required;
        op.inputs.push_back(std::move(p));
    }

    void parse_body_schema(const json& schema, const std::string& opname, Operation& op,
                           ParamLoc loc = ParamLoc::Body) {
        std::string prefix = "body";
        if (schema.contains("$ref"))
            prefix = to_lower(resolve_ref_name(schema["$ref"].get<std::string>()));
        std::vector<std::string> stack;
        std::vector<InputParameter> params;
        unroll(schema, prefix, true, 1, loc, opname, params, stack);
        for (auto& p : params) op.inputs.push_back(std::move(p));
    }

    void parse_request_body(const json& rb, const std::string& opname, Operation& op) {
        if (!rb.contains("content")) return;
        for (const auto& [media, mnode] : rb["content"].items()) {
            if (!mnode.contains("schema")) continue;
            op.body_media_type = media;
            ParamLoc loc = ParamLoc::Body;
            if (media == "application/x-www-form-urlencoded" || media.rfind("multipart/", 0) == 0)
                loc = ParamLoc::FormData;
            parse_body_schema(mnode["schema"], opname, op, loc);
            return;  // first supported media type wins
        }
    }

    void parse_responses(const json& responses, Operation& op) {
        for (const auto& [code, rnode] : responses.items()) {
            const json* schema = nullptr;
            if (rnode.contains("schema")) {
                schema = &rnode["schema"];  // 2.0
            } else if (rnode.contains("content")) {
                for (const auto& [media, mnode] : rnode["content"].items()) {
                    (void)media;
                    if (mnode.contains("schema")) {
                        schema = &mnode["schema"];
                        break;
                    }
                }
            }
            if (schema) unroll_outputs(*schema, "", code, 1, op.outputs);
        }
    }

    void run() {
        build_schema_table();
        if (doc.contains("webhooks"))
            model.warnings.push_back("webhooks are not supported; skipped");
        if (!doc.contains("paths") || !doc["paths"].is_object()) return;

        for (const auto& [path, pathnode] : doc["paths"].items()) {
            for (const auto& [method, opnode] : pathnode.items()) {
                auto m = method_from_string(method);
                if (!m) {
                    if (method != "parameters" && method != "description" && method != "summary")
                        model.warnings.push_back("skipping unsupported method '" + method + "' on " + path);
                    continue;
                }
                if (opnode.contains("callbacks"))
                    model.warnings.push_back("callbacks are not supported; skipped for " + path);

                Operation op;
                op.method = *m;
                op.path = path;
                op.opname = opnode.value("operationId", synthesize_opname(method, path));
                if (model.find_operation(op.opname)) {
                    model.warnings.push_back("duplicate opname '" + op.opname + "'; suffixing");
                    op.opname += "_" + to_lower(method);
                }
                if (opnode.contains("tags") && opnode["tags"].is_array())
                    for (const auto& t : opnode["tags"]) op.tags.push_back(t.get<std::string>());

                // Path-item level parameters apply to every method.
                if (pathnode.contains("parameters"))
                    for (const auto& pnode : pathnode["parameters"]) parse_parameter(pnode, op.opname, op);
                if (opnode.contains("parameters"))
                    for (const auto& pnode : opnode["parameters"]) parse_parameter(pnode, op.opname, op);
                if (opnode.contains("requestBody")) parse_request_body(opnode["requestBody"], op.opname, op);
                if (opnode.contains("responses")) parse_responses(opnode["responses"], op);
                if (op.body_media_type.empty())
                    for (const auto& p : op.inputs)
                        if (p.loc == ParamLoc::Body) {
                            op.body_media_type = "application/json";
                            break;
                        }

                // Every {placeholder} must resolve to a PATH parameter.
                static const std::regex placeholder_re(R"(\{([^}/]+)\})");
                for (auto it = std::sregex_iterator(path.begin(), path.end(), placeholder_re);
                     it != std::sregex_iterator(); ++it) {
                    std::string name = (*it)[1].str();
                    bool declared = std::any_of(op.inputs.begin(), op.inputs.end(),
                                                [&](const InputParameter& p) {
                                                    return p.loc == ParamLoc::Path && p.pname == name;
                                                });
                    if (!declared) {
                        model.warnings.push_back("synthesizing undeclared path parameter '" + name +
                                                 "' for " + op.opname);
                        InputParameter p;
                        p.pname = name;
                        p.ptype = "string";
                        p.is_required = true;
                        p.loc = ParamLoc::Path;
                        p.id = SpecModel::make_param_id(op.opname, ParamLoc::Path, name);
                        op.inputs.push_back(std::move(p));
                    }
                }

                model.operations.push_back(std::move(op));
            }
        }
    }
};

}  // namespace

json yaml_to_json(const std::string& text) {
    try {
        return yaml_node_to_json(YAML::Load(text));
    } catch (const YAML::Exception& e) {
        throw ParseError(std::string("YAML parse failure: ") + e.what());
    }
}

SpecModel load_spec(const std::string& document, SpecFormat format, const LoadOptions& options) {
    json doc;
    if (format == SpecFormat::Json) {
        doc = json::parse(document, nullptr, false);
        if (doc.is_discarded()) throw ParseError("malformed JSON document");
    } else {
        doc = yaml_to_json(document);
    }
    if (!doc.is_object()) throw ParseError("document root must be an object");

    SpecModel model;
    Loader loader{doc, model, options};
    loader.run();
    model.original_operation_count = model.operations.size();
    return model;
}

SpecModel load_spec_file(const std::string& path, const LoadOptions& options) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    bool yaml = path.size() > 5 && (path.rfind(".yaml") == path.size() - 5);
    yaml = yaml || (path.size() > 4 && path.rfind(".yml") == path.size() - 4);
    return load_spec(ss.str(), yaml ? SpecFormat::Yaml : SpecFormat::Json, options);
}

std::vector<InputParameter> unroll_schema(const Schema& s, const SpecModel& model,
                                          int depth_limit) {
    // Rebuilds a raw-schema view from the model's schema table and reuses the
    // loader's unrolling walk.
    json table = json::object();
    for (const auto& sc : model.schemas) {
        json node;
        node["type"] = "object";
        json props = json::object();
        json required = json::array();
        for (const auto& f : sc.fields) {
            bool primitive = f.ftype == "integer" || f.ftype == "number" || f.ftype == "boolean" ||
                             f.ftype == "string" || f.ftype == "array" || f.ftype == "object";
            if (primitive)
                props[f.fname] = json{{"type", f.ftype}};
            else
                props[f.fname] = json{{"$ref", "#/definitions/" + f.ftype}};
            if (f.is_required) required.push_back(f.fname);
        }
        node["properties"] = std::move(props);
        node["required"] = std::move(required);
        table[sc.sname] = std::move(node);
    }
    json doc = json{{"definitions", table}};
    SpecModel scratch;
    LoadOptions opts;
    opts.schema_depth_limit = depth_limit;
    Loader loader{doc, scratch, opts};
    loader.build_schema_table();

    std::vector<InputParameter> out;
    std::vector<std::string> stack;
    json root = json{{"$ref", "#/definitions/" + s.sname}};
    std::string prefix = s.sname;
    std::transform(prefix.begin(), prefix.end(), prefix.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    loader.unroll(root, prefix, true, 1, ParamLoc::Body, "unrolled", out, stack);
    return out;
}

}  // namespace restref
