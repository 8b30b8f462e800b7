#pragma once

#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "restref/model.hpp"

namespace restref {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class SpecFormat { Json, Yaml };

struct LoadOptions {
    int schema_depth_limit = 3;  // recursion unrolls to this depth, then truncates
};

// Parses an OpenAPI 2.0 / 3.x document into the extended specification
// model: operations with transitively unrolled input parameters, outputs per
// response code, captured examples, empty constraint sets. Unsupported
// constructs (callbacks, webhooks, remote $refs) are skipped with a warning,
// never a failure.
SpecModel load_spec(const std::string& document, SpecFormat format,
                    const LoadOptions& options = {});

// Infers the format from the file extension (.yaml/.yml vs everything else).
SpecModel load_spec_file(const std::string& path, const LoadOptions& options = {});

// Flattens a schema into dotted-path parameters rooted at lower(sname).
// Required-ness of a nested field is the conjunction of required flags along
// the path; cycles truncate at depth_limit with the truncation point flagged.
std::vector<InputParameter> unroll_schema(const Schema& s, const SpecModel& model,
                                          int depth_limit);

// YAML text to the equivalent JSON value.
nlohmann::json yaml_to_json(const std::string& text);

}  // namespace restref
