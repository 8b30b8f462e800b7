#include "restref/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include <httplib.h>

namespace restref {

namespace {

std::string value_to_string(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

std::string url_encode(const std::string& s) {
    static const char* hex = "0123456789ABCDEF";
    std::string out;
    for (unsigned char c : s) {
        if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
            out += static_cast<char>(c);
        } else {
            out += '%';
            out += hex[c >> 4];
            out += hex[c & 15];
        }
    }
    return out;
}

// Inserts `value` at the dotted path inside `root`, creating objects on the
// way down.
void nest_value(nlohmann::json& root, const std::string& dotted, const nlohmann::json& value) {
    nlohmann::json* cur = &root;
    std::size_t start = 0;
    while (true) {
        auto dot = dotted.find('.', start);
        std::string seg = dotted.substr(start, dot == std::string::npos ? dot : dot - start);
        if (dot == std::string::npos) {
            (*cur)[seg] = value;
            return;
        }
        if (!cur->contains(seg) || !(*cur)[seg].is_object()) (*cur)[seg] = nlohmann::json::object();
        cur = &(*cur)[seg];
        start = dot + 1;
    }
}

constexpr std::size_t kBodyTruncate = 64 * 1024;

}  // namespace

std::optional<nlohmann::json> json_path_lookup(const nlohmann::json& root,
                                               const std::string& path) {
    const nlohmann::json* cur = &root;
    std::size_t start = 0;
    while (start <= path.size()) {
        while (cur->is_array()) {
            if (cur->empty()) return std::nullopt;
            cur = &cur->front();  // first-element rule
        }
        auto dot = path.find('.', start);
        std::string seg =
            path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (!cur->is_object() || !cur->contains(seg)) return std::nullopt;
        cur = &(*cur)[seg];
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    while (cur->is_array()) {
        if (cur->empty()) return std::nullopt;
        cur = &cur->front();
    }
    return std::optional<nlohmann::json>(std::in_place, *cur);
}

std::vector<TestCase> generate_tests(const SpecModel& model,
                                     const std::vector<SequenceScenario>& sequences,
                                     const std::map<std::string, OpScenarios>& scenarios) {
    std::vector<TestCase> out;
    for (const auto& seq : sequences) {
        auto it = scenarios.find(seq.target_op);
        if (it == scenarios.end()) continue;
        const OpScenarios& target = it->second;
        for (std::size_t i = 0; i < target.params.size(); ++i) {
            const auto& data_list = i < target.data.size() ? target.data[i]
                                                          : std::vector<DataScenario>{};
            for (const auto& data : data_list) {
                TestCase tc;
                tc.seq = seq;
                tc.deps = seq.deps;
                for (const auto& opname : seq.ops) {
                    if (opname == seq.target_op) {
                        tc.params[opname] = target.params[i];
                        tc.data[opname] = data;
                    } else {
                        auto pit = scenarios.find(opname);
                        if (pit == scenarios.end()) continue;
                        tc.params[opname] = pit->second.prereq;
                        tc.data[opname] = pit->second.prereq_data;
                    }
                    tc.checks.push_back(ResponseCheck{opname, 200, 399});
                }
                out.push_back(std::move(tc));
            }
        }
    }
    (void)model;
    return out;
}

RequestPlan build_request(const Operation& op, const ParameterScenario& scenario,
                          const DataScenario& data, const RunState& state) {
    RequestPlan plan;
    plan.method = op.method;
    plan.path = op.path;
    nlohmann::json body = nlohmann::json::object();
    bool has_body = false;

    for (const auto& p : op.inputs) {
        if (p.tombstoned) continue;
        bool injected = state.bindings.count(p.id) > 0;
        if (!scenario.contains(p.id) && !injected) {
            if (p.loc == ParamLoc::Path)
                throw MissingPathValue("no value for path parameter " + p.id);
            continue;
        }
        nlohmann::json value;
        if (injected) {
            value = state.bindings.at(p.id);
        } else if (auto it = data.assignment.find(p.id); it != data.assignment.end()) {
            value = it->second;
        } else if (p.loc == ParamLoc::Path) {
            throw MissingPathValue("no value for path parameter " + p.id);
        } else {
            continue;
        }
        switch (p.loc) {
            case ParamLoc::Path: {
                std::string needle = "{" + p.pname + "}";
                auto pos = plan.path.find(needle);
                if (pos == std::string::npos)
                    throw MissingPathValue("path template lacks {" + p.pname + "}");
                plan.path.replace(pos, needle.size(), url_encode(value_to_string(value)));
                break;
            }
            case ParamLoc::Query:
                plan.query.emplace_back(p.pname, value_to_string(value));
                break;
            case ParamLoc::Header:
                plan.headers.emplace_back(p.pname, value_to_string(value));
                break;
            case ParamLoc::FormData: {
                // urlencoded bodies parsed from a schema carry dotted names;
                // the wire field is the leaf
                std::string field = p.pname;
                if (auto dot = field.find_last_of('.'); dot != std::string::npos)
                    field = field.substr(dot + 1);
                plan.form.emplace_back(field, value_to_string(value));
                break;
            }
            case ParamLoc::Body:
                nest_value(body, p.pname, value);
                has_body = true;
                break;
        }
    }
    if (plan.path.find('{') != std::string::npos)
        throw MissingPathValue("unresolved path template in " + plan.path);

    if (has_body) {
        plan.content_type = op.body_media_type.empty() ? "application/json" : op.body_media_type;
        plan.body = body.dump();
    } else if (!plan.form.empty()) {
        plan.content_type = op.body_media_type.empty() ? "application/x-www-form-urlencoded"
                                                       : op.body_media_type;
        std::string enc;
        for (const auto& [k, v] : plan.form) {
            if (!enc.empty()) enc += '&';
            enc += url_encode(k) + "=" + url_encode(v);
        }
        plan.body = enc;
    }
    return plan;
}

void inject_dependencies(const Operation& producer, int status, const std::string& body,
                         const std::vector<ProducerConsumerConstraint>& deps, RunState& state) {
    nlohmann::json parsed = nlohmann::json::parse(body, nullptr, false);
    for (const auto& dep : deps) {
        if (dep.producer_op != producer.opname) continue;
        // producer_param_path: <opname>.<code>.<field path>
        auto first = dep.producer_param_path.find('.');
        if (first == std::string::npos) continue;
        auto second = dep.producer_param_path.find('.', first + 1);
        if (second == std::string::npos) continue;
        std::string code = dep.producer_param_path.substr(first + 1, second - first - 1);
        std::string field = dep.producer_param_path.substr(second + 1);
        bool code_ok = code == std::to_string(status) ||
                       (code == "2xx" && status >= 200 && status < 300) ||
                       (code == "default");
        if (!code_ok) continue;
        if (parsed.is_discarded()) {
            state.misses.push_back(dep.producer_op + ": response not JSON");
            continue;
        }
        auto value = json_path_lookup(parsed, field);
        if (!value) {
            state.misses.push_back(dep.producer_op + ": path " + field + " not in response");
            continue;
        }
        state.bindings[dep.consumer_param_id] = *value;
    }
}

std::pair<ExecutionReport, std::vector<FailureRecord>> execute_tests(
    const std::vector<TestCase>& testcases, const SpecModel& model, const ExecOptions& options,
    std::size_t& hits_used) {
    ExecutionReport report;
    report.iteration = options.iteration;
    std::vector<FailureRecord> failures;
    std::set<std::tuple<std::string, int, std::string>> seen;
    if (testcases.empty()) return {report, failures};

    httplib::Client client(options.base_url);
    client.set_connection_timeout(std::chrono::milliseconds(
        static_cast<long>(options.timeout_s * 1000)));
    client.set_read_timeout(std::chrono::milliseconds(static_cast<long>(options.timeout_s * 1000)));
    client.set_follow_location(false);

    // reachability probe; any HTTP answer counts, transport failure aborts
    {
        auto probe = client.Get("/");
        if (!probe && probe.error() == httplib::Error::Connection)
            throw ConnectivityError("cannot reach " + options.base_url);
    }

    auto record_failure = [&](const std::string& op_id, int status, const std::string& body,
                              const nlohmann::json& snapshot) {
        FailureRecord f;
        f.op_id = op_id;
        f.status = status;
        f.message = strip_html(body);
        f.normalized_message = normalize_message(f.message);
        f.request_snapshot = snapshot;
        if (seen.insert(f.key()).second) failures.push_back(std::move(f));
    };

    for (const auto& tc : testcases) {
        RunState state;
        bool aborted = false;
        for (const auto& opname : tc.seq.ops) {
            const Operation* op = model.find_operation(opname);
            if (!op) continue;
            RequestLogEntry entry;
            entry.op_id = opname;
            if (aborted || hits_used >= options.hit_budget) {
                entry.skipped = true;
                ++report.skipped;
                report.entries.push_back(std::move(entry));
                continue;
            }
            RequestPlan plan;
            try {
                plan = build_request(*op, tc.params.at(opname), tc.data.at(opname), state);
            } catch (const MissingPathValue& e) {
                record_failure(opname, 0, std::string("generator: ") + e.what(), {});
                aborted = true;
                entry.skipped = true;
                ++report.skipped;
                report.entries.push_back(std::move(entry));
                continue;
            }

            std::string target = plan.path;
            for (std::size_t i = 0; i < plan.query.size(); ++i) {
                target += i == 0 ? '?' : '&';
                target += url_encode(plan.query[i].first) + "=" + url_encode(plan.query[i].second);
            }
            httplib::Headers headers;
            for (const auto& [k, v] : options.static_headers) headers.emplace(k, v);
            for (const auto& [k, v] : plan.headers) headers.emplace(k, v);

            auto start = std::chrono::steady_clock::now();
            httplib::Result res;
            switch (plan.method) {
                case HttpMethod::Get: res = client.Get(target, headers); break;
                case HttpMethod::Delete:
                    res = plan.body.empty()
                              ? client.Delete(target, headers)
                              : client.Delete(target, headers, plan.body, plan.content_type);
                    break;
                case HttpMethod::Post:
                    res = client.Post(target, headers, plan.body, plan.content_type);
                    break;
                case HttpMethod::Put:
                    res = client.Put(target, headers, plan.body, plan.content_type);
                    break;
                case HttpMethod::Patch:
                    res = client.Patch(target, headers, plan.body, plan.content_type);
                    break;
            }
            ++hits_used;
            ++report.issued;
            entry.latency_ms = std::chrono::duration<double, std::milli>(
                                   std::chrono::steady_clock::now() - start)
                                   .count();

            nlohmann::json snapshot{{"op", opname},
                                    {"path", plan.path},
                                    {"selected", tc.params.at(opname).selected},
                                    {"data", tc.data.at(opname).assignment},
                                    {"body", plan.body}};

            if (!res) {
                entry.status = 0;
                ++report.c0;
                record_failure(opname, 0, "transport: " + httplib::to_string(res.error()),
                               snapshot);
                aborted = true;  // nothing downstream can inject from this
                report.entries.push_back(std::move(entry));
                continue;
            }
            entry.status = res->status;
            entry.body = res->body.substr(0, kBodyTruncate);
            if (res->status >= 200 && res->status < 300) ++report.c2xx;
            else if (res->status < 400) ++report.c3xx;
            else if (res->status < 500) ++report.c4xx;
            else ++report.c5xx;

            for (const auto& check : tc.checks)
                if (check.op_id == opname)
                    entry.check_passed = res->status >= check.low && res->status <= check.high;

            if (res->status >= 400) record_failure(opname, res->status, res->body, snapshot);

            if (res->status >= 200 && res->status < 400) {
                inject_dependencies(*op, res->status, res->body, tc.deps, state);
            } else if (opname != tc.seq.target_op) {
                aborted = true;  // prerequisite failed; consumer calls would only add noise
            }
            report.entries.push_back(std::move(entry));
        }
    }
    return {report, failures};
}

}  // namespace restref
