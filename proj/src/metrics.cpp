#include "restref/metrics.hpp"

#include <map>
#include <regex>
#include <set>
#include <sstream>

#include "restref/analyzer.hpp"

namespace restref {

bool has_stack_trace(const std::string& body) {
    if (body.find("Traceback") != std::string::npos) return true;
    if (body.find("Exception") != std::string::npos) return true;
    static const std::regex frame(R"(\bat\s+[A-Za-z_$][\w$.<>]*\s*\()");
    auto begin = std::sregex_iterator(body.begin(), body.end(), frame);
    return std::distance(begin, std::sregex_iterator()) >= 2;
}

Metrics compute_metrics(const std::vector<ExecutionReport>& reports, const SpecModel& model) {
    Metrics m;
    m.operation_count = model.original_operation_count;

    std::set<std::string> reached_ok5xx, reached_2xx;
    std::set<std::tuple<std::string, int, std::string>> defect_keys;
    for (const auto& r : reports) {
        IterationStats it;
        it.iteration = r.iteration;
        it.issued = r.issued;
        it.skipped = r.skipped;
        it.c2xx = r.c2xx;
        it.c3xx = r.c3xx;
        it.c4xx = r.c4xx;
        it.c5xx = r.c5xx;
        it.c0 = r.c0;
        m.iterations.push_back(it);
        m.total_hits += r.issued;
        for (const auto& e : r.entries) {
            if (e.skipped) continue;
            if (e.status >= 200 && e.status < 300) {
                reached_2xx.insert(e.op_id);
                reached_ok5xx.insert(e.op_id);
            } else if (e.status >= 500) {
                reached_ok5xx.insert(e.op_id);
                DefectRecord d;
                d.op_id = e.op_id;
                d.status = e.status;
                d.normalized_message = normalize_message(strip_html(e.body));
                d.has_stack_trace = has_stack_trace(e.body);
                if (defect_keys.insert({d.op_id, d.status, d.normalized_message}).second)
                    m.defects.push_back(std::move(d));
            }
        }
    }
    if (m.operation_count > 0) {
        m.oc = 100.0 * static_cast<double>(reached_ok5xx.size()) /
               static_cast<double>(m.operation_count);
        m.oc_2xx = 100.0 * static_cast<double>(reached_2xx.size()) /
                   static_cast<double>(m.operation_count);
    }
    return m;
}

nlohmann::json metrics_to_json(const Metrics& m) {
    nlohmann::json j{{"report_version", 1},
                     {"oc", m.oc},
                     {"oc_2xx", m.oc_2xx},
                     {"total_hits", m.total_hits},
                     {"operation_count", m.operation_count}};
    j["iterations"] = nlohmann::json::array();
    for (const auto& it : m.iterations)
        j["iterations"].push_back({{"iteration", it.iteration},
                                   {"issued", it.issued},
                                   {"skipped", it.skipped},
                                   {"2xx", it.c2xx},
                                   {"3xx", it.c3xx},
                                   {"4xx", it.c4xx},
                                   {"5xx", it.c5xx},
                                   {"timeouts", it.c0}});
    j["defects"] = nlohmann::json::array();
    for (const auto& d : m.defects)
        j["defects"].push_back({{"op", d.op_id},
                                {"status", d.status},
                                {"message", d.normalized_message},
                                {"has_stack_trace", d.has_stack_trace},
                                {"request", d.request_snapshot}});
    return j;
}

std::optional<Metrics> metrics_from_json(const nlohmann::json& j) {
    if (!j.is_object() || j.value("report_version", 0) != 1) return std::nullopt;
    Metrics m;
    try {
        m.oc = j.at("oc").get<double>();
        m.oc_2xx = j.at("oc_2xx").get<double>();
        m.total_hits = j.at("total_hits").get<std::size_t>();
        m.operation_count = j.at("operation_count").get<std::size_t>();
        for (const auto& it : j.at("iterations")) {
            IterationStats s;
            s.iteration = it.at("iteration").get<int>();
            s.issued = it.at("issued").get<std::size_t>();
            s.skipped = it.at("skipped").get<std::size_t>();
            s.c2xx = it.at("2xx").get<std::size_t>();
            s.c3xx = it.at("3xx").get<std::size_t>();
            s.c4xx = it.at("4xx").get<std::size_t>();
            s.c5xx = it.at("5xx").get<std::size_t>();
            s.c0 = it.at("timeouts").get<std::size_t>();
            m.iterations.push_back(s);
        }
        for (const auto& dj : j.at("defects")) {
            DefectRecord d;
            d.op_id = dj.at("op").get<std::string>();
            d.status = dj.at("status").get<int>();
            d.normalized_message = dj.at("message").get<std::string>();
            d.has_stack_trace = dj.at("has_stack_trace").get<bool>();
            d.request_snapshot = dj.value("request", nlohmann::json());
            m.defects.push_back(std::move(d));
        }
    } catch (const nlohmann::json::exception&) {
        return std::nullopt;
    }
    return m;
}

std::string metrics_to_text(const Metrics& m) {
    std::ostringstream out;
    out << "operation coverage: oc=" << m.oc << "%  oc_2xx=" << m.oc_2xx << "%  (of "
        << m.operation_count << " operations)\n";
    out << "total hits: " << m.total_hits << "\n";
    out << "iter  issued  2xx  3xx  4xx  5xx  timeouts  skipped\n";
    for (const auto& it : m.iterations) {
        out << "  " << it.iteration << "     " << it.issued << "     " << it.c2xx << "    "
            << it.c3xx << "    " << it.c4xx << "    " << it.c5xx << "    " << it.c0 << "        "
            << it.skipped << "\n";
    }
    if (!m.defects.empty()) {
        out << "defects (" << m.defects.size() << "):\n";
        for (const auto& d : m.defects)
            out << "  " << d.op_id << " " << d.status
                << (d.has_stack_trace ? " [stack trace] " : " ") << d.normalized_message << "\n";
    }
    return out.str();
}

bool metrics_invariants_ok(const Metrics& m) {
    if (m.oc_2xx < 0 || m.oc_2xx > m.oc || m.oc > 100.0) return false;
    std::size_t sum = 0;
    for (const auto& it : m.iterations) sum += it.issued;
    return sum == m.total_hits;
}

}  // namespace restref
