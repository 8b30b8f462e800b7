#include "restref/sequence.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace restref {

namespace {

// Producer ranking when several create the resource a consumer needs: prefer
// one whose referenced 2xx output is a plain (non-array) field near the top
// of the response — i.e. it creates a single resource.
int producer_score(const SpecModel& model, const ProducerConsumerConstraint& dep) {
    const Operation* producer = model.find_operation(dep.producer_op);
    if (!producer) return -1000;
    // producer_param_path looks like "placeOrder.200.id"
    std::string field;
    auto first = dep.producer_param_path.find('.');
    if (first != std::string::npos) {
        auto second = dep.producer_param_path.find('.', first + 1);
        if (second != std::string::npos) field = dep.producer_param_path.substr(second + 1);
    }
    int score = 0;
    for (const auto& out : producer->outputs) {
        if (out.pname != field) continue;
        score += 10;
        if (out.ptype != "array") score += 20;
        break;
    }
    // shallower paths mean the field sits directly on the resource object
    score -= static_cast<int>(std::count(field.begin(), field.end(), '.')) * 2;
    if (producer->method == HttpMethod::Post) score += 5;
    return score;
}

}  // namespace

std::vector<SequenceScenario> generate_sequences(
    const std::vector<ProducerConsumerConstraint>& deps, SpecModel& model) {
    std::map<std::string, std::size_t> op_index;
    for (std::size_t i = 0; i < model.operations.size(); ++i)
        op_index[model.operations[i].opname] = i;

    // Keep edges between live operations; pick one producer per consumer
    // parameter. Edge order preserves learning order (index into `deps`).
    struct Edge {
        ProducerConsumerConstraint dep;
        std::size_t learned_order;
    };
    std::map<std::pair<std::string, std::string>, Edge> chosen;  // (consumer, param) -> edge
    for (std::size_t i = 0; i < deps.size(); ++i) {
        const auto& d = deps[i];
        if (!op_index.count(d.producer_op) || !op_index.count(d.consumer_op)) continue;
        if (d.producer_op == d.consumer_op) continue;  // self-loop never helps
        auto key = std::make_pair(d.consumer_op, d.consumer_param_id);
        auto it = chosen.find(key);
        if (it == chosen.end()) {
            chosen.emplace(key, Edge{d, i});
        } else {
            int cur = producer_score(model, it->second.dep);
            int alt = producer_score(model, d);
            if (alt > cur || (alt == cur && d.producer_op < it->second.dep.producer_op))
                it->second = Edge{d, i};
        }
    }

    // Mutable edge list so cycle breaking can drop entries.
    std::vector<Edge> edges;
    for (auto& [key, e] : chosen) edges.push_back(e);

    // consumer -> incoming edges
    auto incoming = [&](const std::string& op) {
        std::vector<const Edge*> out;
        for (const auto& e : edges)
            if (e.dep.consumer_op == op) out.push_back(&e);
        return out;
    };

    auto build_sequence = [&](const std::string& target) -> SequenceScenario {
        // reverse transitive closure
        std::set<std::string> needed{target};
        std::vector<std::string> frontier{target};
        std::vector<ProducerConsumerConstraint> used;
        while (!frontier.empty()) {
            std::string op = frontier.back();
            frontier.pop_back();
            for (const Edge* e : incoming(op)) {
                used.push_back(e->dep);
                if (needed.insert(e->dep.producer_op).second)
                    frontier.push_back(e->dep.producer_op);
            }
        }

        // Kahn's algorithm over the needed subgraph, spec-order tie-break.
        std::vector<std::string> nodes(needed.begin(), needed.end());
        std::sort(nodes.begin(), nodes.end(), [&](const std::string& a, const std::string& b) {
            return op_index[a] < op_index[b];
        });
        std::vector<std::string> order;
        std::set<std::string> placed;
        while (order.size() < nodes.size()) {
            bool progressed = false;
            for (const auto& n : nodes) {
                if (placed.count(n)) continue;
                bool ready = true;
                for (const auto& d : used)
                    if (d.consumer_op == n && needed.count(d.producer_op) && !placed.count(d.producer_op)) {
                        ready = false;
                        break;
                    }
                // the target must come last even when it has no dependents
                if (ready && n == target && order.size() + 1 < nodes.size()) continue;
                if (ready) {
                    order.push_back(n);
                    placed.insert(n);
                    progressed = true;
                }
            }
            if (!progressed) break;  // cycle among remaining nodes
        }
        if (order.size() < nodes.size()) {
            SequenceScenario empty;
            empty.target_op = target;
            return empty;  // marker: caller breaks the cycle and retries
        }
        SequenceScenario s;
        s.target_op = target;
        s.ops = std::move(order);
        // keep only edges whose both ends made it in, dedup
        std::sort(used.begin(), used.end(), [](const auto& a, const auto& b) {
            return std::tie(a.producer_op, a.consumer_op, a.consumer_param_id,
                            a.producer_param_path) <
                   std::tie(b.producer_op, b.consumer_op, b.consumer_param_id,
                            b.producer_param_path);
        });
        used.erase(std::unique(used.begin(), used.end(),
                               [](const auto& a, const auto& b) {
                                   return structurally_equal(Constraint{a}, Constraint{b});
                               }),
                   used.end());
        s.deps = std::move(used);
        return s;
    };

    // Cycle breaking: while some target cannot be ordered, drop the most
    // recently learned edge that participates in a back-path.
    auto has_cycle = [&]() -> bool {
        for (const auto& op : model.operations) {
            auto s = build_sequence(op.opname);
            if (s.ops.empty()) return true;
        }
        return false;
    };
    auto reaches = [&](const std::string& from, const std::string& to) {
        std::set<std::string> seen{from};
        std::vector<std::string> frontier{from};
        while (!frontier.empty()) {
            std::string op = frontier.back();
            frontier.pop_back();
            if (op == to) return true;
            for (const auto& e : edges)
                if (e.dep.producer_op == op && seen.insert(e.dep.consumer_op).second)
                    frontier.push_back(e.dep.consumer_op);
        }
        return false;
    };
    while (has_cycle() && !edges.empty()) {
        // newest edge lying on a cycle (its producer is reachable from its consumer)
        auto newest = edges.end();
        for (auto it = edges.begin(); it != edges.end(); ++it) {
            if (!reaches(it->dep.consumer_op, it->dep.producer_op)) continue;
            if (newest == edges.end() || it->learned_order > newest->learned_order) newest = it;
        }
        if (newest == edges.end()) break;
        model.warnings.push_back("cyclic producer-consumer dependency: dropped edge " +
                                 newest->dep.producer_op + " -> " + newest->dep.consumer_op);
        edges.erase(newest);
    }

    std::vector<SequenceScenario> result;
    for (const auto& op : model.operations) result.push_back(build_sequence(op.opname));

    // Order the list topologically: targets with fewer prerequisites first,
    // producers ahead of their consumers.
    std::stable_sort(result.begin(), result.end(),
                     [](const SequenceScenario& a, const SequenceScenario& b) {
                         return a.ops.size() < b.ops.size();
                     });
    return result;
}

}  // namespace restref
