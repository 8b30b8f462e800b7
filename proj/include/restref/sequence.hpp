#pragma once

#include <string>
#include <vector>

#include "restref/model.hpp"

namespace restref {

// Ordered operation chain ending at target_op, prerequisites first.
struct SequenceScenario {
    std::string target_op;
    std::vector<std::string> ops;                     // topological order, target last
    std::vector<ProducerConsumerConstraint> deps;     // edges used for injection
};

// One sequence per live operation. Prerequisites come from the reverse
// transitive closure over the producer-consumer edges; when several producers
// feed the same consumer parameter, the one judged to create a single
// resource wins. Cycles are broken by dropping the most recently learned edge
// (a warning lands in model.warnings).
std::vector<SequenceScenario> generate_sequences(const std::vector<ProducerConsumerConstraint>& deps,
                                                 SpecModel& model);

}  // namespace restref
