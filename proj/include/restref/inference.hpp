#pragma once

#include <string>

#include "restref/analyzer.hpp"

namespace restref {

// HTTP backend for second-stage classification / entity matching. The
// endpoint speaks a single POST / JSON contract:
//   request:  {"task": "classify"|"match_entities", "message": ..., "status": ...,
//              "context": {...}}
//   response: {"category": 1..14} or {"entities": [...]}
// Endpoint and key default from REFINER_INFERENCE_URL / REFINER_INFERENCE_KEY.
class InferenceService : public AnalyzerBackend {
  public:
    explicit InferenceService(std::string url = "", std::string api_key = "");

    std::optional<ConstraintCategory> classify(const std::string& message, int status,
                                               const nlohmann::json& context) override;
    std::vector<std::string> match_entities(const std::string& message,
                                            const std::vector<std::string>& candidates) override;

    bool configured() const { return !url_.empty(); }

  private:
    std::optional<nlohmann::json> post(const nlohmann::json& payload);

    std::string url_;
    std::string api_key_;
    double timeout_s_ = 5;
    int retries_ = 1;
};

}  // namespace restref
