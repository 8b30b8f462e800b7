#include "restref/inference.hpp"

#include <chrono>
#include <cstdlib>

#include <httplib.h>

namespace restref {

InferenceService::InferenceService(std::string url, std::string api_key)
    : url_(std::move(url)), api_key_(std::move(api_key)) {
    if (url_.empty())
        if (const char* env = std::getenv("REFINER_INFERENCE_URL")) url_ = env;
    if (api_key_.empty())
        if (const char* env = std::getenv("REFINER_INFERENCE_KEY")) api_key_ = env;
}

std::optional<nlohmann::json> InferenceService::post(const nlohmann::json& payload) {
    if (url_.empty()) return std::nullopt;
    httplib::Client client(url_);
    client.set_connection_timeout(std::chrono::milliseconds(static_cast<long>(timeout_s_ * 1000)));
    client.set_read_timeout(std::chrono::milliseconds(static_cast<long>(timeout_s_ * 1000)));
    httplib::Headers headers;
    if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);
    for (int attempt = 0; attempt <= retries_; ++attempt) {
        auto res = client.Post("/", headers, payload.dump(), "application/json");
        if (!res || res->status != 200) continue;
        auto body = nlohmann::json::parse(res->body, nullptr, false);
        if (!body.is_discarded()) return body;
    }
    return std::nullopt;
}

std::optional<ConstraintCategory> InferenceService::classify(const std::string& message,
                                                             int status,
                                                             const nlohmann::json& context) {
    auto res = post({{"task", "classify"},
                     {"message", message},
                     {"status", status},
                     {"context", context}});
    if (!res || !res->contains("category") || !(*res)["category"].is_number_integer())
        return std::nullopt;
    int c = (*res)["category"].get<int>();
    if (c < 1 || c > kCategoryCount) return std::nullopt;
    return static_cast<ConstraintCategory>(c);
}

std::vector<std::string> InferenceService::match_entities(
    const std::string& message, const std::vector<std::string>& candidates) {
    auto res = post({{"task", "match_entities"},
                     {"message", message},
                     {"context", {{"candidates", candidates}}}});
    std::vector<std::string> out;
    if (!res || !res->contains("entities") || !(*res)["entities"].is_array()) return out;
    for (const auto& e : (*res)["entities"])
        if (e.is_string()) {
            // only echo back known candidates; the backend cannot invent ids
            auto s = e.get<std::string>();
            if (std::find(candidates.begin(), candidates.end(), s) != candidates.end())
                out.push_back(s);
        }
    return out;
}

}  // namespace restref
