#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "restref/constraints.hpp"
#include "restref/openapi.hpp"

namespace httplib {
class Server;
}

namespace restref {

// One scripted mock service: its API document, the constraints it actually
// enforces (what a refinement run should learn), and a binder that installs
// fresh handlers + state onto a server instance.
struct FixtureSpec {
    std::string name;
    std::string description;
    std::string document;  // OpenAPI text
    SpecFormat format = SpecFormat::Json;
    std::vector<Constraint> ground_truth;
    std::function<void(httplib::Server&)> bind;  // fresh state per call
};

struct BindError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class FixtureService {
  public:
    FixtureService(const FixtureSpec& spec, int port);
    ~FixtureService();
    FixtureService(const FixtureService&) = delete;
    FixtureService& operator=(const FixtureService&) = delete;

    int port() const { return port_; }
    std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port_); }
    const FixtureSpec& spec() const { return spec_; }

  private:
    struct Impl;
    FixtureSpec spec_;
    int port_ = 0;
    std::unique_ptr<Impl> impl_;
};

std::vector<std::string> fixture_names();
const FixtureSpec& fixture_spec(const std::string& name);  // throws std::out_of_range

// port 0 binds any free port.
std::unique_ptr<FixtureService> serve_fixture(const std::string& name, int port = 0);

struct MatchReport {
    std::vector<Constraint> missing;  // in truth, not learned
    std::vector<Constraint> extra;    // learned, not in truth
    std::size_t equivalent = 0;

    bool complete() const { return missing.empty(); }
    bool exact() const { return missing.empty() && extra.empty(); }
};

// Structural comparison modulo argument order.
MatchReport ground_truth_check(const std::vector<Constraint>& learned,
                               const std::vector<Constraint>& truth);

}  // namespace restref
