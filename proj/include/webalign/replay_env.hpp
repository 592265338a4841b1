#pragma once

#include <map>
#include <optional>
#include <string>

#include "webalign/actions.hpp"

namespace webalign::runtime {

struct EnvObservation {
    std::string ax_dump;
    std::string state_id;
    std::map<std::string, std::string> metadata;  // e.g. url
};

// Deterministic transition contract: identical action sequences must visit
// identical states. Rewards, when present, arrive undiscounted at the end of
// an episode.
class Environment {
public:
    virtual ~Environment() = default;
    virtual EnvObservation reset() = 0;
    virtual EnvObservation execute(const actions::Action& action) = 0;
    virtual bool is_terminal() const = 0;
    virtual std::optional<double> reward() const = 0;
};

// A state graph of page snapshots standing in for a live website. execute()
// looks up the canonical action text in the current state's transition table;
// unmatched actions self-loop.
class ReplayEnvironment : public Environment {
public:
    struct State {
        std::string id;
        std::string ax_dump;
        bool terminal = false;
        std::optional<double> reward;
        std::optional<std::string> url;
        std::map<std::string, std::string> transitions;  // action text -> state id
    };

    // Both raise SnapshotError on a missing start state, duplicate state ids
    // or a transition to an undeclared state.
    static ReplayEnvironment from_file(const std::string& path);
    static ReplayEnvironment from_json_text(const std::string& text, const std::string& origin);

    EnvObservation reset() override;
    EnvObservation execute(const actions::Action& action) override;
    bool is_terminal() const override;
    std::optional<double> reward() const override;

    const std::string& current_state_id() const { return current_; }

private:
    ReplayEnvironment() = default;
    EnvObservation observe() const;

    std::map<std::string, State> states_;
    std::string start_;
    std::string current_;
};

}  // namespace webalign::runtime
