#include "webalign/replay_env.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "webalign/errors.hpp"

namespace webalign::runtime {

namespace {

std::string dump_of(const nlohmann::json& state, const std::string& origin) {
    if (state.contains("ax_dump_lines")) {
        std::string text;
        for (const auto& line : state.at("ax_dump_lines")) {
            if (!text.empty()) text += '\n';
            text += line.get<std::string>();
        }
        return text;
    }
    if (state.contains("ax_dump")) return state.at("ax_dump").get<std::string>();
    throw SnapshotError(origin + ": state '" + state.value("id", "?") +
                        "' needs ax_dump or ax_dump_lines");
}

}  // namespace

ReplayEnvironment ReplayEnvironment::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SnapshotError("cannot open snapshot file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str(), path);
}

ReplayEnvironment ReplayEnvironment::from_json_text(const std::string& text,
                                                    const std::string& origin) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw SnapshotError(origin + " is not valid JSON: " + e.what());
    }

    ReplayEnvironment env;
    if (!doc.contains("start_state")) {
        throw SnapshotError(origin + ": missing start_state header");
    }
    env.start_ = doc.at("start_state").get<std::string>();

    if (!doc.contains("states") || !doc.at("states").is_array()) {
        throw SnapshotError(origin + ": missing states array");
    }
    for (const auto& entry : doc.at("states")) {
        State state;
        state.id = entry.at("id").get<std::string>();
        state.ax_dump = dump_of(entry, origin);
        state.terminal = entry.value("terminal", false);
        if (entry.contains("reward")) state.reward = entry.at("reward").get<double>();
        if (entry.contains("url")) state.url = entry.at("url").get<std::string>();
        if (entry.contains("transitions")) {
            for (const auto& transition : entry.at("transitions")) {
                state.transitions[transition.at("action").get<std::string>()] =
                    transition.at("next").get<std::string>();
            }
        }
        if (!env.states_.emplace(state.id, std::move(state)).second) {
            throw SnapshotError(origin + ": duplicate state id '" + entry.at("id").get<std::string>() +
                                "'");
        }
    }

    if (!env.states_.count(env.start_)) {
        throw SnapshotError(origin + ": start state '" + env.start_ + "' is not declared");
    }
    for (const auto& [id, state] : env.states_) {
        for (const auto& [action, next] : state.transitions) {
            if (!env.states_.count(next)) {
                throw SnapshotError(origin + ": state '" + id + "' transitions on '" + action +
                                    "' to undeclared state '" + next + "'");
            }
        }
    }

    env.current_ = env.start_;
    return env;
}

EnvObservation ReplayEnvironment::observe() const {
    const State& state = states_.at(current_);
    EnvObservation obs;
    obs.ax_dump = state.ax_dump;
    obs.state_id = state.id;
    if (state.url) obs.metadata["url"] = *state.url;
    return obs;
}

EnvObservation ReplayEnvironment::reset() {
    current_ = start_;
    return observe();
}

EnvObservation ReplayEnvironment::execute(const actions::Action& action) {
    const State& state = states_.at(current_);
    auto it = state.transitions.find(actions::render_action(action));
    if (it != state.transitions.end()) {
        current_ = it->second;  // unmatched actions stay put
    }
    return observe();
}

bool ReplayEnvironment::is_terminal() const { return states_.at(current_).terminal; }

std::optional<double> ReplayEnvironment::reward() const { return states_.at(current_).reward; }

}  // namespace webalign::runtime
