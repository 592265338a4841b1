#pragma once

#include <optional>
#include <string>

namespace webalign {

struct LLMSettings {
    std::string model = "gpt-4-turbo";
    std::string endpoint;  // chat-completion style HTTP endpoint, e.g. http://host:8000/v1/chat/completions
    double temperature = 0.0;
    int max_retries = 3;
    int timeout_ms = 60000;
    int max_inflight = 4;
};

// Optional paths that replace the built-in prompt texts.
struct PromptOverrides {
    std::optional<std::string> template_with_planning;
    std::optional<std::string> template_without_planning;
    std::optional<std::string> output_specifications;
    std::optional<std::string> judge_template;
    std::optional<std::string> judge_output_specifications;
};

// Feature flags and limits selecting which alignment stages are active.
// Defaults correspond to the fully aligned agent.
struct AgentConfig {
    bool reduce_actions = true;
    bool disable_scroll = true;
    bool condense_obs = true;
    bool history_replay = true;
    bool planning = true;
    bool judge = false;
    bool multisite = false;
    int max_steps = 20;
    int history_window = 3;
    LLMSettings llm;
    PromptOverrides prompts;

    // Throws InvalidConfigError when an invariant is broken
    // (planning requires history_replay; max_steps >= 1; history_window >= 0).
    void validate() const;
};

// Reads a `key = value` config file ('#' starts a comment). Unknown keys
// raise InvalidConfigError so sweep scripts fail loudly on typos.
AgentConfig load_config_file(const std::string& path);

// Applies one `key=value` override on top of an existing config; used both by
// the config loader and by CLI flag overrides.
void apply_config_value(AgentConfig& config, const std::string& key, const std::string& value);

}  // namespace webalign
