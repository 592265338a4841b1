#include "webalign/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "webalign/errors.hpp"

namespace webalign {

namespace {

std::string trim(const std::string& s) {
    auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

bool parse_bool(const std::string& key, const std::string& value) {
    std::string v = value;
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw InvalidConfigError(key + " expects a boolean, got '" + value + "'");
}

int parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        int n = std::stoi(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return n;
    } catch (const std::exception&) {
        throw InvalidConfigError(key + " expects an integer, got '" + value + "'");
    }
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        double d = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return d;
    } catch (const std::exception&) {
        throw InvalidConfigError(key + " expects a number, got '" + value + "'");
    }
}

}  // namespace

void AgentConfig::validate() const {
    if (planning && !history_replay) {
        throw InvalidConfigError("planning requires history_replay (plan scoping needs history)");
    }
    if (max_steps < 1) {
        throw InvalidConfigError("max_steps must be >= 1, got " + std::to_string(max_steps));
    }
    if (history_window < 0) {
        throw InvalidConfigError("history_window must be >= 0, got " + std::to_string(history_window));
    }
    if (llm.max_retries < 0) {
        throw InvalidConfigError("max_retries must be >= 0, got " + std::to_string(llm.max_retries));
    }
    if (llm.max_inflight < 1) {
        throw InvalidConfigError("max_inflight must be >= 1, got " + std::to_string(llm.max_inflight));
    }
}

void apply_config_value(AgentConfig& config, const std::string& key, const std::string& value) {
    if (key == "reduce_actions") config.reduce_actions = parse_bool(key, value);
    else if (key == "disable_scroll") config.disable_scroll = parse_bool(key, value);
    else if (key == "condense_obs") config.condense_obs = parse_bool(key, value);
    else if (key == "history_replay") config.history_replay = parse_bool(key, value);
    else if (key == "planning") config.planning = parse_bool(key, value);
    else if (key == "judge") config.judge = parse_bool(key, value);
    else if (key == "multisite") config.multisite = parse_bool(key, value);
    else if (key == "max_steps") config.max_steps = parse_int(key, value);
    else if (key == "history_window") config.history_window = parse_int(key, value);
    else if (key == "model") config.llm.model = value;
    else if (key == "endpoint") config.llm.endpoint = value;
    else if (key == "temperature") config.llm.temperature = parse_double(key, value);
    else if (key == "max_retries") config.llm.max_retries = parse_int(key, value);
    else if (key == "timeout_ms") config.llm.timeout_ms = parse_int(key, value);
    else if (key == "max_inflight") config.llm.max_inflight = parse_int(key, value);
    else if (key == "prompt_with_planning") config.prompts.template_with_planning = value;
    else if (key == "prompt_without_planning") config.prompts.template_without_planning = value;
    else if (key == "output_specifications") config.prompts.output_specifications = value;
    else if (key == "judge_prompt") config.prompts.judge_template = value;
    else if (key == "judge_output_specifications") config.prompts.judge_output_specifications = value;
    else throw InvalidConfigError("unknown config key '" + key + "'");
}

AgentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidConfigError("cannot open config file '" + path + "'");

    AgentConfig config;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string trimmed = trim(line);
        if (trimmed.empty()) continue;
        auto eq = trimmed.find('=');
        if (eq == std::string::npos) {
            throw InvalidConfigError(path + ":" + std::to_string(number) + ": expected key = value");
        }
        std::string key = trim(trimmed.substr(0, eq));
        std::string value = trim(trimmed.substr(eq + 1));
        apply_config_value(config, key, value);
    }
    return config;
}

}  // namespace webalign
