#include "webalign/trajectory_log.hpp"

#include <fstream>
#include <sstream>

#include "webalign/errors.hpp"

namespace webalign::runtime {

std::string to_log_text(const Trajectory& trajectory) {
    std::string out;
    for (const memory::StepRecord& record : trajectory.steps) {
        nlohmann::json line = {
            {"type", "step"},
            {"step_index", record.step_index},
            {"plan_id", record.plan_id},
            {"action", record.action_text},
            {"pivotal_ids", record.pivotal_ids},
            {"obs_tokens", record.obs_token_estimate},
            {"env_state", record.env_state},
        };
        out += line.dump() + "\n";
    }

    nlohmann::json config = {
        {"reduce_actions", trajectory.config.reduce_actions},
        {"disable_scroll", trajectory.config.disable_scroll},
        {"condense_obs", trajectory.config.condense_obs},
        {"history_replay", trajectory.config.history_replay},
        {"planning", trajectory.config.planning},
        {"judge", trajectory.config.judge},
        {"multisite", trajectory.config.multisite},
        {"max_steps", trajectory.config.max_steps},
        {"history_window", trajectory.config.history_window},
        {"model", trajectory.config.llm.model},
    };
    nlohmann::json summary = {
        {"type", "summary"},
        {"task_id", trajectory.task_id},
        {"objective", trajectory.objective},
        {"config", std::move(config)},
        {"termination", std::string(to_string(trajectory.cause))},
        {"answer", trajectory.final_answer ? nlohmann::json(*trajectory.final_answer)
                                           : nlohmann::json(nullptr)},
        {"steps", trajectory.steps.size()},
        {"llm_calls", trajectory.llm_calls},
        {"notes", trajectory.notes},
        {"plan_tree", trajectory.plan_dump},
        {"warnings", trajectory.warnings},
    };
    if (trajectory.reward) summary["reward"] = *trajectory.reward;
    out += summary.dump() + "\n";
    return out;
}

void write_log_file(const Trajectory& trajectory, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open trajectory log '" + path + "' for writing");
    out << to_log_text(trajectory);
}

std::vector<nlohmann::json> read_log_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open trajectory log '" + path + "'");

    std::vector<nlohmann::json> records;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            records.push_back(nlohmann::json::parse(line));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(path + ":" + std::to_string(number) + ": " + e.what());
        }
        if (!records.back().is_object() || !records.back().contains("type")) {
            throw ParseError(path + ":" + std::to_string(number) + ": record without a type");
        }
    }
    if (records.empty() || records.back().value("type", "") != "summary") {
        throw ParseError(path + ": log does not end with a summary record");
    }
    return records;
}

std::string inspect_log(const std::vector<nlohmann::json>& records) {
    std::ostringstream out;
    out << "step  plan  tokens  action\n";
    std::size_t steps = 0;
    std::uint64_t tokens = 0;
    for (const nlohmann::json& record : records) {
        if (record.value("type", "") != "step") continue;
        ++steps;
        std::uint64_t obs_tokens = record.value("obs_tokens", 0ull);
        tokens += obs_tokens;
        out << record.value("step_index", -1) << "     " << record.value("plan_id", -1)
            << "     " << obs_tokens << "     " << record.value("action", "") << "\n";
    }
    const nlohmann::json& summary = records.back();
    out << "steps: " << steps << "\n";
    out << "avg_obs_tokens: " << (steps ? static_cast<double>(tokens) / static_cast<double>(steps) : 0.0)
        << "\n";
    out << "termination: " << summary.value("termination", "") << "\n";
    if (summary.contains("answer") && !summary.at("answer").is_null()) {
        out << "answer: " << summary.at("answer").get<std::string>() << "\n";
    }
    return out.str();
}

std::string diff_logs(const std::vector<nlohmann::json>& left,
                      const std::vector<nlohmann::json>& right) {
    std::size_t count = std::min(left.size(), right.size());
    for (std::size_t i = 0; i < count; ++i) {
        if (left[i] != right[i]) {
            std::string where = left[i].value("type", "") == "step"
                                    ? "step " + std::to_string(left[i].value("step_index", -1))
                                    : "record " + std::to_string(i);
            return "first divergence at " + where + ":\n  left:  " + left[i].dump() +
                   "\n  right: " + right[i].dump();
        }
    }
    if (left.size() != right.size()) {
        return "first divergence at record " + std::to_string(count) +
               ": lengths differ (" + std::to_string(left.size()) + " vs " +
               std::to_string(right.size()) + ")";
    }
    return "identical";
}

}  // namespace webalign::runtime
