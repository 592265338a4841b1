#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "webalign/runtime.hpp"

namespace webalign::runtime {

// Line-delimited trajectory log. One "step" record per step:
//   {"type":"step","step_index":..,"plan_id":..,"action":"..",
//    "pivotal_ids":[..],"obs_tokens":..,"env_state":".."}
// then a single "summary" record:
//   {"type":"summary","task_id":..,"objective":..,"termination":..,
//    "answer":..,"steps":..,"llm_calls":..,"notes":[..],"plan_tree":{..},
//    "warnings":[..]}
// Keys are emitted sorted and no timestamps appear, so identical runs yield
// identical bytes.
std::string to_log_text(const Trajectory& trajectory);

void write_log_file(const Trajectory& trajectory, const std::string& path);

// Parses a log back into its records; raises ParseError on malformed lines
// or a missing summary.
std::vector<nlohmann::json> read_log_file(const std::string& path);

// Per-step table plus the step-count / token aggregates.
std::string inspect_log(const std::vector<nlohmann::json>& records);

// "identical" or a description of the first divergent step.
std::string diff_logs(const std::vector<nlohmann::json>& left,
                      const std::vector<nlohmann::json>& right);

}  // namespace webalign::runtime
