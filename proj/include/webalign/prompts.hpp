#pragma once

#include <string>
#include <vector>

#include "webalign/actions.hpp"
#include "webalign/config.hpp"
#include "webalign/memory.hpp"
#include "webalign/planning.hpp"

namespace webalign::runtime {

// Built-in prompt texts, individually replaceable through AgentConfig paths.
struct PromptLibrary {
    std::string template_with_planning;
    std::string template_without_planning;
    std::string output_specifications;
    std::string judge_template;
    std::string judge_output_specifications;

    static PromptLibrary defaults();
    // defaults() with the config's file overrides applied.
    static PromptLibrary for_config(const AgentConfig& config);
};

// Instantiates the step prompt: the general template (chosen by
// config.planning) with {output_specifications},
// {planning_action_specifications} and {navigation_action_specifications}
// substituted, followed by the labeled OBJECTIVE / CURRENT STEP /
// PREVIOUS PLANS / INTERACTION HISTORY / CURRENT OBSERVATION sections.
// Byte-identical for identical inputs.
std::string assemble_prompt(const AgentConfig& config, const std::string& objective,
                            const planning::PlanTree* plan,
                            const memory::TrajectoryHistory& history,
                            const std::string& current_observation, const PromptLibrary& library);

// Response sections split on the known headers (case-insensitive, tolerant of
// markdown markup and trailing colons).
struct ParsedResponse {
    std::string interaction_summary;
    std::string observation_description;
    std::string reason;
    std::string action_section;
    std::string highlight_section;
    std::vector<std::string> action_lines;
    std::vector<actions::Action> parsed_actions;
    std::vector<int> pivotal_ids;
};

// Raises UnparsableResponseError when no line anywhere parses as an action;
// raises DisallowedActionError instead when at least one line held a known
// but excluded verb (so the runtime can re-prompt accordingly).
ParsedResponse parse_response(const std::string& text, const actions::ActionSpace& space);

// The judge prompt over 0-based candidates.
std::string assemble_judge_prompt(const std::string& objective, const planning::PlanTree* plan,
                                  const std::string& history_text,
                                  const std::string& current_observation,
                                  const std::vector<actions::Action>& candidates,
                                  const PromptLibrary& library);

// First integer in the "Action selection" section; nullopt when absent.
std::optional<int> parse_judge_selection(const std::string& text);

}  // namespace webalign::runtime
