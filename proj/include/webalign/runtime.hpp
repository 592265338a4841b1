#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "webalign/actions.hpp"
#include "webalign/config.hpp"
#include "webalign/llm_client.hpp"
#include "webalign/memory.hpp"
#include "webalign/planning.hpp"
#include "webalign/prompts.hpp"
#include "webalign/replay_env.hpp"

namespace webalign::runtime {

enum class TerminationCause { Stopped, MaxSteps, EnvironmentTerminal, UnrecoverableError };

std::string_view to_string(TerminationCause cause);

struct Trajectory {
    std::string task_id;
    std::string objective;
    AgentConfig config;
    std::vector<memory::StepRecord> steps;
    std::optional<std::string> final_answer;
    TerminationCause cause = TerminationCause::MaxSteps;
    std::vector<std::string> notes;
    nlohmann::json plan_dump;
    std::vector<std::string> warnings;
    int llm_calls = 0;
    std::optional<double> reward;
};

// Everything one live episode carries between steps.
struct EpisodeState {
    AgentConfig config;
    std::string task_id;
    std::string objective;
    planning::PlanTree plan;
    memory::TrajectoryHistory history;
    std::vector<std::string> notes;
    std::vector<std::string> warnings;
    EnvObservation current;
    PromptLibrary prompts;
    actions::ActionSpace space;
    bool finished = false;
    TerminationCause cause = TerminationCause::MaxSteps;
    std::optional<std::string> final_answer;
    int llm_calls = 0;

    static EpisodeState start(const AgentConfig& config, Environment& env,
                              const std::string& objective, const std::string& task_id);
};

// One condense -> assemble -> complete -> parse -> dispatch cycle. Planning
// and note actions never reach the environment; one corrective re-prompt
// covers unparsable, disallowed and invalid-plan-ref responses, after which
// the step is sealed as a no-progress record. The sealed record is appended
// to the episode history and returned.
const memory::StepRecord& step(EpisodeState& state, Environment& env, LLMClient& llm);

// Runs step() until stop, environment terminal, an unrecoverable environment
// failure, or config.max_steps.
Trajectory run_episode(const AgentConfig& config, Environment& env, LLMClient& llm,
                       const std::string& objective, const std::string& task_id = "task");

// Judge pipeline: a single candidate comes back without an LLM call;
// otherwise the judge prompt is issued and its "Action selection" index
// picks the candidate. Out-of-range or unparsable selections fall back to
// candidate 0 with a warning.
actions::Action judge_select(EpisodeState& state, const std::vector<actions::Action>& candidates,
                             LLMClient& llm);

}  // namespace webalign::runtime
