#include "webalign/runtime.hpp"

#include "webalign/errors.hpp"
#include "webalign/obs_align.hpp"

namespace webalign::runtime {

namespace {

const char* kCorrectiveNotice =
    "\n\nERROR NOTICE:\nYour previous response could not be executed: ";
const char* kCorrectiveInstruction =
    "\nReply again in the required format, using only allowed action commands with valid "
    "arguments.";

struct Attempt {
    ParsedResponse parsed;
    actions::Action action;
};

}  // namespace

std::string_view to_string(TerminationCause cause) {
    switch (cause) {
        case TerminationCause::Stopped: return "stopped";
        case TerminationCause::MaxSteps: return "max_steps";
        case TerminationCause::EnvironmentTerminal: return "environment_terminal";
        case TerminationCause::UnrecoverableError: return "unrecoverable_error";
    }
    return "unknown";
}

EpisodeState EpisodeState::start(const AgentConfig& config, Environment& env,
                                 const std::string& objective, const std::string& task_id) {
    config.validate();
    EpisodeState state;
    state.config = config;
    state.task_id = task_id;
    state.objective = objective;
    state.plan = planning::PlanTree::from_objective(objective);
    state.history = memory::TrajectoryHistory(objective);
    state.current = env.reset();
    state.prompts = PromptLibrary::for_config(config);
    state.space = actions::ActionSpace::from_config(config);
    return state;
}

actions::Action judge_select(EpisodeState& state, const std::vector<actions::Action>& candidates,
                             LLMClient& llm) {
    if (candidates.empty()) {
        throw Error("judge_select needs at least one candidate");
    }
    if (candidates.size() == 1) return candidates.front();

    std::string history_text =
        memory::render_history(state.history, state.config.planning ? &state.plan : nullptr,
                               state.config);
    ax::AXTree tree = ax::parse_ax_tree(state.current.ax_dump);
    obs::CondensedObservation condensed = obs::condense(tree, state.config);

    std::string prompt = assemble_judge_prompt(
        state.objective, state.config.planning ? &state.plan : nullptr, history_text,
        condensed.text, candidates, state.prompts);
    std::string completion = complete_with_retry(llm, prompt, state.config.llm);
    ++state.llm_calls;

    std::optional<int> selected = parse_judge_selection(completion);
    if (!selected || *selected < 0 || *selected >= static_cast<int>(candidates.size())) {
        state.warnings.push_back("judge selection " +
                                 (selected ? std::to_string(*selected) : std::string("missing")) +
                                 " out of range for " + std::to_string(candidates.size()) +
                                 " candidates; falling back to candidate 0");
        return candidates.front();
    }
    return candidates[static_cast<std::size_t>(*selected)];
}

namespace {

// Chooses the step's action from a completion: parse, then judge when
// configured. Throws the parse/disallowed errors through to the caller.
Attempt interpret_completion(EpisodeState& state, const std::string& completion, LLMClient& llm) {
    Attempt attempt{parse_response(completion, state.space), actions::Noop{}};
    if (state.config.judge && attempt.parsed.parsed_actions.size() > 1) {
        attempt.action = judge_select(state, attempt.parsed.parsed_actions, llm);
    } else {
        attempt.action = attempt.parsed.parsed_actions.front();
    }
    return attempt;
}

// Planning actions mutate the tree and must not reach the environment.
// Returns true when the action was a planning action.
bool apply_planning_action(EpisodeState& state, const actions::Action& action) {
    if (const auto* branch = std::get_if<actions::Branch>(&action)) {
        state.plan.branch(branch->parent_plan_id, branch->intent);
        return true;
    }
    if (const auto* prune = std::get_if<actions::Prune>(&action)) {
        state.plan.prune(prune->resume_plan_id, prune->reason);
        return true;
    }
    return false;
}

// Validates pivotal ids, caches the filtered observation, stamps the
// post-action environment state and appends the record.
void seal_and_append(EpisodeState& state, memory::StepRecord& record,
                     const std::vector<int>& pivotal_ids) {
    memory::SealedObservation sealed = memory::seal_observation(record.observation, pivotal_ids);
    for (int dropped : sealed.dropped_ids) {
        state.warnings.push_back("step " + std::to_string(record.step_index) + ": pivotal id " +
                                 std::to_string(dropped) + " is not on the page; dropped");
    }
    record.pivotal_ids = sealed.valid_pivotal_ids;
    record.filtered_observation = sealed.filtered_text;
    record.env_state = state.current.state_id;
    state.history.append(std::move(record));
}

}  // namespace

const memory::StepRecord& step(EpisodeState& state, Environment& env, LLMClient& llm) {
    if (state.finished) throw Error("step() called on a finished episode");

    ax::AXTree raw_tree = ax::parse_ax_tree(state.current.ax_dump);
    obs::CondensedObservation condensed = obs::condense(raw_tree, state.config);
    std::string prompt = assemble_prompt(state.config, state.objective,
                                         state.config.planning ? &state.plan : nullptr,
                                         state.history, condensed.text, state.prompts);

    memory::StepRecord record;
    record.step_index = static_cast<int>(state.history.size());
    record.plan_id = state.config.planning ? state.plan.active_id() : 0;
    record.observation = raw_tree;
    record.condensed_observation = condensed.text;
    record.obs_token_estimate = condensed.token_estimate;

    // One corrective re-prompt covers bad formats, disallowed verbs and
    // invalid plan references; a second failure seals a no-progress record.
    std::optional<Attempt> attempt;
    std::string completion = complete_with_retry(llm, prompt, state.config.llm);
    ++state.llm_calls;
    for (int round = 0; round < 2 && !attempt; ++round) {
        try {
            Attempt candidate = interpret_completion(state, completion, llm);
            if (apply_planning_action(state, candidate.action)) {
                record.action = candidate.action;
                record.action_text = actions::render_action(candidate.action);
                record.reason = candidate.parsed.reason;
                seal_and_append(state, record, candidate.parsed.pivotal_ids);
                return state.history.records().back();
            }
            attempt = std::move(candidate);
        } catch (const Error& e) {
            bool recoverable = dynamic_cast<const UnparsableResponseError*>(&e) != nullptr ||
                               dynamic_cast<const DisallowedActionError*>(&e) != nullptr ||
                               dynamic_cast<const InvalidPlanRefError*>(&e) != nullptr;
            if (!recoverable || round == 1) {
                if (!recoverable) throw;
                state.warnings.push_back("step " + std::to_string(record.step_index) +
                                         " made no progress: " + e.what());
                record.reason = "";
                seal_and_append(state, record, {});
                return state.history.records().back();
            }
            completion = complete_with_retry(
                llm, prompt + kCorrectiveNotice + e.what() + kCorrectiveInstruction,
                state.config.llm);
            ++state.llm_calls;
        }
    }

    record.action = attempt->action;
    record.action_text = actions::render_action(attempt->action);
    record.reason = attempt->parsed.reason;

    if (const auto* note = std::get_if<actions::Note>(&attempt->action)) {
        state.notes.push_back(note->content);
    } else if (const auto* stop = std::get_if<actions::Stop>(&attempt->action)) {
        state.finished = true;
        state.cause = TerminationCause::Stopped;
        state.final_answer = stop->answer;
    } else {
        try {
            state.current = env.execute(attempt->action);
        } catch (const std::exception& e) {
            state.finished = true;
            state.cause = TerminationCause::UnrecoverableError;
            state.warnings.push_back("environment failure: " + std::string(e.what()));
        }
        if (!state.finished && env.is_terminal()) {
            state.finished = true;
            state.cause = TerminationCause::EnvironmentTerminal;
        }
    }

    seal_and_append(state, record, attempt->parsed.pivotal_ids);
    return state.history.records().back();
}

Trajectory run_episode(const AgentConfig& config, Environment& env, LLMClient& llm,
                       const std::string& objective, const std::string& task_id) {
    EpisodeState state = EpisodeState::start(config, env, objective, task_id);

    while (!state.finished && state.history.size() < static_cast<std::size_t>(config.max_steps)) {
        step(state, env, llm);
    }
    if (!state.finished) state.cause = TerminationCause::MaxSteps;

    Trajectory trajectory;
    trajectory.task_id = state.task_id;
    trajectory.objective = state.objective;
    trajectory.config = state.config;
    trajectory.steps = state.history.records();
    trajectory.final_answer = state.final_answer;
    trajectory.cause = state.cause;
    trajectory.notes = state.notes;
    trajectory.plan_dump = state.plan.dump();
    trajectory.warnings = state.warnings;
    trajectory.llm_calls = state.llm_calls;
    trajectory.reward = env.reward();
    return trajectory;
}

}  // namespace webalign::runtime
