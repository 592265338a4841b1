#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "webalign/actions.hpp"
#include "webalign/ax_tree.hpp"
#include "webalign/config.hpp"
#include "webalign/planning.hpp"

namespace webalign::memory {

// One sealed agent step. filtered_observation is computed once when the
// record is sealed and never changes afterwards.
struct StepRecord {
    int step_index = 0;
    int plan_id = 0;  // plan active when the action was issued
    ax::AXTree observation;
    std::string condensed_observation;
    std::string reason;
    std::optional<actions::Action> action;  // absent only for no-progress steps
    std::string action_text;                // canonical render, "" when absent
    std::vector<int> pivotal_ids;           // validated against the observation
    std::string filtered_observation;       // id-stripped history form
    std::string env_state;                  // environment state after the step
    std::size_t obs_token_estimate = 0;
};

class TrajectoryHistory {
public:
    TrajectoryHistory() = default;
    explicit TrajectoryHistory(std::string objective) : objective_(std::move(objective)) {}

    const std::string& objective() const { return objective_; }
    const std::vector<StepRecord>& records() const { return records_; }
    std::size_t size() const { return records_.size(); }

    // step_index must equal the current size; indices are strictly increasing
    // from 0.
    void append(StepRecord record);

private:
    std::string objective_;
    std::vector<StepRecord> records_;
};

// Ordered unique ids pulled out of the "Observation Highlight" section body.
// Digit runs anywhere count; everything else is ignored, so garbage yields an
// empty list rather than an error.
std::vector<int> parse_highlights(std::string_view section_text);

// Keeps, for every pivotal id present in the tree, the node itself plus its
// ancestors, siblings and descendants; everything else goes. Ids absent from
// the tree are skipped; an empty valid set reduces the tree to its root.
ax::AXTree filter_observation(const ax::AXTree& tree, const std::vector<int>& pivotal_ids);

// Seals the replay form of a step: drops pivotal ids that are not on the
// page (reporting them via `dropped`), then renders the pivotal-filtered
// observation with ids stripped.
struct SealedObservation {
    std::vector<int> valid_pivotal_ids;
    std::vector<int> dropped_ids;
    std::string filtered_text;
};
SealedObservation seal_observation(const ax::AXTree& tree, const std::vector<int>& pivotal_ids);

// The interaction-history prompt section.
//   planning on:            every step of the active plan, as
//                           <step_k_interaction> blocks
//   planning off, replay on: the most recent config.history_window steps
//   replay off:             just the previous action line
std::string render_history(const TrajectoryHistory& history, const planning::PlanTree* plan,
                           const AgentConfig& config);

}  // namespace webalign::memory
