#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace webalign::planning {

enum class PlanStatus { Live, Pruned };

struct PlanNode {
    int plan_id = 0;
    std::string intent;
    std::optional<int> parent;
    std::vector<int> children;  // creation order
    PlanStatus status = PlanStatus::Live;
    std::string prune_reason;  // set on the node that rooted a pruned subtree
};

// The agent's self-edited plan tree. Exactly one live node is active; ids
// are assigned in creation order and never reused; pruned nodes stay in the
// table (hidden from render) so trajectory logs keep their reasons.
class PlanTree {
public:
    // An empty tree; assign from from_objective() before use.
    PlanTree() = default;

    // Root plan [0] wraps the objective verbatim:
    //   Find the solution to "<objective>"
    // Empty objectives raise InvalidObjectiveError.
    static PlanTree from_objective(const std::string& objective);

    // Adds a live subplan under a live parent and makes it active; returns
    // the new plan id. Unknown or pruned parents raise InvalidPlanRefError.
    int branch(int parent_plan_id, const std::string& intent);

    // Restores a previous plan state: the abandoned subtree (the previously
    // active node and everything below it) is marked pruned with the reason
    // recorded on its root, and the resume target becomes active. Resuming
    // the active node itself is a no-op; a resume target below the active
    // node just moves the pointer. Unknown or pruned targets raise
    // InvalidPlanRefError.
    void prune(int resume_plan_id, const std::string& reason);

    // Live nodes only, depth-first, tab-indented, `[id] intent`, with
    // "(Active Plan)" after the id on the active node.
    std::string render() const;

    int active_id() const { return active_id_; }
    bool has(int plan_id) const { return nodes_.find(plan_id) != nodes_.end(); }
    const PlanNode& node(int plan_id) const;
    const std::map<int, PlanNode>& nodes() const { return nodes_; }
    std::size_t live_count() const;

    // Full tree including pruned nodes and reasons, for the trajectory log.
    nlohmann::json dump() const;

private:
    bool is_strict_ancestor(int ancestor, int descendant) const;
    void mark_subtree_pruned(int plan_id);

    std::map<int, PlanNode> nodes_;
    int active_id_ = 0;
    int next_id_ = 1;
};

}  // namespace webalign::planning
