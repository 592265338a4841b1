#include "webalign/planning.hpp"

#include "webalign/errors.hpp"

namespace webalign::planning {

namespace {

bool is_blank(const std::string& s) {
    return s.find_first_not_of(" \t\r\n") == std::string::npos;
}

}  // namespace

PlanTree PlanTree::from_objective(const std::string& objective) {
    if (is_blank(objective)) {
        throw InvalidObjectiveError("objective must be non-empty");
    }
    PlanTree tree;
    PlanNode root;
    root.plan_id = 0;
    root.intent = "Find the solution to \"" + objective + "\"";
    tree.nodes_.emplace(0, std::move(root));
    tree.active_id_ = 0;
    tree.next_id_ = 1;
    return tree;
}

const PlanNode& PlanTree::node(int plan_id) const {
    auto it = nodes_.find(plan_id);
    if (it == nodes_.end()) {
        throw InvalidPlanRefError("plan " + std::to_string(plan_id) + " does not exist");
    }
    return it->second;
}

int PlanTree::branch(int parent_plan_id, const std::string& intent) {
    auto it = nodes_.find(parent_plan_id);
    if (it == nodes_.end()) {
        throw InvalidPlanRefError("branch parent " + std::to_string(parent_plan_id) +
                                  " does not exist");
    }
    if (it->second.status == PlanStatus::Pruned) {
        throw InvalidPlanRefError("branch parent " + std::to_string(parent_plan_id) +
                                  " has been pruned");
    }

    PlanNode child;
    child.plan_id = next_id_++;
    child.intent = intent;
    child.parent = parent_plan_id;
    it->second.children.push_back(child.plan_id);
    int id = child.plan_id;
    nodes_.emplace(id, std::move(child));
    active_id_ = id;
    return id;
}

bool PlanTree::is_strict_ancestor(int ancestor, int descendant) const {
    std::optional<int> cursor = nodes_.at(descendant).parent;
    while (cursor) {
        if (*cursor == ancestor) return true;
        cursor = nodes_.at(*cursor).parent;
    }
    return false;
}

void PlanTree::mark_subtree_pruned(int plan_id) {
    PlanNode& node = nodes_.at(plan_id);
    node.status = PlanStatus::Pruned;
    for (int child : node.children) mark_subtree_pruned(child);
}

void PlanTree::prune(int resume_plan_id, const std::string& reason) {
    auto it = nodes_.find(resume_plan_id);
    if (it == nodes_.end()) {
        throw InvalidPlanRefError("resume target " + std::to_string(resume_plan_id) +
                                  " does not exist");
    }
    if (it->second.status == PlanStatus::Pruned) {
        throw InvalidPlanRefError("resume target " + std::to_string(resume_plan_id) +
                                  " has been pruned");
    }
    if (resume_plan_id == active_id_) return;  // self-resume no-op

    if (!is_strict_ancestor(active_id_, resume_plan_id)) {
        int abandoned = active_id_;
        mark_subtree_pruned(abandoned);
        nodes_.at(abandoned).prune_reason = reason;
    }
    // A resume target below the active node keeps the subtree alive; pruning
    // it would kill the target.
    active_id_ = resume_plan_id;
}

std::string PlanTree::render() const {
    if (nodes_.empty()) return "";
    std::string out;
    auto emit = [&](auto&& self, int plan_id, int depth) -> void {
        const PlanNode& node = nodes_.at(plan_id);
        if (node.status == PlanStatus::Pruned) return;
        if (!out.empty()) out += '\n';
        out.append(static_cast<std::size_t>(depth), '\t');
        out += "[" + std::to_string(plan_id) + "]";
        if (plan_id == active_id_) out += " (Active Plan)";
        out += " " + node.intent;
        for (int child : node.children) self(self, child, depth + 1);
    };
    emit(emit, 0, 0);
    return out;
}

std::size_t PlanTree::live_count() const {
    std::size_t n = 0;
    for (const auto& [id, node] : nodes_) {
        if (node.status == PlanStatus::Live) ++n;
    }
    return n;
}

nlohmann::json PlanTree::dump() const {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& [id, node] : nodes_) {
        nlohmann::json entry = {
            {"plan_id", node.plan_id},
            {"intent", node.intent},
            {"status", node.status == PlanStatus::Live ? "live" : "pruned"},
            {"children", node.children},
        };
        if (node.parent) entry["parent"] = *node.parent;
        if (!node.prune_reason.empty()) entry["prune_reason"] = node.prune_reason;
        nodes.push_back(std::move(entry));
    }
    return nlohmann::json{{"active_id", active_id_}, {"nodes", std::move(nodes)}};
}

}  // namespace webalign::planning
