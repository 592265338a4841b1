#include "webalign/memory.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "webalign/errors.hpp"

namespace webalign::memory {

namespace {

// Paths ordered lexicographically give document order for free.
using PathSet = std::set<ax::NodePath>;

void add_relatives(const ax::AXTree& tree, int id, PathSet& retained) {
    const ax::NodePath& path = tree.id_index().at(id);
    retained.insert(path);
    ax::Relatives rel = ax::relatives(tree, id);
    retained.insert(rel.ancestors.begin(), rel.ancestors.end());
    retained.insert(rel.siblings.begin(), rel.siblings.end());
    retained.insert(rel.descendants.begin(), rel.descendants.end());
}

ax::AXNode rebuild(const ax::AXNode& node, const ax::NodePath& path, const PathSet& retained) {
    ax::AXNode out;
    out.node_id = node.node_id;
    out.role = node.role;
    out.name = node.name;
    out.attributes = node.attributes;
    ax::NodePath child_path = path;
    for (int i = 0; i < static_cast<int>(node.children.size()); ++i) {
        child_path.push_back(i);
        if (retained.count(child_path)) {
            out.children.push_back(
                rebuild(node.children[static_cast<std::size_t>(i)], child_path, retained));
        }
        child_path.pop_back();
    }
    return out;
}

}  // namespace

void TrajectoryHistory::append(StepRecord record) {
    if (record.step_index != static_cast<int>(records_.size())) {
        throw Error("step_index " + std::to_string(record.step_index) +
                    " does not extend the trajectory (expected " +
                    std::to_string(records_.size()) + ")");
    }
    records_.push_back(std::move(record));
}

std::vector<int> parse_highlights(std::string_view section_text) {
    std::vector<int> ids;
    std::set<int> seen;
    std::size_t i = 0;
    while (i < section_text.size()) {
        if (std::isdigit(static_cast<unsigned char>(section_text[i]))) {
            std::size_t start = i;
            while (i < section_text.size() &&
                   std::isdigit(static_cast<unsigned char>(section_text[i]))) {
                ++i;
            }
            // Oversized runs are junk, not ids.
            if (i - start <= 9) {
                int id = std::stoi(std::string(section_text.substr(start, i - start)));
                if (seen.insert(id).second) ids.push_back(id);
            }
        } else {
            ++i;
        }
    }
    return ids;
}

ax::AXTree filter_observation(const ax::AXTree& tree, const std::vector<int>& pivotal_ids) {
    if (tree.empty()) return tree;

    PathSet retained;
    for (int id : pivotal_ids) {
        if (tree.has_id(id)) add_relatives(tree, id, retained);
    }
    retained.insert(ax::NodePath{});  // the root always survives
    return ax::AXTree(rebuild(tree.root(), ax::NodePath{}, retained));
}

SealedObservation seal_observation(const ax::AXTree& tree, const std::vector<int>& pivotal_ids) {
    SealedObservation out;
    for (int id : pivotal_ids) {
        if (tree.has_id(id)) out.valid_pivotal_ids.push_back(id);
        else out.dropped_ids.push_back(id);
    }
    out.filtered_text =
        ax::serialize(filter_observation(tree, out.valid_pivotal_ids), {.strip_ids = true});
    return out;
}

std::string render_history(const TrajectoryHistory& history, const planning::PlanTree* plan,
                           const AgentConfig& config) {
    const auto& records = history.records();
    if (records.empty()) return "";

    if (!config.history_replay) {
        return "PREVIOUS ACTION: " + records.back().action_text;
    }

    std::vector<const StepRecord*> selected;
    if (config.planning && plan != nullptr) {
        for (const StepRecord& record : records) {
            if (record.plan_id == plan->active_id()) selected.push_back(&record);
        }
    } else {
        std::size_t window = static_cast<std::size_t>(std::max(config.history_window, 0));
        std::size_t start = records.size() > window ? records.size() - window : 0;
        for (std::size_t i = start; i < records.size(); ++i) selected.push_back(&records[i]);
    }

    std::string out;
    for (const StepRecord* record : selected) {
        if (!out.empty()) out += '\n';
        std::string tag = "step_" + std::to_string(record->step_index) + "_interaction";
        out += "<" + tag + ">\n";
        out += "OBSERVATION:\n" + record->filtered_observation + "\n";
        out += "REASON FOR ACTION:\n" + record->reason + "\n";
        out += "ACTION:\n" + record->action_text + "\n";
        out += "</" + tag + ">";
    }
    return out;
}

}  // namespace webalign::memory
