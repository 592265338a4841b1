#include "webalign/obs_align.hpp"

#include <array>
#include <cctype>
#include <optional>
#include <vector>

namespace webalign::obs {

namespace {

constexpr std::array<std::string_view, 12> kInteractiveRoles = {
    "link",     "button", "textbox",   "combobox", "checkbox", "radio",
    "tab",      "menuitem", "option",  "searchbox", "switch",  "slider"};

bool is_text_role(std::string_view role) {
    return role == "StaticText" || role == "text";
}

bool node_matches_label(const ax::AXNode& node, const std::string& label) {
    return node.name && normalize_whitespace(*node.name) == label;
}

// One sibling list, iterated to a fixpoint: removing a duplicate can put a
// new interactive neighbor next to a surviving text node.
void merge_children(ax::AXNode& parent) {
    for (ax::AXNode& child : parent.children) merge_children(child);

    bool removed = true;
    while (removed) {
        removed = false;
        for (std::size_t i = 0; i < parent.children.size(); ++i) {
            const ax::AXNode& child = parent.children[i];
            if (!is_text_role(child.role) || !child.children.empty() || !child.name) continue;
            const std::string label = normalize_whitespace(*child.name);

            bool duplicate = node_matches_label(parent, label);
            if (!duplicate && i > 0) {
                const ax::AXNode& prev = parent.children[i - 1];
                duplicate = is_interactive_role(prev.role) && node_matches_label(prev, label);
            }
            if (!duplicate && i + 1 < parent.children.size()) {
                const ax::AXNode& next = parent.children[i + 1];
                duplicate = is_interactive_role(next.role) && node_matches_label(next, label);
            }
            if (duplicate) {
                parent.children.erase(parent.children.begin() + static_cast<long>(i));
                removed = true;
                break;
            }
        }
    }
}

bool is_cell_role(std::string_view role) {
    return role == "columnheader" || role == "gridcell";
}

bool is_structural_role(std::string_view role) {
    return role == "row" || role == "rowgroup" || is_cell_role(role);
}

void collect_text(const ax::AXNode& node, std::string& out) {
    if (node.name && !node.name->empty()) {
        if (!out.empty()) out += ' ';
        out += *node.name;
    }
    for (const ax::AXNode& child : node.children) collect_text(child, out);
}

ax::AXNode transform(const ax::AXNode& node);

// Id-carrying content inside a cell outlives the structural wrappers.
void lift_id_carriers(const ax::AXNode& node, std::vector<ax::AXNode>& out) {
    if (!is_structural_role(node.role) && node.node_id) {
        out.push_back(transform(node));
        return;
    }
    for (const ax::AXNode& child : node.children) lift_id_carriers(child, out);
}

struct ConvertedRow {
    ax::AXNode node;
    bool header = false;
    std::size_t cell_count = 0;
};

// A lifted node whose name already shows in the emitted row text drops the
// name; the id stays actionable without repeating the content.
void dedup_lifted_names(std::vector<ax::AXNode>& lifted, const std::string& text) {
    for (ax::AXNode& node : lifted) {
        if (node.name && !node.name->empty() && text.find(*node.name) != std::string::npos) {
            node.name.reset();
        }
    }
}

std::optional<ConvertedRow> convert_row(const ax::AXNode& row) {
    std::vector<const ax::AXNode*> cells;
    for (const ax::AXNode& child : row.children) {
        if (is_cell_role(child.role)) cells.push_back(&child);
    }
    if (cells.empty()) {
        // Already-Markdown or otherwise cell-free rows pass through.
        return ConvertedRow{transform(row), false, 0};
    }

    std::string text = "|";
    bool all_headers = true;
    for (const ax::AXNode* cell : cells) {
        std::string cell_text;
        if (cell->name) {
            cell_text = *cell->name;
        } else {
            for (const ax::AXNode& child : cell->children) collect_text(child, cell_text);
        }
        text += " " + cell_text + " |";
        if (cell->role != "columnheader") all_headers = false;
    }

    ConvertedRow converted;
    converted.node.role = "row";
    converted.node.name = text;
    converted.header = all_headers;
    converted.cell_count = cells.size();
    for (const ax::AXNode& child : row.children) {
        lift_id_carriers(child, converted.node.children);
    }
    dedup_lifted_names(converted.node.children, text);
    return converted;
}

ax::AXNode separator_row(std::size_t cells) {
    ax::AXNode sep;
    sep.role = "row";
    std::string text = "|";
    for (std::size_t i = 0; i < cells; ++i) text += " --- |";
    sep.name = text;
    return sep;
}

std::optional<ax::AXNode> convert_table(const ax::AXNode& table) {
    ax::AXNode out;
    out.node_id = table.node_id;
    out.role = table.role;
    out.name = table.name;
    out.attributes = table.attributes;

    bool separator_emitted = false;
    auto append_row = [&](const ax::AXNode& row) {
        std::optional<ConvertedRow> converted = convert_row(row);
        if (!converted) return;
        bool emit_separator = converted->header && !separator_emitted && converted->cell_count > 0;
        std::size_t cells = converted->cell_count;
        out.children.push_back(std::move(converted->node));
        if (emit_separator) {
            out.children.push_back(separator_row(cells));
            separator_emitted = true;
        }
    };

    for (const ax::AXNode& child : table.children) {
        if (child.role == "row") {
            append_row(child);
        } else if (child.role == "rowgroup") {
            for (const ax::AXNode& grandchild : child.children) {
                if (grandchild.role == "row") append_row(grandchild);
                else out.children.push_back(transform(grandchild));
            }
        } else {
            out.children.push_back(transform(child));
        }
    }

    if (out.children.empty()) return std::nullopt;  // empty block vanishes
    return out;
}

std::optional<ax::AXNode> convert_list(const ax::AXNode& list) {
    ax::AXNode out;
    out.node_id = list.node_id;
    out.role = list.role;
    out.name = list.name;
    out.attributes = list.attributes;

    for (const ax::AXNode& child : list.children) {
        if (child.role != "listitem") {
            out.children.push_back(transform(child));
            continue;
        }
        std::string text;
        if (child.name) {
            text = *child.name;
        } else {
            for (const ax::AXNode& grandchild : child.children) collect_text(grandchild, text);
        }
        ax::AXNode item;
        item.role = "text";
        item.name = "- " + text;
        for (const ax::AXNode& grandchild : child.children) {
            lift_id_carriers(grandchild, item.children);
        }
        dedup_lifted_names(item.children, *item.name);
        out.children.push_back(std::move(item));
    }

    if (out.children.empty()) return std::nullopt;
    return out;
}

ax::AXNode transform(const ax::AXNode& node) {
    ax::AXNode out;
    out.node_id = node.node_id;
    out.role = node.role;
    out.name = node.name;
    out.attributes = node.attributes;
    for (const ax::AXNode& child : node.children) {
        if (child.role == "table") {
            if (auto converted = convert_table(child)) out.children.push_back(std::move(*converted));
        } else if (child.role == "list") {
            if (auto converted = convert_list(child)) out.children.push_back(std::move(*converted));
        } else {
            out.children.push_back(transform(child));
        }
    }
    return out;
}

void collect_interactive(const ax::AXNode& node, std::set<int>& out) {
    if (node.node_id && is_interactive_role(node.role)) out.insert(*node.node_id);
    for (const ax::AXNode& child : node.children) collect_interactive(child, out);
}

}  // namespace

bool is_interactive_role(std::string_view role) {
    for (std::string_view candidate : kInteractiveRoles) {
        if (candidate == role) return true;
    }
    return false;
}

std::string normalize_whitespace(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!out.empty()) pending_space = true;
        } else {
            if (pending_space) out += ' ';
            pending_space = false;
            out += c;
        }
    }
    return out;
}

std::set<int> interactive_ids(const ax::AXTree& tree) {
    std::set<int> out;
    if (!tree.empty()) collect_interactive(tree.root(), out);
    return out;
}

ax::AXTree merge_descriptive_nodes(const ax::AXTree& tree) {
    if (tree.empty()) return tree;
    ax::AXNode root = tree.root();
    merge_children(root);
    return ax::AXTree(std::move(root));
}

ax::AXTree blocks_to_markdown(const ax::AXTree& tree) {
    if (tree.empty()) return tree;
    if (tree.root().role == "table") {
        auto converted = convert_table(tree.root());
        return converted ? ax::AXTree(std::move(*converted)) : ax::AXTree();
    }
    if (tree.root().role == "list") {
        auto converted = convert_list(tree.root());
        return converted ? ax::AXTree(std::move(*converted)) : ax::AXTree();
    }
    return ax::AXTree(transform(tree.root()));
}

CondensedObservation condense(const ax::AXTree& tree, const AgentConfig& config) {
    CondensedObservation out;
    if (tree.empty()) return out;

    out.source_node_count = tree.node_count();
    if (config.condense_obs) {
        ax::AXTree condensed = blocks_to_markdown(merge_descriptive_nodes(tree));
        out.text = ax::serialize(condensed);
        out.emitted_node_count = condensed.node_count();
        out.interactable_ids = interactive_ids(condensed);
    } else {
        out.text = ax::serialize(tree);
        out.emitted_node_count = out.source_node_count;
        out.interactable_ids = interactive_ids(tree);
    }
    out.token_estimate = estimate_tokens(out.text);
    return out;
}

std::size_t estimate_tokens(std::string_view text) {
    return (text.size() + 3) / 4;
}

}  // namespace webalign::obs
