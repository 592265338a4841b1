#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace webalign::ax {

// Identifies a node by the child indices walked from the root. The root's
// path is empty. Paths stay valid as long as the tree is not rebuilt.
using NodePath = std::vector<int>;

// One row of the indentation-based accessibility-tree dump:
//   role [id] 'name' [attr: value]...
// with id, name and attributes each optional.
struct AXNode {
    std::optional<int> node_id;
    std::string role;
    std::optional<std::string> name;
    std::vector<std::pair<std::string, std::string>> attributes;
    std::vector<AXNode> children;
    int depth = 0;

    bool operator==(const AXNode& other) const = default;
};

// Immutable after construction; depths are re-derived from structure and the
// id index covers exactly the nodes carrying ids.
class AXTree {
public:
    AXTree() = default;
    explicit AXTree(AXNode root);

    const AXNode& root() const { return root_; }
    const std::unordered_map<int, NodePath>& id_index() const { return id_index_; }

    bool has_id(int id) const { return id_index_.find(id) != id_index_.end(); }
    const AXNode& node_at(const NodePath& path) const;
    // nullptr when the id is absent.
    const AXNode* find(int id) const;

    std::size_t node_count() const;
    bool empty() const;

    bool operator==(const AXTree& other) const { return root_ == other.root_; }

private:
    void index_subtree(AXNode& node, int depth, NodePath& path);

    AXNode root_;
    std::unordered_map<int, NodePath> id_index_;
};

struct Relatives {
    std::vector<NodePath> ancestors;    // nearest first, root last
    std::vector<NodePath> siblings;     // document order, self excluded
    std::vector<NodePath> descendants;  // preorder, strict subtree
};

// Parses a raw observation dump. Indent unit is one tab, or a run of spaces
// auto-detected from the first indented line. Malformed rows degrade to
// name-only nodes; empty input raises EmptyObservationError; an indentation
// jump of more than one level or a second root raises ParseError naming the
// line.
AXTree parse_ax_tree(const std::string& text);

struct SerializeOptions {
    bool strip_ids = false;  // history form per the replay rules
};

// Canonical one-line-per-node regeneration (no trailing newline). Names are
// single-quoted, or double-quoted when they contain an apostrophe.
std::string serialize(const AXTree& tree, const SerializeOptions& opts = {});
std::string serialize(const AXNode& node, const SerializeOptions& opts = {});

// Ancestors / siblings / descendants of the node carrying `id`.
// Raises UnknownNodeError for absent ids.
Relatives relatives(const AXTree& tree, int id);

}  // namespace webalign::ax
