#pragma once

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "webalign/ax_tree.hpp"

namespace testutil {

inline std::string fixture_path(const std::string& name) {
    return std::string(WEBALIGN_FIXTURE_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(bool(in), "cannot open " << path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline std::string read_fixture(const std::string& name) {
    return read_file(fixture_path(name));
}

// Random AX trees over the canonical domain: names may carry one quote kind,
// pipes and brackets; attribute values stay alphanumeric.
class TreeGen {
public:
    explicit TreeGen(unsigned seed) : rng_(seed) {}

    webalign::ax::AXTree tree(int max_nodes) {
        next_id_ = 1;
        int budget = 1 + static_cast<int>(rng_() % static_cast<unsigned>(max_nodes));
        webalign::ax::AXNode root = make_node(budget);
        root.role = "RootWebArea";
        return webalign::ax::AXTree(std::move(root));
    }

    std::mt19937& rng() { return rng_; }

private:
    webalign::ax::AXNode make_node(int& budget) {
        webalign::ax::AXNode n;
        n.role = roles_[rng_() % roles_.size()];
        if (rng_() % 100 < 70) n.node_id = next_id_++;
        if (rng_() % 100 < 75) n.name = name();
        if (rng_() % 100 < 20) {
            n.attributes.emplace_back(attr_keys_[rng_() % attr_keys_.size()],
                                      attr_values_[rng_() % attr_values_.size()]);
        }
        --budget;
        while (budget > 0 && rng_() % 100 < 55) {
            n.children.push_back(make_node(budget));
        }
        return n;
    }

    std::string name() {
        static const char* words[] = {"Search",    "My Account", "Issues", "Submit",
                                      "Dashboard", "Sign in",    "Price",  "Reports",
                                      "Settings",  "Checkout",   "Export", "Profile"};
        std::string s = words[rng_() % 12];
        unsigned extra = rng_() % 100;
        if (extra < 20) s += " " + std::string(words[rng_() % 12]);
        if (extra >= 20 && extra < 28) s += "'s page";
        if (extra >= 28 && extra < 34) s = "| " + s + " | 27.00 |";
        if (extra >= 34 && extra < 40) s += " [beta]";
        return s;
    }

    std::mt19937 rng_;
    int next_id_ = 1;
    std::vector<std::string> roles_ = {
        "link",   "button", "StaticText", "text",        "combobox", "textbox",
        "search", "main",   "generic",    "contentinfo", "tab",      "heading",
        "row",    "list",   "menuitem",   "checkbox"};
    std::vector<std::string> attr_keys_ = {"required", "expanded", "checked", "pressed"};
    std::vector<std::string> attr_values_ = {"False", "True", "false", "mixed"};
};

// Flat adjacency view used by the brute-force oracles; independent of the
// AXTree navigation helpers.
struct FlatTree {
    struct Entry {
        webalign::ax::NodePath path;
        int parent = -1;  // index into entries, -1 for root
        const webalign::ax::AXNode* node = nullptr;
    };
    std::vector<Entry> entries;

    static FlatTree build(const webalign::ax::AXTree& tree) {
        FlatTree flat;
        webalign::ax::NodePath path;
        walk(tree.root(), path, -1, flat);
        return flat;
    }

    int index_of_path(const webalign::ax::NodePath& path) const {
        for (std::size_t i = 0; i < entries.size(); ++i) {
            if (entries[i].path == path) return static_cast<int>(i);
        }
        return -1;
    }

    int index_of_id(int id) const {
        for (std::size_t i = 0; i < entries.size(); ++i) {
            if (entries[i].node->node_id && *entries[i].node->node_id == id) {
                return static_cast<int>(i);
            }
        }
        return -1;
    }

private:
    static void walk(const webalign::ax::AXNode& node, webalign::ax::NodePath& path, int parent,
                     FlatTree& flat) {
        flat.entries.push_back({path, parent, &node});
        int self = static_cast<int>(flat.entries.size()) - 1;
        for (int i = 0; i < static_cast<int>(node.children.size()); ++i) {
            path.push_back(i);
            walk(node.children[static_cast<std::size_t>(i)], path, self, flat);
            path.pop_back();
        }
    }
};

// ancestors/siblings/descendants by plain adjacency walks.
struct BruteRelatives {
    std::set<webalign::ax::NodePath> ancestors, siblings, descendants;
};

inline BruteRelatives brute_relatives(const FlatTree& flat, int entry_index) {
    BruteRelatives out;
    for (int p = flat.entries[static_cast<std::size_t>(entry_index)].parent; p != -1;
         p = flat.entries[static_cast<std::size_t>(p)].parent) {
        out.ancestors.insert(flat.entries[static_cast<std::size_t>(p)].path);
    }
    int parent = flat.entries[static_cast<std::size_t>(entry_index)].parent;
    if (parent != -1) {
        for (std::size_t i = 0; i < flat.entries.size(); ++i) {
            if (static_cast<int>(i) != entry_index && flat.entries[i].parent == parent) {
                out.siblings.insert(flat.entries[i].path);
            }
        }
    }
    const auto& prefix = flat.entries[static_cast<std::size_t>(entry_index)].path;
    for (std::size_t i = 0; i < flat.entries.size(); ++i) {
        const auto& path = flat.entries[i].path;
        if (path.size() > prefix.size() &&
            std::equal(prefix.begin(), prefix.end(), path.begin())) {
            out.descendants.insert(path);
        }
    }
    return out;
}

}  // namespace testutil
