#include "webalign/ax_tree.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "webalign/errors.hpp"

namespace webalign::ax {

namespace {

struct RawLine {
    int number = 0;  // 1-based position in the input
    int depth = 0;
    std::string body;
};

bool is_blank(const std::string& s) {
    return s.find_first_not_of(" \t\r") == std::string::npos;
}

std::string trim(const std::string& s) {
    auto begin = s.find_first_not_of(" \t");
    if (begin == std::string::npos) return "";
    auto end = s.find_last_not_of(" \t");
    return s.substr(begin, end - begin + 1);
}

bool all_digits(const std::string& s) {
    return !s.empty() &&
           std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string current;
    for (char c : text) {
        if (c == '\n') {
            if (!current.empty() && current.back() == '\r') current.pop_back();
            lines.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    if (!current.empty() && current.back() == '\r') current.pop_back();
    if (!current.empty()) lines.push_back(current);
    return lines;
}

// Splits leading whitespace from content; depth is derived later once the
// indent unit is known.
std::size_t indent_end(const std::string& line) {
    std::size_t i = 0;
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    return i;
}

std::vector<RawLine> layout_lines(const std::string& text) {
    const std::vector<std::string> raw = split_lines(text);

    // The first kept line fixes the margin every other line is measured from.
    std::string margin;
    std::string unit;
    std::vector<std::pair<int, std::string>> kept;  // (line number, full line)
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (is_blank(raw[i])) continue;
        kept.emplace_back(static_cast<int>(i + 1), raw[i]);
    }

    margin = kept.front().second.substr(0, indent_end(kept.front().second));
    for (const auto& [number, line] : kept) {
        std::string ws = line.substr(0, indent_end(line));
        if (ws.size() > margin.size()) {
            std::string beyond = ws.substr(margin.size());
            unit = beyond[0] == '\t' ? "\t" : beyond;
            break;
        }
    }

    std::vector<RawLine> lines;
    lines.reserve(kept.size());
    for (const auto& [number, line] : kept) {
        std::string ws = line.substr(0, indent_end(line));
        if (ws.size() < margin.size() || ws.compare(0, margin.size(), margin) != 0) {
            throw ParseError("line " + std::to_string(number) + ": dedents past the root");
        }
        std::string beyond = ws.substr(margin.size());
        int depth = 0;
        if (!beyond.empty()) {
            if (unit.empty() || beyond.size() % unit.size() != 0) {
                throw ParseError("line " + std::to_string(number) + ": inconsistent indentation");
            }
            for (std::size_t p = 0; p < beyond.size(); p += unit.size()) {
                if (beyond.substr(p, unit.size()) != unit) {
                    throw ParseError("line " + std::to_string(number) + ": inconsistent indentation");
                }
            }
            depth = static_cast<int>(beyond.size() / unit.size());
        }
        lines.push_back(RawLine{number, depth, line.substr(ws.size())});
    }
    return lines;
}

// `role [id] 'name' [attr: value]...`; any row that does not fit degrades to
// a name-only node instead of being dropped.
AXNode parse_body(const std::string& body) {
    AXNode node;
    std::size_t pos = 0;
    while (pos < body.size() && body[pos] != ' ' && body[pos] != '\t') ++pos;
    node.role = body.substr(0, pos);
    const std::string rest = trim(body.substr(pos));

    AXNode fallback;
    fallback.role = node.role;
    if (!rest.empty()) fallback.name = rest;

    pos = 0;
    auto skip_spaces = [&] {
        while (pos < rest.size() && (rest[pos] == ' ' || rest[pos] == '\t')) ++pos;
    };

    skip_spaces();
    if (pos < rest.size() && rest[pos] == '[') {
        std::size_t close = rest.find(']', pos);
        if (close == std::string::npos) return fallback;
        std::string inner = rest.substr(pos + 1, close - pos - 1);
        if (all_digits(inner)) {
            node.node_id = std::stoi(inner);
            pos = close + 1;
        }
        // Otherwise leave the bracket group for the attribute phase.
    }

    skip_spaces();
    if (pos < rest.size() && (rest[pos] == '\'' || rest[pos] == '"')) {
        char quote = rest[pos];
        std::size_t close = rest.rfind(quote);
        if (close == pos) {
            // Unterminated quote runs to end of line.
            node.name = rest.substr(pos + 1);
            pos = rest.size();
        } else {
            node.name = rest.substr(pos + 1, close - pos - 1);
            pos = close + 1;
        }
    }

    while (true) {
        skip_spaces();
        if (pos >= rest.size()) break;
        if (rest[pos] != '[') return fallback;
        std::size_t close = rest.find(']', pos);
        if (close == std::string::npos) return fallback;
        std::string inner = rest.substr(pos + 1, close - pos - 1);
        std::size_t colon = inner.find(':');
        if (colon == std::string::npos) return fallback;
        std::string key = trim(inner.substr(0, colon));
        std::string value = trim(inner.substr(colon + 1));
        if (key.empty()) return fallback;
        node.attributes.emplace_back(std::move(key), std::move(value));
        pos = close + 1;
    }
    return node;
}

AXNode parse_subtree(const std::vector<RawLine>& lines, std::size_t& i, std::set<int>& seen_ids) {
    const int depth = lines[i].depth;
    AXNode node = parse_body(lines[i].body);
    if (node.node_id) {
        if (!seen_ids.insert(*node.node_id).second) {
            throw ParseError("line " + std::to_string(lines[i].number) + ": duplicate node id " +
                             std::to_string(*node.node_id));
        }
    }
    ++i;
    while (i < lines.size() && lines[i].depth > depth) {
        if (lines[i].depth != depth + 1) {
            throw ParseError("line " + std::to_string(lines[i].number) +
                             ": indentation jumps more than one level");
        }
        node.children.push_back(parse_subtree(lines, i, seen_ids));
    }
    return node;
}

std::string quote_name(const std::string& name) {
    if (name.find('\'') == std::string::npos) return "'" + name + "'";
    if (name.find('"') == std::string::npos) return "\"" + name + "\"";
    return "'" + name + "'";  // best effort outside the canonical domain
}

void emit(const AXNode& node, int depth, const SerializeOptions& opts, std::string& out) {
    out.append(static_cast<std::size_t>(depth), '\t');
    out += node.role;
    if (node.node_id && !opts.strip_ids) {
        out += " [" + std::to_string(*node.node_id) + "]";
    }
    if (node.name) out += " " + quote_name(*node.name);
    for (const auto& [key, value] : node.attributes) {
        out += " [" + key + ": " + value + "]";
    }
    for (const AXNode& child : node.children) {
        out += '\n';
        emit(child, depth + 1, opts, out);
    }
}

std::size_t count_nodes(const AXNode& node) {
    std::size_t n = 1;
    for (const AXNode& child : node.children) n += count_nodes(child);
    return n;
}

void collect_descendants(const AXNode& node, NodePath& path, std::vector<NodePath>& out) {
    for (int i = 0; i < static_cast<int>(node.children.size()); ++i) {
        path.push_back(i);
        out.push_back(path);
        collect_descendants(node.children[static_cast<std::size_t>(i)], path, out);
        path.pop_back();
    }
}

}  // namespace

AXTree::AXTree(AXNode root) : root_(std::move(root)) {
    NodePath path;
    index_subtree(root_, 0, path);
}

void AXTree::index_subtree(AXNode& node, int depth, NodePath& path) {
    node.depth = depth;
    if (node.node_id) {
        if (!id_index_.emplace(*node.node_id, path).second) {
            throw ParseError("duplicate node id " + std::to_string(*node.node_id));
        }
    }
    for (int i = 0; i < static_cast<int>(node.children.size()); ++i) {
        path.push_back(i);
        index_subtree(node.children[static_cast<std::size_t>(i)], depth + 1, path);
        path.pop_back();
    }
}

const AXNode& AXTree::node_at(const NodePath& path) const {
    const AXNode* node = &root_;
    for (int index : path) {
        if (index < 0 || index >= static_cast<int>(node->children.size())) {
            throw UnknownNodeError("path does not resolve");
        }
        node = &node->children[static_cast<std::size_t>(index)];
    }
    return *node;
}

const AXNode* AXTree::find(int id) const {
    auto it = id_index_.find(id);
    if (it == id_index_.end()) return nullptr;
    return &node_at(it->second);
}

std::size_t AXTree::node_count() const {
    if (empty()) return 0;
    return count_nodes(root_);
}

bool AXTree::empty() const {
    return root_.role.empty() && !root_.node_id && !root_.name && root_.children.empty() &&
           root_.attributes.empty();
}

AXTree parse_ax_tree(const std::string& text) {
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
        throw EmptyObservationError("observation text is empty");
    }
    std::vector<RawLine> lines = layout_lines(text);

    std::set<int> seen_ids;
    std::size_t i = 0;
    AXNode root = parse_subtree(lines, i, seen_ids);
    if (i != lines.size()) {
        throw ParseError("line " + std::to_string(lines[i].number) + ": multiple root nodes");
    }
    return AXTree(std::move(root));
}

std::string serialize(const AXNode& node, const SerializeOptions& opts) {
    std::string out;
    emit(node, 0, opts, out);
    return out;
}

std::string serialize(const AXTree& tree, const SerializeOptions& opts) {
    if (tree.empty()) return "";
    return serialize(tree.root(), opts);
}

Relatives relatives(const AXTree& tree, int id) {
    auto it = tree.id_index().find(id);
    if (it == tree.id_index().end()) {
        throw UnknownNodeError("node id " + std::to_string(id) + " is not in the tree");
    }
    const NodePath& path = it->second;

    Relatives result;
    for (std::size_t len = path.size(); len-- > 0;) {
        result.ancestors.emplace_back(path.begin(), path.begin() + static_cast<long>(len));
    }

    if (!path.empty()) {
        NodePath parent_path(path.begin(), path.end() - 1);
        const AXNode& parent = tree.node_at(parent_path);
        for (int i = 0; i < static_cast<int>(parent.children.size()); ++i) {
            if (i == path.back()) continue;
            NodePath sibling = parent_path;
            sibling.push_back(i);
            result.siblings.push_back(std::move(sibling));
        }
    }

    NodePath cursor = path;
    collect_descendants(tree.node_at(path), cursor, result.descendants);
    return result;
}

}  // namespace webalign::ax
