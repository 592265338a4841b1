#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <string_view>

#include "webalign/ax_tree.hpp"
#include "webalign/config.hpp"

namespace webalign::obs {

// Roles the agent can act on; ids carried by these must survive condensation.
bool is_interactive_role(std::string_view role);

struct CondensedObservation {
    std::string text;
    std::set<int> interactable_ids;
    std::size_t source_node_count = 0;
    std::size_t emitted_node_count = 0;
    std::size_t token_estimate = 0;
};

// Removes StaticText/text leaves whose normalized label repeats the name of
// the parent or of an immediately adjacent interactive sibling.
ax::AXTree merge_descriptive_nodes(const ax::AXTree& tree);

// Rewrites table blocks into pipe-delimited Markdown rows (header, `| --- |`
// separator, data rows) and list blocks into `- item` text rows. Structural
// wrappers go away; id-carrying descendants inside cells are re-attached to
// the emitted row. Empty blocks vanish. Already-converted blocks pass
// through unchanged.
ax::AXTree blocks_to_markdown(const ax::AXTree& tree);

// Full single-page condensation (no viewport, no scrolling): both rewrites
// when config.condense_obs is set, plain serialization otherwise.
CondensedObservation condense(const ax::AXTree& tree, const AgentConfig& config);

// ceil(chars / 4); deterministic stand-in for a subword tokenizer.
std::size_t estimate_tokens(std::string_view text);

// trim + collapse internal whitespace runs; the equality used by the merge.
std::string normalize_whitespace(std::string_view text);

// All ids carried by interactive-role nodes in the tree.
std::set<int> interactive_ids(const ax::AXTree& tree);

}  // namespace webalign::obs
