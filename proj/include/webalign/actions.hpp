#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "webalign/config.hpp"

namespace webalign::actions {

enum class ScrollDirection { Up, Down };

struct Click {
    int id = 0;
    bool operator==(const Click&) const = default;
};
struct Type {
    int id = 0;
    std::string content;
    bool press_enter = true;  // trailing flag defaults to on
    bool operator==(const Type&) const = default;
};
struct GoBack {
    bool operator==(const GoBack&) const = default;
};
struct GoHome {
    bool operator==(const GoHome&) const = default;
};
struct Note {
    std::string content;
    bool operator==(const Note&) const = default;
};
struct Stop {
    std::string answer;
    bool operator==(const Stop&) const = default;
};
struct Branch {
    int parent_plan_id = 0;
    std::string intent;
    bool operator==(const Branch&) const = default;
};
struct Prune {
    int resume_plan_id = 0;
    std::string reason;
    bool operator==(const Prune&) const = default;
};

// Vanilla-only variants.
struct Noop {
    bool operator==(const Noop&) const = default;
};
struct Hover {
    int id = 0;
    bool operator==(const Hover&) const = default;
};
struct Press {
    std::string key_combo;
    bool operator==(const Press&) const = default;
};
struct Scroll {
    ScrollDirection direction = ScrollDirection::Down;
    bool operator==(const Scroll&) const = default;
};
struct TabFocus {
    int index = 0;
    bool operator==(const TabFocus&) const = default;
};
struct NewTab {
    bool operator==(const NewTab&) const = default;
};
struct TabClose {
    bool operator==(const TabClose&) const = default;
};
struct GoForward {
    bool operator==(const GoForward&) const = default;
};
struct Goto {
    std::string url;
    bool operator==(const Goto&) const = default;
};

using Action = std::variant<Click, Type, GoBack, GoHome, Note, Stop, Branch, Prune, Noop, Hover,
                            Press, Scroll, TabFocus, NewTab, TabClose, GoForward, Goto>;

enum class ActionKind {
    Click,
    Type,
    GoBack,
    GoHome,
    Note,
    Stop,
    Branch,
    Prune,
    Noop,
    Hover,
    Press,
    Scroll,
    TabFocus,
    NewTab,
    TabClose,
    GoForward,
    Goto,
};

ActionKind kind_of(const Action& action);
std::string_view verb_of(ActionKind kind);

// True for the variants that reach the environment (everything except
// note/stop and the planning pair).
bool is_navigation(ActionKind kind);

// The variant set selected by the configuration flags.
class ActionSpace {
public:
    static ActionSpace from_config(const AgentConfig& config);

    bool allows(ActionKind kind) const;
    const std::vector<ActionKind>& allowed() const { return allowed_; }

private:
    std::vector<ActionKind> allowed_;
};

// Parses one action command line. Unknown verbs raise UnknownActionError,
// verbs outside the space raise DisallowedActionError (so the runtime can
// re-prompt), bad bracket structure raises MalformedActionError. Bracket
// arguments keep their content verbatim.
Action parse_action(std::string_view line, const ActionSpace& space);

// Canonical single-line form; parse_action(render_action(a)) == a.
std::string render_action(const Action& action);

struct ActionSpecs {
    std::string navigation_spec_text;
    std::string planning_spec_text;  // empty when planning is off
};

// Specification paragraphs for exactly the allowed variants.
ActionSpecs render_action_specs(const AgentConfig& config);

}  // namespace webalign::actions
