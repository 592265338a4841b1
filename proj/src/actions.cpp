#include "webalign/actions.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "webalign/errors.hpp"

namespace webalign::actions {

namespace {

std::string trim(std::string_view s) {
    auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string_view::npos) return "";
    auto end = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(begin, end - begin + 1));
}

const std::map<std::string, ActionKind, std::less<>>& verb_table() {
    static const std::map<std::string, ActionKind, std::less<>> table = {
        {"click", ActionKind::Click},         {"type", ActionKind::Type},
        {"go_back", ActionKind::GoBack},      {"go_home", ActionKind::GoHome},
        {"note", ActionKind::Note},           {"stop", ActionKind::Stop},
        {"branch", ActionKind::Branch},       {"prune", ActionKind::Prune},
        {"noop", ActionKind::Noop},           {"hover", ActionKind::Hover},
        {"press", ActionKind::Press},         {"scroll", ActionKind::Scroll},
        {"tab_focus", ActionKind::TabFocus},  {"new_tab", ActionKind::NewTab},
        {"tab_close", ActionKind::TabClose},  {"go_forward", ActionKind::GoForward},
        {"goto", ActionKind::Goto},
    };
    return table;
}

// Bracket arguments matched greedily left to right; nested balanced brackets
// stay inside the argument, an unbalanced top-level `]` is unsupported.
std::vector<std::string> parse_bracket_args(std::string_view rest, std::string_view line) {
    std::vector<std::string> args;
    std::size_t pos = 0;
    while (pos < rest.size()) {
        while (pos < rest.size() && (rest[pos] == ' ' || rest[pos] == '\t')) ++pos;
        if (pos >= rest.size()) break;
        if (rest[pos] != '[') {
            throw MalformedActionError("unexpected text outside brackets in '" +
                                       std::string(line) + "'");
        }
        int depth = 0;
        std::size_t start = pos;
        for (; pos < rest.size(); ++pos) {
            if (rest[pos] == '[') ++depth;
            if (rest[pos] == ']') {
                --depth;
                if (depth == 0) break;
            }
        }
        if (depth != 0) {
            throw MalformedActionError("unbalanced brackets in '" + std::string(line) + "'");
        }
        args.emplace_back(rest.substr(start + 1, pos - start - 1));
        ++pos;
    }
    return args;
}

int parse_id_arg(const std::string& arg, std::string_view what, std::string_view line) {
    std::string value = trim(arg);
    if (value.empty() ||
        !std::all_of(value.begin(), value.end(),
                     [](unsigned char c) { return std::isdigit(c); })) {
        throw MalformedActionError(std::string(what) + " must be a non-negative integer in '" +
                                   std::string(line) + "'");
    }
    return std::stoi(value);
}

void require_args(const std::vector<std::string>& args, std::size_t min, std::size_t max,
                  std::string_view verb, std::string_view line) {
    if (args.size() < min || args.size() > max) {
        throw MalformedActionError(std::string(verb) + " expects " + std::to_string(min) +
                                   (max != min ? ".." + std::to_string(max) : "") +
                                   " bracketed arguments in '" + std::string(line) + "'");
    }
}

bool parse_press_enter_flag(const std::string& arg, std::string_view line) {
    std::string value = trim(arg);
    // Accept both the bare flag and the spelled-out placeholder form.
    const std::string prefix = "press_enter_after=";
    if (value.rfind(prefix, 0) == 0) value = value.substr(prefix.size());
    if (value == "0") return false;
    if (value == "1") return true;
    throw MalformedActionError("press_enter flag must be 0 or 1 in '" + std::string(line) + "'");
}

struct SpecLine {
    ActionKind kind;
    const char* text;
};

// Navigation specification paragraphs, ordered so the aligned space prints
// click, type, go_back, note, stop, go_home.
const SpecLine kNavigationSpecs[] = {
    {ActionKind::Click,
     "click [id]: To click on an element with its numerical ID on the webpage. E.g., `click [7]` "
     "If clicking on a specific element doesn't trigger the transition to your desired web state, "
     "this is due to the element's lack of interactivity or GUI visibility. In such cases, move "
     "on to interact with OTHER similar or relevant elements INSTEAD."},
    {ActionKind::Type,
     "type [id] [content] [press_enter_after=0|1]: To type content into a field with a specific "
     "ID. By default, the `Enter` key is pressed after typing unless `press_enter_after` is set "
     "to 0. E.g., `type [15] [Carnegie Mellon University] [1]` If you can't find what you're "
     "looking for on your first attempt, consider refining your search keywords by breaking them "
     "down or trying related terms."},
    {ActionKind::Noop, "noop: To do nothing when no operation is needed for this step."},
    {ActionKind::Hover,
     "hover [id]: To hover over an element with its numerical ID on the webpage. E.g., `hover "
     "[7]`"},
    {ActionKind::Press,
     "press [key_comb]: To press a combination of keys together. E.g., `press [Ctrl+v]`"},
    {ActionKind::Scroll,
     "scroll [down|up]: To scroll the page down or up. E.g., `scroll [down]`"},
    {ActionKind::TabFocus,
     "tab_focus [index]: To focus on the browser tab at the given index. E.g., `tab_focus [1]`"},
    {ActionKind::NewTab, "new_tab: To open a new browser tab."},
    {ActionKind::TabClose, "tab_close: To close the current browser tab."},
    {ActionKind::GoBack, "go_back: To return to the previously viewed page."},
    {ActionKind::GoForward,
     "go_forward: To undo the most recent go_back and return to the page you left."},
    {ActionKind::Goto,
     "goto [url]: To navigate directly to a URL. E.g., `goto [http://example.com]`"},
    {ActionKind::Note,
     "note [content]: To take note of all important info w.r.t. completing the task to enable "
     "reviewing it later. E.g., `note [Spent $10 on 4/1/2024]`"},
    {ActionKind::Stop,
     "stop [answer]: To stop interaction and return response. Present your answer within the "
     "brackets. If the task doesn't require a textual answer or appears insurmountable, indicate "
     "`N/A` and additional reasons and all relevant information you gather as the answer. E.g., "
     "`stop [5h 47min]`"},
    {ActionKind::GoHome,
     "go_home: To return to the homepage where you can find other websites."},
};

const char* kBranchSpec =
    "branch [parent_plan_id] [new_subplan_intent]: To create a new subplan based on PREVIOUS "
    "PLANS. Ensure the new subplan is connected to the appropriate parent plan by using its ID. "
    "E.g., `branch [12] [Navigate to the \"Issue\" page to check all the issues.]`";
const char* kPruneSpec =
    "prune [resume_plan_id] [reason]: To return to a previous plan state when the current plan "
    "is deemed impractical. Enter the ID of the plan state you want to resume. E.g., `prune [5] "
    "[The current page lacks items \"black speaker,\" prompting a return to the initial page to "
    "restart the item search.]`";

}  // namespace

ActionKind kind_of(const Action& action) {
    return std::visit(
        [](const auto& a) -> ActionKind {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, Click>) return ActionKind::Click;
            else if constexpr (std::is_same_v<T, Type>) return ActionKind::Type;
            else if constexpr (std::is_same_v<T, GoBack>) return ActionKind::GoBack;
            else if constexpr (std::is_same_v<T, GoHome>) return ActionKind::GoHome;
            else if constexpr (std::is_same_v<T, Note>) return ActionKind::Note;
            else if constexpr (std::is_same_v<T, Stop>) return ActionKind::Stop;
            else if constexpr (std::is_same_v<T, Branch>) return ActionKind::Branch;
            else if constexpr (std::is_same_v<T, Prune>) return ActionKind::Prune;
            else if constexpr (std::is_same_v<T, Noop>) return ActionKind::Noop;
            else if constexpr (std::is_same_v<T, Hover>) return ActionKind::Hover;
            else if constexpr (std::is_same_v<T, Press>) return ActionKind::Press;
            else if constexpr (std::is_same_v<T, Scroll>) return ActionKind::Scroll;
            else if constexpr (std::is_same_v<T, TabFocus>) return ActionKind::TabFocus;
            else if constexpr (std::is_same_v<T, NewTab>) return ActionKind::NewTab;
            else if constexpr (std::is_same_v<T, TabClose>) return ActionKind::TabClose;
            else if constexpr (std::is_same_v<T, GoForward>) return ActionKind::GoForward;
            else return ActionKind::Goto;
        },
        action);
}

std::string_view verb_of(ActionKind kind) {
    switch (kind) {
        case ActionKind::Click: return "click";
        case ActionKind::Type: return "type";
        case ActionKind::GoBack: return "go_back";
        case ActionKind::GoHome: return "go_home";
        case ActionKind::Note: return "note";
        case ActionKind::Stop: return "stop";
        case ActionKind::Branch: return "branch";
        case ActionKind::Prune: return "prune";
        case ActionKind::Noop: return "noop";
        case ActionKind::Hover: return "hover";
        case ActionKind::Press: return "press";
        case ActionKind::Scroll: return "scroll";
        case ActionKind::TabFocus: return "tab_focus";
        case ActionKind::NewTab: return "new_tab";
        case ActionKind::TabClose: return "tab_close";
        case ActionKind::GoForward: return "go_forward";
        case ActionKind::Goto: return "goto";
    }
    return "";
}

bool is_navigation(ActionKind kind) {
    switch (kind) {
        case ActionKind::Note:
        case ActionKind::Stop:
        case ActionKind::Branch:
        case ActionKind::Prune:
            return false;
        default:
            return true;
    }
}

ActionSpace ActionSpace::from_config(const AgentConfig& config) {
    ActionSpace space;
    auto add = [&](ActionKind kind) { space.allowed_.push_back(kind); };

    add(ActionKind::Click);
    add(ActionKind::Type);
    add(ActionKind::GoBack);
    add(ActionKind::Stop);  // allowed in both spaces
    if (!config.disable_scroll) add(ActionKind::Scroll);
    if (config.reduce_actions) {
        add(ActionKind::Note);
        if (config.multisite) add(ActionKind::GoHome);
    } else {
        add(ActionKind::Noop);
        add(ActionKind::Hover);
        add(ActionKind::Press);
        add(ActionKind::TabFocus);
        add(ActionKind::NewTab);
        add(ActionKind::TabClose);
        add(ActionKind::GoForward);
        add(ActionKind::Goto);
    }
    if (config.planning) {
        add(ActionKind::Branch);
        add(ActionKind::Prune);
    }
    return space;
}

bool ActionSpace::allows(ActionKind kind) const {
    return std::find(allowed_.begin(), allowed_.end(), kind) != allowed_.end();
}

Action parse_action(std::string_view line, const ActionSpace& space) {
    std::string text = trim(line);
    if (text.empty()) throw MalformedActionError("empty action line");

    std::size_t pos = 0;
    while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) ||
                                 text[pos] == '_')) {
        ++pos;
    }
    std::string verb = text.substr(0, pos);
    std::transform(verb.begin(), verb.end(), verb.begin(),
                   [](unsigned char c) { return std::tolower(c); });

    auto it = verb_table().find(verb);
    if (it == verb_table().end()) {
        throw UnknownActionError("unknown verb '" + verb + "'");
    }
    ActionKind kind = it->second;
    if (!space.allows(kind)) {
        throw DisallowedActionError("'" + verb + "' is not allowed by the configured action space");
    }

    std::vector<std::string> args = parse_bracket_args(std::string_view(text).substr(pos), text);

    switch (kind) {
        case ActionKind::Click:
            require_args(args, 1, 1, verb, text);
            return Click{parse_id_arg(args[0], "element id", text)};
        case ActionKind::Type: {
            require_args(args, 2, 3, verb, text);
            Type action;
            action.id = parse_id_arg(args[0], "element id", text);
            action.content = args[1];
            action.press_enter = args.size() < 3 || parse_press_enter_flag(args[2], text);
            return action;
        }
        case ActionKind::GoBack:
            require_args(args, 0, 0, verb, text);
            return GoBack{};
        case ActionKind::GoHome:
            require_args(args, 0, 0, verb, text);
            return GoHome{};
        case ActionKind::Note:
            require_args(args, 0, 1, verb, text);
            return Note{args.empty() ? "" : args[0]};
        case ActionKind::Stop:
            require_args(args, 0, 1, verb, text);
            return Stop{args.empty() ? "" : args[0]};
        case ActionKind::Branch: {
            require_args(args, 2, 2, verb, text);
            return Branch{parse_id_arg(args[0], "parent_plan_id", text), args[1]};
        }
        case ActionKind::Prune: {
            require_args(args, 2, 2, verb, text);
            return Prune{parse_id_arg(args[0], "resume_plan_id", text), args[1]};
        }
        case ActionKind::Noop:
            require_args(args, 0, 0, verb, text);
            return Noop{};
        case ActionKind::Hover:
            require_args(args, 1, 1, verb, text);
            return Hover{parse_id_arg(args[0], "element id", text)};
        case ActionKind::Press:
            require_args(args, 1, 1, verb, text);
            return Press{args[0]};
        case ActionKind::Scroll: {
            require_args(args, 1, 1, verb, text);
            std::string dir = trim(args[0]);
            std::transform(dir.begin(), dir.end(), dir.begin(),
                           [](unsigned char c) { return std::tolower(c); });
            if (dir == "down") return Scroll{ScrollDirection::Down};
            if (dir == "up") return Scroll{ScrollDirection::Up};
            throw MalformedActionError("scroll direction must be up or down in '" + text + "'");
        }
        case ActionKind::TabFocus:
            require_args(args, 1, 1, verb, text);
            return TabFocus{parse_id_arg(args[0], "tab index", text)};
        case ActionKind::NewTab:
            require_args(args, 0, 0, verb, text);
            return NewTab{};
        case ActionKind::TabClose:
            require_args(args, 0, 0, verb, text);
            return TabClose{};
        case ActionKind::GoForward:
            require_args(args, 0, 0, verb, text);
            return GoForward{};
        case ActionKind::Goto:
            require_args(args, 1, 1, verb, text);
            return Goto{args[0]};
    }
    throw UnknownActionError("unknown verb '" + verb + "'");
}

std::string render_action(const Action& action) {
    return std::visit(
        [](const auto& a) -> std::string {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, Click>) {
                return "click [" + std::to_string(a.id) + "]";
            } else if constexpr (std::is_same_v<T, Type>) {
                return "type [" + std::to_string(a.id) + "] [" + a.content + "] [" +
                       (a.press_enter ? "1" : "0") + "]";
            } else if constexpr (std::is_same_v<T, GoBack>) {
                return "go_back";
            } else if constexpr (std::is_same_v<T, GoHome>) {
                return "go_home";
            } else if constexpr (std::is_same_v<T, Note>) {
                return "note [" + a.content + "]";
            } else if constexpr (std::is_same_v<T, Stop>) {
                return "stop [" + a.answer + "]";
            } else if constexpr (std::is_same_v<T, Branch>) {
                return "branch [" + std::to_string(a.parent_plan_id) + "] [" + a.intent + "]";
            } else if constexpr (std::is_same_v<T, Prune>) {
                return "prune [" + std::to_string(a.resume_plan_id) + "] [" + a.reason + "]";
            } else if constexpr (std::is_same_v<T, Noop>) {
                return "noop";
            } else if constexpr (std::is_same_v<T, Hover>) {
                return "hover [" + std::to_string(a.id) + "]";
            } else if constexpr (std::is_same_v<T, Press>) {
                return "press [" + a.key_combo + "]";
            } else if constexpr (std::is_same_v<T, Scroll>) {
                return a.direction == ScrollDirection::Down ? "scroll [down]" : "scroll [up]";
            } else if constexpr (std::is_same_v<T, TabFocus>) {
                return "tab_focus [" + std::to_string(a.index) + "]";
            } else if constexpr (std::is_same_v<T, NewTab>) {
                return "new_tab";
            } else if constexpr (std::is_same_v<T, TabClose>) {
                return "tab_close";
            } else if constexpr (std::is_same_v<T, GoForward>) {
                return "go_forward";
            } else {
                return "goto [" + a.url + "]";
            }
        },
        action);
}

ActionSpecs render_action_specs(const AgentConfig& config) {
    ActionSpace space = ActionSpace::from_config(config);

    ActionSpecs specs;
    for (const SpecLine& line : kNavigationSpecs) {
        if (!space.allows(line.kind)) continue;
        if (!specs.navigation_spec_text.empty()) specs.navigation_spec_text += '\n';
        specs.navigation_spec_text += line.text;
    }
    if (config.planning) {
        specs.planning_spec_text = std::string(kBranchSpec) + "\n" + kPruneSpec;
    }
    return specs;
}

}  // namespace webalign::actions
