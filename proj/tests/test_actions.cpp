#include "webalign/actions.hpp"

#include <map>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "webalign/errors.hpp"

using namespace webalign;
using namespace webalign::actions;

namespace {

AgentConfig make_config(bool reduce, bool no_scroll, bool planning, bool multisite) {
    AgentConfig config;
    config.reduce_actions = reduce;
    config.disable_scroll = no_scroll;
    config.planning = planning;
    config.multisite = multisite;
    return config;
}

ActionSpace space_of(bool reduce, bool no_scroll, bool planning, bool multisite) {
    return ActionSpace::from_config(make_config(reduce, no_scroll, planning, multisite));
}

const std::vector<ActionKind> kAllKinds = {
    ActionKind::Click,   ActionKind::Type,     ActionKind::GoBack,   ActionKind::GoHome,
    ActionKind::Note,    ActionKind::Stop,     ActionKind::Branch,   ActionKind::Prune,
    ActionKind::Noop,    ActionKind::Hover,    ActionKind::Press,    ActionKind::Scroll,
    ActionKind::TabFocus, ActionKind::NewTab,  ActionKind::TabClose, ActionKind::GoForward,
    ActionKind::Goto};

// Bracket-safe content: anything except an unbalanced top-level ']'.
std::string random_content(std::mt19937& rng) {
    static const char* words[] = {"Carnegie Mellon University",
                                  "black speaker",
                                  "feature",
                                  "5h 47min",
                                  "Spent $10 on 4/1/2024",
                                  "N/A",
                                  "the \"Issue\" page",
                                  "items 'black speaker,'",
                                  "driving: 2min; walking: 16min",
                                  ""};
    std::string out = words[rng() % 10];
    if (rng() % 5 == 0) out += " [nested [twice]]";
    if (rng() % 7 == 0) out = " " + out + " ";
    return out;
}

Action random_action(ActionKind kind, std::mt19937& rng) {
    int id = static_cast<int>(rng() % 2000);
    switch (kind) {
        case ActionKind::Click: return Click{id};
        case ActionKind::Type: return Type{id, random_content(rng), rng() % 2 == 0};
        case ActionKind::GoBack: return GoBack{};
        case ActionKind::GoHome: return GoHome{};
        case ActionKind::Note: return Note{random_content(rng)};
        case ActionKind::Stop: return Stop{random_content(rng)};
        case ActionKind::Branch: return Branch{id, random_content(rng)};
        case ActionKind::Prune: return Prune{id, random_content(rng)};
        case ActionKind::Noop: return Noop{};
        case ActionKind::Hover: return Hover{id};
        case ActionKind::Press: return Press{rng() % 2 ? "Ctrl+v" : "Meta+Shift+p"};
        case ActionKind::Scroll:
            return Scroll{rng() % 2 ? ScrollDirection::Up : ScrollDirection::Down};
        case ActionKind::TabFocus: return TabFocus{id % 10};
        case ActionKind::NewTab: return NewTab{};
        case ActionKind::TabClose: return TabClose{};
        case ActionKind::GoForward: return GoForward{};
        case ActionKind::Goto: return Goto{"http://example.com/a?b=c&d=e"};
    }
    return Noop{};
}

}  // namespace

TEST_CASE("parse: paper example commands") {
    ActionSpace aligned = space_of(true, true, true, true);

    CHECK(parse_action("click [7]", aligned) == Action{Click{7}});
    CHECK(parse_action("type [15] [Carnegie Mellon University] [1]", aligned) ==
          Action{Type{15, "Carnegie Mellon University", true}});
    CHECK(parse_action("type [15] [query] [0]", aligned) == Action{Type{15, "query", false}});
    CHECK(parse_action("type [15] [query]", aligned) == Action{Type{15, "query", true}});
    CHECK(parse_action(
              "branch [12] [Navigate to the \"Issue\" page to check all the issues.]", aligned) ==
          Action{Branch{12, "Navigate to the \"Issue\" page to check all the issues."}});
    CHECK(parse_action("prune [5] [The current page lacks items \"black speaker\".]", aligned) ==
          Action{Prune{5, "The current page lacks items \"black speaker\"."}});
    CHECK(parse_action("stop [5h 47min]", aligned) == Action{Stop{"5h 47min"}});
    CHECK(parse_action("note [Spent $10 on 4/1/2024]", aligned) ==
          Action{Note{"Spent $10 on 4/1/2024"}});
    CHECK(parse_action("go_back", aligned) == Action{GoBack{}});
    CHECK(parse_action("go_home", aligned) == Action{GoHome{}});
}

TEST_CASE("parse: error taxonomy") {
    ActionSpace aligned = space_of(true, true, true, false);

    CHECK_THROWS_AS(parse_action("frobnicate [1]", aligned), UnknownActionError);
    CHECK_THROWS_AS(parse_action("scroll [down]", aligned), DisallowedActionError);
    CHECK_THROWS_AS(parse_action("hover [3]", aligned), DisallowedActionError);
    CHECK_THROWS_AS(parse_action("go_home", aligned), DisallowedActionError);  // multisite off
    CHECK_THROWS_AS(parse_action("click [7", aligned), MalformedActionError);
    CHECK_THROWS_AS(parse_action("click [abc]", aligned), MalformedActionError);
    CHECK_THROWS_AS(parse_action("click [7] trailing", aligned), MalformedActionError);
    CHECK_THROWS_AS(parse_action("type [15]", aligned), MalformedActionError);
    CHECK_THROWS_AS(parse_action("type [15] [x] [2]", aligned), MalformedActionError);
    CHECK_THROWS_AS(parse_action("", aligned), MalformedActionError);

    ActionSpace vanilla = space_of(false, false, false, false);
    CHECK_THROWS_AS(parse_action("note [x]", vanilla), DisallowedActionError);
    CHECK_THROWS_AS(parse_action("branch [0] [x]", vanilla), DisallowedActionError);
    CHECK_THROWS_AS(parse_action("scroll [sideways]", vanilla), MalformedActionError);
    CHECK(parse_action("scroll [down]", vanilla) == Action{Scroll{ScrollDirection::Down}});
    CHECK(parse_action("stop [done]", vanilla) == Action{Stop{"done"}});  // stop stays legal
}

TEST_CASE("parse: verbs are case-insensitive") {
    ActionSpace aligned = space_of(true, true, true, false);
    CHECK(parse_action("Click [7]", aligned) == Action{Click{7}});
    CHECK(parse_action("STOP [x]", aligned) == Action{Stop{"x"}});
}

TEST_CASE("render: canonical forms") {
    CHECK(render_action(Stop{"5h 47min"}) == "stop [5h 47min]");
    CHECK(render_action(Note{""}) == "note []");
    CHECK(render_action(Type{15, "Carnegie Mellon University", true}) ==
          "type [15] [Carnegie Mellon University] [1]");
    CHECK(render_action(Type{15, "x", false}) == "type [15] [x] [0]");
    CHECK(render_action(Scroll{ScrollDirection::Up}) == "scroll [up]");
    CHECK(render_action(GoForward{}) == "go_forward");
}

TEST_CASE("property: parse(render(a)) == a for 1000 random actions per variant") {
    ActionSpace permissive_vanilla = space_of(false, false, true, true);
    ActionSpace permissive_aligned = space_of(true, false, true, true);
    std::mt19937 rng(31337);

    for (ActionKind kind : kAllKinds) {
        const ActionSpace& space =
            (kind == ActionKind::Note || kind == ActionKind::GoHome) ? permissive_aligned
                                                                     : permissive_vanilla;
        for (int i = 0; i < 1000; ++i) {
            Action action = random_action(kind, rng);
            Action reparsed = parse_action(render_action(action), space);
            REQUIRE(reparsed == action);
        }
    }
}

TEST_CASE("property: rendering is injective across distinct actions") {
    std::mt19937 rng(5150);
    std::map<std::string, Action> seen;
    for (ActionKind kind : kAllKinds) {
        for (int i = 0; i < 200; ++i) {
            Action action = random_action(kind, rng);
            std::string text = render_action(action);
            auto [it, inserted] = seen.emplace(text, action);
            if (!inserted) REQUIRE(it->second == action);
        }
    }
}

TEST_CASE("membership matrix matches the hand-enumerated table") {
    struct Row {
        bool reduce, no_scroll, planning, multisite;
        std::set<std::string> allowed;
    };
    const std::set<std::string> base = {"click", "type", "go_back", "stop"};
    const std::set<std::string> vanilla_extra = {"noop",    "hover",     "press",
                                                 "tab_focus", "new_tab", "tab_close",
                                                 "go_forward", "goto"};
    auto with = [](std::set<std::string> s, std::initializer_list<const char*> more) {
        for (const char* m : more) s.insert(m);
        return s;
    };
    auto plus = [&](std::set<std::string> s, const std::set<std::string>& more) {
        s.insert(more.begin(), more.end());
        return s;
    };

    std::vector<Row> table;
    for (int mask = 0; mask < 16; ++mask) {
        Row row;
        row.reduce = mask & 1;
        row.no_scroll = mask & 2;
        row.planning = mask & 4;
        row.multisite = mask & 8;

        std::set<std::string> allowed = base;
        if (row.reduce) {
            allowed = with(allowed, {"note"});
            if (row.multisite) allowed = with(allowed, {"go_home"});
        } else {
            allowed = plus(allowed, vanilla_extra);
        }
        if (!row.no_scroll) allowed = with(allowed, {"scroll"});
        if (row.planning) allowed = with(allowed, {"branch", "prune"});
        row.allowed = allowed;
        table.push_back(row);
    }

    for (const Row& row : table) {
        CAPTURE(row.reduce);
        CAPTURE(row.no_scroll);
        CAPTURE(row.planning);
        CAPTURE(row.multisite);
        ActionSpace space = space_of(row.reduce, row.no_scroll, row.planning, row.multisite);
        std::set<std::string> got;
        for (ActionKind kind : space.allowed()) got.insert(std::string(verb_of(kind)));
        REQUIRE(got == row.allowed);

        // DisallowedAction raised for exactly the variants outside the space.
        for (ActionKind kind : kAllKinds) {
            Action sample = random_action(kind, *[] {
                static std::mt19937 rng(99);
                return &rng;
            }());
            std::string line = render_action(sample);
            if (row.allowed.count(std::string(verb_of(kind)))) {
                CHECK_NOTHROW(parse_action(line, space));
            } else {
                CHECK_THROWS_AS(parse_action(line, space), DisallowedActionError);
            }
        }
    }
}

TEST_CASE("specs: aligned configuration lists the aligned commands in order") {
    ActionSpecs specs = render_action_specs(make_config(true, true, true, true));

    CHECK(specs.navigation_spec_text.find("note [content]") != std::string::npos);
    CHECK(specs.navigation_spec_text.find("To take note of all important info") !=
          std::string::npos);
    CHECK(specs.navigation_spec_text.find("hover") == std::string::npos);
    CHECK(specs.navigation_spec_text.find("press [key_comb]") == std::string::npos);

    std::vector<std::string> verbs;
    std::istringstream lines(specs.navigation_spec_text);
    std::string line;
    while (std::getline(lines, line)) {
        verbs.push_back(line.substr(0, line.find_first_of(" [:")));
    }
    CHECK(verbs == std::vector<std::string>{"click", "type", "go_back", "note", "stop", "go_home"});

    CHECK(specs.planning_spec_text.find("branch [parent_plan_id] [new_subplan_intent]") !=
          std::string::npos);
    CHECK(specs.planning_spec_text.find("prune [resume_plan_id] [reason]") != std::string::npos);
}

TEST_CASE("specs: planning off removes branch and prune everywhere") {
    ActionSpecs specs = render_action_specs(make_config(true, true, false, false));
    CHECK(specs.planning_spec_text.empty());
    CHECK(specs.navigation_spec_text.find("branch") == std::string::npos);
    CHECK(specs.navigation_spec_text.find("prune") == std::string::npos);
}

TEST_CASE("specs: vanilla configuration lists the embodiment commands") {
    ActionSpecs specs = render_action_specs(make_config(false, false, false, false));
    CHECK(specs.navigation_spec_text.find("hover [id]") != std::string::npos);
    CHECK(specs.navigation_spec_text.find("press [key_comb]") != std::string::npos);
    CHECK(specs.navigation_spec_text.find("scroll [down|up]") != std::string::npos);
    CHECK(specs.navigation_spec_text.find("note [content]") == std::string::npos);
}

TEST_CASE("specs: presence matrix across all flag combinations") {
    for (int mask = 0; mask < 16; ++mask) {
        bool reduce = mask & 1, no_scroll = mask & 2, planning = mask & 4, multisite = mask & 8;
        AgentConfig config = make_config(reduce, no_scroll, planning, multisite);
        ActionSpace space = ActionSpace::from_config(config);
        ActionSpecs specs = render_action_specs(config);

        for (ActionKind kind : kAllKinds) {
            std::string verb(verb_of(kind));
            bool in_nav = specs.navigation_spec_text.find(verb + " [") != std::string::npos ||
                          specs.navigation_spec_text.find(verb + ":") != std::string::npos;
            bool in_planning = specs.planning_spec_text.find(verb + " [") != std::string::npos;
            bool is_planning_kind = kind == ActionKind::Branch || kind == ActionKind::Prune;
            CAPTURE(mask);
            CAPTURE(verb);
            if (is_planning_kind) {
                REQUIRE(in_planning == planning);
            } else {
                REQUIRE(in_nav == space.allows(kind));
            }
        }
    }
}

TEST_CASE("specs: every spec example line parses under its own space") {
    for (int mask = 0; mask < 16; ++mask) {
        AgentConfig config = make_config(mask & 1, mask & 2, mask & 4, mask & 8);
        ActionSpace space = ActionSpace::from_config(config);
        ActionSpecs specs = render_action_specs(config);
        std::string all = specs.navigation_spec_text;
        if (!specs.planning_spec_text.empty()) all += "\n" + specs.planning_spec_text;

        // Pull each `...` example command out of the spec text.
        std::istringstream lines(all);
        std::string line;
        while (std::getline(lines, line)) {
            auto start = line.find("E.g., `");
            if (start == std::string::npos) continue;
            start += 7;
            auto end = line.find('`', start);
            REQUIRE(end != std::string::npos);
            std::string example = line.substr(start, end - start);
            CAPTURE(example);
            CHECK_NOTHROW(parse_action(example, space));
        }
    }
}
