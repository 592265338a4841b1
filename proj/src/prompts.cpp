#include "webalign/prompts.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "webalign/errors.hpp"
#include "webalign/memory.hpp"

namespace webalign::runtime {

namespace {

const char* kTemplateWithPlanning =
    "You are an AI assistant performing tasks on a web browser. You will be provided with task "
    "objective, current step, web page observations, previous plans, and interaction history. "
    "You need to issue an action for this step.\n"
    "\n"
    "Generate the response in the following format:\n"
    "{output_specifications}\n"
    "\n"
    "You are ONLY allowed to use the following action commands. Strictly adheres to the given "
    "format. Only issue one single action.\n"
    "If you think you should refine the plan, use the following actions:\n"
    "{planning_action_specifications}\n"
    "Otherwise, use the following actions:\n"
    "{navigation_action_specifications}";

const char* kTemplateWithoutPlanning =
    "You are an AI assistant performing tasks on a web browser. You will be provided with task "
    "objective, current step, web page observations, and other relevant information. You need to "
    "issue an action for this step.\n"
    "\n"
    "Generate the response in the following format:\n"
    "{output_specifications}\n"
    "\n"
    "You are ONLY allowed to use the following action commands. Strictly adheres to the given "
    "format. Only issue one single action.\n"
    "{navigation_action_specifications}";

const char* kOutputSpecifications =
    "Interaction history summary: Emphasize all important details in the INTERACTION HISTORY "
    "section.\n"
    "Observation description: Describe information in the CURRENT OBSERVATION section. Emphasize "
    "elements and features that are relevant or potentially helpful for fulfilling the objective "
    "in detail.\n"
    "Reason: Provide your rationale for proposing the subsequent action commands here.\n"
    "Action: Select your action here.\n"
    "Observation Highlight: List the numerical ids of elements on the current webpage based on "
    "which you would issue your action. Also include elements on the current webpage you would "
    "attend to if you fail in the future and have to restore to this step. Don't include "
    "elements from the previous pages. Select elements at a higher hierarchical level if most "
    "their children nodes are considered crucial. Sort by relevance and potential values from "
    "high to low, and separate the ids with commas. E.g., `1321, 52, 756, 838`.";

// Judge mode asks the actor for every plausible action instead of one.
const char* kActionLineSingle = "Action: Select your action here.";
const char* kActionLineCandidates =
    "Action: List ALL potentially suitable actions here, one action command per line, sorted "
    "from the most to the least promising.";

const char* kJudgeTemplate =
    "You are a seasoned web navigator. You now assess the value and risk of serveral web "
    "navigation actions based on the objective, the previous interaction history and the web's "
    "current state. Then, you select the action with the most value and least risk with which "
    "you would earn the maximum objective fulfillment reward in the future.\n"
    "\n"
    "Adhere to the following output format:\n"
    "{output_specifications}\n"
    "\n"
    "Note that `branch` and `prune` are planning actions that will modify the PREVIOUS PLAN "
    "section and won't interact with the web environment.";

const char* kJudgeOutputSpecifications =
    "Plan progress assessment: Review critically why the plans have not been fulfilled or the "
    "objective achieved. Justify your assessment with detailed evidence drawn from the "
    "objective, observations, and actions taken. Itemize the assessment using this format: `- "
    "plan [{plan_id}]\\n\\t[{step_ids_taken_for_this_milestone}] "
    "[{concrete_proof_from_observation}] [{why_milestone_a_not_successful}]\\n\\t...`.\n"
    "Action assessment: Assess the value and risk of each action. Consider both the best-case "
    "and worst-case outcomes resulting from its implementation. Itemize the assessment using "
    "this format: `- action [action_id]: [action value, including but not limited to what "
    "outcomes you can expect by executing the action, or whether the note is of the most correct "
    "and comprehensive content] [action risk, including but not limited to whether the "
    "note/stop content is correct, and whether you can gather more information by continuing "
    "playing rather than ending the trial] [{best_case}] [{worst_case}]`.\n"
    "Action selection: List the numerical id of your selected action here. You can only choose "
    "one action. E.g., `1`.";

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidConfigError("cannot open prompt override '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void replace_all(std::string& text, const std::string& placeholder, const std::string& value) {
    std::size_t pos = 0;
    while ((pos = text.find(placeholder, pos)) != std::string::npos) {
        text.replace(pos, placeholder.size(), value);
        pos += value.size();
    }
}

std::string trim(const std::string& s) {
    auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

enum class Section {
    None,
    InteractionSummary,
    ObservationDescription,
    Reason,
    Action,
    Highlight,
};

struct HeaderAlias {
    const char* name;
    Section section;
};

// Longer aliases first so "reason for action" wins over "reason".
const HeaderAlias kHeaderAliases[] = {
    {"interaction history summary", Section::InteractionSummary},
    {"observation description", Section::ObservationDescription},
    {"observation highlights", Section::Highlight},
    {"observation highlight", Section::Highlight},
    {"reason for action", Section::Reason},
    {"reason", Section::Reason},
    {"actions", Section::Action},
    {"action", Section::Action},
};

// Strips markdown noise a model may wrap around a header line.
std::string strip_markup(const std::string& line) {
    std::size_t begin = line.find_first_not_of("#*-> \t");
    if (begin == std::string::npos) return "";
    std::size_t end = line.find_last_not_of("* \t");
    return line.substr(begin, end - begin + 1);
}

// Returns the matched section and leaves any same-line body in `body`.
Section match_header(const std::string& raw_line, std::string& body) {
    std::string stripped = strip_markup(raw_line);
    std::string low = lower(stripped);
    for (const HeaderAlias& alias : kHeaderAliases) {
        std::string name(alias.name);
        if (low == name || low == name + ":") {
            body.clear();
            return alias.section;
        }
        if (low.rfind(name + ":", 0) == 0) {
            body = trim(stripped.substr(name.size() + 1));
            // Bold wrappers leave stray asterisks at the body front.
            while (!body.empty() && (body.front() == '*' || body.front() == ' ')) {
                body.erase(body.begin());
            }
            return alias.section;
        }
    }
    return Section::None;
}

// Candidate action lines may carry list markers or numbering.
std::string strip_line_decoration(const std::string& line) {
    std::string out = trim(line);
    if (out.size() >= 2 && out.front() == '`' && out.back() == '`') {
        out = trim(out.substr(1, out.size() - 2));
    }
    if (!out.empty() && (out[0] == '-' || out[0] == '*')) {
        out = trim(out.substr(1));
    } else {
        std::size_t digits = 0;
        while (digits < out.size() && std::isdigit(static_cast<unsigned char>(out[digits]))) {
            ++digits;
        }
        if (digits > 0 && digits < out.size() && (out[digits] == '.' || out[digits] == ')')) {
            out = trim(out.substr(digits + 1));
        }
    }
    return out;
}

std::string heading(const std::string& title, const std::string& body) {
    return title + ":\n" + body;
}

}  // namespace

PromptLibrary PromptLibrary::defaults() {
    PromptLibrary lib;
    lib.template_with_planning = kTemplateWithPlanning;
    lib.template_without_planning = kTemplateWithoutPlanning;
    lib.output_specifications = kOutputSpecifications;
    lib.judge_template = kJudgeTemplate;
    lib.judge_output_specifications = kJudgeOutputSpecifications;
    return lib;
}

PromptLibrary PromptLibrary::for_config(const AgentConfig& config) {
    PromptLibrary lib = defaults();
    const PromptOverrides& overrides = config.prompts;
    if (overrides.template_with_planning) {
        lib.template_with_planning = read_text_file(*overrides.template_with_planning);
    }
    if (overrides.template_without_planning) {
        lib.template_without_planning = read_text_file(*overrides.template_without_planning);
    }
    if (overrides.output_specifications) {
        lib.output_specifications = read_text_file(*overrides.output_specifications);
    }
    if (overrides.judge_template) {
        lib.judge_template = read_text_file(*overrides.judge_template);
    }
    if (overrides.judge_output_specifications) {
        lib.judge_output_specifications = read_text_file(*overrides.judge_output_specifications);
    }
    return lib;
}

std::string assemble_prompt(const AgentConfig& config, const std::string& objective,
                            const planning::PlanTree* plan,
                            const memory::TrajectoryHistory& history,
                            const std::string& current_observation,
                            const PromptLibrary& library) {
    std::string prompt =
        config.planning ? library.template_with_planning : library.template_without_planning;

    std::string output_specs = library.output_specifications;
    if (config.judge) {
        replace_all(output_specs, kActionLineSingle, kActionLineCandidates);
    }
    actions::ActionSpecs action_specs = actions::render_action_specs(config);

    replace_all(prompt, "{output_specifications}", output_specs);
    replace_all(prompt, "{planning_action_specifications}", action_specs.planning_spec_text);
    replace_all(prompt, "{navigation_action_specifications}", action_specs.navigation_spec_text);

    prompt += "\n\n" + heading("OBJECTIVE", objective);
    prompt += "\n\n" + heading("CURRENT STEP", std::to_string(history.size()));
    if (config.planning && plan != nullptr) {
        prompt += "\n\n" + heading("PREVIOUS PLANS", plan->render());
    }
    prompt += "\n\n" + heading("INTERACTION HISTORY", memory::render_history(history, plan, config));
    prompt += "\n\n" + heading("CURRENT OBSERVATION", current_observation);
    return prompt;
}

ParsedResponse parse_response(const std::string& text, const actions::ActionSpace& space) {
    ParsedResponse out;

    std::string* targets[] = {nullptr,
                              &out.interaction_summary,
                              &out.observation_description,
                              &out.reason,
                              &out.action_section,
                              &out.highlight_section};

    Section current = Section::None;
    std::istringstream lines(text);
    std::string line;
    std::vector<std::string> all_lines;
    while (std::getline(lines, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        all_lines.push_back(line);

        std::string body;
        Section matched = match_header(line, body);
        if (matched != Section::None) {
            current = matched;
            if (!body.empty()) {
                std::string& target = *targets[static_cast<int>(current)];
                if (!target.empty()) target += '\n';
                target += body;
            }
            continue;
        }
        if (current == Section::None) continue;
        std::string& target = *targets[static_cast<int>(current)];
        if (!target.empty()) target += '\n';
        target += line;
    }

    out.interaction_summary = trim(out.interaction_summary);
    out.observation_description = trim(out.observation_description);
    out.reason = trim(out.reason);
    out.action_section = trim(out.action_section);
    out.highlight_section = trim(out.highlight_section);
    out.pivotal_ids = memory::parse_highlights(out.highlight_section);

    bool saw_disallowed = false;
    auto try_line = [&](const std::string& candidate) {
        std::string cleaned = strip_line_decoration(candidate);
        if (cleaned.empty() || cleaned == "```") return;
        try {
            actions::Action action = actions::parse_action(cleaned, space);
            out.action_lines.push_back(cleaned);
            out.parsed_actions.push_back(std::move(action));
        } catch (const DisallowedActionError&) {
            saw_disallowed = true;
        } catch (const Error&) {
            // not an action line
        }
    };

    {
        std::istringstream section(out.action_section);
        std::string action_line;
        while (std::getline(section, action_line)) try_line(action_line);
    }
    if (out.parsed_actions.empty()) {
        // No usable ACTION section; scan the whole completion.
        for (const std::string& any_line : all_lines) try_line(any_line);
    }

    if (out.parsed_actions.empty()) {
        if (saw_disallowed) {
            throw DisallowedActionError("the response only proposed actions outside the space");
        }
        throw UnparsableResponseError("no parsable action found in the response");
    }
    return out;
}

std::string assemble_judge_prompt(const std::string& objective, const planning::PlanTree* plan,
                                  const std::string& history_text,
                                  const std::string& current_observation,
                                  const std::vector<actions::Action>& candidates,
                                  const PromptLibrary& library) {
    std::string prompt = library.judge_template;
    replace_all(prompt, "{output_specifications}", library.judge_output_specifications);

    prompt += "\n\n" + heading("OBJECTIVE", objective);
    if (plan != nullptr) prompt += "\n\n" + heading("PREVIOUS PLANS", plan->render());
    prompt += "\n\n" + heading("INTERACTION HISTORY", history_text);
    prompt += "\n\n" + heading("CURRENT OBSERVATION", current_observation);

    std::string listing;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (!listing.empty()) listing += '\n';
        listing += "- action [" + std::to_string(i) + "]: " + actions::render_action(candidates[i]);
    }
    prompt += "\n\n" + heading("CANDIDATE ACTIONS (action ids are 0-based)", listing);
    return prompt;
}

std::optional<int> parse_judge_selection(const std::string& text) {
    std::istringstream lines(text);
    std::string line;
    bool in_selection = false;
    std::string section;
    while (std::getline(lines, line)) {
        std::string stripped = strip_markup(line);
        std::string low = lower(stripped);
        if (low.rfind("action selection", 0) == 0) {
            in_selection = true;
            auto colon = stripped.find(':');
            if (colon != std::string::npos) section += stripped.substr(colon + 1) + "\n";
            continue;
        }
        if (in_selection) {
            // The selection section runs until the next known header.
            std::string body;
            if (match_header(line, body) != Section::None ||
                low.rfind("plan progress assessment", 0) == 0 ||
                low.rfind("action assessment", 0) == 0) {
                break;
            }
            section += line + "\n";
        }
    }
    std::vector<int> ids = memory::parse_highlights(section);
    if (ids.empty()) return std::nullopt;
    return ids.front();
}

}  // namespace webalign::runtime
