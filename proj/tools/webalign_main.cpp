#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "webalign/errors.hpp"
#include "webalign/obs_align.hpp"
#include "webalign/runtime.hpp"
#include "webalign/trajectory_log.hpp"

namespace {

using namespace webalign;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitRemote = 3;

// Keys accepted both in config files and as --key flags; flags win.
const std::vector<std::string> kConfigKeys = {
    "reduce_actions", "disable_scroll", "condense_obs", "history_replay", "planning",
    "judge",          "multisite",      "max_steps",    "history_window", "model",
    "endpoint",       "temperature",    "max_retries",  "timeout_ms",     "max_inflight",
    "prompt_with_planning", "prompt_without_planning", "output_specifications",
    "judge_prompt",   "judge_output_specifications",
};

struct ConfigCli {
    std::string config_path;
    std::vector<std::pair<std::string, std::string>> overrides;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "key = value config file");
        for (const std::string& key : kConfigKeys) {
            cmd->add_option_function<std::string>(
                "--" + key,
                [this, key](const std::string& value) { overrides.emplace_back(key, value); },
                "override config field " + key);
        }
    }

    AgentConfig resolve() const {
        AgentConfig config;
        if (!config_path.empty()) config = load_config_file(config_path);
        for (const auto& [key, value] : overrides) apply_config_value(config, key, value);
        config.validate();
        return config;
    }
};

std::string read_input(const std::string& path) {
    if (path == "-" || path.empty()) {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open input '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int run_condense(const std::string& input_path, const std::string& out_path,
                 const ConfigCli& config_cli) {
    AgentConfig config = config_cli.resolve();
    ax::AXTree tree = ax::parse_ax_tree(read_input(input_path));
    obs::CondensedObservation result = obs::condense(tree, config);

    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw ParseError("cannot open output '" + out_path + "'");
        out << result.text << "\n";
    } else {
        std::cout << result.text << "\n";
    }
    std::cout << "stats source_nodes=" << result.source_node_count
              << " emitted_nodes=" << result.emitted_node_count
              << " token_estimate=" << result.token_estimate
              << " interactable_ids=" << result.interactable_ids.size() << "\n";
    return kExitOk;
}

struct RunSpec {
    std::string task_id;
    std::string objective;
    std::string snapshots;
    std::string script;  // empty means live endpoint
};

runtime::Trajectory run_one(const AgentConfig& config, const RunSpec& spec,
                            runtime::LLMClient* shared_live) {
    runtime::ReplayEnvironment env = runtime::ReplayEnvironment::from_file(spec.snapshots);
    if (!spec.script.empty()) {
        runtime::ScriptedLLMClient llm = runtime::ScriptedLLMClient::from_file(spec.script);
        return runtime::run_episode(config, env, llm, spec.objective, spec.task_id);
    }
    return runtime::run_episode(config, env, *shared_live, spec.objective, spec.task_id);
}

int run_single(const AgentConfig& config, const RunSpec& spec, const std::string& out_path) {
    std::unique_ptr<runtime::HttpLLMClient> live;
    if (spec.script.empty()) {
        if (std::getenv("AGENT_LLM_API_KEY") == nullptr) {
            throw LLMError(LLMError::Kind::Malformed,
                           "live mode needs AGENT_LLM_API_KEY in the environment");
        }
        live = std::make_unique<runtime::HttpLLMClient>(config.llm);
    }
    runtime::Trajectory trajectory = run_one(config, spec, live.get());

    if (!out_path.empty()) {
        runtime::write_log_file(trajectory, out_path);
    } else {
        std::cout << runtime::to_log_text(trajectory);
    }
    std::cout << "termination: " << runtime::to_string(trajectory.cause) << "\n";
    std::cout << "answer: " << (trajectory.final_answer ? *trajectory.final_answer : "(none)")
              << "\n";
    for (const std::string& note : trajectory.notes) std::cout << "note: " << note << "\n";
    for (const std::string& warning : trajectory.warnings) {
        std::cerr << "warning: " << warning << "\n";
    }
    return kExitOk;
}

int run_batch(const AgentConfig& config, const std::string& batch_path,
              const std::string& out_dir, int parallel) {
    std::ifstream in(batch_path);
    if (!in) throw ParseError("cannot open batch file '" + batch_path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("batch file '" + batch_path + "' is not valid JSON: " + e.what());
    }
    if (!doc.is_array()) throw ParseError("batch file must hold an array of episodes");

    std::vector<RunSpec> specs;
    for (const auto& entry : doc) {
        RunSpec spec;
        spec.task_id = entry.at("task_id").get<std::string>();
        spec.objective = entry.at("objective").get<std::string>();
        spec.snapshots = entry.at("snapshots").get<std::string>();
        spec.script = entry.value("script", "");
        specs.push_back(std::move(spec));
    }
    std::filesystem::create_directories(out_dir);

    std::unique_ptr<runtime::HttpLLMClient> live;
    bool any_live = std::any_of(specs.begin(), specs.end(),
                                [](const RunSpec& s) { return s.script.empty(); });
    if (any_live) {
        if (std::getenv("AGENT_LLM_API_KEY") == nullptr) {
            throw LLMError(LLMError::Kind::Malformed,
                           "live mode needs AGENT_LLM_API_KEY in the environment");
        }
        live = std::make_unique<runtime::HttpLLMClient>(config.llm);
    }

    std::atomic<std::size_t> cursor{0};
    std::atomic<int> failures{0};
    std::mutex io_mutex;
    auto worker = [&] {
        while (true) {
            std::size_t index = cursor.fetch_add(1);
            if (index >= specs.size()) return;
            const RunSpec& spec = specs[index];
            try {
                runtime::Trajectory trajectory = run_one(config, spec, live.get());
                runtime::write_log_file(trajectory,
                                        out_dir + "/" + spec.task_id + ".jsonl");
                std::lock_guard<std::mutex> lock(io_mutex);
                std::cout << spec.task_id << ": " << runtime::to_string(trajectory.cause) << "\n";
            } catch (const std::exception& e) {
                ++failures;
                std::lock_guard<std::mutex> lock(io_mutex);
                std::cerr << spec.task_id << ": failed: " << e.what() << "\n";
            }
        }
    };

    int threads = std::max(1, parallel);
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    return failures.load() == 0 ? kExitOk : kExitData;
}

int run_specs(const ConfigCli& config_cli) {
    AgentConfig config = config_cli.resolve();
    runtime::PromptLibrary library = runtime::PromptLibrary::for_config(config);
    actions::ActionSpecs specs = actions::render_action_specs(config);

    // Exactly the blocks assemble_prompt substitutes into the template.
    planning::PlanTree plan = planning::PlanTree::from_objective("probe");
    memory::TrajectoryHistory history("probe");
    std::string prompt = runtime::assemble_prompt(config, "probe",
                                                  config.planning ? &plan : nullptr, history,
                                                  "probe", library);
    std::string output_specs;
    {
        // The output block sits between its markers in the template.
        const std::string begin = "Generate the response in the following format:\n";
        const std::string end = "\n\nYou are ONLY allowed";
        auto from = prompt.find(begin);
        auto to = prompt.find(end, from);
        output_specs = prompt.substr(from + begin.size(), to - from - begin.size());
    }

    std::cout << "OUTPUT SPECIFICATIONS:\n" << output_specs << "\n\n";
    if (config.planning) {
        std::cout << "PLANNING ACTION SPECIFICATIONS:\n" << specs.planning_spec_text << "\n\n";
    }
    std::cout << "NAVIGATION ACTION SPECIFICATIONS:\n" << specs.navigation_spec_text << "\n";
    return kExitOk;
}

int run_inspect(const std::string& path) {
    std::cout << runtime::inspect_log(runtime::read_log_file(path));
    return kExitOk;
}

int run_diff(const std::string& left_path, const std::string& right_path) {
    std::string report = runtime::diff_logs(runtime::read_log_file(left_path),
                                            runtime::read_log_file(right_path));
    std::cout << report << "\n";
    return report == "identical" ? kExitOk : kExitOk;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"Observation/action alignment toolkit for LLM web agents"};
    app.require_subcommand(1);

    // condense
    auto* condense = app.add_subcommand("condense", "condense an accessibility-tree dump");
    std::string condense_input = "-";
    std::string condense_out;
    ConfigCli condense_config;
    condense->add_option("input", condense_input, "dump file, or - for stdin");
    condense->add_option("--out", condense_out, "write condensed text here instead of stdout");
    condense_config.attach(condense);

    // run
    auto* run = app.add_subcommand("run", "run an episode against a replay environment");
    RunSpec run_spec;
    std::string run_out, batch_path, out_dir = "trajectories";
    int parallel = 1;
    ConfigCli run_config;
    run->add_option("--snapshots", run_spec.snapshots, "replay environment state graph");
    run->add_option("--objective", run_spec.objective, "task objective text");
    run->add_option("--script", run_spec.script,
                    "scripted completions file (omit to use the live endpoint)");
    run->add_option("--task-id", run_spec.task_id, "task id recorded in the log")
        ->default_val("task");
    run->add_option("--out", run_out, "trajectory log path (stdout when omitted)");
    run->add_option("--batch", batch_path, "JSON array of episodes to run");
    run->add_option("--out-dir", out_dir, "directory for batch trajectory logs");
    run->add_option("--parallel", parallel, "episodes run concurrently in batch mode")
        ->default_val(1);
    run_config.attach(run);

    // specs
    auto* specs = app.add_subcommand("specs", "print the configured prompt specifications");
    ConfigCli specs_config;
    specs_config.attach(specs);

    // inspect
    auto* inspect = app.add_subcommand("inspect", "render a trajectory log as a table");
    std::string inspect_path;
    inspect->add_option("log", inspect_path, "trajectory log file")->required();

    // diff
    auto* diff = app.add_subcommand("diff", "structurally compare two trajectory logs");
    std::string diff_left, diff_right;
    diff->add_option("left", diff_left)->required();
    diff->add_option("right", diff_right)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    if (condense->parsed()) return run_condense(condense_input, condense_out, condense_config);
    if (run->parsed()) {
        AgentConfig config = run_config.resolve();
        if (!batch_path.empty()) return run_batch(config, batch_path, out_dir, parallel);
        if (run_spec.snapshots.empty() || run_spec.objective.empty()) {
            std::cerr << "run needs --snapshots and --objective (or --batch)\n";
            return kExitUsage;
        }
        return run_single(config, run_spec, run_out);
    }
    if (specs->parsed()) return run_specs(specs_config);
    if (inspect->parsed()) return run_inspect(inspect_path);
    if (diff->parsed()) return run_diff(diff_left, diff_right);
    return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const InvalidConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const LLMError& e) {
        std::cerr << e.what() << "\n";
        return kExitRemote;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
}
