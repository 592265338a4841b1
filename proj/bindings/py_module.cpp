#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "webalign/actions.hpp"
#include "webalign/errors.hpp"
#include "webalign/memory.hpp"
#include "webalign/obs_align.hpp"
#include "webalign/planning.hpp"
#include "webalign/prompts.hpp"
#include "webalign/runtime.hpp"
#include "webalign/trajectory_log.hpp"

namespace py = pybind11;
using namespace webalign;

namespace {

AgentConfig config_from_kwargs(const py::kwargs& kwargs) {
    AgentConfig config;
    for (auto item : kwargs) {
        std::string key = py::cast<std::string>(item.first);
        std::string value = py::cast<std::string>(py::str(item.second));
        apply_config_value(config, key, value);
    }
    config.validate();
    return config;
}

}  // namespace

PYBIND11_MODULE(webalign, m) {
    m.doc() = "Observation/action alignment toolkit for LLM web agents";

    py::register_exception<Error>(m, "AlignmentError");

    py::class_<ax::AXTree>(m, "AXTree")
        .def("serialize",
             [](const ax::AXTree& tree, bool strip_ids) {
                 return ax::serialize(tree, {.strip_ids = strip_ids});
             },
             py::arg("strip_ids") = false)
        .def("node_count", &ax::AXTree::node_count)
        .def("has_id", &ax::AXTree::has_id)
        .def("ids", [](const ax::AXTree& tree) {
            std::vector<int> ids;
            for (const auto& [id, path] : tree.id_index()) ids.push_back(id);
            std::sort(ids.begin(), ids.end());
            return ids;
        });

    m.def("parse_ax_tree", &ax::parse_ax_tree, py::arg("text"),
          "Parse an accessibility-tree dump into an AXTree");

    m.def(
        "condense",
        [](const std::string& text, const py::kwargs& kwargs) {
            AgentConfig config = config_from_kwargs(kwargs);
            obs::CondensedObservation out = obs::condense(ax::parse_ax_tree(text), config);
            py::dict result;
            result["text"] = out.text;
            result["interactable_ids"] =
                std::vector<int>(out.interactable_ids.begin(), out.interactable_ids.end());
            result["source_node_count"] = out.source_node_count;
            result["emitted_node_count"] = out.emitted_node_count;
            result["token_estimate"] = out.token_estimate;
            return result;
        },
        py::arg("text"), "Condense a raw page dump; config fields come in as keyword arguments");

    m.def("estimate_tokens", &obs::estimate_tokens, py::arg("text"));

    m.def(
        "canonical_action",
        [](const std::string& line, const py::kwargs& kwargs) {
            AgentConfig config = config_from_kwargs(kwargs);
            actions::ActionSpace space = actions::ActionSpace::from_config(config);
            return actions::render_action(actions::parse_action(line, space));
        },
        py::arg("line"), "Parse one action command and return its canonical form");

    m.def(
        "action_specs",
        [](const py::kwargs& kwargs) {
            AgentConfig config = config_from_kwargs(kwargs);
            actions::ActionSpecs specs = actions::render_action_specs(config);
            return py::make_tuple(specs.navigation_spec_text, specs.planning_spec_text);
        },
        "Navigation and planning specification text for a configuration");

    m.def("parse_highlights", &memory::parse_highlights, py::arg("section_text"));

    m.def(
        "filter_observation",
        [](const std::string& text, const std::vector<int>& pivotal_ids, bool strip_ids) {
            return ax::serialize(memory::filter_observation(ax::parse_ax_tree(text), pivotal_ids),
                                 {.strip_ids = strip_ids});
        },
        py::arg("text"), py::arg("pivotal_ids"), py::arg("strip_ids") = true,
        "Keep the pivotal nodes' ancestors, siblings and descendants");

    py::class_<planning::PlanTree>(m, "PlanTree")
        .def_static("from_objective", &planning::PlanTree::from_objective, py::arg("objective"))
        .def("branch", &planning::PlanTree::branch, py::arg("parent_plan_id"), py::arg("intent"))
        .def("prune", &planning::PlanTree::prune, py::arg("resume_plan_id"), py::arg("reason"))
        .def("render", &planning::PlanTree::render)
        .def("active_id", &planning::PlanTree::active_id);

    m.def(
        "run_scripted_episode",
        [](const std::string& snapshots_path, const std::string& script_path,
           const std::string& objective, const std::string& task_id, const py::kwargs& kwargs) {
            AgentConfig config = config_from_kwargs(kwargs);
            runtime::ReplayEnvironment env = runtime::ReplayEnvironment::from_file(snapshots_path);
            runtime::ScriptedLLMClient llm = runtime::ScriptedLLMClient::from_file(script_path);
            runtime::Trajectory trajectory =
                runtime::run_episode(config, env, llm, objective, task_id);
            return runtime::to_log_text(trajectory);
        },
        py::arg("snapshots_path"), py::arg("script_path"), py::arg("objective"),
        py::arg("task_id") = "task",
        "Run one deterministic episode; returns the trajectory log text");
}
