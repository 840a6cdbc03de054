#include "evoforge/core/error.hpp"
#include "evoforge/dag/stage_dag.hpp"
#include "evoforge/mutation/parsing.hpp"
#include "evoforge/orchestrator/config.hpp"
#include "evoforge/orchestrator/run.hpp"
#include "evoforge/problems/bin_packing.hpp"
#include "evoforge/problems/validators.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
namespace fs = std::filesystem;
using nlohmann::json;
using namespace evoforge;

namespace {

fs::path config_root(const std::string& data_dir)
{
    return (data_dir.empty() ? orchestrator::default_data_dir() : fs::path(data_dir)) / "configs";
}

// Everything crosses the boundary as JSON text; the Python package decodes it.
std::string validate(const std::string& kind, const std::string& raw, const std::string& params,
                     const std::string& context)
{
    problems::ValidatorBinding binding;
    binding.builtin = kind;
    binding.params = params.empty() ? json::object() : json::parse(params);
    problems::check_builtin_binding(binding);
    auto report = problems::run_builtin_validator(binding, json::parse(raw),
                                                  context.empty() ? json::object() : json::parse(context));
    json out{{"metrics", report.metrics}, {"valid", report.valid()}};
    if (!report.valid()) {
        out["reason"] = report.reason;
        out["detail"] = report.detail;
    }
    return out.dump();
}

std::string dag_issues(const std::string& text)
{
    auto issues = dag::validate_dag(dag::dag_from_json(json::parse(text)));
    json out = json::array();
    for (const auto& i : issues)
        out.push_back({{"kind", i.kind}, {"message", i.message}, {"stages", i.stages}});
    return out.dump();
}

} // namespace

PYBIND11_MODULE(_evoforge, m)
{
    m.doc() = "Native core of evoforge. Structured values are exchanged as JSON text.";

    static py::exception<ConfigError> config_error(m, "ConfigError", PyExc_ValueError);
    static py::exception<mutation::ParseFailure> parse_failure(m, "ParseFailure", PyExc_ValueError);
    static py::exception<Error> evoforge_error(m, "EvoforgeError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p)
                std::rethrow_exception(p);
        } catch (const ConfigError& e) {
            py::set_error(config_error, e.what());
        } catch (const mutation::ParseFailure& e) {
            py::set_error(parse_failure, py::make_tuple(e.reason(), std::string(e.what())));
        } catch (const Error& e) {
            py::set_error(evoforge_error, e.what());
        } catch (const json::exception& e) {
            py::set_error(PyExc_ValueError, e.what());
        }
    });

    m.def("default_data_dir", [] { return orchestrator::default_data_dir().string(); });

    m.def(
        "compose",
        [](const std::string& profile, const std::vector<std::string>& overrides, const std::string& data_dir) {
            return orchestrator::compose_tree(config_root(data_dir), profile, overrides).dump();
        },
        py::arg("profile") = "base", py::arg("overrides") = std::vector<std::string>{}, py::arg("data_dir") = "");

    m.def(
        "validate_config",
        [](const std::string& profile, const std::vector<std::string>& overrides, const std::string& data_dir) {
            auto config = orchestrator::compose_config(config_root(data_dir), profile, overrides);
            orchestrator::validate_run_config(config);
            return config.namespace_name;
        },
        py::arg("profile") = "base", py::arg("overrides") = std::vector<std::string>{}, py::arg("data_dir") = "");

    m.def(
        "run",
        [](const std::string& profile, const std::vector<std::string>& overrides, const std::string& data_dir) {
            auto config = orchestrator::compose_config(config_root(data_dir), profile, overrides);
            auto result = orchestrator::run_evolution(config);
            return std::pair{result.report.dump(), result.output_dir.string()};
        },
        py::arg("profile") = "base", py::arg("overrides") = std::vector<std::string>{}, py::arg("data_dir") = "",
        py::call_guard<py::gil_scoped_release>());

    m.def("inspect", &orchestrator::inspect, py::arg("runs_dir"), py::arg("namespace"));
    m.def(
        "export_archive",
        [](const fs::path& runs_dir, const std::string& ns) { return orchestrator::export_archive(runs_dir, ns).dump(); },
        py::arg("runs_dir"), py::arg("namespace"));

    m.def("validate", &validate, py::arg("kind"), py::arg("raw"), py::arg("params") = "",
          py::arg("context") = "");
    m.def("validator_kinds", &problems::builtin_validator_kinds);
    m.def("first_fit", &problems::first_fit, py::arg("items"), py::arg("capacity"));

    m.def("dag_issues", &dag_issues, py::arg("dag"));

    m.def("parse_rewrite", [](const std::string& r) { return mutation::parse_rewrite(r); }, py::arg("response"));
    m.def(
        "apply_diff",
        [](const std::string& parent, const std::string& r) { return mutation::apply_diff(parent, r); },
        py::arg("parent_source"), py::arg("response"));
    m.def("render_fenced", [](const std::string& s) { return mutation::render_fenced(s); }, py::arg("source"));
}
