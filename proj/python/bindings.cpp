// Python bindings for the graph toolkit: graphs and their formats, the
// invariant registry, and the configured search stack behind the CLI.
#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <sstream>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "graphrl/agents.hpp"
#include "graphrl/cli.hpp"
#include "graphrl/graph.hpp"
#include "graphrl/invariants.hpp"
#include "graphrl/serialization.hpp"

namespace py = pybind11;
using namespace graphrl;

namespace {

template <typename T>
py::array to_numpy(const Array<T>& array) {
  std::vector<py::ssize_t> shape(array.shape.begin(), array.shape.end());
  py::array_t<T> out(shape);
  std::copy(array.data.begin(), array.data.end(), out.mutable_data());
  return out;
}

template <typename T>
Array<T> from_numpy(const py::array& array) {
  auto typed = py::array_t<T, py::array::c_style | py::array::forcecast>::ensure(array);
  if (!typed) throw std::invalid_argument("array is not convertible to the format's dtype");
  std::vector<std::size_t> shape(typed.shape(), typed.shape() + typed.ndim());
  std::vector<T> data(typed.data(), typed.data() + typed.size());
  return Array<T>(std::move(shape), std::move(data));
}

bool is_bitmask(GraphFormat format) {
  return format == GraphFormat::BitmaskOut || format == GraphFormat::BitmaskIn;
}

EdgeColoredGraph graph_from_array(const std::string& format_name, const py::array& array,
                                  int edge_colors, bool directed, bool loops) {
  GraphFormat format = parse_format_name(format_name);
  GraphKind kind{directed, loops};
  if (is_bitmask(format))
    return make_graph(format, from_numpy<std::uint64_t>(array), edge_colors, kind);
  return make_graph(format, from_numpy<std::uint8_t>(array), edge_colors, kind);
}

py::array graph_to_array(const EdgeColoredGraph& graph, const std::string& format_name) {
  GraphArray array = graph.to_format(parse_format_name(format_name));
  return std::visit([](const auto& typed) { return to_numpy(typed); }, array);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "k-edge-colored graph toolkit: formats, invariants, and searches";

  py::class_<EdgeColoredGraph>(m, "Graph")
      .def_static("from_array", &graph_from_array, py::arg("format"), py::arg("array"),
                  py::arg("edge_colors") = 2, py::arg("directed") = false,
                  py::arg("loops") = false,
                  "Build a graph (or a batch: one extra leading axis) from one format")
      .def_static(
          "from_bitmask_line", [](const std::string& line) { return parse_bitmask_line(line); },
          py::arg("line"))
      .def("to_array", &graph_to_array, py::arg("format"))
      .def("bitmask_line", [](const EdgeColoredGraph& g) { return to_bitmask_line(g); })
      .def_property_readonly("edge_colors", &EdgeColoredGraph::edge_colors)
      .def_property_readonly("order", &EdgeColoredGraph::order)
      .def_property_readonly("directed",
                             [](const EdgeColoredGraph& g) { return g.kind().is_directed; })
      .def_property_readonly("loops",
                             [](const EdgeColoredGraph& g) { return g.kind().allow_loops; })
      .def_property_readonly("fully_colored", &EdgeColoredGraph::is_fully_colored)
      .def_property_readonly("batch_size",
                             [](const EdgeColoredGraph& g) -> std::optional<std::size_t> {
                               return g.batch_size();
                             })
      .def("color_at", &EdgeColoredGraph::color_at, py::arg("element"), py::arg("u"),
           py::arg("v"))
      .def("select", &EdgeColoredGraph::select, py::arg("index"),
           "One element of a batch as a single graph")
      .def(py::self == py::self)
      .def("__repr__", [](const EdgeColoredGraph& g) {
        std::ostringstream out;
        out << "Graph(k=" << g.edge_colors() << ", n=" << g.order()
            << (g.kind().is_directed ? ", directed" : "")
            << (g.kind().allow_loops ? ", loops" : "");
        if (g.batch_size()) out << ", batch=" << *g.batch_size();
        out << ")";
        return out.str();
      });

  m.def("format_names", [] {
    std::vector<std::string> names;
    for (GraphFormat f :
         {GraphFormat::BitmaskOut, GraphFormat::BitmaskIn, GraphFormat::AdjacencyColors,
          GraphFormat::AdjacencyBinary, GraphFormat::FlatRowMajorColors,
          GraphFormat::FlatRowMajorBinary, GraphFormat::FlatClockwiseColors,
          GraphFormat::FlatClockwiseBinary})
      names.push_back(format_cli_name(f));
    return names;
  });

  m.def("invariant_names", [] { return InvariantRegistry::instance().names(); });
  m.def(
      "evaluate",
      [](const std::string& name, const EdgeColoredGraph& graph) {
        return InvariantRegistry::instance().lookup(name).f(graph);
      },
      py::arg("invariant"), py::arg("graph"),
      "Evaluate a registered invariant; one score per batch element");

  py::class_<cli::RunConfig>(m, "RunConfig")
      .def(py::init<>())
      .def_readwrite("environment", &cli::RunConfig::environment)
      .def_readwrite("agent", &cli::RunConfig::agent)
      .def_readwrite("invariant", &cli::RunConfig::invariant)
      .def_readwrite("order", &cli::RunConfig::order)
      .def_readwrite("seed", &cli::RunConfig::seed)
      .def_readwrite("target_score", &cli::RunConfig::target_score)
      .def_readwrite("restart_every", &cli::RunConfig::restart_every)
      .def_readwrite("max_steps", &cli::RunConfig::max_steps)
      .def_readwrite("out", &cli::RunConfig::out)
      .def_readwrite("edge_colors", &cli::RunConfig::edge_colors)
      .def_readwrite("directed", &cli::RunConfig::directed)
      .def_readwrite("loops", &cli::RunConfig::loops)
      .def_readwrite("ordering", &cli::RunConfig::ordering)
      .def_readwrite("episode_length", &cli::RunConfig::episode_length)
      .def_readwrite("flip_only", &cli::RunConfig::flip_only)
      .def_readwrite("starting_vertex", &cli::RunConfig::starting_vertex)
      .def_readwrite("generator", &cli::RunConfig::generator)
      .def_readwrite("episodes", &cli::RunConfig::episodes)
      .def_readwrite("learning_rate", &cli::RunConfig::learning_rate)
      .def_readwrite("hidden", &cli::RunConfig::hidden)
      .def_readwrite("dropout", &cli::RunConfig::dropout)
      .def_readwrite("elite_fraction", &cli::RunConfig::elite_fraction)
      .def_readwrite("carry_fraction", &cli::RunConfig::carry_fraction)
      .def_readwrite("selection_fraction", &cli::RunConfig::selection_fraction)
      .def_readwrite("discount", &cli::RunConfig::discount)
      .def_readwrite("baseline", &cli::RunConfig::baseline)
      .def_readwrite("epochs", &cli::RunConfig::epochs)
      .def_readwrite("clip", &cli::RunConfig::clip)
      .def_readwrite("value_coefficient", &cli::RunConfig::value_coefficient)
      .def_readwrite("entropy_coefficient", &cli::RunConfig::entropy_coefficient)
      .def_readwrite("random_action", &cli::RunConfig::random_action);

  m.def("load_config", &cli::parse_config_file, py::arg("path"));

  py::class_<GraphAgent>(m, "Agent")
      .def("step", &GraphAgent::step, py::call_guard<py::gil_scoped_release>())
      .def("reset", &GraphAgent::reset)
      .def_property_readonly("step_count", &GraphAgent::step_count)
      .def_property_readonly("best_score", &GraphAgent::best_score)
      .def_property_readonly("generation_mean", &GraphAgent::generation_mean)
      .def_property_readonly("has_best_graph", &GraphAgent::has_best_graph)
      .def_property_readonly("best_graph", &GraphAgent::best_graph,
                             py::return_value_policy::copy);

  m.def("make_agent", &cli::build_agent, py::arg("config"),
        "Assemble the configured environment/agent stack for a custom loop");

  m.def(
      "run",
      [](const cli::RunConfig& config) {
        std::ostringstream out, err;
        int rc;
        {
          py::gil_scoped_release release;
          rc = cli::run_command(config, out, err);
        }
        return std::make_tuple(rc, out.str(), err.str());
      },
      py::arg("config"),
      "Full search: writes scores.csv / solutions.txt under config.out; returns "
      "(exit_code, progress, diagnostics)");

  m.def(
      "check",
      [](const std::string& path, const std::string& invariant, double target_score) {
        std::ostringstream out, err;
        int rc = cli::check_command(path, invariant, target_score, out, err);
        return std::make_tuple(rc, out.str(), err.str());
      },
      py::arg("solutions"), py::arg("invariant"), py::arg("target_score") = 1e-4,
      "Re-validate a solution file; returns (exit_code, verdicts, diagnostics)");

  m.def(
      "convert",
      [](const std::string& in_path, const std::string& in_format,
         const std::string& out_path, const std::string& out_format) {
        std::ostringstream err;
        int rc = cli::convert_command(in_path, in_format, out_path, out_format, err);
        return std::make_tuple(rc, err.str());
      },
      py::arg("in_path"), py::arg("in_format"), py::arg("out_path"), py::arg("out_format"),
      "Rewrite a graph file between formats; returns (exit_code, diagnostics)");
}
