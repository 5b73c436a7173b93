#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "carver/improvement.hpp"

namespace py = pybind11;

namespace {

    std::vector<std::vector<int>> solution_routes(const carver::Solution &s) {
        std::vector<std::vector<int>> routes;
        routes.reserve(s.num_routes());
        for (const int r : s.active_routes()) {
            std::vector<int> route;
            route.reserve(s.route_size(r));
            for (int v = s.route_first(r); v != 0; v = s.succ(v)) route.push_back(v);
            routes.push_back(std::move(route));
        }
        return routes;
    }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "CVRP heuristic solver core";

    py::register_exception<carver::ParseError>(m, "ParseError");

    py::class_<carver::Instance>(m, "Instance")
        .def_property_readonly("name", &carver::Instance::name)
        .def_property_readonly("num_vertices", &carver::Instance::num_vertices)
        .def_property_readonly("num_customers", &carver::Instance::num_customers)
        .def_property_readonly("capacity", &carver::Instance::capacity)
        .def("demand", &carver::Instance::demand, py::arg("i"))
        .def("x", &carver::Instance::x, py::arg("i"))
        .def("y", &carver::Instance::y, py::arg("i"))
        .def("cost", &carver::Instance::cost, py::arg("i"), py::arg("j"))
        .def("serialize", [](const carver::Instance &inst) { return carver::serialize_instance(inst); });

    m.def("parse_instance", &carver::parse_instance, py::arg("text"));
    m.def("load_instance", &carver::load_instance, py::arg("path"));
    m.def(
        "generate_instance",
        [](const std::vector<std::pair<double, double>> &points, int depot_index, int64_t capacity, uint64_t seed,
           const std::string &name) {
            carver::Rng rng(seed);
            return carver::generate_instance(points, depot_index, capacity, rng, name);
        },
        py::arg("points"), py::arg("depot_index"), py::arg("capacity"), py::arg("seed") = 0,
        py::arg("name") = "generated");
    m.def("project_coordinates", &carver::project_coordinates, py::arg("latlon"));

    m.def(
        "neighbor_lists",
        [](const carver::Instance &inst, int n_nn) {
            const carver::NeighborLists lists = carver::build_neighbor_lists(inst, n_nn);
            std::vector<std::vector<int>> out(inst.num_vertices());
            for (int v = 0; v < inst.num_vertices(); ++v) out[v].assign(lists.begin(v), lists.end(v));
            return out;
        },
        py::arg("instance"), py::arg("n_nn"));

    m.def("greedy_route_estimate", &carver::greedy_route_estimate, py::arg("instance"), py::arg("decreasing") = false);

    py::class_<carver::SolverParams>(m, "SolverParams")
        .def(py::init<>())
        .def_readwrite("seed", &carver::SolverParams::seed)
        .def_readwrite("n_nn", &carver::SolverParams::n_nn)
        .def_readwrite("n_cw", &carver::SolverParams::n_cw)
        .def_readwrite("n_gs", &carver::SolverParams::n_gs)
        .def_readwrite("svc_capacity", &carver::SolverParams::svc_capacity)
        .def_readwrite("route_min_iterations", &carver::SolverParams::route_min_iterations)
        .def_readwrite("core_opt_iterations", &carver::SolverParams::core_opt_iterations)
        .def_readwrite("recreate_global", &carver::SolverParams::recreate_global)
        .def_readwrite("sync_by_copy", &carver::SolverParams::sync_by_copy)
        .def_readwrite("sa_paper_sign", &carver::SolverParams::sa_paper_sign)
        .def_readwrite("first_fit_decreasing", &carver::SolverParams::first_fit_decreasing)
        .def_readwrite("route_min_enabled", &carver::SolverParams::route_min_enabled)
        .def_property(
            "cost_mode", [](const carver::SolverParams &p) { return carver::to_string(p.cost_mode); },
            [](carver::SolverParams &p, const std::string &text) { p.cost_mode = carver::cost_mode_from_string(text); })
        .def_property(
            "rvnd_inner_loop", [](const carver::SolverParams &p) { return p.ls.rvnd_inner_loop; },
            [](carver::SolverParams &p, bool value) { p.ls.rvnd_inner_loop = value; })
        .def_property(
            "lazy_loads", [](const carver::SolverParams &p) { return p.ls.lazy_loads; },
            [](carver::SolverParams &p, bool value) { p.ls.lazy_loads = value; });

    py::class_<carver::RunReport>(m, "RunReport")
        .def_readonly("instance", &carver::RunReport::instance)
        .def_readonly("seed", &carver::RunReport::seed)
        .def_readonly("construction_cost", &carver::RunReport::construction_cost)
        .def_readonly("construction_routes", &carver::RunReport::construction_routes)
        .def_readonly("route_estimate", &carver::RunReport::route_estimate)
        .def_readonly("route_min_ran", &carver::RunReport::route_min_ran)
        .def_readonly("final_cost", &carver::RunReport::final_cost)
        .def_readonly("final_routes", &carver::RunReport::final_routes)
        .def_readonly("t_preprocess", &carver::RunReport::t_preprocess)
        .def_readonly("t_construction", &carver::RunReport::t_construction)
        .def_readonly("t_route_min", &carver::RunReport::t_route_min)
        .def_readonly("t_core_opt", &carver::RunReport::t_core_opt)
        .def_readonly("t_total", &carver::RunReport::t_total)
        .def_readonly("initial_temperature", &carver::RunReport::initial_temperature)
        .def_readonly("cache_hit_ratio", &carver::RunReport::cache_hit_ratio)
        .def_readonly("ls_applied", &carver::RunReport::ls_applied)
        .def_readonly("ls_evaluated", &carver::RunReport::ls_evaluated)
        .def_readonly("ls_mismatches", &carver::RunReport::ls_mismatches);

    py::class_<carver::FeasibilityReport>(m, "FeasibilityReport")
        .def_readonly("unserved", &carver::FeasibilityReport::unserved)
        .def_readonly("duplicated", &carver::FeasibilityReport::duplicated)
        .def_readonly("overloads", &carver::FeasibilityReport::overloads)
        .def("feasible", &carver::FeasibilityReport::feasible)
        .def("__str__", &carver::FeasibilityReport::to_string);

    m.def(
        "solve",
        [](const carver::Instance &inst, const carver::SolverParams &params) {
            carver::CostProvider provider(inst, params.cost_mode);
            carver::RunReport report;
            carver::Solution best = carver::solve(inst, provider, params, &report);
            return py::make_tuple(solution_routes(best), report);
        },
        py::arg("instance"), py::arg("params") = carver::SolverParams{},
        "Run the full pipeline; returns (routes, report).");

    m.def("check_routes", &carver::check_routes, py::arg("instance"), py::arg("routes"));
    m.def("routes_cost", &carver::routes_cost, py::arg("instance"), py::arg("routes"));
    m.def(
        "parse_sol",
        [](const std::string &text) {
            const carver::ParsedSolution parsed = carver::parse_sol(text);
            return py::make_tuple(parsed.routes, parsed.cost);
        },
        py::arg("text"));
    m.def(
        "format_sol",
        [](const carver::Instance &inst, const std::vector<std::vector<int>> &routes) {
            carver::CostProvider provider(inst, carver::CostMode::OnDemand);
            const carver::Solution s = carver::solution_from_routes(inst, provider, routes, 1);
            return carver::to_sol(s);
        },
        py::arg("instance"), py::arg("routes"));
}
