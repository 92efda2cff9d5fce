#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "purc/demand.hpp"
#include "purc/network.hpp"
#include "purc/oracle.hpp"
#include "purc/purc.hpp"
#include "purc/solver.hpp"
#include "purc/tntp.hpp"

namespace py = pybind11;

PYBIND11_MODULE(_core, m) {
    m.doc() = "perturbed-utility route choice assignment core";

    py::register_exception<purc::ParseError>(m, "ParseError", PyExc_ValueError);

    py::class_<purc::Link>(m, "Link")
        .def(py::init([](int32_t tail, int32_t head, double capacity, double free_flow_time,
                         double b, double power, double length) {
                 purc::Link link;
                 link.tail = tail;
                 link.head = head;
                 link.capacity = capacity;
                 link.free_flow_time = free_flow_time;
                 link.b = b;
                 link.power = power;
                 link.length = length;
                 return link;
             }),
             py::arg("tail"), py::arg("head"), py::arg("capacity") = 1.0,
             py::arg("free_flow_time") = 1.0, py::arg("b") = 0.15, py::arg("power") = 4.0,
             py::arg("length") = 1.0)
        .def_readonly("tail", &purc::Link::tail)
        .def_readonly("head", &purc::Link::head)
        .def_readonly("capacity", &purc::Link::capacity)
        .def_readonly("free_flow_time", &purc::Link::free_flow_time)
        .def_readonly("b", &purc::Link::b)
        .def_readonly("power", &purc::Link::power)
        .def_readonly("length", &purc::Link::length);

    py::class_<purc::Network>(m, "Network")
        .def_property_readonly("num_nodes", &purc::Network::num_nodes)
        .def_property_readonly("num_links", &purc::Network::num_links)
        .def_readonly("node_ids", &purc::Network::node_ids)
        .def_readonly("links", &purc::Network::links);

    py::class_<purc::ODEntry>(m, "ODEntry")
        .def_readonly("origin", &purc::ODEntry::origin)
        .def_readonly("destination", &purc::ODEntry::destination)
        .def_readonly("volume", &purc::ODEntry::volume);

    py::class_<purc::ODMatrix>(m, "ODMatrix")
        .def_readonly("entries", &purc::ODMatrix::entries)
        .def("total", &purc::ODMatrix::total);

    py::class_<purc::TravelerType>(m, "TravelerType")
        .def(py::init([](int32_t origin, int32_t destination, double volume) {
                 purc::TravelerType t;
                 t.origin = origin;
                 t.destination = destination;
                 t.volume = volume;
                 return t;
             }),
             py::arg("origin"), py::arg("destination"), py::arg("volume") = 1.0)
        .def_readonly("origin", &purc::TravelerType::origin)
        .def_readonly("destination", &purc::TravelerType::destination)
        .def_readonly("volume", &purc::TravelerType::volume);

    py::enum_<purc::SolveStatus>(m, "SolveStatus")
        .value("converged", purc::SolveStatus::Converged)
        .value("max_iters", purc::SolveStatus::MaxIters)
        .value("diverged", purc::SolveStatus::Diverged);

    py::class_<purc::AssignmentResult>(m, "AssignmentResult")
        .def_readonly("status", &purc::AssignmentResult::status)
        .def_readonly("converged", &purc::AssignmentResult::converged)
        .def_readonly("iterations", &purc::AssignmentResult::iterations)
        .def_readonly("r1", &purc::AssignmentResult::r1)
        .def_readonly("r2", &purc::AssignmentResult::r2)
        .def_readonly("flows", &purc::AssignmentResult::flows)
        .def_readonly("aggregate_flow", &purc::AssignmentResult::aggregate_flow)
        .def_readonly("realized_time", &purc::AssignmentResult::realized_time)
        .def_readonly("t_star", &purc::AssignmentResult::t_star)
        .def_readonly("wall_ms", &purc::AssignmentResult::wall_ms)
        .def_readonly("message", &purc::AssignmentResult::message);

    py::class_<purc::PrimalSolution>(m, "PrimalSolution")
        .def_readonly("converged", &purc::PrimalSolution::converged)
        .def_readonly("iterations", &purc::PrimalSolution::iterations)
        .def_readonly("objective", &purc::PrimalSolution::objective)
        .def_readonly("station_residual", &purc::PrimalSolution::station_residual)
        .def_readonly("flows", &purc::PrimalSolution::flows)
        .def_readonly("aggregate_flow", &purc::PrimalSolution::aggregate_flow);

    m.def("make_network", [](std::vector<int64_t> node_ids, std::vector<purc::Link> links) {
        return purc::make_network(std::move(node_ids), std::move(links));
    });
    m.def(
        "generate_grid",
        [](int k, double free_flow_time, double capacity, double length, double b, double power) {
            purc::GridSpec spec;
            spec.k = k;
            spec.free_flow_time = free_flow_time;
            spec.capacity = capacity;
            spec.length = length;
            spec.b = b;
            spec.power = power;
            return purc::generate_grid(spec);
        },
        py::arg("k"), py::arg("free_flow_time") = 1.0, py::arg("capacity") = 5000.0,
        py::arg("length") = 1.0, py::arg("b") = 0.15, py::arg("power") = 4.0);

    m.def("parse_network", &purc::parse_tntp_network, py::arg("path"));
    m.def("parse_trips", &purc::parse_tntp_trips, py::arg("path"), py::arg("net"));
    m.def("write_network", &purc::write_tntp_network, py::arg("path"), py::arg("net"));
    m.def("write_trips", &purc::write_tntp_trips, py::arg("path"), py::arg("net"), py::arg("od"));

    m.def("gravity_demand", &purc::gravity_demand, py::arg("net"), py::arg("q_per_origin"));
    m.def("scale_demand", &purc::scale_demand, py::arg("od"), py::arg("factor"));
    m.def("to_traveler_types", &purc::to_traveler_types, py::arg("od"));

    m.def(
        "solve",
        [](const purc::Network& net, const std::vector<purc::TravelerType>& types, double theta,
           const std::string& variant, double gamma1, double gamma2, double alpha,
           double plain_step, double eps1, double eps2, long clip_iters, long max_iters,
           int threads) {
            purc::SolverConfig cfg;
            cfg.variant = purc::variant_from_string(variant);
            cfg.gamma1 = gamma1;
            cfg.gamma2 = gamma2;
            cfg.alpha = alpha;
            cfg.plain_step = plain_step;
            cfg.eps1 = eps1;
            cfg.eps2 = eps2;
            cfg.clip_iters = clip_iters;
            cfg.max_iters = max_iters;
            cfg.threads = threads;
            purc::CostModel cost;
            cost.theta = {theta};
            py::gil_scoped_release release;
            return purc::solve(net, types, cost, purc::entropy_perturbation(), cfg);
        },
        py::arg("net"), py::arg("types"), py::arg("theta") = 0.5,
        py::arg("variant") = "qn-agd-star", py::arg("gamma1") = 0.5, py::arg("gamma2") = 1.0,
        py::arg("alpha") = 10.0, py::arg("plain_step") = 1e-4, py::arg("eps1") = 1e-5,
        py::arg("eps2") = 1e-5, py::arg("clip_iters") = 100, py::arg("max_iters") = 100000,
        py::arg("threads") = 0);

    m.def(
        "primal_solve",
        [](const purc::Network& net, const std::vector<purc::TravelerType>& types, double theta,
           uint64_t seed, double tol, long max_iters) {
            purc::CostModel cost;
            cost.theta = {theta};
            py::gil_scoped_release release;
            return purc::primal_solve(net, types, cost, purc::entropy_perturbation(), seed, tol,
                                      max_iters);
        },
        py::arg("net"), py::arg("types"), py::arg("theta") = 0.5, py::arg("seed") = 0,
        py::arg("tol") = 1e-10, py::arg("max_iters") = 10000000L);

    m.def(
        "primal_objective",
        [](const purc::Network& net, const std::vector<purc::TravelerType>& types, double theta,
           const std::vector<std::vector<double>>& flows) {
            purc::CostModel cost;
            cost.theta = {theta};
            return purc::primal_objective(net, types, cost, purc::entropy_perturbation(), flows);
        },
        py::arg("net"), py::arg("types"), py::arg("theta"), py::arg("flows"));
}
