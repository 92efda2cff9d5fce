// Command line front end: solve runs one assignment and writes the result
// files, grid writes a synthetic instance in TNTP format, bench sweeps
// variants over instances, check reports connectivity and audits a flow file
// against the optimality conditions.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "purc/demand.hpp"
#include "purc/network.hpp"
#include "purc/oracle.hpp"
#include "purc/purc.hpp"
#include "purc/report.hpp"
#include "purc/solver.hpp"
#include "purc/tntp.hpp"

namespace fs = std::filesystem;

namespace {

struct SolveOpts {
    std::string net_path, trips_path, out_dir = ".";
    int grid_k = 0;
    double grid_q = 1.0;
    double scale = 1.0;
    double theta = 0.5;
    uint64_t seed = 0;
    bool per_type_flows = false;
    std::string variant = "qn-agd-star";
    purc::SolverConfig cfg;
};

void add_solver_flags(CLI::App* cmd, SolveOpts& o) {
    cmd->add_option("--variant", o.variant, "qn-agd-star, qn-agd, agd-star or agd")
        ->capture_default_str();
    cmd->add_option("--gamma1", o.cfg.gamma1, "potential step size")->capture_default_str();
    cmd->add_option("--gamma2", o.cfg.gamma2, "time update damping")->capture_default_str();
    cmd->add_option("--alpha", o.cfg.alpha, "momentum offset for the star variants")
        ->capture_default_str();
    cmd->add_option("--plain-step", o.cfg.plain_step, "step size for the unscaled variants")
        ->capture_default_str();
    cmd->add_option("--eps1", o.cfg.eps1, "feasibility tolerance R1")->capture_default_str();
    cmd->add_option("--eps2", o.cfg.eps2, "time consistency tolerance R2")->capture_default_str();
    cmd->add_option("--clip-iters", o.cfg.clip_iters, "iterations with flows clipped at 1")
        ->capture_default_str();
    cmd->add_option("--max-iters", o.cfg.max_iters, "iteration budget")->capture_default_str();
    cmd->add_option("--trace-every", o.cfg.trace_every, "trace row stride")->capture_default_str();
    cmd->add_option("--threads", o.cfg.threads, "worker threads, 0 = PURC_THREADS or all cores")
        ->capture_default_str();
    cmd->add_option("--theta", o.theta, "time weight in the link cost")->capture_default_str();
    cmd->add_option("--seed", o.seed, "recorded in summary.json")->capture_default_str();
    cmd->add_option("--out", o.out_dir, "output directory")->capture_default_str();
    cmd->add_flag("--per-type-flows", o.per_type_flows,
                  "add one unit-flow column per traveler type to flows.csv");
}

struct Instance {
    purc::Network net;
    std::vector<purc::TravelerType> types;
    std::string net_source, trips_source;
};

Instance load_instance(const SolveOpts& o) {
    Instance inst;
    if (o.grid_k > 0) {
        purc::GridSpec spec;
        spec.k = o.grid_k;
        inst.net = purc::generate_grid(spec);
        inst.net_source = "grid-" + std::to_string(o.grid_k);
        inst.trips_source = "gravity(q=" + purc::format_double(o.grid_q) + ")";
        purc::ODMatrix od = purc::gravity_demand(inst.net, o.grid_q);
        od = purc::scale_demand(std::move(od), o.scale);
        inst.types = purc::to_traveler_types(od);
    } else {
        inst.net = purc::parse_tntp_network(o.net_path);
        inst.net_source = o.net_path;
        inst.trips_source = o.trips_path;
        purc::ODMatrix od = purc::parse_tntp_trips(o.trips_path, inst.net);
        od = purc::scale_demand(std::move(od), o.scale);
        inst.types = purc::to_traveler_types(od);
    }
    if (inst.types.empty()) throw std::invalid_argument("instance has no positive demand");
    std::vector<std::pair<int32_t, int32_t>> pairs;
    pairs.reserve(inst.types.size());
    for (const purc::TravelerType& t : inst.types) pairs.emplace_back(t.origin, t.destination);
    purc::ValidationReport report = purc::validate_network(inst.net, pairs);
    if (!report.ok()) {
        const auto& [o_bad, d_bad] = report.unreachable.front();
        throw std::invalid_argument(
            "demand from node " + std::to_string(inst.net.node_ids[o_bad]) + " to node " +
            std::to_string(inst.net.node_ids[d_bad]) + " has no route (" +
            std::to_string(report.unreachable.size()) + " such pairs)");
    }
    return inst;
}

int run_solve(SolveOpts& o) {
    o.cfg.variant = purc::variant_from_string(o.variant);
    Instance inst = load_instance(o);
    purc::CostModel cost;
    cost.theta = {o.theta};

    double total = 0.0;
    for (const purc::TravelerType& t : inst.types) total += t.volume;
    std::cout << "instance: " << inst.net.num_nodes() << " nodes, " << inst.net.num_links()
              << " links, " << inst.types.size() << " traveler types (total volume "
              << purc::format_double(total) << ")\n";

    purc::AssignmentResult result =
        purc::solve(inst.net, inst.types, cost, purc::entropy_perturbation(), o.cfg);

    std::cout << "variant " << purc::to_string(o.cfg.variant) << ": ";
    switch (result.status) {
        case purc::SolveStatus::Converged:
            std::cout << "converged in " << result.iterations << " iterations";
            break;
        case purc::SolveStatus::MaxIters:
            std::cout << "hit the iteration budget at " << result.iterations;
            break;
        case purc::SolveStatus::Diverged:
            std::cout << "diverged (" << result.message << ")";
            break;
    }
    std::cout << " (R1=" << purc::format_double(result.r1)
              << ", R2=" << purc::format_double(result.r2) << ", "
              << purc::format_double(result.wall_ms) << " ms)\n";
    if (result.clamped > 0)
        std::cout << "note: " << result.clamped << " exponent clamps during loading\n";

    fs::create_directories(o.out_dir);
    const std::string flows_path = (fs::path(o.out_dir) / "flows.csv").string();
    const std::string trace_path = (fs::path(o.out_dir) / "trace.csv").string();
    const std::string summary_path = (fs::path(o.out_dir) / "summary.json").string();
    purc::write_file(flows_path, purc::flows_csv(inst.net, inst.types, result, o.per_type_flows));
    purc::write_file(trace_path, purc::trace_csv(result));
    purc::write_file(summary_path,
                     purc::summary_json(inst.net, inst.types, cost, o.cfg, result, o.seed,
                                        inst.net_source, inst.trips_source, o.scale));
    std::cout << "wrote " << flows_path << ", " << trace_path << ", " << summary_path << "\n";
    return result.converged ? 0 : 2;
}

struct GridOpts {
    int k = 1;
    double q = 1.0;
    std::string out_dir = ".";
};

int run_grid(const GridOpts& g) {
    purc::GridSpec spec;
    spec.k = g.k;
    purc::Network net = purc::generate_grid(spec);
    purc::ODMatrix od = purc::gravity_demand(net, g.q);
    fs::create_directories(g.out_dir);
    const std::string net_path = (fs::path(g.out_dir) / "net.tntp").string();
    const std::string trips_path = (fs::path(g.out_dir) / "trips.tntp").string();
    purc::write_tntp_network(net_path, net);
    purc::write_tntp_trips(trips_path, net, od);
    std::cout << "wrote " << net_path << " (" << net.num_nodes() << " nodes, "
              << net.num_links() << " links) and " << trips_path << " (total demand "
              << purc::format_double(od.total()) << ")\n";
    return 0;
}

struct BenchOpts {
    SolveOpts base;
    std::string grids = "2,3,4";
    std::string variants = "qn-agd-star,qn-agd,agd-star,agd";
};

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

int run_bench(BenchOpts& b) {
    std::vector<Instance> instances;
    std::vector<std::string> names;
    for (const std::string& g : split_csv(b.grids)) {
        SolveOpts o = b.base;
        o.grid_k = std::stoi(g);
        if (o.grid_k < 1) throw std::invalid_argument("grid size must be >= 1");
        instances.push_back(load_instance(o));
        names.push_back("grid-" + g);
    }
    if (!b.base.net_path.empty()) {
        SolveOpts o = b.base;
        o.grid_k = 0;
        instances.push_back(load_instance(o));
        names.push_back(fs::path(b.base.net_path).stem().string());
    }
    if (instances.empty()) throw std::invalid_argument("bench needs --grids or --net/--trips");

    purc::CostModel cost;
    cost.theta = {b.base.theta};
    std::vector<purc::BenchRow> rows;
    for (size_t i = 0; i < instances.size(); ++i) {
        for (const std::string& vname : split_csv(b.variants)) {
            purc::SolverConfig cfg = b.base.cfg;
            cfg.variant = purc::variant_from_string(vname);
            cfg.record_objectives = false;
            purc::AssignmentResult r = purc::solve(instances[i].net, instances[i].types, cost,
                                                   purc::entropy_perturbation(), cfg);
            purc::BenchRow row;
            row.variant = vname;
            row.instance = names[i];
            row.problem_size = static_cast<long>(instances[i].net.num_nodes()) *
                               static_cast<long>(instances[i].types.size());
            row.iterations = r.iterations;
            row.converged = r.converged;
            row.r1 = r.r1;
            row.r2 = r.r2;
            row.wall_ms = r.wall_ms;
            rows.push_back(row);
            std::cout << names[i] << " " << vname << ": "
                      << (r.converged ? "converged" : "stopped") << " at " << r.iterations
                      << " iterations, " << purc::format_double(r.wall_ms) << " ms\n";
        }
    }
    fs::create_directories(b.base.out_dir);
    const std::string path = (fs::path(b.base.out_dir) / "bench.csv").string();
    purc::write_file(path, purc::bench_csv(rows));
    std::cout << "wrote " << path << "\n";
    return 0;
}

struct CheckOpts {
    std::string net_path, trips_path, flows_path;
    double theta = 0.5;
    double tol = 1e-4;
};

int run_check(const CheckOpts& c) {
    purc::Network net = purc::parse_tntp_network(c.net_path);

    std::vector<std::pair<int32_t, int32_t>> pairs;
    if (!c.trips_path.empty()) {
        purc::ODMatrix od = purc::parse_tntp_trips(c.trips_path, net);
        pairs.reserve(od.entries.size());
        for (const purc::ODEntry& e : od.entries) pairs.emplace_back(e.origin, e.destination);
    }
    purc::ValidationReport net_report = purc::validate_network(net, pairs);
    std::cout << "network: " << net.num_nodes() << " nodes, " << net.num_links() << " links, "
              << (net_report.strongly_connected ? "strongly connected"
                                                : "NOT strongly connected")
              << "\n";
    if (!net_report.isolated_nodes.empty()) {
        std::cout << net_report.isolated_nodes.size() << " isolated nodes, first: node "
                  << net.node_ids[net_report.isolated_nodes.front()] << "\n";
    }
    if (!pairs.empty()) {
        if (net_report.ok()) {
            std::cout << "all " << pairs.size() << " OD pairs are routable\n";
        } else {
            const auto& [o_bad, d_bad] = net_report.unreachable.front();
            std::cout << net_report.unreachable.size() << " of " << pairs.size()
                      << " OD pairs have no route, first: node " << net.node_ids[o_bad]
                      << " to node " << net.node_ids[d_bad] << "\n";
            return 1;
        }
    }
    if (c.flows_path.empty()) return 0;

    std::ifstream in(c.flows_path);
    if (!in) throw std::invalid_argument("cannot open " + c.flows_path);

    std::string line;
    if (!std::getline(in, line)) throw purc::ParseError(c.flows_path, 1, "empty flows file");
    std::vector<std::string> header = split_csv(line);
    if (header.size() < 4 || header[0] != "from_node" || header[1] != "to_node" ||
        header[2] != "aggregate_flow" || header[3] != "travel_time")
        throw purc::ParseError(c.flows_path, 1, "unexpected flows header");

    std::map<int64_t, int32_t> node_of;
    for (int32_t v = 0; v < net.num_nodes(); ++v) node_of[net.node_ids[v]] = v;

    std::vector<purc::TravelerType> types;
    for (size_t col = 4; col < header.size(); ++col) {
        const std::string& name = header[col];
        if (name.rfind("flow_", 0) != 0)
            throw purc::ParseError(c.flows_path, 1, "unexpected column '" + name + "'");
        const size_t sep = name.find('_', 5);
        if (sep == std::string::npos)
            throw purc::ParseError(c.flows_path, 1, "unexpected column '" + name + "'");
        purc::TravelerType t;
        try {
            t.origin = node_of.at(std::stoll(name.substr(5, sep - 5)));
            t.destination = node_of.at(std::stoll(name.substr(sep + 1)));
        } catch (const std::exception&) {
            throw purc::ParseError(c.flows_path, 1, "column '" + name + "' names unknown nodes");
        }
        types.push_back(t);
    }
    if (types.empty())
        throw std::invalid_argument(
            "flows file has no per-type columns; rerun solve with --per-type-flows");

    const int32_t m_links = net.num_links();
    std::vector<double> travel_time(m_links);
    std::vector<std::vector<double>> flows(types.size(), std::vector<double>(m_links));
    for (int32_t e = 0; e < m_links; ++e) {
        if (!std::getline(in, line))
            throw purc::ParseError(c.flows_path, e + 2, "expected one row per network link");
        std::vector<std::string> fields = split_csv(line);
        if (fields.size() != header.size())
            throw purc::ParseError(c.flows_path, e + 2, "wrong field count");
        if (std::stoll(fields[0]) != net.node_ids[net.links[e].tail] ||
            std::stoll(fields[1]) != net.node_ids[net.links[e].head])
            throw purc::ParseError(c.flows_path, e + 2,
                                   "rows must follow the network link order");
        travel_time[e] = std::stod(fields[3]);
        for (size_t w = 0; w < types.size(); ++w) flows[w][e] = std::stod(fields[4 + w]);
    }

    std::vector<double> link_cost(m_links);
    for (int32_t e = 0; e < m_links; ++e) link_cost[e] = c.theta * travel_time[e];

    const purc::Perturbation& f = purc::entropy_perturbation();
    double worst = 0.0;
    int32_t worst_link = -1;
    size_t worst_type = 0;
    bool acyclic = true;
    for (size_t w = 0; w < types.size(); ++w) {
        std::vector<double> eta =
            purc::eta_from_flows(net, f, flows[w], link_cost, types[w].destination);
        purc::KktReport report = purc::kkt_check(net, f, flows[w], eta, link_cost);
        if (report.max_violation > worst) {
            worst = report.max_violation;
            worst_link = report.worst_link;
            worst_type = w;
        }
        if (!purc::positive_flow_acyclic(net, flows[w])) acyclic = false;
    }

    std::cout << "checked " << types.size() << " traveler types: max violation "
              << purc::format_double(worst);
    if (worst_link >= 0)
        std::cout << " (link " << net.node_ids[net.links[worst_link].tail] << "->"
                  << net.node_ids[net.links[worst_link].head] << ", type "
                  << net.node_ids[types[worst_type].origin] << "->"
                  << net.node_ids[types[worst_type].destination] << ")";
    std::cout << ", positive flows " << (acyclic ? "acyclic" : "CYCLIC") << "\n";
    const bool pass = worst <= c.tol && acyclic;
    std::cout << (pass ? "PASS" : "FAIL") << " at tolerance " << purc::format_double(c.tol)
              << "\n";
    return pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"perturbed-utility stochastic traffic assignment"};
    app.require_subcommand(1);

    SolveOpts solve_opts;
    CLI::App* solve_cmd = app.add_subcommand("solve", "assign one TNTP instance");
    solve_cmd->add_option("--net", solve_opts.net_path, "TNTP network file")
        ->required()
        ->check(CLI::ExistingFile);
    solve_cmd->add_option("--trips", solve_opts.trips_path, "TNTP trip table")
        ->required()
        ->check(CLI::ExistingFile);
    solve_cmd->add_option("--scale", solve_opts.scale, "demand multiplier")
        ->capture_default_str();
    add_solver_flags(solve_cmd, solve_opts);

    GridOpts grid_opts;
    CLI::App* grid_cmd =
        app.add_subcommand("grid", "write a synthetic grid instance in TNTP format");
    grid_cmd->add_option("--k", grid_opts.k, "grid size, (k+1)^2 nodes")
        ->required()
        ->check(CLI::PositiveNumber);
    grid_cmd->add_option("--q", grid_opts.q, "gravity demand per origin")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    grid_cmd->add_option("--out", grid_opts.out_dir, "output directory")->capture_default_str();

    BenchOpts bench_opts;
    CLI::App* bench_cmd = app.add_subcommand("bench", "sweep variants over instances");
    bench_cmd->add_option("--grids", bench_opts.grids, "comma separated grid sizes")
        ->capture_default_str();
    bench_cmd->add_option("--variants", bench_opts.variants, "comma separated variant names")
        ->capture_default_str();
    bench_cmd->add_option("--net", bench_opts.base.net_path, "extra TNTP network instance")
        ->check(CLI::ExistingFile);
    bench_cmd->add_option("--trips", bench_opts.base.trips_path, "trip table for --net")
        ->check(CLI::ExistingFile);
    bench_cmd->add_option("--q", bench_opts.base.grid_q, "gravity demand per origin")
        ->capture_default_str();
    bench_cmd->add_option("--scale", bench_opts.base.scale, "demand multiplier")
        ->capture_default_str();
    add_solver_flags(bench_cmd, bench_opts.base);

    CheckOpts check_opts;
    CLI::App* check_cmd =
        app.add_subcommand("check", "report connectivity, audit a per-type flow file");
    check_cmd->add_option("--net", check_opts.net_path, "TNTP network file")
        ->required()
        ->check(CLI::ExistingFile);
    check_cmd->add_option("--trips", check_opts.trips_path,
                          "TNTP trip table whose OD pairs are checked for routes")
        ->check(CLI::ExistingFile);
    check_cmd->add_option("--flows", check_opts.flows_path, "flows.csv with per-type columns")
        ->check(CLI::ExistingFile);
    check_cmd->add_option("--theta", check_opts.theta, "time weight used in the run")
        ->capture_default_str();
    check_cmd->add_option("--tol", check_opts.tol, "complementarity tolerance")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (solve_cmd->parsed()) return run_solve(solve_opts);
        if (grid_cmd->parsed()) return run_grid(grid_opts);
        if (bench_cmd->parsed()) return run_bench(bench_opts);
        if (check_cmd->parsed()) return run_check(check_opts);
    } catch (const purc::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
