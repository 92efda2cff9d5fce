#include "purc/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace purc {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

std::string flows_csv(const Network& net, const std::vector<TravelerType>& types,
                      const AssignmentResult& result, bool per_type) {
    std::string out = "from_node,to_node,aggregate_flow,travel_time";
    if (per_type)
        for (const TravelerType& t : types)
            out += ",flow_" + std::to_string(net.node_ids[t.origin]) + "_" +
                   std::to_string(net.node_ids[t.destination]);
    out += "\n";
    for (int32_t e = 0; e < net.num_links(); ++e) {
        const Link& link = net.links[e];
        out += std::to_string(net.node_ids[link.tail]) + "," +
               std::to_string(net.node_ids[link.head]) + "," +
               format_double(result.aggregate_flow[e]) + "," +
               format_double(result.realized_time[e]);
        if (per_type)
            for (size_t w = 0; w < types.size(); ++w) out += "," + format_double(result.flows[w][e]);
        out += "\n";
    }
    return out;
}

std::string trace_csv(const AssignmentResult& result) {
    std::string out = "iter,r1,r2,z,g\n";
    for (const TraceRow& row : result.trace)
        out += std::to_string(row.iter) + "," + format_double(row.r1) + "," +
               format_double(row.r2) + "," + format_double(row.z) + "," + format_double(row.g) +
               "\n";
    return out;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
    std::string out = "variant,instance,problem_size,iterations,converged,r1,r2,wall_ms\n";
    for (const BenchRow& row : rows)
        out += row.variant + "," + row.instance + "," + std::to_string(row.problem_size) + "," +
               std::to_string(row.iterations) + "," + (row.converged ? "1" : "0") + "," +
               format_double(row.r1) + "," + format_double(row.r2) + "," +
               format_double(row.wall_ms) + "\n";
    return out;
}

std::string summary_json(const Network& net, const std::vector<TravelerType>& types,
                         const CostModel& cost, const SolverConfig& cfg,
                         const AssignmentResult& result, uint64_t seed,
                         const std::string& net_source, const std::string& trips_source,
                         double demand_scale) {
    nlohmann::ordered_json j;
    j["instance"]["network"] = net_source;
    j["instance"]["trips"] = trips_source;
    j["instance"]["nodes"] = net.num_nodes();
    j["instance"]["links"] = net.num_links();
    j["instance"]["traveler_types"] = types.size();
    double total = 0.0;
    for (const TravelerType& t : types) total += t.volume;
    j["instance"]["total_volume"] = total;
    j["instance"]["demand_scale"] = demand_scale;

    j["config"]["variant"] = to_string(cfg.variant);
    j["config"]["gamma1"] = cfg.gamma1;
    j["config"]["gamma2"] = cfg.gamma2;
    j["config"]["alpha"] = cfg.alpha;
    j["config"]["plain_step"] = cfg.plain_step;
    j["config"]["eps1"] = cfg.eps1;
    j["config"]["eps2"] = cfg.eps2;
    j["config"]["clip_iters"] = cfg.clip_iters;
    j["config"]["max_iters"] = cfg.max_iters;
    j["config"]["trace_every"] = cfg.trace_every;
    j["config"]["threads"] = result.threads_used;
    j["config"]["seed"] = seed;
    j["config"]["theta"] = cost.uniform() && !cost.theta.empty() ? nlohmann::ordered_json(cost.theta.front())
                                                                 : nlohmann::ordered_json(cost.theta);
    j["config"]["perturb_scale"] = cost.perturb_scale.empty() ? "uniform" : "per-link";

    const char* status = "max-iters";
    switch (result.status) {
        case SolveStatus::Converged: status = "converged"; break;
        case SolveStatus::MaxIters: status = "max-iters"; break;
        case SolveStatus::Diverged: status = "diverged"; break;
    }
    j["result"]["status"] = status;
    j["result"]["converged"] = result.converged;
    j["result"]["iterations"] = result.iterations;
    j["result"]["r1"] = result.r1;
    j["result"]["r2"] = result.r2;
    if (!result.trace.empty()) {
        const TraceRow& last = result.trace.back();
        if (std::isfinite(last.z)) j["result"]["primal_objective"] = last.z;
        if (std::isfinite(last.g)) j["result"]["dual_objective"] = last.g;
    }
    j["result"]["exp_clamped"] = result.clamped;
    j["result"]["newton_skips"] = result.newton_skips;
    j["result"]["wall_ms"] = result.wall_ms;
    if (!result.message.empty()) j["result"]["message"] = result.message;
    return j.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << content;
    if (!out.flush()) throw std::runtime_error("failed writing " + path);
}

}  // namespace purc
