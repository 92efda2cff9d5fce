#pragma once

#include <string>
#include <vector>

#include "purc/solver.hpp"

namespace purc {

// Shortest-round-trip decimal form (printf %.17g is byte-stable but noisy;
// this trims to the shortest string that parses back exactly).
std::string format_double(double v);

// header: from_node,to_node,aggregate_flow,travel_time[,flow_o_d per type]
std::string flows_csv(const Network& net, const std::vector<TravelerType>& types,
                      const AssignmentResult& result, bool per_type);

// header: iter,r1,r2,z,g. Wall time stays out of the file so repeated runs
// with the same inputs produce identical bytes.
std::string trace_csv(const AssignmentResult& result);

struct BenchRow {
    std::string variant;
    std::string instance;
    long problem_size = 0;  // |V| * |W|
    long iterations = 0;
    bool converged = false;
    double r1 = 0.0, r2 = 0.0;
    double wall_ms = 0.0;
};

std::string bench_csv(const std::vector<BenchRow>& rows);

// Full config echo (defaults included) plus outcome numbers.
std::string summary_json(const Network& net, const std::vector<TravelerType>& types,
                         const CostModel& cost, const SolverConfig& cfg,
                         const AssignmentResult& result, uint64_t seed,
                         const std::string& net_source, const std::string& trips_source,
                         double demand_scale);

void write_file(const std::string& path, const std::string& content);

}  // namespace purc
