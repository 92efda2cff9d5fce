#pragma once

#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

namespace purc {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Directed link with BPR congestion parameters. free_flow_time and capacity
// must be positive; b == 0 gives a flow-independent (fixed-cost) link.
struct Link {
    int32_t tail = -1;
    int32_t head = -1;
    double capacity = 0.0;
    double length = 0.0;
    double free_flow_time = 0.0;
    double b = 0.15;
    double power = 4.0;
    double speed = 0.0;
    double toll = 0.0;
    int32_t type = 1;
};

// t(x) = t0 * (1 + b * (x / capacity)^power), defined for x >= 0.
double bpr_time(const Link& link, double flow);
// dt/dx, zero at x = 0 when power > 1.
double bpr_time_deriv(const Link& link, double flow);
// Integral of t over [0, x]: t0 * (x + b * x^(power+1) / ((power+1) * capacity^power)).
double bpr_time_integral(const Link& link, double flow);

struct Network {
    std::vector<int64_t> node_ids;  // dense index -> external id
    std::vector<Link> links;
    int32_t first_thru_node = 0;    // parsed from TNTP, dense index; not enforced

    // CSR adjacency over link indices, built by finalize().
    std::vector<int32_t> out_begin, out_links;
    std::vector<int32_t> in_begin, in_links;

    int32_t num_nodes() const { return static_cast<int32_t>(node_ids.size()); }
    int32_t num_links() const { return static_cast<int32_t>(links.size()); }

    // Validates link endpoints and attributes, then builds adjacency.
    // Throws std::invalid_argument on bad endpoints, t0 <= 0 or capacity <= 0.
    void finalize();
};

Network make_network(std::vector<int64_t> node_ids, std::vector<Link> links);

struct GridSpec {
    int k = 1;                 // k x k cells, (k+1)^2 nodes
    double free_flow_time = 1.0;
    double capacity = 5000.0;
    double length = 1.0;
    double b = 0.15;
    double power = 4.0;
};

// Bidirectional lattice: (k+1)^2 nodes, 4k(k+1) directed links. Node ids are
// row-major starting at 1. Throws std::invalid_argument for k < 1.
Network generate_grid(const GridSpec& spec);

// Cost-to-destination potentials under positive link costs, by label-setting
// on the reverse graph. Ties settle the smallest node index first. Unreachable
// nodes get +inf. next_link, when given, receives per node the first link of
// the min-cost path toward the destination (-1 at the destination itself and
// at unreachable nodes). Throws std::invalid_argument on nonpositive costs.
std::vector<double> shortest_potentials(const Network& net,
                                        const std::vector<double>& link_cost,
                                        int32_t destination,
                                        std::vector<int32_t>* next_link = nullptr);

// One-to-all distances from origin on the forward graph, same tie rule.
std::vector<double> shortest_times_from(const Network& net,
                                        const std::vector<double>& link_cost,
                                        int32_t origin);

struct ValidationReport {
    bool strongly_connected = false;
    std::vector<int32_t> isolated_nodes;                  // no links at all
    std::vector<std::pair<int32_t, int32_t>> unreachable; // OD pairs that fail
    bool ok() const { return unreachable.empty(); }
};

// Pure report: per-pair reachability, strong connectivity, dangling nodes.
ValidationReport validate_network(const Network& net,
                                  const std::vector<std::pair<int32_t, int32_t>>& od_pairs);

}  // namespace purc
