#pragma once

#include <cstdint>
#include <vector>

#include "purc/purc.hpp"

namespace purc {

// All simple paths from origin to destination, each as a link index sequence.
// Guarded to small instances; throws std::invalid_argument beyond max_nodes.
std::vector<std::vector<int32_t>> enumerate_paths(const Network& net, int32_t origin,
                                                  int32_t destination,
                                                  int32_t max_nodes = 64);

struct PrimalSolution {
    bool converged = false;
    long iterations = 0;
    double objective = 0.0;               // Z*
    double station_residual = 0.0;        // final projected-gradient norm
    std::vector<std::vector<double>> flows;  // unit link flows per type
    std::vector<double> aggregate_flow;
};

// Desk-scale reference: minimizes the primal objective over per-type path
// simplices by projected gradient with backtracking step reduction, run to
// ||projected gradient||_inf <= tol. Seed randomizes the starting point.
PrimalSolution primal_solve(const Network& net, const std::vector<TravelerType>& types,
                            const CostModel& cost, const Perturbation& f, uint64_t seed,
                            double tol = 1e-10, long max_iters = 10000000);

struct KktReport {
    double max_violation = 0.0;   // max over links of max(-x, -s, min(x, s))
    double max_neg_flow = 0.0;    // most negative flow
    double max_neg_slack = 0.0;   // most negative s = c + F'(x) + eta_j - eta_i
    double max_complementarity = 0.0;  // max positive min(x, s)
    int32_t worst_link = -1;
};

// Complementarity audit for one type at explicit costs and potentials.
KktReport kkt_check(const Network& net, const Perturbation& f,
                    std::span<const double> x, std::span<const double> eta,
                    std::span<const double> cost);

// Potentials from flows by the min-recursion over out-links with costs
// c + F'(x): at an optimum this reconstructs the dual solution. Unreachable
// nodes get +inf.
std::vector<double> eta_from_flows(const Network& net, const Perturbation& f,
                                   std::span<const double> x, std::span<const double> cost,
                                   int32_t destination);

// True if links with x > threshold form a DAG.
bool positive_flow_acyclic(const Network& net, std::span<const double> x,
                           double threshold = 1e-8);

}  // namespace purc
