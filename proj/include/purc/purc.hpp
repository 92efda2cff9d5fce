#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "purc/demand.hpp"
#include "purc/network.hpp"
#include "purc/perturbation.hpp"

namespace purc {

// Cost per unit time, per traveler type (size 1 broadcasts), plus an
// optional per-link multiplier on the perturbation (empty = uniform). A
// common choice for the multiplier is link length.
struct CostModel {
    std::vector<double> theta{0.5};
    std::vector<double> perturb_scale{};

    double theta_for(size_t w) const { return theta.size() == 1 ? theta[0] : theta.at(w); }
    bool uniform() const;
    // Throws std::invalid_argument unless every theta > 0, the size is 1 or
    // the number of types, and any perturb_scale is positive with one entry
    // per link.
    void validate(size_t num_types, size_t num_links) const;
};

struct LoadStats {
    long clamped = 0;  // exponent arguments cut at kExpClamp
};

// Exponent guard for the entropy loading map; clamped calls are counted.
constexpr double kExpClamp = 30.0;

// Per-type closed-form loading: x_ij = (F')^-1(eta_i - eta_j - c_ij), with
// x capped at 1 when clip is set. perturb_scale, when nonempty, multiplies F
// per link (so the argument of (F')^-1 is divided by it). eta entries may be
// +inf on nodes that cannot reach the destination; such links carry no flow.
void load_type_flows(const Network& net, const Perturbation& f,
                     std::span<const double> eta, std::span<const double> cost,
                     bool clip, std::span<double> x_out, LoadStats* stats = nullptr,
                     std::span<const double> perturb_scale = {});

// All types at per-type costs c^w = theta^w * t_star.
std::vector<std::vector<double>> load_flows(const Network& net,
                                            const std::vector<TravelerType>& types,
                                            const CostModel& cost, const Perturbation& f,
                                            const std::vector<std::vector<double>>& eta,
                                            const std::vector<double>& t_star, bool clip,
                                            LoadStats* stats = nullptr);

// X = sum_w q^w x^w, accumulated in type order (deterministic).
std::vector<double> aggregate_flows(const Network& net,
                                    const std::vector<TravelerType>& types,
                                    const std::vector<std::vector<double>>& flows);

std::vector<double> link_times(const Network& net, const std::vector<double>& aggregate);

// Node imbalance A_k x - b_k for one type's unit flows (b is -1 at the
// origin, +1 at the destination, 0 elsewhere).
double node_imbalance(const Network& net, std::span<const double> x, int32_t node,
                      int32_t origin, int32_t destination);

// q^w (A_k x - b_k): ascent direction coordinate of the dual objective.
double gradient_eta(const Network& net, const TravelerType& type,
                    std::span<const double> x, int32_t node);

// Imbalance divided by the diagonal bound sum of 1/F'' over links incident to
// the node; the demand volume cancels. Denominator >= degree for entropy.
double scaled_gradient_eta(const Network& net, const Perturbation& f,
                           std::span<const double> x, int32_t node, int32_t origin,
                           int32_t destination, std::span<const double> perturb_scale = {});

// Demand-weighted mean feasibility violation (R1) and mean fixed-point time
// gap (R2).
double feasibility_residual(const Network& net, const std::vector<TravelerType>& types,
                            const std::vector<std::vector<double>>& flows);
double time_residual(const Network& net, const std::vector<double>& aggregate,
                     const std::vector<double>& t_star);

// Congestion integral (over aggregate flow, common theta) plus per-type
// perturbation terms. Requires uniform theta and x >= 0.
double primal_objective(const Network& net, const std::vector<TravelerType>& types,
                        const CostModel& cost, const Perturbation& f,
                        const std::vector<std::vector<double>>& flows);

enum class DualMode {
    FixedCost,  // Lagrangian with linear cost at c(t_star); gradient matches gradient_eta
    Full,       // congestion integral form, comparable with primal_objective
};

// Unconstrained dual value at potentials eta and time guess t_star. Flows are
// loaded internally (unclipped).
double dual_objective(const Network& net, const std::vector<TravelerType>& types,
                      const CostModel& cost, const Perturbation& f,
                      const std::vector<std::vector<double>>& eta,
                      const std::vector<double>& t_star, DualMode mode,
                      LoadStats* stats = nullptr);

}  // namespace purc
