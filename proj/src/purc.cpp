#include "purc/purc.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "purc/perturbation.hpp"

namespace purc {

double EntropyPerturbation::value(double x) const { return (1.0 + x) * std::log1p(x) - x; }

double EntropyPerturbation::deriv(double x) const { return std::log1p(x); }

double EntropyPerturbation::inv_deriv(double y) const { return y > 0.0 ? std::expm1(y) : 0.0; }

double EntropyPerturbation::inv_deriv_deriv(double y) const { return y > 0.0 ? std::exp(y) : 0.0; }

const Perturbation& entropy_perturbation() {
    static const EntropyPerturbation f;
    return f;
}

bool CostModel::uniform() const {
    for (double t : theta)
        if (t != theta[0]) return false;
    return true;
}

void CostModel::validate(size_t num_types, size_t num_links) const {
    if (theta.empty()) throw std::invalid_argument("cost model needs at least one theta");
    if (theta.size() != 1 && theta.size() != num_types)
        throw std::invalid_argument("theta must have one entry or one per traveler type");
    for (double t : theta)
        if (!(t > 0.0)) throw std::invalid_argument("theta must be positive");
    if (!perturb_scale.empty()) {
        if (perturb_scale.size() != num_links)
            throw std::invalid_argument("perturb_scale must have one entry per link");
        for (double s : perturb_scale)
            if (!(s > 0.0)) throw std::invalid_argument("perturb_scale must be positive");
    }
}

void load_type_flows(const Network& net, const Perturbation& f, std::span<const double> eta,
                     std::span<const double> cost, bool clip, std::span<double> x_out,
                     LoadStats* stats, std::span<const double> perturb_scale) {
    const int32_t m = net.num_links();
    for (int32_t e = 0; e < m; ++e) {
        const Link& l = net.links[e];
        const double ei = eta[l.tail];
        if (!(ei < kInf)) {  // tail cannot reach the destination
            x_out[e] = 0.0;
            continue;
        }
        double y = ei - eta[l.head] - cost[e];
        if (!perturb_scale.empty()) y /= perturb_scale[e];
        if (y > kExpClamp) {
            y = kExpClamp;
            if (stats) ++stats->clamped;
        }
        double x = f.inv_deriv(y);
        if (clip && x > 1.0) x = 1.0;
        x_out[e] = x;
    }
}

std::vector<std::vector<double>> load_flows(const Network& net,
                                            const std::vector<TravelerType>& types,
                                            const CostModel& cost, const Perturbation& f,
                                            const std::vector<std::vector<double>>& eta,
                                            const std::vector<double>& t_star, bool clip,
                                            LoadStats* stats) {
    const size_t m = net.links.size();
    std::vector<std::vector<double>> flows(types.size(), std::vector<double>(m));
    std::vector<double> c(m);
    for (size_t w = 0; w < types.size(); ++w) {
        const double theta = cost.theta_for(w);
        for (size_t e = 0; e < m; ++e) c[e] = theta * t_star[e];
        load_type_flows(net, f, eta[w], c, clip, flows[w], stats, cost.perturb_scale);
    }
    return flows;
}

std::vector<double> aggregate_flows(const Network& net, const std::vector<TravelerType>& types,
                                    const std::vector<std::vector<double>>& flows) {
    std::vector<double> total(net.links.size(), 0.0);
    for (size_t w = 0; w < types.size(); ++w) {
        const double q = types[w].volume;
        const std::vector<double>& x = flows[w];
        for (size_t e = 0; e < total.size(); ++e) total[e] += q * x[e];
    }
    return total;
}

std::vector<double> link_times(const Network& net, const std::vector<double>& aggregate) {
    std::vector<double> t(net.links.size());
    for (size_t e = 0; e < t.size(); ++e) t[e] = bpr_time(net.links[e], aggregate[e]);
    return t;
}

double node_imbalance(const Network& net, std::span<const double> x, int32_t node,
                      int32_t origin, int32_t destination) {
    double in = 0.0, out = 0.0;
    for (int32_t i = net.in_begin[node]; i < net.in_begin[node + 1]; ++i) in += x[net.in_links[i]];
    for (int32_t i = net.out_begin[node]; i < net.out_begin[node + 1]; ++i) out += x[net.out_links[i]];
    double b = 0.0;
    if (node == origin) b = -1.0;
    if (node == destination) b = 1.0;
    return in - out - b;
}

double gradient_eta(const Network& net, const TravelerType& type, std::span<const double> x,
                    int32_t node) {
    return type.volume * node_imbalance(net, x, node, type.origin, type.destination);
}

double scaled_gradient_eta(const Network& net, const Perturbation& f, std::span<const double> x,
                           int32_t node, int32_t origin, int32_t destination,
                           std::span<const double> perturb_scale) {
    double denom = 0.0;
    for (int32_t i = net.in_begin[node]; i < net.in_begin[node + 1]; ++i) {
        const int32_t e = net.in_links[i];
        denom += f.hessian_bound(x[e]) / (perturb_scale.empty() ? 1.0 : perturb_scale[e]);
    }
    for (int32_t i = net.out_begin[node]; i < net.out_begin[node + 1]; ++i) {
        const int32_t e = net.out_links[i];
        denom += f.hessian_bound(x[e]) / (perturb_scale.empty() ? 1.0 : perturb_scale[e]);
    }
    if (denom <= 0.0) return 0.0;  // isolated node
    return node_imbalance(net, x, node, origin, destination) / denom;
}

double feasibility_residual(const Network& net, const std::vector<TravelerType>& types,
                            const std::vector<std::vector<double>>& flows) {
    if (types.empty()) return 0.0;
    const int32_t n = net.num_nodes();
    double total_volume = 0.0;
    for (const TravelerType& t : types) total_volume += t.volume;

    double r1 = 0.0;
    std::vector<double> net_flow(n);
    for (size_t w = 0; w < types.size(); ++w) {
        std::fill(net_flow.begin(), net_flow.end(), 0.0);
        const std::vector<double>& x = flows[w];
        for (int32_t e = 0; e < net.num_links(); ++e) {
            net_flow[net.links[e].tail] -= x[e];
            net_flow[net.links[e].head] += x[e];
        }
        net_flow[types[w].origin] += 1.0;
        net_flow[types[w].destination] -= 1.0;
        double violation = 0.0;
        for (int32_t v = 0; v < n; ++v) violation += std::abs(net_flow[v]);
        r1 += types[w].volume / total_volume * violation / n;
    }
    return r1;
}

double time_residual(const Network& net, const std::vector<double>& aggregate,
                     const std::vector<double>& t_star) {
    const int32_t m = net.num_links();
    if (m == 0) return 0.0;
    double gap = 0.0;
    for (int32_t e = 0; e < m; ++e)
        gap += std::abs(bpr_time(net.links[e], aggregate[e]) - t_star[e]);
    return gap / m;
}

namespace {

double common_theta(const CostModel& cost) {
    if (!cost.uniform())
        throw std::invalid_argument("the congestion integral needs a uniform theta");
    return cost.theta[0];
}

}  // namespace

double primal_objective(const Network& net, const std::vector<TravelerType>& types,
                        const CostModel& cost, const Perturbation& f,
                        const std::vector<std::vector<double>>& flows) {
    if (flows.size() != types.size())
        throw std::invalid_argument("one flow row per traveler type expected");
    const double theta = common_theta(cost);
    const size_t m = net.links.size();

    std::vector<double> aggregate(m, 0.0);
    double perturb_term = 0.0;
    for (size_t w = 0; w < types.size(); ++w) {
        const std::vector<double>& x = flows[w];
        if (x.size() != m) throw std::invalid_argument("flow row has wrong length");
        double fsum = 0.0;
        for (size_t e = 0; e < m; ++e) {
            if (!(x[e] >= 0.0)) throw std::invalid_argument("negative flow in primal objective");
            const double s = cost.perturb_scale.empty() ? 1.0 : cost.perturb_scale[e];
            fsum += s * f.value(x[e]);
            aggregate[e] += types[w].volume * x[e];
        }
        perturb_term += types[w].volume * fsum;
    }
    double congestion = 0.0;
    for (size_t e = 0; e < m; ++e)
        congestion += bpr_time_integral(net.links[e], aggregate[e]);
    return theta * congestion + perturb_term;
}

double dual_objective(const Network& net, const std::vector<TravelerType>& types,
                      const CostModel& cost, const Perturbation& f,
                      const std::vector<std::vector<double>>& eta,
                      const std::vector<double>& t_star, DualMode mode, LoadStats* stats) {
    if (eta.size() != types.size())
        throw std::invalid_argument("one potential row per traveler type expected");
    const size_t m = net.links.size();

    std::vector<std::vector<double>> flows =
        load_flows(net, types, cost, f, eta, t_star, /*clip=*/false, stats);

    double g = 0.0;
    std::vector<double> aggregate(m, 0.0);
    for (size_t w = 0; w < types.size(); ++w) {
        const double q = types[w].volume;
        const double theta = cost.theta_for(w);
        const std::vector<double>& x = flows[w];
        double linear = 0.0, fsum = 0.0, potential = 0.0;
        for (size_t e = 0; e < m; ++e) {
            if (x[e] == 0.0) continue;
            const Link& l = net.links[e];
            const double s = cost.perturb_scale.empty() ? 1.0 : cost.perturb_scale[e];
            linear += theta * t_star[e] * x[e];
            fsum += s * f.value(x[e]);
            potential += (eta[w][l.tail] - eta[w][l.head]) * x[e];
            aggregate[e] += q * x[e];
        }
        const double b_term = eta[w][types[w].destination] - eta[w][types[w].origin];
        if (mode == DualMode::FixedCost) g += q * (linear + fsum - potential - b_term);
        else g += q * (fsum - potential - b_term);
    }
    if (mode == DualMode::Full) {
        const double theta = common_theta(cost);
        for (size_t e = 0; e < m; ++e)
            g += theta * bpr_time_integral(net.links[e], aggregate[e]);
    }
    return g;
}

}  // namespace purc
