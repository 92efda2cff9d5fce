#include "purc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>

namespace purc {

std::vector<std::vector<int32_t>> enumerate_paths(const Network& net, int32_t origin,
                                                  int32_t destination, int32_t max_nodes) {
    const int32_t n = net.num_nodes();
    if (n > max_nodes)
        throw std::invalid_argument("path enumeration limited to " + std::to_string(max_nodes) +
                                    " nodes, network has " + std::to_string(n));
    if (origin < 0 || origin >= n || destination < 0 || destination >= n)
        throw std::invalid_argument("path enumeration endpoint out of range");
    if (origin == destination)
        throw std::invalid_argument("path enumeration with origin == destination");

    std::vector<std::vector<int32_t>> paths;
    std::vector<int32_t> current;
    std::vector<char> on_path(n, 0);
    on_path[origin] = 1;
    std::function<void(int32_t)> visit = [&](int32_t v) {
        for (int32_t i = net.out_begin[v]; i < net.out_begin[v + 1]; ++i) {
            const int32_t e = net.out_links[i];
            const int32_t w = net.links[e].head;
            if (on_path[w]) continue;
            current.push_back(e);
            if (w == destination) {
                paths.push_back(current);
            } else {
                on_path[w] = 1;
                visit(w);
                on_path[w] = 0;
            }
            current.pop_back();
        }
    };
    visit(origin);
    return paths;
}

namespace {

// Euclidean projection onto { p >= 0, sum p = 1 }.
void project_simplex(std::vector<double>& p) {
    const size_t k = p.size();
    std::vector<double> u(p);
    std::sort(u.begin(), u.end(), std::greater<>());
    double running = 0.0;
    double tau = 0.0;
    size_t rho = 0;
    for (size_t j = 0; j < k; ++j) {
        running += u[j];
        const double trial = (running - 1.0) / static_cast<double>(j + 1);
        if (u[j] - trial > 0.0) {
            rho = j + 1;
            tau = trial;
        }
    }
    (void)rho;
    for (double& v : p) v = std::max(0.0, v - tau);
}

double portable_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

PrimalSolution primal_solve(const Network& net, const std::vector<TravelerType>& types,
                            const CostModel& cost, const Perturbation& f, uint64_t seed,
                            double tol, long max_iters) {
    cost.validate(types.size(), net.links.size());
    const int32_t m_links = net.num_links();
    const size_t W = types.size();
    const double theta_bar = W == 0 ? 0.0 : cost.theta_for(0);
    for (size_t w = 1; w < W; ++w)
        if (cost.theta_for(w) != theta_bar)
            throw std::invalid_argument("primal reference requires a uniform theta");

    std::map<std::pair<int32_t, int32_t>, std::vector<std::vector<int32_t>>> path_cache;
    std::vector<const std::vector<std::vector<int32_t>>*> paths(W);
    for (size_t w = 0; w < W; ++w) {
        const auto key = std::make_pair(types[w].origin, types[w].destination);
        auto it = path_cache.find(key);
        if (it == path_cache.end()) {
            auto enumerated = enumerate_paths(net, key.first, key.second);
            if (enumerated.empty())
                throw std::runtime_error("no path from node " +
                                         std::to_string(net.node_ids[key.first]) + " to node " +
                                         std::to_string(net.node_ids[key.second]));
            it = path_cache.emplace(key, std::move(enumerated)).first;
        }
        paths[w] = &it->second;
    }

    // Dirichlet(1) start on every path simplex.
    std::mt19937_64 rng(seed);
    std::vector<std::vector<double>> phi(W);
    for (size_t w = 0; w < W; ++w) {
        phi[w].resize(paths[w]->size());
        double total = 0.0;
        for (double& v : phi[w]) {
            v = -std::log(1.0 - portable_uniform(rng));
            total += v;
        }
        for (double& v : phi[w]) v /= total;
    }

    const auto scale_of = [&](int32_t e) {
        return cost.perturb_scale.empty() ? 1.0 : cost.perturb_scale[e];
    };
    std::vector<std::vector<double>> flows(W, std::vector<double>(m_links, 0.0));
    const auto flows_from = [&](const std::vector<std::vector<double>>& p,
                                std::vector<std::vector<double>>& x) {
        for (size_t w = 0; w < W; ++w) {
            std::fill(x[w].begin(), x[w].end(), 0.0);
            for (size_t j = 0; j < p[w].size(); ++j)
                for (int32_t e : (*paths[w])[j]) x[w][e] += p[w][j];
        }
    };

    flows_from(phi, flows);
    double z = primal_objective(net, types, cost, f, flows);

    std::vector<std::vector<double>> grad(W), trial(W), trial_flows(W,
                                                                    std::vector<double>(m_links));
    for (size_t w = 0; w < W; ++w) {
        grad[w].resize(phi[w].size());
        trial[w].resize(phi[w].size());
    }
    std::vector<double> aggregate(m_links), marginal(m_links);

    double step = 1.0;
    double residual = kInf;
    PrimalSolution out;
    long it = 0;
    for (; it < max_iters; ++it) {
        std::fill(aggregate.begin(), aggregate.end(), 0.0);
        for (size_t w = 0; w < W; ++w)
            for (int32_t e = 0; e < m_links; ++e) aggregate[e] += types[w].volume * flows[w][e];

        for (int32_t e = 0; e < m_links; ++e)
            marginal[e] = theta_bar * bpr_time(net.links[e], aggregate[e]);
        for (size_t w = 0; w < W; ++w) {
            const double q = types[w].volume;
            for (size_t j = 0; j < phi[w].size(); ++j) {
                double g = 0.0;
                for (int32_t e : (*paths[w])[j])
                    g += marginal[e] + scale_of(e) * f.deriv(flows[w][e]);
                grad[w][j] = q * g;
            }
        }

        // natural-map residual with a unit step on the per-unit gradient
        residual = 0.0;
        for (size_t w = 0; w < W; ++w) {
            trial[w] = phi[w];
            const double q = types[w].volume;
            for (size_t j = 0; j < trial[w].size(); ++j) trial[w][j] -= grad[w][j] / q;
            project_simplex(trial[w]);
            for (size_t j = 0; j < trial[w].size(); ++j)
                residual = std::max(residual, std::abs(trial[w][j] - phi[w][j]));
        }
        if (residual <= tol) {
            out.converged = true;
            break;
        }

        // projected gradient with sufficient decrease; near the optimum the
        // test lands inside objective roundoff, so it gets a noise floor and
        // the step only grows after a decrease that was actually resolvable
        const double noise = 1e-12 * (std::abs(z) + 1.0);
        while (true) {
            for (size_t w = 0; w < W; ++w) {
                for (size_t j = 0; j < phi[w].size(); ++j)
                    trial[w][j] = phi[w][j] - step * grad[w][j];
                project_simplex(trial[w]);
            }
            double gd = 0.0, dd = 0.0;
            for (size_t w = 0; w < W; ++w)
                for (size_t j = 0; j < phi[w].size(); ++j) {
                    const double d = trial[w][j] - phi[w][j];
                    gd += grad[w][j] * d;
                    dd += d * d;
                }
            flows_from(trial, trial_flows);
            const double z_trial = primal_objective(net, types, cost, f, trial_flows);
            const double pred = gd + dd / (2.0 * step);
            if (z_trial <= z + pred + noise) {
                phi.swap(trial);
                flows.swap(trial_flows);
                z = z_trial;
                if (pred < -10.0 * noise) step = std::min(step * 1.25, 1e6);
                break;
            }
            step *= 0.5;
            if (step < 1e-18) {  // no representable progress left
                it = max_iters;
                break;
            }
        }
        if (it == max_iters) break;
    }

    out.iterations = std::min(it, max_iters);
    out.station_residual = residual;
    out.objective = z;
    out.flows = std::move(flows);
    out.aggregate_flow.assign(m_links, 0.0);
    for (size_t w = 0; w < W; ++w)
        for (int32_t e = 0; e < m_links; ++e)
            out.aggregate_flow[e] += types[w].volume * out.flows[w][e];
    return out;
}

KktReport kkt_check(const Network& net, const Perturbation& f, std::span<const double> x,
                    std::span<const double> eta, std::span<const double> cost) {
    const int32_t m_links = net.num_links();
    if (x.size() != static_cast<size_t>(m_links) || cost.size() != static_cast<size_t>(m_links))
        throw std::invalid_argument("kkt_check: flow and cost sizes must match the link count");
    if (eta.size() != static_cast<size_t>(net.num_nodes()))
        throw std::invalid_argument("kkt_check: potential size must match the node count");

    KktReport report;
    for (int32_t e = 0; e < m_links; ++e) {
        const Link& link = net.links[e];
        double slack;
        if (eta[link.tail] < kInf && eta[link.head] < kInf)
            slack = cost[e] + f.deriv(std::max(x[e], 0.0)) + eta[link.head] - eta[link.tail];
        else
            slack = kInf;
        const double comp = std::min(std::max(x[e], 0.0), std::max(slack, 0.0));
        report.max_neg_flow = std::max(report.max_neg_flow, -x[e]);
        report.max_neg_slack = std::max(report.max_neg_slack, -slack);
        report.max_complementarity = std::max(report.max_complementarity, comp);
        const double violation = std::max({-x[e], -slack, comp});
        if (violation > report.max_violation) {
            report.max_violation = violation;
            report.worst_link = e;
        }
    }
    return report;
}

std::vector<double> eta_from_flows(const Network& net, const Perturbation& f,
                                   std::span<const double> x, std::span<const double> cost,
                                   int32_t destination) {
    const int32_t m_links = net.num_links();
    if (x.size() != static_cast<size_t>(m_links) || cost.size() != static_cast<size_t>(m_links))
        throw std::invalid_argument("eta_from_flows: flow and cost sizes must match the link count");
    std::vector<double> adjusted(m_links);
    for (int32_t e = 0; e < m_links; ++e)
        adjusted[e] = cost[e] + f.deriv(std::max(x[e], 0.0));
    return shortest_potentials(net, adjusted, destination);
}

bool positive_flow_acyclic(const Network& net, std::span<const double> x, double threshold) {
    const int32_t n = net.num_nodes();
    if (x.size() != static_cast<size_t>(net.num_links()))
        throw std::invalid_argument("positive_flow_acyclic: flow size must match the link count");
    // iterative three-color DFS over the links carrying flow
    std::vector<char> color(n, 0);
    std::vector<std::pair<int32_t, int32_t>> stack;  // node, out offset
    for (int32_t s = 0; s < n; ++s) {
        if (color[s] != 0) continue;
        color[s] = 1;
        stack.emplace_back(s, net.out_begin[s]);
        while (!stack.empty()) {
            auto& [v, i] = stack.back();
            if (i >= net.out_begin[v + 1]) {
                color[v] = 2;
                stack.pop_back();
                continue;
            }
            const int32_t e = net.out_links[i++];
            if (!(x[e] > threshold)) continue;
            const int32_t w = net.links[e].head;
            if (color[w] == 1) return false;
            if (color[w] == 0) {
                color[w] = 1;
                stack.emplace_back(w, net.out_begin[w]);
            }
        }
    }
    return true;
}

}  // namespace purc
