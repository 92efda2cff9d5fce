#include "purc/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace purc {

Variant variant_from_string(const std::string& s) {
    if (s == "qn-agd-star") return Variant::QnAgdStar;
    if (s == "qn-agd") return Variant::QnAgd;
    if (s == "agd-star") return Variant::AgdStar;
    if (s == "agd") return Variant::Agd;
    throw std::invalid_argument("unknown variant '" + s +
                                "' (expected qn-agd-star, qn-agd, agd-star or agd)");
}

const char* to_string(Variant v) {
    switch (v) {
        case Variant::QnAgdStar: return "qn-agd-star";
        case Variant::QnAgd: return "qn-agd";
        case Variant::AgdStar: return "agd-star";
        case Variant::Agd: return "agd";
    }
    return "?";
}

void SolverConfig::validate() const {
    if (!(gamma1 > 0.0)) throw std::invalid_argument("gamma1 must be > 0");
    if (!(gamma2 > 0.0)) throw std::invalid_argument("gamma2 must be > 0");
    if (!(alpha > 1.0)) throw std::invalid_argument("alpha must be > 1");
    if (!(plain_step > 0.0)) throw std::invalid_argument("plain_step must be > 0");
    if (!(eps1 > 0.0) || !(eps2 > 0.0)) throw std::invalid_argument("tolerances must be > 0");
    if (clip_iters < 0) throw std::invalid_argument("clip_iters must be >= 0");
    if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
    if (trace_every < 1) throw std::invalid_argument("trace_every must be >= 1");
    if (threads < 0) throw std::invalid_argument("threads must be >= 0");
}

namespace {

int resolve_threads(int configured) {
    int n = configured;
    if (n == 0) {
        if (const char* env = std::getenv("PURC_THREADS")) {
            char* end = nullptr;
            long v = std::strtol(env, &end, 10);
            if (end != env && *end == '\0' && v > 0) n = static_cast<int>(v);
        }
    }
#ifdef _OPENMP
    if (n == 0) n = omp_get_max_threads();
#else
    n = 1;
#endif
    return std::max(1, n);
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

constexpr int kGuardWindow = 500;  // divergence look-back
constexpr double kGuardGrowth = 10.0;

}  // namespace

AssignmentResult solve(const Network& net, const std::vector<TravelerType>& types,
                       const CostModel& cost, const Perturbation& f, const SolverConfig& cfg) {
    cfg.validate();
    cost.validate(types.size(), net.links.size());
    const int32_t n = net.num_nodes();
    const int32_t m_links = net.num_links();
    const size_t W = types.size();
    for (const TravelerType& t : types) {
        if (t.origin < 0 || t.origin >= n || t.destination < 0 || t.destination >= n)
            throw std::invalid_argument("traveler type references a missing node");
        if (t.origin == t.destination)
            throw std::invalid_argument("traveler type with origin == destination");
        if (!(t.volume > 0.0)) throw std::invalid_argument("traveler type volume must be > 0");
    }
    const int threads = resolve_threads(cfg.threads);
    const auto start = std::chrono::steady_clock::now();

    // All-or-nothing start: free-flow shortest paths fix the first time
    // guesses, and the potentials are shortest path costs under those times.
    std::vector<double> fft(m_links);
    for (int32_t e = 0; e < m_links; ++e) fft[e] = net.links[e].free_flow_time;

    std::map<int32_t, std::vector<int32_t>> aon_next;
    for (const TravelerType& t : types)
        if (!aon_next.count(t.destination)) {
            std::vector<int32_t> next;
            shortest_potentials(net, fft, t.destination, &next);
            aon_next.emplace(t.destination, std::move(next));
        }

    std::vector<double> aggregate(m_links, 0.0);
    for (const TravelerType& t : types) {
        const std::vector<int32_t>& next = aon_next.at(t.destination);
        int32_t v = t.origin;
        int32_t hops = 0;
        while (v != t.destination) {
            const int32_t e = next[v];
            if (e < 0 || ++hops > n)
                throw std::runtime_error("no path from node " +
                                         std::to_string(net.node_ids[t.origin]) + " to node " +
                                         std::to_string(net.node_ids[t.destination]));
            aggregate[e] += t.volume;
            v = net.links[e].head;
        }
    }

    std::vector<double> t_star = link_times(net, aggregate);

    std::map<int32_t, std::vector<double>> unit_potentials;  // per destination, theta = 1
    for (const auto& [d, unused] : aon_next)
        unit_potentials.emplace(d, shortest_potentials(net, t_star, d));

    std::vector<std::vector<double>> eta(W), eta_tilde(W);
    for (size_t w = 0; w < W; ++w) {
        const double theta = cost.theta_for(w);
        const std::vector<double>& base = unit_potentials.at(types[w].destination);
        eta[w].resize(n);
        for (int32_t v = 0; v < n; ++v) eta[w][v] = theta * base[v];
        eta_tilde[w] = eta[w];
    }

    std::vector<std::vector<double>> flows(W, std::vector<double>(m_links, 0.0));
    std::vector<double> newton_slope(m_links), t_next(m_links);
    std::vector<double> r1_ring(kGuardWindow, 0.0);

    AssignmentResult result;
    const bool scaled = cfg.variant == Variant::QnAgdStar || cfg.variant == Variant::QnAgd;
    const bool r_momentum = cfg.variant == Variant::QnAgd || cfg.variant == Variant::Agd;
    const bool objectives = cfg.record_objectives && cost.uniform();
    double r_seq = 1.0;
    long clamped = 0;
    long newton_skips = 0;
    bool nonfinite = false;

    long last_trace_iter = -1;
    auto emit_trace = [&](long iter, double r1, double r2) {
        TraceRow row;
        row.iter = iter;
        row.r1 = r1;
        row.r2 = r2;
        if (objectives) {
            row.z = primal_objective(net, types, cost, f, flows);
            row.g = dual_objective(net, types, cost, f, eta, t_star, DualMode::Full);
        } else {
            row.z = std::numeric_limits<double>::quiet_NaN();
            row.g = row.z;
        }
        row.wall_ms = elapsed_ms(start);
        result.trace.push_back(row);
        last_trace_iter = iter;
    };

    long m = 0;
    bool stopped = false;
    for (; m < cfg.max_iters; ++m) {
        const bool clip = m < cfg.clip_iters;

        // flows from the closed-form loading at c^w = theta^w * t_star
        long clamped_round = 0;
#ifdef _OPENMP
#pragma omp parallel num_threads(threads) reduction(+ : clamped_round)
#endif
        {
            std::vector<double> c(m_links);
            LoadStats stats;
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
            for (int64_t w = 0; w < static_cast<int64_t>(W); ++w) {
                const double theta = cost.theta_for(w);
                for (int32_t e = 0; e < m_links; ++e) c[e] = theta * t_star[e];
                load_type_flows(net, f, eta[w], c, clip, flows[w], &stats, cost.perturb_scale);
            }
            clamped_round += stats.clamped;
        }
        clamped += clamped_round;

        const double r1 = feasibility_residual(net, types, flows);
        aggregate = aggregate_flows(net, types, flows);

        // damped Newton step on the time guesses; the slope includes the flow
        // response of every type at its loading point
        std::fill(newton_slope.begin(), newton_slope.end(), 0.0);
        for (size_t w = 0; w < W; ++w) {
            const double qtheta = types[w].volume * cost.theta_for(w);
            const std::vector<double>& x = flows[w];
            for (int32_t e = 0; e < m_links; ++e)
                if (x[e] > 0.0) {
                    const double s = cost.perturb_scale.empty() ? 1.0 : cost.perturb_scale[e];
                    newton_slope[e] += qtheta * f.hessian_bound(x[e]) / s;
                }
        }
        double r2 = 0.0;
        for (int32_t e = 0; e < m_links; ++e) {
            const double t_now = bpr_time(net.links[e], aggregate[e]);
            const double u = t_now - t_star[e];
            const double du = -bpr_time_deriv(net.links[e], aggregate[e]) * newton_slope[e] - 1.0;
            if (std::abs(du) < 1e-12) {
                ++newton_skips;
                t_next[e] = t_star[e];
            } else {
                t_next[e] = std::max(net.links[e].free_flow_time, t_star[e] - cfg.gamma2 * u / du);
            }
            r2 += std::abs(t_now - t_next[e]);
        }
        if (m_links > 0) r2 /= m_links;

        if (m % cfg.trace_every == 0) emit_trace(m, r1, r2);
        result.r1 = r1;
        result.r2 = r2;

        if (!std::isfinite(r1) || !std::isfinite(r2)) {
            result.status = SolveStatus::Diverged;
            result.message = "non-finite residuals at iteration " + std::to_string(m);
            stopped = true;
        } else if (r1 <= cfg.eps1 && r2 <= cfg.eps2) {
            result.status = SolveStatus::Converged;
            result.converged = true;
            stopped = true;
        } else if (m >= kGuardWindow && r1 > kGuardGrowth * r1_ring[m % kGuardWindow]) {
            result.status = SolveStatus::Diverged;
            result.message = "feasibility residual grew more than 10x over " +
                             std::to_string(kGuardWindow) + " iterations";
            stopped = true;
        }
        if (stopped) {
            if (last_trace_iter != m) emit_trace(m, r1, r2);
            t_star = t_next;
            break;
        }
        r1_ring[m % kGuardWindow] = r1;

        // momentum coefficient for this round
        double coeff;
        if (r_momentum) {
            const double r_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * r_seq * r_seq));
            coeff = (r_seq - 1.0) / r_next;
            r_seq = r_next;
        } else {
            coeff = static_cast<double>(m) / (static_cast<double>(m) + cfg.alpha);
        }

        // ascent step on the potentials; destinations stay pinned at zero
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(threads)
#endif
        for (int64_t w = 0; w < static_cast<int64_t>(W); ++w) {
            const TravelerType& type = types[w];
            const std::vector<double>& x = flows[w];
            std::vector<double>& ew = eta[w];
            std::vector<double>& tw = eta_tilde[w];
            for (int32_t v = 0; v < n; ++v) {
                if (v == type.destination) continue;
                if (!(ew[v] < kInf)) continue;  // never reaches the destination
                double step;
                if (scaled) {
                    step = cfg.gamma1 * scaled_gradient_eta(net, f, x, v, type.origin,
                                                            type.destination, cost.perturb_scale);
                } else {
                    step = cfg.plain_step * type.volume *
                           node_imbalance(net, x, v, type.origin, type.destination);
                }
                const double tilde_next = ew[v] + step;
                ew[v] = tilde_next + coeff * (tilde_next - tw[v]);
                tw[v] = tilde_next;
                if (!std::isfinite(ew[v])) nonfinite = true;
            }
        }
        if (nonfinite) {
            result.status = SolveStatus::Diverged;
            result.message = "non-finite potential update at iteration " + std::to_string(m);
            t_star = t_next;
            stopped = true;
            break;
        }

        std::swap(t_star, t_next);
    }

    if (!stopped) {
        // out of iterations: reload so flows and potentials agree, then report
        result.status = SolveStatus::MaxIters;
        result.message = "not converged after " + std::to_string(cfg.max_iters) + " iterations";
        LoadStats stats;
        std::vector<double> c(m_links);
        for (size_t w = 0; w < W; ++w) {
            const double theta = cost.theta_for(w);
            for (int32_t e = 0; e < m_links; ++e) c[e] = theta * t_star[e];
            load_type_flows(net, f, eta[w], c, /*clip=*/false, flows[w], &stats,
                            cost.perturb_scale);
        }
        clamped += stats.clamped;
        result.r1 = feasibility_residual(net, types, flows);
        aggregate = aggregate_flows(net, types, flows);
        result.r2 = time_residual(net, aggregate, t_star);
        emit_trace(cfg.max_iters, result.r1, result.r2);
    }

    result.iterations = std::min(m, cfg.max_iters);
    result.flows = std::move(flows);
    result.aggregate_flow = std::move(aggregate);
    result.realized_time = link_times(net, result.aggregate_flow);
    result.t_star = std::move(t_star);
    result.eta = std::move(eta);
    result.clamped = clamped;
    result.newton_skips = newton_skips;
    result.threads_used = threads;
    result.wall_ms = elapsed_ms(start);
    return result;
}

}  // namespace purc
