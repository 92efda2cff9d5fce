#include "purc/network.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <string>

namespace purc {

double bpr_time(const Link& link, double flow) {
    if (link.b == 0.0) return link.free_flow_time;
    return link.free_flow_time * (1.0 + link.b * std::pow(flow / link.capacity, link.power));
}

double bpr_time_deriv(const Link& link, double flow) {
    if (link.b == 0.0) return 0.0;
    return link.free_flow_time * link.b * link.power *
           std::pow(flow / link.capacity, link.power - 1.0) / link.capacity;
}

double bpr_time_integral(const Link& link, double flow) {
    if (link.b == 0.0) return link.free_flow_time * flow;
    const double p = link.power;
    return link.free_flow_time *
           (flow + link.b * flow * std::pow(flow / link.capacity, p) / (p + 1.0));
}

void Network::finalize() {
    const int32_t n = num_nodes();
    for (size_t e = 0; e < links.size(); ++e) {
        const Link& l = links[e];
        if (l.tail < 0 || l.tail >= n || l.head < 0 || l.head >= n)
            throw std::invalid_argument("link " + std::to_string(e) + " references a missing node");
        if (l.tail == l.head)
            throw std::invalid_argument("link " + std::to_string(e) + " is a self loop");
        if (!(l.free_flow_time > 0.0))
            throw std::invalid_argument("link " + std::to_string(e) + " needs free_flow_time > 0");
        if (!(l.capacity > 0.0))
            throw std::invalid_argument("link " + std::to_string(e) + " needs capacity > 0");
        if (l.b < 0.0 || !(l.power > 0.0))
            throw std::invalid_argument("link " + std::to_string(e) + " has bad BPR parameters");
    }

    out_begin.assign(n + 1, 0);
    in_begin.assign(n + 1, 0);
    for (const Link& l : links) {
        ++out_begin[l.tail + 1];
        ++in_begin[l.head + 1];
    }
    for (int32_t v = 0; v < n; ++v) {
        out_begin[v + 1] += out_begin[v];
        in_begin[v + 1] += in_begin[v];
    }
    out_links.assign(links.size(), 0);
    in_links.assign(links.size(), 0);
    std::vector<int32_t> ofill(out_begin.begin(), out_begin.end() - 1);
    std::vector<int32_t> ifill(in_begin.begin(), in_begin.end() - 1);
    for (int32_t e = 0; e < num_links(); ++e) {
        out_links[ofill[links[e].tail]++] = e;
        in_links[ifill[links[e].head]++] = e;
    }
}

Network make_network(std::vector<int64_t> node_ids, std::vector<Link> links) {
    Network net;
    net.node_ids = std::move(node_ids);
    net.links = std::move(links);
    net.finalize();
    return net;
}

Network generate_grid(const GridSpec& spec) {
    if (spec.k < 1) throw std::invalid_argument("grid size k must be >= 1");
    const int side = spec.k + 1;
    Network net;
    net.node_ids.resize(static_cast<size_t>(side) * side);
    for (size_t i = 0; i < net.node_ids.size(); ++i) net.node_ids[i] = static_cast<int64_t>(i) + 1;

    auto at = [side](int r, int c) { return static_cast<int32_t>(r * side + c); };
    auto add_both = [&](int32_t a, int32_t b) {
        Link l;
        l.capacity = spec.capacity;
        l.length = spec.length;
        l.free_flow_time = spec.free_flow_time;
        l.b = spec.b;
        l.power = spec.power;
        l.tail = a;
        l.head = b;
        net.links.push_back(l);
        std::swap(l.tail, l.head);
        net.links.push_back(l);
    };
    for (int r = 0; r < side; ++r)
        for (int c = 0; c < side; ++c) {
            if (c + 1 < side) add_both(at(r, c), at(r, c + 1));
            if (r + 1 < side) add_both(at(r, c), at(r + 1, c));
        }
    net.finalize();
    return net;
}

namespace {

// Label-setting over CSR adjacency; direction picks out/in lists. Ties pop
// the smallest node index so path trees are reproducible.
std::vector<double> dijkstra(const Network& net, const std::vector<double>& link_cost,
                             int32_t source, bool reverse, std::vector<int32_t>* via_link) {
    const int32_t n = net.num_nodes();
    if (source < 0 || source >= n) throw std::invalid_argument("node index out of range");
    if (link_cost.size() != net.links.size())
        throw std::invalid_argument("link cost vector has wrong length");
    for (double c : link_cost)
        if (!(c > 0.0)) throw std::invalid_argument("shortest paths need positive link costs");

    std::vector<double> dist(n, kInf);
    if (via_link) via_link->assign(n, -1);
    std::vector<char> settled(n, 0);
    using Item = std::pair<double, int32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    dist[source] = 0.0;
    heap.emplace(0.0, source);
    while (!heap.empty()) {
        auto [d, v] = heap.top();
        heap.pop();
        if (settled[v]) continue;
        settled[v] = 1;
        const auto& begin = reverse ? net.in_begin : net.out_begin;
        const auto& list = reverse ? net.in_links : net.out_links;
        for (int32_t i = begin[v]; i < begin[v + 1]; ++i) {
            const int32_t e = list[i];
            const int32_t u = reverse ? net.links[e].tail : net.links[e].head;
            const double nd = d + link_cost[e];
            if (nd < dist[u]) {
                dist[u] = nd;
                if (via_link) (*via_link)[u] = e;
                heap.emplace(nd, u);
            }
        }
    }
    return dist;
}

}  // namespace

std::vector<double> shortest_potentials(const Network& net, const std::vector<double>& link_cost,
                                        int32_t destination, std::vector<int32_t>* next_link) {
    return dijkstra(net, link_cost, destination, /*reverse=*/true, next_link);
}

std::vector<double> shortest_times_from(const Network& net, const std::vector<double>& link_cost,
                                        int32_t origin) {
    return dijkstra(net, link_cost, origin, /*reverse=*/false, nullptr);
}

ValidationReport validate_network(const Network& net,
                                  const std::vector<std::pair<int32_t, int32_t>>& od_pairs) {
    const int32_t n = net.num_nodes();
    ValidationReport report;
    for (int32_t v = 0; v < n; ++v)
        if (net.out_begin[v] == net.out_begin[v + 1] && net.in_begin[v] == net.in_begin[v + 1])
            report.isolated_nodes.push_back(v);

    // forward reachability per distinct origin
    std::vector<double> unit(net.links.size(), 1.0);
    std::vector<std::vector<char>> reach_cache;
    std::vector<int32_t> cached_origin;
    auto reachable = [&](int32_t o, int32_t d) {
        for (size_t i = 0; i < cached_origin.size(); ++i)
            if (cached_origin[i] == o) return reach_cache[i][d] != 0;
        std::vector<double> dist = shortest_times_from(net, unit, o);
        std::vector<char> r(n, 0);
        for (int32_t v = 0; v < n; ++v) r[v] = dist[v] < kInf ? 1 : 0;
        cached_origin.push_back(o);
        reach_cache.push_back(std::move(r));
        return reach_cache.back()[d] != 0;
    };
    for (auto [o, d] : od_pairs)
        if (!reachable(o, d)) report.unreachable.emplace_back(o, d);

    if (n > 0) {
        std::vector<double> fwd = shortest_times_from(net, unit, 0);
        std::vector<double> bwd = shortest_potentials(net, unit, 0);
        report.strongly_connected = true;
        for (int32_t v = 0; v < n; ++v)
            if (fwd[v] == kInf || bwd[v] == kInf) {
                report.strongly_connected = false;
                break;
            }
    }
    return report;
}

}  // namespace purc
