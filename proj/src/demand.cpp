#include "purc/demand.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace purc {

double ODMatrix::total() const {
    double q = 0.0;
    for (const ODEntry& e : entries) q += e.volume;
    return q;
}

ODMatrix gravity_demand(const Network& net, double q_per_origin) {
    if (!(q_per_origin > 0.0)) throw std::invalid_argument("gravity demand needs q > 0");
    const int32_t n = net.num_nodes();
    if (n < 2) throw std::invalid_argument("gravity demand needs at least two nodes");

    std::vector<double> fft(net.links.size());
    for (int32_t e = 0; e < net.num_links(); ++e) fft[e] = net.links[e].free_flow_time;

    ODMatrix od;
    od.entries.reserve(static_cast<size_t>(n) * (n - 1));
    std::vector<double> weight(n);
    for (int32_t o = 0; o < n; ++o) {
        std::vector<double> t = shortest_times_from(net, fft, o);
        double tmax = 0.0;
        for (int32_t d = 0; d < n; ++d) {
            if (d == o) continue;
            if (t[d] == kInf)
                throw std::invalid_argument("gravity demand: node " +
                                            std::to_string(net.node_ids[d]) +
                                            " unreachable from node " +
                                            std::to_string(net.node_ids[o]));
            tmax = std::max(tmax, t[d]);
        }
        double denom = 0.0;
        for (int32_t d = 0; d < n; ++d) {
            weight[d] = d == o ? 0.0 : std::exp(t[d] - tmax);
            denom += weight[d];
        }
        for (int32_t d = 0; d < n; ++d)
            if (d != o) od.entries.push_back({o, d, q_per_origin * weight[d] / denom});
    }
    return od;
}

ODMatrix scale_demand(ODMatrix od, double factor) {
    if (!(factor > 0.0)) throw std::invalid_argument("demand scale factor must be > 0");
    for (ODEntry& e : od.entries) e.volume *= factor;
    return od;
}

std::vector<TravelerType> to_traveler_types(const ODMatrix& od) {
    std::vector<TravelerType> types;
    types.reserve(od.entries.size());
    for (const ODEntry& e : od.entries) {
        if (e.volume < 0.0) throw std::invalid_argument("negative OD volume");
        if (e.volume == 0.0) continue;
        if (e.origin == e.destination) throw std::invalid_argument("OD entry with origin == destination");
        types.push_back({e.origin, e.destination, e.volume});
    }
    return types;
}

}  // namespace purc
