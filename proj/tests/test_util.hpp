#pragma once

#include <vector>

#include "purc/demand.hpp"
#include "purc/network.hpp"

namespace testutil {

// Fixed-cost link: b = 0 keeps the BPR time at free_flow_time for any flow.
inline purc::Link fixed_link(int32_t tail, int32_t head, double time) {
    purc::Link l;
    l.tail = tail;
    l.head = head;
    l.capacity = 1.0;
    l.length = time;
    l.free_flow_time = time;
    l.b = 0.0;
    return l;
}

inline purc::Link bpr_link(int32_t tail, int32_t head, double t0, double capacity,
                           double b = 0.15, double power = 4.0) {
    purc::Link l;
    l.tail = tail;
    l.head = head;
    l.capacity = capacity;
    l.length = t0;
    l.free_flow_time = t0;
    l.b = b;
    l.power = power;
    return l;
}

// Two parallel fixed-cost links from node 1 to node 2.
inline purc::Network two_link_net(double t1, double t2) {
    return purc::make_network({1, 2}, {fixed_link(0, 1, t1), fixed_link(0, 1, t2)});
}

// 1 -> {2, 3} -> 4 with fixed costs; two routes of lengths a1+a2 and b1+b2.
inline purc::Network diamond_net(double a1, double a2, double b1, double b2) {
    return purc::make_network({1, 2, 3, 4}, {fixed_link(0, 1, a1), fixed_link(1, 3, a2),
                                             fixed_link(0, 2, b1), fixed_link(2, 3, b2)});
}

inline std::vector<purc::TravelerType> one_type(int32_t origin, int32_t destination,
                                                double volume = 1.0) {
    purc::TravelerType t;
    t.origin = origin;
    t.destination = destination;
    t.volume = volume;
    return {t};
}

}  // namespace testutil
