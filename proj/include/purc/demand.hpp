#pragma once

#include <cstdint>
#include <vector>

#include "purc/network.hpp"

namespace purc {

struct ODEntry {
    int32_t origin = -1;       // dense node index
    int32_t destination = -1;
    double volume = 0.0;
};

struct ODMatrix {
    std::vector<ODEntry> entries;
    double total() const;
};

// One traveler type per positive OD pair; volumes q^w > 0.
struct TravelerType {
    int32_t origin = -1;
    int32_t destination = -1;
    double volume = 0.0;
};

// Every node is both origin and destination. Trips from o to d are
// proportional to exp(t_od) over free-flow shortest times, each origin
// emitting q trips in total. Throws if some pair is disconnected or q <= 0.
ODMatrix gravity_demand(const Network& net, double q_per_origin);

// Multiplies all volumes by factor > 0.
ODMatrix scale_demand(ODMatrix od, double factor);

// Drops zero-volume entries, keeps input order. Throws std::invalid_argument
// on negative volumes or origin == destination.
std::vector<TravelerType> to_traveler_types(const ODMatrix& od);

}  // namespace purc
