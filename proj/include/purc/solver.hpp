#pragma once

#include <string>
#include <vector>

#include "purc/purc.hpp"

namespace purc {

enum class Variant {
    QnAgdStar,  // scaled gradient, m/(m+alpha) momentum
    QnAgd,      // scaled gradient, Nesterov r-sequence momentum
    AgdStar,    // raw gradient * plain_step, m/(m+alpha) momentum
    Agd,        // raw gradient * plain_step, r-sequence momentum
};

Variant variant_from_string(const std::string& s);
const char* to_string(Variant v);

struct SolverConfig {
    Variant variant = Variant::QnAgdStar;
    double gamma1 = 0.5;   // potential step
    double gamma2 = 1.0;   // time step damping
    double alpha = 10.0;   // momentum divisor, > 1
    double plain_step = 1e-4;
    double eps1 = 1e-5;    // feasibility tolerance
    double eps2 = 1e-5;    // time fixed-point tolerance
    int clip_iters = 100;  // iterations with flows capped at 1
    long max_iters = 100000;
    int trace_every = 1;
    int threads = 0;       // 0: PURC_THREADS env or library default
    bool record_objectives = true;

    void validate() const;  // throws std::invalid_argument
};

struct TraceRow {
    long iter = 0;
    double r1 = 0.0, r2 = 0.0;
    double z = 0.0, g = 0.0;  // primal / dual objective (when recorded)
    double wall_ms = 0.0;
};

enum class SolveStatus { Converged, MaxIters, Diverged };

struct AssignmentResult {
    SolveStatus status = SolveStatus::MaxIters;
    bool converged = false;
    long iterations = 0;
    double r1 = kInf, r2 = kInf;

    std::vector<std::vector<double>> flows;  // unit flows per type
    std::vector<double> aggregate_flow;      // X = sum q^w x^w
    std::vector<double> t_star;              // converged time guesses
    std::vector<double> realized_time;       // t(X)
    std::vector<std::vector<double>> eta;    // potentials that produced flows

    std::vector<TraceRow> trace;
    long clamped = 0;       // exponent clamps during loading
    long newton_skips = 0;  // links skipped for a vanishing time-update slope
    int threads_used = 1;   // resolved from config / PURC_THREADS
    double wall_ms = 0.0;
    std::string message;
};

// Dual ascent on node potentials with a quasi-Newton diagonal scaling, an
// accelerated momentum sequence and a damped Newton fixed-point update of the
// travel-time guesses. Destination potentials stay fixed at zero.
AssignmentResult solve(const Network& net, const std::vector<TravelerType>& types,
                       const CostModel& cost, const Perturbation& f,
                       const SolverConfig& cfg);

}  // namespace purc
