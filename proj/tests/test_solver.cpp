#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "doctest.h"
#include "purc/solver.hpp"
#include "test_util.hpp"

using namespace purc;

namespace {

// unit demand over two fixed-cost parallel links priced for an interior
// optimum at (0.8, 0.2); theta = 1 keeps the algebra plain
struct InteriorFixture {
    Network net = testutil::two_link_net(1.0, 1.0 + std::log(1.5));
    std::vector<TravelerType> types = testutil::one_type(0, 1);
    CostModel cost;
    InteriorFixture() { cost.theta = {1.0}; }
};

}  // namespace

TEST_CASE("variant names round-trip") {
    for (Variant v : {Variant::QnAgdStar, Variant::QnAgd, Variant::AgdStar, Variant::Agd})
        CHECK(variant_from_string(to_string(v)) == v);
    CHECK_THROWS_AS(variant_from_string("newton"), std::invalid_argument);
}

TEST_CASE("config validation") {
    SolverConfig cfg;
    cfg.gamma1 = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = SolverConfig{};
    cfg.alpha = 1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = SolverConfig{};
    cfg.max_iters = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = SolverConfig{};
    cfg.trace_every = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("interior two-link optimum to tight tolerance") {
    InteriorFixture fx;
    SolverConfig cfg;
    cfg.eps1 = 1e-8;
    cfg.eps2 = 1e-8;
    AssignmentResult r = solve(fx.net, fx.types, fx.cost, entropy_perturbation(), cfg);
    REQUIRE(r.converged);
    CHECK(r.status == SolveStatus::Converged);
    CHECK(std::abs(r.flows[0][0] - 0.8) <= 1e-6);
    CHECK(std::abs(r.flows[0][1] - 0.2) <= 1e-6);
    CHECK(r.eta[0][0] == doctest::Approx(1.0 + std::log(1.8)).epsilon(1e-5));
    CHECK(r.eta[0][1] == 0.0);
    CHECK(r.aggregate_flow[0] == r.flows[0][0]);
    CHECK(r.realized_time[0] == 1.0);  // fixed-cost link
    CHECK(r.r1 <= cfg.eps1);
    CHECK(r.r2 <= cfg.eps2);
}

TEST_CASE("corner optimum lands exactly on the vertex") {
    // the second route is more than ln 2 dearer, so the optimum saturates the
    // first: during the clipped phase the loading is exactly (1, 0)
    Network net = testutil::two_link_net(1.0, 2.0);
    CostModel cost;
    cost.theta = {1.0};
    SolverConfig cfg;
    AssignmentResult r = solve(net, testutil::one_type(0, 1), cost, entropy_perturbation(), cfg);
    REQUIRE(r.converged);
    CHECK(r.flows[0][0] == 1.0);
    CHECK(r.flows[0][1] == 0.0);
    CHECK(r.r1 == 0.0);
    CHECK(r.iterations < cfg.clip_iters);  // settles inside the clip window
}

TEST_CASE("single congested link settles at the BPR fixed point") {
    Network net = make_network({1, 2}, {testutil::bpr_link(0, 1, 1.0, 1.0)});
    CostModel cost;
    SolverConfig cfg;
    cfg.eps1 = 1e-10;
    cfg.eps2 = 1e-10;
    AssignmentResult r = solve(net, testutil::one_type(0, 1), cost, entropy_perturbation(), cfg);
    REQUIRE(r.converged);
    CHECK(r.flows[0][0] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(r.t_star[0] == doctest::Approx(1.15).epsilon(1e-8));       // t(1) = 1 + 0.15
    CHECK(r.realized_time[0] == doctest::Approx(1.15).epsilon(1e-8));
}

TEST_CASE("all variants reach the interior optimum") {
    InteriorFixture fx;
    for (Variant v : {Variant::QnAgdStar, Variant::QnAgd, Variant::AgdStar, Variant::Agd}) {
        SolverConfig cfg;
        cfg.variant = v;
        cfg.plain_step = 0.05;  // tiny instance tolerates a bigger plain step
        AssignmentResult r = solve(fx.net, fx.types, fx.cost, entropy_perturbation(), cfg);
        CHECK_MESSAGE(r.converged, to_string(v));
        CHECK(std::abs(r.flows[0][0] - 0.8) <= 1e-4);
    }
}

TEST_CASE("trace records both objectives and brackets the optimum") {
    InteriorFixture fx;
    SolverConfig cfg;
    cfg.eps1 = 1e-9;
    cfg.eps2 = 1e-9;
    AssignmentResult r = solve(fx.net, fx.types, fx.cost, entropy_perturbation(), cfg);
    REQUIRE(r.converged);
    REQUIRE(!r.trace.empty());
    CHECK(r.trace.front().iter == 0);
    CHECK(r.trace.back().iter == r.iterations);
    const double z_star = 1.3578948865981928;
    const TraceRow& last = r.trace.back();
    CHECK(last.z == doctest::Approx(z_star).epsilon(1e-8));
    CHECK(last.g == doctest::Approx(z_star).epsilon(1e-8));
}

TEST_CASE("trace stride still ends on the stopping iterate") {
    InteriorFixture fx;
    SolverConfig cfg;
    cfg.trace_every = 7;
    AssignmentResult r = solve(fx.net, fx.types, fx.cost, entropy_perturbation(), cfg);
    REQUIRE(r.converged);
    REQUIRE(r.trace.size() >= 2);
    for (size_t i = 0; i + 1 < r.trace.size(); ++i) CHECK(r.trace[i].iter == 7 * (long)i);
    CHECK(r.trace.back().iter == r.iterations);
}

TEST_CASE("iteration budget reports honestly") {
    InteriorFixture fx;
    SolverConfig cfg;
    cfg.max_iters = 3;
    cfg.eps1 = 1e-14;
    cfg.eps2 = 1e-14;
    AssignmentResult r = solve(fx.net, fx.types, fx.cost, entropy_perturbation(), cfg);
    CHECK_FALSE(r.converged);
    CHECK(r.status == SolveStatus::MaxIters);
    CHECK(r.iterations == 3);
    CHECK(r.message.find("3") != std::string::npos);
}

TEST_CASE("identical runs produce identical traces") {
    InteriorFixture fx;
    SolverConfig cfg;
    AssignmentResult a = solve(fx.net, fx.types, fx.cost, entropy_perturbation(), cfg);
    AssignmentResult b = solve(fx.net, fx.types, fx.cost, entropy_perturbation(), cfg);
    REQUIRE(a.trace.size() == b.trace.size());
    for (size_t i = 0; i < a.trace.size(); ++i) {
        CHECK(a.trace[i].r1 == b.trace[i].r1);
        CHECK(a.trace[i].r2 == b.trace[i].r2);
        CHECK(a.trace[i].z == b.trace[i].z);
        CHECK(a.trace[i].g == b.trace[i].g);
    }
    for (size_t e = 0; e < a.aggregate_flow.size(); ++e)
        CHECK(a.aggregate_flow[e] == b.aggregate_flow[e]);
}

TEST_CASE("thread count does not change the results") {
    // three types on a congested diamond, compared bitwise
    Network net = make_network(
        {1, 2, 3, 4},
        {testutil::bpr_link(0, 1, 1.0, 2.0), testutil::bpr_link(1, 3, 1.5, 2.0),
         testutil::bpr_link(0, 2, 1.2, 2.0), testutil::bpr_link(2, 3, 0.9, 2.0),
         testutil::bpr_link(1, 2, 0.4, 2.0)});
    std::vector<TravelerType> types;
    const std::vector<std::tuple<int, int, double>> ods = {{0, 3, 2.0}, {0, 2, 1.0}, {1, 3, 1.5}};
    for (auto [o, d, q] : ods) {
        TravelerType t;
        t.origin = o;
        t.destination = d;
        t.volume = q;
        types.push_back(t);
    }
    CostModel cost;
    SolverConfig cfg;
    cfg.threads = 1;
    AssignmentResult one = solve(net, types, cost, entropy_perturbation(), cfg);
    cfg.threads = 4;
    AssignmentResult four = solve(net, types, cost, entropy_perturbation(), cfg);
    REQUIRE(one.trace.size() == four.trace.size());
    for (size_t i = 0; i < one.trace.size(); ++i) {
        CHECK(one.trace[i].r1 == four.trace[i].r1);
        CHECK(one.trace[i].r2 == four.trace[i].r2);
    }
    REQUIRE(one.converged == four.converged);
    for (size_t w = 0; w < types.size(); ++w)
        for (size_t e = 0; e < one.flows[w].size(); ++e)
            CHECK(one.flows[w][e] == four.flows[w][e]);
}

TEST_CASE("disconnected demand is rejected up front") {
    Network net = make_network({1, 2, 3}, {testutil::fixed_link(0, 1, 1.0)});
    CostModel cost;
    SolverConfig cfg;
    CHECK_THROWS_AS(solve(net, testutil::one_type(1, 0), cost, entropy_perturbation(), cfg),
                    std::runtime_error);
}

TEST_CASE("bad traveler types are rejected") {
    Network net = testutil::two_link_net(1.0, 2.0);
    CostModel cost;
    SolverConfig cfg;
    CHECK_THROWS_AS(solve(net, testutil::one_type(0, 0), cost, entropy_perturbation(), cfg),
                    std::invalid_argument);
    CHECK_THROWS_AS(solve(net, testutil::one_type(0, 1, 0.0), cost, entropy_perturbation(), cfg),
                    std::invalid_argument);
    CHECK_THROWS_AS(solve(net, testutil::one_type(0, 5), cost, entropy_perturbation(), cfg),
                    std::invalid_argument);
}
