#include <cstdio>
#include <fstream>
#include <string>

#include "doctest.h"
#include "purc/tntp.hpp"

using namespace purc;

namespace {

const std::string kDataDir = PURC_TEST_DATA_DIR;

std::string temp_path(const std::string& name) {
    return std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") + "/" + name;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

}  // namespace

TEST_CASE("parses the bundled Sioux Falls network") {
    Network net = parse_tntp_network(kDataDir + "/SiouxFalls_net.tntp");
    CHECK(net.num_nodes() == 24);
    CHECK(net.num_links() == 76);
    CHECK(net.node_ids.front() == 1);
    CHECK(net.node_ids.back() == 24);

    const Link& first = net.links.front();
    CHECK(net.node_ids[first.tail] == 1);
    CHECK(net.node_ids[first.head] == 2);
    CHECK(first.capacity == 25900.2);
    CHECK(first.free_flow_time == 6.0);
    CHECK(first.b == 0.15);
    CHECK(first.power == 4.0);
}

TEST_CASE("parses the bundled Sioux Falls trips") {
    Network net = parse_tntp_network(kDataDir + "/SiouxFalls_net.tntp");
    ODMatrix od = parse_tntp_trips(kDataDir + "/SiouxFalls_trips.tntp", net);
    CHECK(od.total() == doctest::Approx(360600.0).epsilon(1e-12));
    CHECK(od.entries.size() == 528);  // 24 * 23 pairs minus 24 zero entries
    const ODEntry& first = od.entries.front();
    CHECK(net.node_ids[first.origin] == 1);
    CHECK(net.node_ids[first.destination] == 2);
    CHECK(first.volume == 100.0);
    for (const ODEntry& e : od.entries) {
        CHECK(e.origin != e.destination);
        CHECK(e.volume > 0.0);
    }
}

TEST_CASE("network and trips writers round-trip exactly") {
    Network net = parse_tntp_network(kDataDir + "/SiouxFalls_net.tntp");
    ODMatrix od = parse_tntp_trips(kDataDir + "/SiouxFalls_trips.tntp", net);

    const std::string net_path = temp_path("purc_roundtrip_net.tntp");
    const std::string trips_path = temp_path("purc_roundtrip_trips.tntp");
    write_tntp_network(net_path, net);
    write_tntp_trips(trips_path, net, od);

    Network net2 = parse_tntp_network(net_path);
    REQUIRE(net2.num_nodes() == net.num_nodes());
    REQUIRE(net2.num_links() == net.num_links());
    for (int32_t e = 0; e < net.num_links(); ++e) {
        CHECK(net2.links[e].tail == net.links[e].tail);
        CHECK(net2.links[e].head == net.links[e].head);
        CHECK(net2.links[e].capacity == net.links[e].capacity);
        CHECK(net2.links[e].free_flow_time == net.links[e].free_flow_time);
        CHECK(net2.links[e].b == net.links[e].b);
        CHECK(net2.links[e].power == net.links[e].power);
    }
    ODMatrix od2 = parse_tntp_trips(trips_path, net2);
    REQUIRE(od2.entries.size() == od.entries.size());
    for (size_t i = 0; i < od.entries.size(); ++i) {
        CHECK(od2.entries[i].origin == od.entries[i].origin);
        CHECK(od2.entries[i].destination == od.entries[i].destination);
        CHECK(od2.entries[i].volume == od.entries[i].volume);
    }
    std::remove(net_path.c_str());
    std::remove(trips_path.c_str());
}

TEST_CASE("parser accepts comments and unknown metadata") {
    const std::string path = temp_path("purc_tiny_net.tntp");
    write_text(path,
               "<NUMBER OF NODES> 2\n"
               "<NUMBER OF LINKS> 1\n"
               "<ORIGINAL HEADER> something\n"
               "<END OF METADATA>\n"
               "~ tail head capacity length fft b power speed toll type ;\n"
               "1 2 1000 1 1 0.15 4 0 0 1 ;\n");
    Network net = parse_tntp_network(path);
    CHECK(net.num_nodes() == 2);
    CHECK(net.num_links() == 1);
    std::remove(path.c_str());
}

TEST_CASE("parser errors carry the source line") {
    const std::string path = temp_path("purc_bad_net.tntp");

    write_text(path,
               "<NUMBER OF NODES> 2\n"
               "<NUMBER OF LINKS> 1\n"
               "1 2 1000 1 1 0.15 4 ;\n");  // too few fields
    CHECK_THROWS_AS(parse_tntp_network(path), ParseError);
    try {
        parse_tntp_network(path);
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }

    write_text(path,
               "<NUMBER OF NODES> 2\n"
               "<NUMBER OF LINKS> 1\n"
               "1 5 1000 1 1 0.15 4 0 0 1 ;\n");  // node 5 out of range
    CHECK_THROWS_AS(parse_tntp_network(path), ParseError);

    write_text(path,
               "<NUMBER OF NODES> 2\n"
               "<NUMBER OF LINKS> 2\n"
               "1 2 1000 1 1 0.15 4 0 0 1 ;\n");  // missing second link
    CHECK_THROWS_AS(parse_tntp_network(path), ParseError);

    write_text(path, "<NUMBER OF NODES 2\n");  // unterminated tag
    CHECK_THROWS_AS(parse_tntp_network(path), ParseError);

    CHECK_THROWS_AS(parse_tntp_network(temp_path("purc_does_not_exist.tntp")), ParseError);
    std::remove(path.c_str());
}

TEST_CASE("trips parser checks the declared total") {
    const std::string net_path = temp_path("purc_tiny_net2.tntp");
    write_text(net_path,
               "<NUMBER OF NODES> 2\n"
               "<NUMBER OF LINKS> 2\n"
               "1 2 1000 1 1 0.15 4 0 0 1 ;\n"
               "2 1 1000 1 1 0.15 4 0 0 1 ;\n");
    Network net = parse_tntp_network(net_path);

    const std::string trips_path = temp_path("purc_tiny_trips.tntp");
    write_text(trips_path,
               "<NUMBER OF ZONES> 2\n"
               "<TOTAL OD FLOW> 7.0\n"
               "Origin 1\n"
               "    2 :    3.0;\n"
               "Origin 2\n"
               "    1 :    4.0;\n");
    ODMatrix od = parse_tntp_trips(trips_path, net);
    CHECK(od.total() == 7.0);
    REQUIRE(od.entries.size() == 2);

    write_text(trips_path,
               "<NUMBER OF ZONES> 2\n"
               "<TOTAL OD FLOW> 9.0\n"
               "Origin 1\n"
               "    2 :    3.0;\n");
    CHECK_THROWS_AS(parse_tntp_trips(trips_path, net), ParseError);

    write_text(trips_path,
               "<NUMBER OF ZONES> 2\n"
               "Origin 1\n"
               "    7 :    3.0;\n");  // zone out of range
    CHECK_THROWS_AS(parse_tntp_trips(trips_path, net), ParseError);

    std::remove(net_path.c_str());
    std::remove(trips_path.c_str());
}
