#include "purc/tntp.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace purc {

ParseError::ParseError(const std::string& path, int line, const std::string& what)
    : std::runtime_error(path + ":" + std::to_string(line) + ": " + what), line_(line) {}

namespace {

std::string strip_comment(const std::string& line) {
    auto pos = line.find('~');
    return pos == std::string::npos ? line : line.substr(0, pos);
}

bool blank(const std::string& s) {
    return s.find_first_not_of(" \t\r\n") == std::string::npos;
}

std::vector<std::string> tokens(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string t;
    while (in >> t) out.push_back(t);
    return out;
}

double parse_number(const std::string& path, int line, const std::string& tok) {
    char* end = nullptr;
    double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0')
        throw ParseError(path, line, "expected a number, got '" + tok + "'");
    return v;
}

// "<TAG> value" -> (TAG, value); returns false for non-metadata lines.
bool parse_meta(const std::string& path, int line, const std::string& s, std::string* tag,
                std::string* value) {
    auto first = s.find_first_not_of(" \t");
    if (first == std::string::npos || s[first] != '<') return false;
    auto close = s.find('>', first);
    if (close == std::string::npos) throw ParseError(path, line, "unterminated metadata tag");
    *tag = s.substr(first + 1, close - first - 1);
    for (char& c : *tag) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    *value = s.substr(close + 1);
    auto b = value->find_first_not_of(" \t\r\n");
    auto e = value->find_last_not_of(" \t\r\n");
    *value = b == std::string::npos ? "" : value->substr(b, e - b + 1);
    return true;
}

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, 0, "cannot open file");
    return in;
}

}  // namespace

Network parse_tntp_network(const std::string& path) {
    std::ifstream in = open_or_throw(path);
    std::string raw;
    int lineno = 0;
    long declared_nodes = -1, declared_links = -1;
    int first_thru = 1;
    bool in_meta = true;
    Network net;

    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = strip_comment(raw);
        if (blank(line)) continue;

        std::string tag, value;
        if (in_meta && parse_meta(path, lineno, line, &tag, &value)) {
            if (tag == "END OF METADATA") {
                in_meta = false;
            } else if (tag == "NUMBER OF NODES") {
                declared_nodes = static_cast<long>(parse_number(path, lineno, value));
            } else if (tag == "NUMBER OF LINKS") {
                declared_links = static_cast<long>(parse_number(path, lineno, value));
            } else if (tag == "FIRST THRU NODE") {
                first_thru = static_cast<int>(parse_number(path, lineno, value));
            }
            // other well-formed tags (zones, etc.) carry nothing we need
            continue;
        }

        std::vector<std::string> f = tokens(line);
        if (!f.empty() && f.back() == ";") f.pop_back();
        if (!f.empty() && f.back().size() > 1 && f.back().back() == ';') f.back().pop_back();
        if (f.empty()) continue;
        if (f.size() < 10)
            throw ParseError(path, lineno, "link row has fewer than 10 fields");
        if (declared_nodes <= 0)
            throw ParseError(path, lineno, "link row before <NUMBER OF NODES>");

        Link l;
        const long tail = static_cast<long>(parse_number(path, lineno, f[0]));
        const long head = static_cast<long>(parse_number(path, lineno, f[1]));
        if (tail < 1 || tail > declared_nodes || head < 1 || head > declared_nodes)
            throw ParseError(path, lineno, "node id out of range 1.." + std::to_string(declared_nodes));
        l.tail = static_cast<int32_t>(tail - 1);
        l.head = static_cast<int32_t>(head - 1);
        l.capacity = parse_number(path, lineno, f[2]);
        l.length = parse_number(path, lineno, f[3]);
        l.free_flow_time = parse_number(path, lineno, f[4]);
        l.b = parse_number(path, lineno, f[5]);
        l.power = parse_number(path, lineno, f[6]);
        l.speed = parse_number(path, lineno, f[7]);
        l.toll = parse_number(path, lineno, f[8]);
        l.type = static_cast<int32_t>(parse_number(path, lineno, f[9]));
        net.links.push_back(l);
    }

    if (declared_nodes <= 0) throw ParseError(path, lineno, "missing <NUMBER OF NODES>");
    if (declared_links >= 0 && static_cast<long>(net.links.size()) != declared_links)
        throw ParseError(path, lineno,
                         "link count " + std::to_string(net.links.size()) + " does not match <NUMBER OF LINKS> " +
                             std::to_string(declared_links));

    net.node_ids.resize(declared_nodes);
    for (long i = 0; i < declared_nodes; ++i) net.node_ids[i] = i + 1;
    net.first_thru_node = std::clamp(first_thru - 1, 0, static_cast<int>(declared_nodes - 1));
    net.finalize();
    return net;
}

ODMatrix parse_tntp_trips(const std::string& path, const Network& net) {
    std::ifstream in = open_or_throw(path);
    std::string raw;
    int lineno = 0;
    bool in_meta = true;
    double declared_total = -1.0;
    long declared_zones = -1;
    long origin = -1;  // dense index
    ODMatrix od;

    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = strip_comment(raw);
        if (blank(line)) continue;

        std::string tag, value;
        if (in_meta && parse_meta(path, lineno, line, &tag, &value)) {
            if (tag == "END OF METADATA") in_meta = false;
            else if (tag == "TOTAL OD FLOW") declared_total = parse_number(path, lineno, value);
            else if (tag == "NUMBER OF ZONES") declared_zones = static_cast<long>(parse_number(path, lineno, value));
            continue;
        }

        std::vector<std::string> f = tokens(line);
        if (!f.empty() && (f[0] == "Origin" || f[0] == "ORIGIN" || f[0] == "origin")) {
            if (f.size() < 2) throw ParseError(path, lineno, "Origin line without a zone id");
            const long id = static_cast<long>(parse_number(path, lineno, f[1]));
            if (id < 1 || id > net.num_nodes())
                throw ParseError(path, lineno, "origin zone " + std::to_string(id) + " is not a network node");
            origin = id - 1;
            continue;
        }

        if (origin < 0) throw ParseError(path, lineno, "trip entry before any Origin line");

        // entries look like "d : v ;", several per line
        std::string chunk;
        std::stringstream row(line);
        while (std::getline(row, chunk, ';')) {
            if (blank(chunk)) continue;
            auto colon = chunk.find(':');
            if (colon == std::string::npos)
                throw ParseError(path, lineno, "trip entry without ':'");
            std::vector<std::string> left = tokens(chunk.substr(0, colon));
            std::vector<std::string> right = tokens(chunk.substr(colon + 1));
            if (left.size() != 1 || right.size() != 1)
                throw ParseError(path, lineno, "malformed trip entry '" + chunk + "'");
            const long dest = static_cast<long>(parse_number(path, lineno, left[0]));
            const double volume = parse_number(path, lineno, right[0]);
            if (dest < 1 || dest > net.num_nodes())
                throw ParseError(path, lineno, "destination zone " + std::to_string(dest) + " is not a network node");
            if (volume < 0.0) throw ParseError(path, lineno, "negative trip volume");
            const int32_t d = static_cast<int32_t>(dest - 1);
            if (volume == 0.0 || d == origin) continue;
            od.entries.push_back({static_cast<int32_t>(origin), d, volume});
        }
    }

    if (declared_zones > net.num_nodes())
        throw ParseError(path, lineno, "trip table declares more zones than the network has nodes");
    if (declared_total >= 0.0) {
        const double q = od.total();
        const double rel = std::abs(q - declared_total) / std::max(1.0, std::abs(declared_total));
        if (rel > 1e-6)
            throw ParseError(path, lineno,
                             "parsed total " + std::to_string(q) + " does not match <TOTAL OD FLOW> " +
                                 std::to_string(declared_total));
    }
    return od;
}

namespace {

std::string num17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void write_tntp_network(const std::string& path, const Network& net) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "<NUMBER OF ZONES> " << net.num_nodes() << "\n";
    out << "<NUMBER OF NODES> " << net.num_nodes() << "\n";
    out << "<FIRST THRU NODE> " << net.first_thru_node + 1 << "\n";
    out << "<NUMBER OF LINKS> " << net.num_links() << "\n";
    out << "<END OF METADATA>\n\n";
    out << "~ \tinit node\tterm node\tcapacity\tlength\tfree flow time\tb\tpower\tspeed limit\ttoll\tlink type\t;\n";
    for (const Link& l : net.links) {
        out << '\t' << net.node_ids[l.tail] << '\t' << net.node_ids[l.head] << '\t'
            << num17(l.capacity) << '\t' << num17(l.length) << '\t' << num17(l.free_flow_time)
            << '\t' << num17(l.b) << '\t' << num17(l.power) << '\t' << num17(l.speed) << '\t'
            << num17(l.toll) << '\t' << l.type << "\t;\n";
    }
}

void write_tntp_trips(const std::string& path, const Network& net, const ODMatrix& od) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    std::map<int32_t, std::vector<const ODEntry*>> by_origin;
    for (const ODEntry& e : od.entries) by_origin[e.origin].push_back(&e);

    out << "<NUMBER OF ZONES> " << net.num_nodes() << "\n";
    out << "<TOTAL OD FLOW> " << num17(od.total()) << "\n";
    out << "<END OF METADATA>\n\n";
    for (const auto& [o, entries] : by_origin) {
        out << "Origin " << net.node_ids[o] << "\n";
        int per_line = 0;
        for (const ODEntry* e : entries) {
            out << "    " << net.node_ids[e->destination] << " : " << num17(e->volume) << ";";
            if (++per_line == 5) {
                out << "\n";
                per_line = 0;
            }
        }
        if (per_line) out << "\n";
        out << "\n";
    }
}

}  // namespace purc
