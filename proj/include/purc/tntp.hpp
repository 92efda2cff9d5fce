#pragma once

#include <stdexcept>
#include <string>

#include "purc/demand.hpp"
#include "purc/network.hpp"

namespace purc {

// Parse failure with 1-based source line.
class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string& path, int line, const std::string& what);
    int line() const { return line_; }

  private:
    int line_ = 0;
};

// TNTP network file: <NUMBER OF NODES>, <NUMBER OF LINKS>, optional
// <FIRST THRU NODE>, then one row per link with at least the ten standard
// fields. 1-based node ids are kept as external ids and mapped to dense
// 0-based indices. '~' starts a comment.
Network parse_tntp_network(const std::string& path);

// TNTP trip table: <NUMBER OF ZONES>, optional <TOTAL OD FLOW>, then
// "Origin o" blocks of "d : volume;" entries. Zero and diagonal entries are
// dropped. When <TOTAL OD FLOW> is present the stored total must match it
// within 1e-6 relative.
ODMatrix parse_tntp_trips(const std::string& path, const Network& net);

// Writers round-trip through the parsers (full double precision).
void write_tntp_network(const std::string& path, const Network& net);
void write_tntp_trips(const std::string& path, const Network& net, const ODMatrix& od);

}  // namespace purc
