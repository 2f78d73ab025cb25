#pragma once

#include <string>

#include "mbss/sim.hpp"

namespace mbssctl {

// Writes a trace as CSV with header t,x1,x2,x3,u,y (estimate columns
// xh1,xh2,xh3 appended when present). Values carry 12 significant digits;
// every row is newline terminated. Throws std::runtime_error on I/O failure.
void write_trace_csv(const mbss::sim::SimTrace& trace, const std::string& path);

} // namespace mbssctl
