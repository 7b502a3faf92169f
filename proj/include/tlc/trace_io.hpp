#pragma once

#include <iosfwd>
#include <string>

#include "tlc/event.hpp"

namespace tlc {

// Canonical trace serialization: JSON lines, header first, one label per
// line with fields ei,pi,ci,n,r,d,o,fe,s,s_post,ors,ois. Byte-stable for
// equal inputs: set and map entries are already in canonical value order.
void write_trace(const Trace& trace, std::ostream& os);
std::string trace_to_string(const Trace& trace);

Trace read_trace(std::istream& is);
Trace read_trace_file(const std::string& path);
void write_trace_file(const Trace& trace, const std::string& path);

}  // namespace tlc
