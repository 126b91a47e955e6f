#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "uniprox/trace.hpp"

namespace uniprox {

// Decimal text with 17 significant digits: doubles round-trip exactly.
std::string format_double(double v);

// Stable row schema consumed by the offline checkers and external plotting:
//   run_id,j,k,N,event,lambda,t_j,phi_xj,barphi,gap,halvings,elapsed_ns
extern const char* const kTraceCsvHeader;

void write_trace_csv(std::ostream& os, const RunTrace& trace);
void write_trace_csv_file(const std::string& path, const RunTrace& trace);

struct ParsedTraceRow {
  std::string run_id;
  InnerRecord record;
};

// Parses a trace CSV produced by write_trace_csv. Throws DomainError on
// malformed input, with the offending line number.
std::vector<ParsedTraceRow> read_trace_csv_file(const std::string& path);

}  // namespace uniprox
