#include "uniprox/tracefile.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "uniprox/errors.hpp"

namespace uniprox {

const char* const kTraceCsvHeader =
    "run_id,j,k,N,event,lambda,t_j,phi_xj,barphi,gap,halvings,elapsed_ns";

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_trace_csv(std::ostream& os, const RunTrace& trace) {
  os << kTraceCsvHeader << '\n';
  for (const InnerRecord& r : trace.rows) {
    os << trace.run_id << ',' << r.j << ',' << r.k << ',' << r.n_in_cycle << ','
       << event_name(r.event) << ',' << format_double(r.lam) << ','
       << format_double(r.t_gap) << ',' << format_double(r.phi_x) << ','
       << format_double(r.best_penalized) << ',' << format_double(r.inner_gap) << ','
       << r.halvings << ',' << r.elapsed_ns << '\n';
  }
}

void write_trace_csv_file(const std::string& path, const RunTrace& trace) {
  std::ofstream os(path);
  if (!os) throw SolverError("cannot open trace file for writing: " + path);
  write_trace_csv(os, trace);
}

std::vector<ParsedTraceRow> read_trace_csv_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw SolverError("cannot open trace file: " + path);

  std::string line;
  if (!std::getline(is, line)) throw DomainError(path + ": empty trace file");
  if (line != kTraceCsvHeader) throw DomainError(path + ":1: unexpected trace header");

  std::vector<ParsedTraceRow> rows;
  long lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 12)
      throw DomainError(path + ":" + std::to_string(lineno) + ": expected 12 fields, got " +
                        std::to_string(fields.size()));
    try {
      ParsedTraceRow row;
      row.run_id = fields[0];
      row.record.j = std::stol(fields[1]);
      row.record.k = std::stol(fields[2]);
      row.record.n_in_cycle = std::stoi(fields[3]);
      row.record.event = event_from_name(fields[4]);
      row.record.lam = std::stod(fields[5]);
      row.record.t_gap = std::stod(fields[6]);
      row.record.phi_x = std::stod(fields[7]);
      row.record.best_penalized = std::stod(fields[8]);
      row.record.inner_gap = std::stod(fields[9]);
      row.record.halvings = std::stol(fields[10]);
      row.record.elapsed_ns = std::stoll(fields[11]);
      rows.push_back(std::move(row));
    } catch (const std::exception& e) {
      throw DomainError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return rows;
}

}  // namespace uniprox
