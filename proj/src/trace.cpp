#include "uniprox/trace.hpp"

#include "uniprox/config.hpp"
#include "uniprox/errors.hpp"

namespace uniprox {

const char* event_name(Event e) {
  switch (e) {
    case Event::Null: return "null";
    case Event::Serious: return "serious";
    case Event::Reset: return "reset";
    case Event::Stop: return "stop";
  }
  return "?";
}

Event event_from_name(const std::string& name) {
  if (name == "null") return Event::Null;
  if (name == "serious") return Event::Serious;
  if (name == "reset") return Event::Reset;
  if (name == "stop") return Event::Stop;
  throw DomainError("unknown event label: " + name);
}

const char* status_name(RunStatus s) {
  switch (s) {
    case RunStatus::Solved: return "Solved";
    case RunStatus::BudgetExhausted: return "BudgetExhausted";
    case RunStatus::Error: return "Error";
  }
  return "?";
}

void SolverConfig::validate() const {
  if (!(chi >= 0.0 && chi < 1.0)) throw DomainError("chi must lie in [0,1)");
  if (!(lambda0 > 0.0)) throw DomainError("lambda0 must be positive");
  if (!(epsbar > 0.0)) throw DomainError("epsbar must be positive");
  if (nbar < 1) throw DomainError("nbar must be at least 1");
  if (budget_inner < 1) throw DomainError("budget_inner must be at least 1");
  if (!(tol_inner > 0.0)) throw DomainError("tol_inner must be positive");
}

std::vector<std::vector<InnerRecord>> split_cycles(const std::vector<InnerRecord>& rows) {
  std::vector<std::vector<InnerRecord>> cycles;
  std::vector<InnerRecord> cur;
  for (const InnerRecord& r : rows) {
    if (r.n_in_cycle == 1 && !cur.empty()) {
      cycles.push_back(std::move(cur));
      cur.clear();
    }
    cur.push_back(r);
  }
  if (!cur.empty()) cycles.push_back(std::move(cur));
  return cycles;
}

}  // namespace uniprox
