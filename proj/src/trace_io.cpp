#include "degen/trace_io.hpp"

#include <sstream>

#include <json.hpp>

#include "degen/format.hpp"

namespace degen {

std::string trace_to_csv(const SolveTrace& trace) {
  std::ostringstream out;
  out << kTraceCsvHeader << "\n";
  for (const IterRecord& r : trace.iterations) {
    out << r.k << "," << format_g17(r.eta) << ",";
    if (r.delta) out << format_g17(*r.delta);
    out << "," << format_g17(r.mu) << "," << r.n_aplus << "," << r.n_a0 << ","
        << (r.adjusted ? 1 : 0) << "," << format_g17(r.hessian_shift) << "\n";
  }
  return out.str();
}

std::string trace_to_json(const SolveTrace& trace) {
  nlohmann::json j;
  j["status"] = to_string(trace.status);
  if (!trace.failure_message.empty()) j["failure_message"] = trace.failure_message;
  j["iterations"] = nlohmann::json::array();
  for (const IterRecord& r : trace.iterations) {
    nlohmann::json row;
    row["k"] = r.k;
    row["eta"] = r.eta;
    row["delta"] = r.delta ? nlohmann::json(*r.delta) : nlohmann::json(nullptr);
    row["mu"] = r.mu;
    row["n_aplus"] = r.n_aplus;
    row["n_a0"] = r.n_a0;
    row["adjusted"] = r.adjusted;
    row["hshift"] = r.hessian_shift;
    j["iterations"].push_back(row);
  }
  j["q_ratios"] = trace.q_ratios;
  if (!trace.iterates.empty()) {
    j["final"]["z"] = trace.iterates.back().z;
    j["final"]["lambda"] = trace.iterates.back().lambda;
  }
  return j.dump(2) + "\n";
}

}  // namespace degen
