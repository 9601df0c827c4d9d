#pragma once

#include <string>

#include "degen/driver.hpp"

namespace degen {

inline constexpr const char* kTraceCsvHeader = "k,eta,delta,mu,n_aplus,n_a0,adjusted,hshift";

/// Fixed-column CSV: k,eta,delta,mu,n_aplus,n_a0,adjusted,hshift with
/// 17-significant-digit floats; delta is empty when no ground truth exists.
std::string trace_to_csv(const SolveTrace& trace);

/// JSON document with status, per-iteration rows, q_ratios and the final
/// iterate.
std::string trace_to_json(const SolveTrace& trace);

}  // namespace degen
