#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "degen/problem.hpp"
#include "degen/rng.hpp"

namespace degen {

/// Names of the built-in problems, in registry order.
std::vector<std::string> problem_names();

/// Returns the named built-in problem with full ground-truth metadata;
/// throws std::invalid_argument for an unknown name.
Problem get_problem(const std::string& name);

/// Parse failure carrying the offending 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Parses the line-oriented problem format (see the README for the grammar).
Problem parse_problem(const std::string& text);

/// Reads and parses a problem file; errors mention the path.
Problem load_problem_file(const std::string& path);

/// parse_problem(serialize_problem(p)) is value-equal to p.
std::string serialize_problem(const Problem& p);

/// Euclidean distance of (z, lambda) to {z_star} x S_lambda. S_lambda must
/// be a point or a segment (1 or 2 stored vertices).
double distance_to_solution(const Problem& p, const Iterate& it);

/// max over S_lambda of min over strongly active i of lambda_i, by a 1-D
/// sweep over the vertex hull plus local refinement (tolerance 1e-9).
/// Empty when the problem has no strongly active constraints.
std::optional<double> epsilon_lambda(const Problem& p);

/// Seeded perturbed start: z uniform in the L2 ball of the given radius
/// around z_star; lambda is a uniformly chosen vertex of S_lambda plus a
/// ball perturbation of the same radius, clamped componentwise to >= 0.
/// Draw order: z ball, vertex index, lambda ball.
Iterate perturbed_start(const Problem& p, double radius, Rng& rng);

}  // namespace degen
