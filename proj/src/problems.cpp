#include "degen/problems.hpp"

#include "degen/format.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace degen {
namespace {

PolyFunction poly(int dim, std::vector<PolyTerm> terms) {
  return PolyFunction(dim, std::move(terms));
}

Problem make_p1() {
  Problem p;
  p.name = "weak1";
  p.n = 1;
  p.m = 1;
  p.objective = poly(1, {{1.0, {2}}});       // z^2
  p.constraints = {poly(1, {{1.0, {1}}})};   // z
  GroundTruth gt;
  gt.z_star = {0.0};
  gt.slam_vertices = {{0.0}};
  gt.b_plus = {};
  gt.b_zero = {0};
  p.metadata = gt;
  return p;
}

Problem make_p2() {
  Problem p;
  p.name = "dep1";
  p.n = 1;
  p.m = 2;
  p.objective = poly(1, {{0.5, {2}}, {-1.0, {1}}});  // z^2/2 - z
  p.constraints = {poly(1, {{1.0, {1}}}),            // z
                   poly(1, {{2.0, {1}}})};           // 2z
  GroundTruth gt;
  gt.z_star = {0.0};
  gt.slam_vertices = {{1.0, 0.0}, {0.0, 0.5}};
  gt.b_plus = {0, 1};
  gt.b_zero = {};
  gt.mfcq_certificate = Vec{-1.0};
  p.metadata = gt;
  return p;
}

Problem make_p3() {
  Problem p;
  p.name = "degen-full";
  p.n = 2;
  p.m = 3;
  p.objective = poly(2, {{0.5, {2, 0}}, {0.5, {0, 2}}, {-1.0, {1, 0}}});
  p.constraints = {poly(2, {{1.0, {1, 0}}}),   // z1
                   poly(2, {{2.0, {1, 0}}}),   // 2 z1
                   poly(2, {{1.0, {0, 1}}})};  // z2
  GroundTruth gt;
  gt.z_star = {0.0, 0.0};
  gt.slam_vertices = {{1.0, 0.0, 0.0}, {0.0, 0.5, 0.0}};
  gt.b_plus = {0, 1};
  gt.b_zero = {2};
  gt.mfcq_certificate = Vec{-1.0, -1.0};
  p.metadata = gt;
  return p;
}

Problem make_p4() {
  Problem p;
  p.name = "nondeg";
  p.n = 2;
  p.m = 1;
  p.objective = poly(2, {{1.0, {2, 0}}, {1.0, {0, 2}}});
  p.constraints = {poly(2, {{1.0, {0, 0}}, {-1.0, {1, 0}}, {-1.0, {0, 1}}})};  // 1 - z1 - z2
  GroundTruth gt;
  gt.z_star = {0.5, 0.5};
  gt.slam_vertices = {{1.0}};
  gt.b_plus = {0};
  gt.b_zero = {};
  p.metadata = gt;
  return p;
}

Problem make_p5() {
  Problem p;
  p.name = "parab";
  p.n = 2;
  p.m = 1;
  // z1^2 + (z2 - 1)^2 expanded
  p.objective = poly(2, {{1.0, {2, 0}}, {1.0, {0, 2}}, {-2.0, {0, 1}}, {1.0, {0, 0}}});
  p.constraints = {poly(2, {{1.0, {0, 1}}, {-1.0, {2, 0}}})};  // z2 - z1^2
  GroundTruth gt;
  gt.z_star = {0.7071067811865476, 0.5};  // (sqrt(1/2), 1/2)
  gt.slam_vertices = {{1.0}};
  gt.b_plus = {0};
  gt.b_zero = {};
  p.metadata = gt;
  return p;
}

const std::vector<Problem>& registry() {
  static const std::vector<Problem> problems = [] {
    std::vector<Problem> v = {make_p1(), make_p2(), make_p3(), make_p4(), make_p5()};
    for (const Problem& p : v) p.validate();
    return v;
  }();
  return problems;
}

}  // namespace

std::vector<std::string> problem_names() {
  std::vector<std::string> names;
  for (const Problem& p : registry()) names.push_back(p.name);
  return names;
}

Problem get_problem(const std::string& name) {
  for (const Problem& p : registry())
    if (p.name == name) return p;
  throw std::invalid_argument("unknown problem '" + name + "'");
}

namespace {

struct LineTokens {
  int number = 0;
  std::vector<std::string> tokens;
};

double parse_real(const std::string& tok, int line) {
  size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    throw ParseError(line, "expected a number, got '" + tok + "'");
  }
  if (pos != tok.size()) throw ParseError(line, "trailing characters in number '" + tok + "'");
  return v;
}

int parse_int(const std::string& tok, int line) {
  size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(tok, &pos);
  } catch (const std::exception&) {
    throw ParseError(line, "expected an integer, got '" + tok + "'");
  }
  if (pos != tok.size()) throw ParseError(line, "trailing characters in integer '" + tok + "'");
  return static_cast<int>(v);
}

Vec parse_reals(const LineTokens& lt, size_t from, size_t expected, const char* what) {
  if (lt.tokens.size() - from != expected)
    throw ParseError(lt.number, std::string(what) + " expects " + std::to_string(expected) +
                                    " values, got " + std::to_string(lt.tokens.size() - from));
  Vec v;
  for (size_t i = from; i < lt.tokens.size(); ++i) v.push_back(parse_real(lt.tokens[i], lt.number));
  return v;
}

}  // namespace

Problem parse_problem(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  std::vector<LineTokens> lines;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    LineTokens lt;
    lt.number = lineno;
    std::string tok;
    while (ls >> tok) lt.tokens.push_back(tok);
    if (!lt.tokens.empty()) lines.push_back(std::move(lt));
  }

  Problem p;
  bool have_name = false, have_n = false, have_m = false;
  bool initialized = false;  // objective/constraint slots allocated
  PolyFunction* current = nullptr;  // active term target
  bool any_meta = false;

  auto ensure_init = [&](int line) {
    if (!have_n || !have_m) throw ParseError(line, "section before n and m");
    if (!initialized) {
      p.objective = PolyFunction(p.n);
      p.constraints.assign(p.m, PolyFunction(p.n));
      initialized = true;
    }
  };
  std::vector<Vec> vertices;
  Vec z_star;
  bool have_zstar = false;
  std::vector<int> b_plus;
  std::optional<Vec> mfcq;

  for (const LineTokens& lt : lines) {
    const std::string& kw = lt.tokens[0];
    if (kw == "problem") {
      if (lt.tokens.size() != 2) throw ParseError(lt.number, "problem expects one name");
      p.name = lt.tokens[1];
      have_name = true;
    } else if (kw == "n") {
      if (initialized) throw ParseError(lt.number, "n redefined after a section");
      if (lt.tokens.size() != 2) throw ParseError(lt.number, "n expects one integer");
      p.n = parse_int(lt.tokens[1], lt.number);
      if (p.n < 1) throw ParseError(lt.number, "n must be >= 1");
      have_n = true;
    } else if (kw == "m") {
      if (initialized) throw ParseError(lt.number, "m redefined after a section");
      if (lt.tokens.size() != 2) throw ParseError(lt.number, "m expects one integer");
      p.m = parse_int(lt.tokens[1], lt.number);
      if (p.m < 0) throw ParseError(lt.number, "m must be >= 0");
      have_m = true;
    } else if (kw == "objective") {
      ensure_init(lt.number);
      current = &p.objective;
    } else if (kw == "constraint") {
      ensure_init(lt.number);
      if (lt.tokens.size() != 2) throw ParseError(lt.number, "constraint expects one index");
      const int k = parse_int(lt.tokens[1], lt.number);
      if (k < 1 || k > p.m)
        throw ParseError(lt.number, "constraint index " + std::to_string(k) + " outside 1.." +
                                        std::to_string(p.m));
      current = &p.constraints[k - 1];
    } else if (kw == "term") {
      if (current == nullptr) throw ParseError(lt.number, "term outside objective/constraint");
      if (static_cast<int>(lt.tokens.size()) != 2 + p.n)
        throw ParseError(lt.number, "term expects a coefficient and " + std::to_string(p.n) +
                                        " exponents");
      const double coef = parse_real(lt.tokens[1], lt.number);
      std::vector<int> exps;
      for (int j = 0; j < p.n; ++j) {
        const int e = parse_int(lt.tokens[2 + j], lt.number);
        if (e < 0) throw ParseError(lt.number, "negative exponent");
        exps.push_back(e);
      }
      current->add_term(coef, std::move(exps));
    } else if (kw == "meta") {
      ensure_init(lt.number);
      if (lt.tokens.size() < 2) throw ParseError(lt.number, "meta expects a kind");
      const std::string& kind = lt.tokens[1];
      any_meta = true;
      if (kind == "zstar") {
        z_star = parse_reals(lt, 2, p.n, "meta zstar");
        have_zstar = true;
      } else if (kind == "slam_vertex") {
        vertices.push_back(parse_reals(lt, 2, p.m, "meta slam_vertex"));
      } else if (kind == "bplus") {
        for (size_t i = 2; i < lt.tokens.size(); ++i) {
          const int idx = parse_int(lt.tokens[i], lt.number);
          if (idx < 1 || idx > p.m)
            throw ParseError(lt.number, "bplus index outside 1.." + std::to_string(p.m));
          b_plus.push_back(idx - 1);
        }
      } else if (kind == "mfcq") {
        mfcq = parse_reals(lt, 2, p.n, "meta mfcq");
      } else {
        throw ParseError(lt.number, "unknown meta kind '" + kind + "'");
      }
    } else {
      throw ParseError(lt.number, "unknown directive '" + kw + "'");
    }
  }

  if (!have_name) throw ParseError(lineno, "missing 'problem' line");
  if (!have_n || !have_m) throw ParseError(lineno, "missing 'n' or 'm' line");
  if (!initialized) {
    p.objective = PolyFunction(p.n);
    p.constraints.assign(p.m, PolyFunction(p.n));
  }

  if (any_meta) {
    if (!have_zstar) throw ParseError(lineno, "metadata present but 'meta zstar' missing");
    if (vertices.empty()) throw ParseError(lineno, "metadata present but no 'meta slam_vertex'");
    GroundTruth gt;
    gt.z_star = std::move(z_star);
    gt.slam_vertices = std::move(vertices);
    std::sort(b_plus.begin(), b_plus.end());
    b_plus.erase(std::unique(b_plus.begin(), b_plus.end()), b_plus.end());
    gt.b_plus = std::move(b_plus);
    gt.mfcq_certificate = std::move(mfcq);
    p.metadata = std::move(gt);
    // derive the weakly active set from z_star
    std::vector<int> active;
    for (int i = 0; i < p.m; ++i)
      if (std::fabs(p.constraints[i].eval(p.metadata->z_star)) <= 1e-9) active.push_back(i);
    for (int i : active)
      if (!std::binary_search(p.metadata->b_plus.begin(), p.metadata->b_plus.end(), i))
        p.metadata->b_zero.push_back(i);
  }

  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(lineno, e.what());
  }
  return p;
}

Problem load_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open problem file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_problem(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path + ": " + e.what());
  }
}

std::string serialize_problem(const Problem& p) {
  std::ostringstream out;
  out << "problem " << p.name << "\n";
  out << "n " << p.n << "\n";
  out << "m " << p.m << "\n";
  out << "objective\n";
  for (const auto& t : p.objective.terms()) {
    out << "term " << format_g17(t.coef);
    for (int e : t.exponents) out << " " << e;
    out << "\n";
  }
  for (int i = 0; i < p.m; ++i) {
    out << "constraint " << (i + 1) << "\n";
    for (const auto& t : p.constraints[i].terms()) {
      out << "term " << format_g17(t.coef);
      for (int e : t.exponents) out << " " << e;
      out << "\n";
    }
  }
  if (p.metadata) {
    const GroundTruth& gt = *p.metadata;
    out << "meta zstar";
    for (double v : gt.z_star) out << " " << format_g17(v);
    out << "\n";
    for (const Vec& v : gt.slam_vertices) {
      out << "meta slam_vertex";
      for (double x : v) out << " " << format_g17(x);
      out << "\n";
    }
    if (!gt.b_plus.empty()) {
      out << "meta bplus";
      for (int i : gt.b_plus) out << " " << (i + 1);
      out << "\n";
    }
    if (gt.mfcq_certificate) {
      out << "meta mfcq";
      for (double v : *gt.mfcq_certificate) out << " " << format_g17(v);
      out << "\n";
    }
  }
  return out.str();
}

double distance_to_solution(const Problem& p, const Iterate& it) {
  if (!p.metadata) throw std::invalid_argument("distance_to_solution requires metadata");
  const GroundTruth& gt = *p.metadata;
  if (gt.slam_vertices.size() > 2)
    throw std::invalid_argument("distance_to_solution supports at most 2 multiplier vertices");

  double dz2 = 0.0;
  for (int j = 0; j < p.n; ++j) {
    const double d = it.z[j] - gt.z_star[j];
    dz2 += d * d;
  }

  double dl2 = 0.0;
  if (gt.slam_vertices.size() == 1) {
    for (int i = 0; i < p.m; ++i) {
      const double d = it.lambda[i] - gt.slam_vertices[0][i];
      dl2 += d * d;
    }
  } else {
    const Vec& a = gt.slam_vertices[0];
    const Vec& b = gt.slam_vertices[1];
    double num = 0.0, den = 0.0;
    for (int i = 0; i < p.m; ++i) {
      const double dir = b[i] - a[i];
      num += (it.lambda[i] - a[i]) * dir;
      den += dir * dir;
    }
    const double t = den > 0.0 ? std::clamp(num / den, 0.0, 1.0) : 0.0;
    for (int i = 0; i < p.m; ++i) {
      const double proj = a[i] + t * (b[i] - a[i]);
      const double d = it.lambda[i] - proj;
      dl2 += d * d;
    }
  }
  return std::sqrt(dz2 + dl2);
}

std::optional<double> epsilon_lambda(const Problem& p) {
  if (!p.metadata) throw std::invalid_argument("epsilon_lambda requires metadata");
  const GroundTruth& gt = *p.metadata;
  if (gt.b_plus.empty()) return std::nullopt;

  auto min_on_bplus = [&](const Vec& lam) {
    double v = std::numeric_limits<double>::infinity();
    for (int i : gt.b_plus) v = std::min(v, lam[i]);
    return v;
  };

  if (gt.slam_vertices.size() == 1) return min_on_bplus(gt.slam_vertices[0]);
  if (gt.slam_vertices.size() > 2)
    throw std::invalid_argument("epsilon_lambda supports at most 2 multiplier vertices");

  const Vec& a = gt.slam_vertices[0];
  const Vec& b = gt.slam_vertices[1];
  auto f = [&](double t) {
    Vec lam(p.m);
    for (int i = 0; i < p.m; ++i) lam[i] = (1.0 - t) * a[i] + t * b[i];
    return min_on_bplus(lam);
  };

  // coarse sweep, then ternary refinement (f is concave in t)
  const double step = 1e-6;
  double best_t = 0.0, best_v = f(0.0);
  for (double t = step; t <= 1.0 + 0.5 * step; t += step) {
    const double tt = std::min(t, 1.0);
    const double v = f(tt);
    if (v > best_v) {
      best_v = v;
      best_t = tt;
    }
  }
  double lo = std::max(0.0, best_t - step), hi = std::min(1.0, best_t + step);
  while (hi - lo > 1e-12) {
    const double t1 = lo + (hi - lo) / 3.0;
    const double t2 = hi - (hi - lo) / 3.0;
    if (f(t1) < f(t2))
      lo = t1;
    else
      hi = t2;
  }
  return std::max(best_v, f(0.5 * (lo + hi)));
}

Iterate perturbed_start(const Problem& p, double radius, Rng& rng) {
  if (!p.metadata) throw std::invalid_argument("perturbed_start requires metadata");
  const GroundTruth& gt = *p.metadata;
  Vec z = gt.z_star;
  const Vec dz = rng.in_ball(p.n, radius);
  for (int j = 0; j < p.n; ++j) z[j] += dz[j];
  const int v = rng.uniform_int(static_cast<int>(gt.slam_vertices.size()));
  Vec lam = gt.slam_vertices[v];
  const Vec dl = rng.in_ball(p.m, radius);
  for (int i = 0; i < p.m; ++i) lam[i] = std::max(0.0, lam[i] + dl[i]);
  return Iterate(std::move(z), std::move(lam));
}

}  // namespace degen
