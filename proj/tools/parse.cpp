#include "parse.hpp"

#include <cctype>
#include <set>

#include "gplab/error.hpp"

namespace gplab::cli {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_top(std::string_view s, char sep) {
  std::vector<std::string> parts;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '(' || c == '[' || c == '{') ++depth;
    else if (c == ')' || c == ']' || c == '}') --depth;
    else if (c == sep && depth == 0) {
      parts.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  parts.push_back(trim(s.substr(start)));
  return parts;
}

std::vector<ExactScalar> parse_scalar_list(std::string_view s) {
  std::vector<ExactScalar> out;
  for (const auto& p : split_top(s, ','))
    if (!p.empty()) out.push_back(parse_scalar(p));
  return out;
}

std::vector<long> parse_long_list(std::string_view s) {
  std::vector<long> out;
  for (const auto& p : split_top(s, ','))
    if (!p.empty()) out.push_back(std::stol(p));
  return out;
}

Grading parse_grading(std::string_view s) {
  Grading g;
  for (const auto& p : split_top(s, ',')) {
    if (p.empty()) continue;
    auto colon = p.find(':');
    if (colon == std::string::npos) throw DomainError("grading entries look like leaf:degree, got '" + p + "'");
    g[static_cast<unsigned>(std::stoul(p.substr(0, colon)))] = static_cast<unsigned>(std::stoul(p.substr(colon + 1)));
  }
  return g;
}

namespace {

void collect(const BracketIndex& mu, std::set<BracketIndex>& into, std::set<unsigned>& leaves) {
  into.insert(mu);
  leaves.insert(mu.leaf());
  for (const auto& f : mu.factors()) collect(f, into, leaves);
}

}  // namespace

IndexSet parse_index_set(std::string_view spec, std::string_view grading) {
  const std::string s = trim(spec);
  Grading g = parse_grading(grading);
  if (s == "running") {
    if (g.empty()) return IndexSet::running_example();
    return IndexSet::closure_of(IndexSet::running_example().members(), g);
  }
  std::set<BracketIndex> members;
  std::set<unsigned> leaves;
  for (const auto& p : split_top(s, ','))
    if (!p.empty()) collect(parse_index(p), members, leaves);
  for (unsigned leaf : leaves) g.emplace(leaf, 1);
  return IndexSet::closure_of(std::vector<BracketIndex>(members.begin(), members.end()), g);
}

std::map<unsigned, ExactScalar> parse_alpha(std::string_view spec, const IndexSet& d) {
  std::map<unsigned, ExactScalar> alpha;
  const auto parts = split_top(spec, ',');
  if (spec.find('=') != std::string_view::npos) {
    for (const auto& p : parts) {
      auto eq = p.find('=');
      if (eq == std::string::npos) throw DomainError("alpha entries look like leaf=value, got '" + p + "'");
      alpha[static_cast<unsigned>(std::stoul(p.substr(0, eq)))] = parse_scalar(p.substr(eq + 1));
    }
  } else {
    std::size_t i = 0;
    for (const auto& [leaf, deg] : d.grading()) {
      if (i >= parts.size()) throw DomainError("alpha needs one value per leaf (" + std::to_string(d.grading().size()) + ")");
      alpha[leaf] = parse_scalar(parts[i++]);
    }
    if (i != parts.size()) throw DomainError("alpha has more values than leaves");
  }
  return alpha;
}

Polynomial parse_poly(std::string_view text, std::size_t dim, const std::vector<std::string>& extra) {
  auto resolver = [&](std::string_view name) -> std::optional<std::size_t> {
    if (dim == 1 && name == "x") return 0;
    for (std::size_t i = 0; i < extra.size(); ++i)
      if (name == extra[i]) return dim + i;
    auto idx = default_variable_resolver(name);
    if (idx && *idx >= dim) return std::nullopt;
    return idx;
  };
  return parse_polynomial(text, resolver);
}

SemialgebraicSet parse_set(std::string_view spec, std::size_t dim) {
  const std::string s = trim(spec);
  if (!s.empty() && s.front() == '{') {
    auto set = SemialgebraicSet::from_json(nlohmann::json::parse(s));
    if (dim != 0 && set.dim != dim) throw DomainError("set dimension does not match the point");
    return set;
  }
  SemialgebraicSet out;
  out.dim = dim;
  if (s == "empty") return out;
  if (s == "all") {
    out.pieces.emplace_back();
    return out;
  }
  for (const auto& piece_text : split_top(s, '|')) {
    BasicPiece piece;
    std::vector<std::string> constraints;
    for (const auto& a : split_top(piece_text, '&'))
      for (const auto& c : split_top(a, ',')) constraints.push_back(c);
    for (const auto& c : constraints) {
      if (c.empty() || c == "all") continue;
      if (c.find("<=") != std::string::npos || c.find(">=") != std::string::npos)
        throw DomainError("only strict inequalities and equalities are supported: '" + c + "'");
      std::vector<std::string> terms;
      std::vector<char> ops;
      std::size_t start = 0;
      int depth = 0;
      for (std::size_t i = 0; i < c.size(); ++i) {
        const char ch = c[i];
        if (ch == '(') ++depth;
        else if (ch == ')') --depth;
        else if (depth == 0 && (ch == '<' || ch == '>' || ch == '=')) {
          terms.push_back(c.substr(start, i - start));
          ops.push_back(ch);
          if (ch == '=' && i + 1 < c.size() && c[i + 1] == '=') ++i;
          start = i + 1;
        }
      }
      terms.push_back(c.substr(start));
      if (ops.empty()) throw DomainError("constraint needs a relation: '" + c + "'");
      for (std::size_t i = 0; i < ops.size(); ++i) {
        Polynomial lhs = parse_poly(terms[i], dim), rhs = parse_poly(terms[i + 1], dim);
        if (ops[i] == '<') piece.inequalities.push_back(rhs - lhs);
        else if (ops[i] == '>') piece.inequalities.push_back(lhs - rhs);
        else piece.equalities.push_back(lhs - rhs);
      }
    }
    out.pieces.push_back(std::move(piece));
  }
  return out;
}

namespace {

ExactScalar scalar_from_json(const nlohmann::json& j) {
  if (j.is_string()) return parse_scalar(j.get<std::string>());
  if (j.is_number_integer()) return ExactScalar(j.get<long>());
  if (j.is_number()) return parse_scalar(j.dump());
  throw DomainError("matrix entries must be numbers or strings");
}

std::vector<std::vector<ExactScalar>> parse_rows(std::string_view spec) {
  const std::string s = trim(spec);
  std::vector<std::vector<ExactScalar>> rows;
  if (!s.empty() && s.front() == '[') {
    for (const auto& r : nlohmann::json::parse(s)) {
      std::vector<ExactScalar> row;
      for (const auto& e : r) row.push_back(scalar_from_json(e));
      rows.push_back(std::move(row));
    }
  } else {
    for (const auto& r : split_top(s, ';'))
      if (!r.empty()) rows.push_back(parse_scalar_list(r));
  }
  return rows;
}

}  // namespace

Matrix<ExactScalar> parse_matrix(std::string_view spec) {
  auto rows = parse_rows(spec);
  if (rows.empty()) throw DomainError("empty matrix");
  Matrix<ExactScalar> m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols()) throw DomainError("matrix rows differ in length");
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

std::vector<std::vector<ExactScalar>> parse_points(std::string_view spec) { return parse_rows(spec); }

nlohmann::json matrix_json(const Matrix<ExactScalar>& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).to_string());
    rows.push_back(row);
  }
  return rows;
}

nlohmann::json scalar_list_json(const std::vector<ExactScalar>& v) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& x : v) a.push_back(x.to_string());
  return a;
}

}  // namespace gplab::cli
