#include "gplab/genpoly.hpp"

#include <cctype>
#include <functional>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "gplab/error.hpp"

namespace gplab {

struct GenPoly::Node {
  Kind kind = Kind::Const;
  std::size_t var = 0;
  ExactScalar value;
  std::vector<GenPoly> children;
  unsigned exponent = 0;
  std::size_t arity = 0;
};

namespace {

std::shared_ptr<const GenPoly::Node> zero_node() {
  static const auto node = std::make_shared<const GenPoly::Node>();
  return node;
}

std::size_t max_arity(const std::vector<GenPoly>& cs) {
  std::size_t a = 0;
  for (const auto& c : cs) a = std::max(a, c.arity());
  return a;
}

}  // namespace

GenPoly::GenPoly() : node_(zero_node()) {}

GenPoly GenPoly::var(std::size_t index) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->var = index;
  n->arity = index + 1;
  return GenPoly(std::move(n));
}

GenPoly GenPoly::constant(const ExactScalar& c) {
  if (c.is_zero()) return GenPoly();
  auto n = std::make_shared<Node>();
  n->kind = Kind::Const;
  n->value = c;
  return GenPoly(std::move(n));
}

GenPoly GenPoly::add(std::vector<GenPoly> terms) {
  ExactScalar sum(0);
  std::vector<GenPoly> rest;
  for (auto& t : terms) {
    if (t.kind() == Kind::Add) {
      for (const auto& c : t.children()) {
        if (c.is_constant()) {
          sum += c.constant_value();
        } else {
          rest.push_back(c);
        }
      }
    } else if (t.is_constant()) {
      sum += t.constant_value();
    } else {
      rest.push_back(std::move(t));
    }
  }
  if (rest.empty()) return constant(sum);
  if (!sum.is_zero()) rest.insert(rest.begin(), constant(sum));
  if (rest.size() == 1) return rest.front();
  auto n = std::make_shared<Node>();
  n->kind = Kind::Add;
  n->arity = max_arity(rest);
  n->children = std::move(rest);
  return GenPoly(std::move(n));
}

GenPoly GenPoly::mul(std::vector<GenPoly> factors) {
  ExactScalar prod(1);
  std::vector<GenPoly> rest;
  for (auto& f : factors) {
    if (f.kind() == Kind::Mul) {
      for (const auto& c : f.children()) {
        if (c.is_constant()) {
          prod *= c.constant_value();
        } else {
          rest.push_back(c);
        }
      }
    } else if (f.is_constant()) {
      prod *= f.constant_value();
    } else {
      rest.push_back(std::move(f));
    }
  }
  if (prod.is_zero()) return GenPoly();
  if (rest.empty()) return constant(prod);
  if (!(prod.is_rational() && prod.rational() == 1)) rest.insert(rest.begin(), constant(prod));
  if (rest.size() == 1) return rest.front();
  auto n = std::make_shared<Node>();
  n->kind = Kind::Mul;
  n->arity = max_arity(rest);
  n->children = std::move(rest);
  return GenPoly(std::move(n));
}

GenPoly GenPoly::floor(const GenPoly& g) {
  if (g.is_constant() && g.constant_value().is_rational()) return constant(ExactScalar(floor_exact(g.constant_value())));
  auto n = std::make_shared<Node>();
  n->kind = Kind::Floor;
  n->arity = g.arity();
  n->children = {g};
  return GenPoly(std::move(n));
}

GenPoly GenPoly::frac(const GenPoly& g) {
  if (g.is_constant() && g.constant_value().is_rational()) return constant(frac_exact(g.constant_value()));
  auto n = std::make_shared<Node>();
  n->kind = Kind::Frac;
  n->arity = g.arity();
  n->children = {g};
  return GenPoly(std::move(n));
}

GenPoly GenPoly::pow(const GenPoly& g, unsigned exponent) {
  if (exponent == 0) return constant(ExactScalar(1));
  if (exponent == 1) return g;
  if (g.is_constant()) return constant(g.constant_value().pow(exponent));
  auto n = std::make_shared<Node>();
  n->kind = Kind::IntPow;
  n->arity = g.arity();
  n->exponent = exponent;
  n->children = {g};
  return GenPoly(std::move(n));
}

GenPoly::Kind GenPoly::kind() const { return node_->kind; }
std::size_t GenPoly::var_index() const { return node_->var; }
const ExactScalar& GenPoly::constant_value() const { return node_->value; }
const std::vector<GenPoly>& GenPoly::children() const { return node_->children; }
unsigned GenPoly::exponent() const { return node_->exponent; }
std::size_t GenPoly::arity() const { return node_->arity; }

bool GenPoly::is_constant(long v) const { return is_constant() && constant_value() == ExactScalar(v); }

std::size_t GenPoly::node_count() const {
  std::unordered_set<const void*> seen;
  std::function<void(const GenPoly&)> walk = [&](const GenPoly& g) {
    if (!seen.insert(g.id()).second) return;
    for (const auto& c : g.children()) walk(c);
  };
  walk(*this);
  return seen.size();
}

GenPoly operator-(const GenPoly& a, const GenPoly& b) { return GenPoly::add({a, -b}); }
GenPoly operator-(const GenPoly& a) { return GenPoly::mul({GenPoly::constant(ExactScalar(-1)), a}); }

bool operator==(const GenPoly& a, const GenPoly& b) {
  std::set<std::pair<const void*, const void*>> equal;
  std::function<bool(const GenPoly&, const GenPoly&)> eq = [&](const GenPoly& x, const GenPoly& y) {
    if (x.id() == y.id()) return true;
    if (equal.count({x.id(), y.id()})) return true;
    if (x.kind() != y.kind()) return false;
    switch (x.kind()) {
      case GenPoly::Kind::Var:
        if (x.var_index() != y.var_index()) return false;
        break;
      case GenPoly::Kind::Const:
        if (x.constant_value() != y.constant_value()) return false;
        break;
      case GenPoly::Kind::IntPow:
        if (x.exponent() != y.exponent()) return false;
        break;
      default:
        break;
    }
    if (x.children().size() != y.children().size()) return false;
    for (std::size_t i = 0; i < x.children().size(); ++i)
      if (!eq(x.children()[i], y.children()[i])) return false;
    equal.insert({x.id(), y.id()});
    return true;
  };
  return eq(a, b);
}

// ---------------------------------------------------------------- unparse

namespace {

void unparse_into(const GenPoly& g, bool univariate, std::string& out) {
  using K = GenPoly::Kind;
  auto atomic = [](const GenPoly& c) {
    if (c.kind() == K::Var || c.kind() == K::Floor || c.kind() == K::Frac) return true;
    return c.is_constant() && c.constant_value().is_integer() && sgn(c.constant_value().rational()) >= 0;
  };
  switch (g.kind()) {
    case K::Var:
      out += univariate ? std::string("n") : "x_" + std::to_string(g.var_index() + 1);
      return;
    case K::Const:
      if (atomic(g)) {
        out += g.constant_value().to_string();
      } else {
        out += "(" + g.constant_value().to_string() + ")";
      }
      return;
    case K::Add:
      for (std::size_t i = 0; i < g.children().size(); ++i) {
        if (i) out += " + ";
        unparse_into(g.children()[i], univariate, out);
      }
      return;
    case K::Mul:
      for (std::size_t i = 0; i < g.children().size(); ++i) {
        if (i) out += "*";
        const auto& c = g.children()[i];
        if (c.kind() == K::Add) {
          out += "(";
          unparse_into(c, univariate, out);
          out += ")";
        } else {
          unparse_into(c, univariate, out);
        }
      }
      return;
    case K::Floor:
    case K::Frac:
      out += g.kind() == K::Floor ? "floor(" : "frac(";
      unparse_into(g.children()[0], univariate, out);
      out += ")";
      return;
    case K::IntPow: {
      const auto& c = g.children()[0];
      if (atomic(c)) {
        unparse_into(c, univariate, out);
      } else {
        out += "(";
        unparse_into(c, univariate, out);
        out += ")";
      }
      out += "^" + std::to_string(g.exponent());
      return;
    }
  }
}

}  // namespace

std::string unparse(const GenPoly& g) {
  std::string out;
  unparse_into(g, g.arity() <= 1, out);
  return out;
}

// ---------------------------------------------------------------- parse

namespace {

class DslParser {
 public:
  DslParser(std::string_view s, std::size_t arity) : s_(s), arity_(arity) {}

  GenPoly parse() {
    GenPoly g = expr();
    skip();
    if (pos_ != s_.size()) throw SyntaxError("unexpected character '" + std::string(1, s_[pos_]) + "'", pos_);
    return g;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    skip();
    if (pos_ >= s_.size()) throw SyntaxError(std::string("unexpected end of input, expected '") + c + "'", pos_);
    if (s_[pos_] != c) throw SyntaxError(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }

  GenPoly expr() {
    GenPoly g = term();
    for (;;) {
      if (eat('+')) {
        g = g + term();
      } else if (eat('-')) {
        g = g - term();
      } else {
        return g;
      }
    }
  }

  GenPoly term() {
    GenPoly g = unary();
    for (;;) {
      if (eat('*')) {
        g = g * unary();
      } else if (eat('/')) {
        skip();
        std::size_t at = pos_;
        GenPoly d = unary();
        if (!d.is_constant()) throw SyntaxError("division is only allowed by constants", at);
        if (d.constant_value().is_zero()) throw SyntaxError("division by zero", at);
        g = g * GenPoly::constant(ExactScalar(1) / d.constant_value());
      } else {
        return g;
      }
    }
  }

  GenPoly unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }

  GenPoly power() {
    GenPoly base = primary();
    while (eat('^')) {
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) throw SyntaxError("expected nonnegative integer exponent", pos_);
      base = GenPoly::pow(base, static_cast<unsigned>(std::stoul(std::string(s_.substr(start, pos_ - start)))));
    }
    return base;
  }

  ExactScalar constant_arg(const GenPoly& g, std::size_t at) {
    if (!g.is_constant()) throw SyntaxError("argument must be constant", at);
    return g.constant_value();
  }

  GenPoly primary() {
    skip();
    if (pos_ >= s_.size()) throw SyntaxError("unexpected end of input", pos_);
    if (eat('(')) {
      GenPoly g = expr();
      expect(')');
      return g;
    }
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
      return GenPoly::constant(parse_scalar(s_.substr(start, pos_ - start)));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string name(s_.substr(start, pos_ - start));
      skip();
      bool call = pos_ < s_.size() && s_[pos_] == '(';
      if (call && (name == "floor" || name == "frac")) {
        ++pos_;
        GenPoly inner = expr();
        expect(')');
        return name == "floor" ? GenPoly::floor(inner) : GenPoly::frac(inner);
      }
      if (call && name == "sqrt") {
        ++pos_;
        std::size_t at = pos_;
        GenPoly inner = expr();
        expect(')');
        return GenPoly::constant(root_of(constant_arg(inner, at), 2, at));
      }
      if (call && name == "root") {
        ++pos_;
        std::size_t at = pos_;
        GenPoly inner = expr();
        expect(',');
        skip();
        std::size_t ds = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (ds == pos_) throw SyntaxError("expected root degree", pos_);
        unsigned long deg = std::stoul(std::string(s_.substr(ds, pos_ - ds)));
        if (deg == 0) throw SyntaxError("root degree must be positive", ds);
        expect(')');
        return GenPoly::constant(root_of(constant_arg(inner, at), static_cast<unsigned>(deg), at));
      }
      return variable(name, start);
    }
    throw SyntaxError("unexpected character '" + std::string(1, c) + "'", pos_);
  }

  ExactScalar root_of(const ExactScalar& v, unsigned deg, std::size_t at) {
    try {
      return ExactScalar::root(v, deg);
    } catch (const DomainError& e) {
      throw SyntaxError(e.what(), at);
    }
  }

  GenPoly variable(const std::string& name, std::size_t at) {
    if (name == "n") {
      if (arity_ > 1 || saw_indexed_beyond_first_) throw UnknownVariable(name, at);
      saw_n_ = true;
      return GenPoly::var(0);
    }
    if (auto idx = default_index(name)) {
      if (arity_ != 0 && *idx >= arity_) throw UnknownVariable(name, at);
      if (*idx > 0 && saw_n_) throw UnknownVariable(name, at);
      if (*idx > 0) saw_indexed_beyond_first_ = true;
      return GenPoly::var(*idx);
    }
    throw UnknownVariable(name, at);
  }

  static std::optional<std::size_t> default_index(const std::string& name) {
    if (name.size() < 3 || name.compare(0, 2, "x_") != 0) return std::nullopt;
    std::size_t v = 0;
    for (std::size_t i = 2; i < name.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(name[i]))) return std::nullopt;
      v = v * 10 + static_cast<std::size_t>(name[i] - '0');
    }
    if (v == 0) return std::nullopt;
    return v - 1;
  }

  std::string_view s_;
  std::size_t arity_;
  std::size_t pos_ = 0;
  bool saw_n_ = false;
  bool saw_indexed_beyond_first_ = false;
};

}  // namespace

GenPoly parse_genpoly(std::string_view text, std::size_t arity) { return DslParser(text, arity).parse(); }

// ---------------------------------------------------------------- json

nlohmann::json to_json(const GenPoly& g) {
  using K = GenPoly::Kind;
  nlohmann::json j;
  switch (g.kind()) {
    case K::Var:
      j = {{"kind", "var"}, {"index", g.var_index()}};
      break;
    case K::Const:
      j = {{"kind", "const"}, {"value", g.constant_value().to_string()}};
      break;
    case K::Add:
    case K::Mul: {
      nlohmann::json cs = nlohmann::json::array();
      for (const auto& c : g.children()) cs.push_back(to_json(c));
      j = {{"kind", g.kind() == K::Add ? "add" : "mul"}, {"children", cs}};
      break;
    }
    case K::Floor:
      j = {{"kind", "floor"}, {"child", to_json(g.children()[0])}};
      break;
    case K::Frac:
      j = {{"kind", "frac"}, {"child", to_json(g.children()[0])}};
      break;
    case K::IntPow:
      j = {{"kind", "pow"}, {"exponent", g.exponent()}, {"child", to_json(g.children()[0])}};
      break;
  }
  return j;
}

GenPoly genpoly_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "var") return GenPoly::var(j.at("index").get<std::size_t>());
  if (kind == "const") return GenPoly::constant(parse_scalar(j.at("value").get<std::string>()));
  if (kind == "add" || kind == "mul") {
    std::vector<GenPoly> cs;
    for (const auto& c : j.at("children")) cs.push_back(genpoly_from_json(c));
    return kind == "add" ? GenPoly::add(std::move(cs)) : GenPoly::mul(std::move(cs));
  }
  if (kind == "floor") return GenPoly::floor(genpoly_from_json(j.at("child")));
  if (kind == "frac") return GenPoly::frac(genpoly_from_json(j.at("child")));
  if (kind == "pow") return GenPoly::pow(genpoly_from_json(j.at("child")), j.at("exponent").get<unsigned>());
  throw SyntaxError("unknown node kind '" + kind + "'", 0);
}

// ---------------------------------------------------------------- eval

namespace {

class Evaluator {
 public:
  Evaluator(const std::vector<ExactScalar>& point, unsigned max_bits, PrecisionStats* stats)
      : point_(point), max_bits_(max_bits), stats_(stats) {}

  ExactScalar run(const GenPoly& g) {
    auto it = memo_.find(g.id());
    if (it != memo_.end()) return it->second;
    ExactScalar v = compute(g);
    memo_.emplace(g.id(), v);
    return v;
  }

 private:
  ExactScalar child(const GenPoly& g, std::size_t i) {
    try {
      return run(g.children()[i]);
    } catch (const IndeterminateFloor& e) {
      throw e.with_path_prefix(i);
    }
  }

  ExactScalar compute(const GenPoly& g) {
    using K = GenPoly::Kind;
    switch (g.kind()) {
      case K::Var:
        return point_[g.var_index()];
      case K::Const:
        return g.constant_value();
      case K::Add: {
        ExactScalar acc(0);
        for (std::size_t i = 0; i < g.children().size(); ++i) acc += child(g, i);
        return acc;
      }
      case K::Mul: {
        ExactScalar acc(1);
        for (std::size_t i = 0; i < g.children().size(); ++i) {
          acc *= child(g, i);
          if (acc.is_zero()) break;
        }
        return acc;
      }
      case K::Floor:
        return ExactScalar(floor_exact(child(g, 0), max_bits_, stats_));
      case K::Frac:
        return frac_exact(child(g, 0), max_bits_, stats_);
      case K::IntPow:
        return child(g, 0).pow(g.exponent());
    }
    return ExactScalar(0);
  }

  const std::vector<ExactScalar>& point_;
  unsigned max_bits_;
  PrecisionStats* stats_;
  std::unordered_map<const void*, ExactScalar> memo_;
};

}  // namespace

ExactScalar eval(const GenPoly& g, const std::vector<ExactScalar>& point, unsigned max_bits, PrecisionStats* stats) {
  if (point.size() < g.arity())
    throw DomainError("point has " + std::to_string(point.size()) + " coordinates, expression needs " +
                      std::to_string(g.arity()));
  return Evaluator(point, max_bits, stats).run(g);
}

}  // namespace gplab
