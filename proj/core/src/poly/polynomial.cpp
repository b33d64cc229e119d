#include "gplab/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "gplab/error.hpp"

namespace gplab {

namespace {

void trim(Monomial& m) {
  while (!m.empty() && m.back() == 0) m.pop_back();
}

unsigned exponent_at(const Monomial& m, std::size_t i) { return i < m.size() ? m[i] : 0; }

}  // namespace

unsigned total_degree(const Monomial& m) {
  unsigned d = 0;
  for (unsigned e : m) d += e;
  return d;
}

bool grlex_less(const Monomial& a, const Monomial& b) {
  unsigned da = total_degree(a);
  unsigned db = total_degree(b);
  if (da != db) return da < db;
  std::size_t n = std::max(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    unsigned ea = exponent_at(a, i);
    unsigned eb = exponent_at(b, i);
    if (ea != eb) return ea < eb;
  }
  return false;
}

Monomial monomial_product(const Monomial& a, const Monomial& b) {
  Monomial r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = exponent_at(a, i) + exponent_at(b, i);
  trim(r);
  return r;
}

std::vector<Monomial> monomials_up_to(std::size_t nvars, unsigned max_degree) {
  std::vector<Monomial> out;
  Monomial cur(nvars, 0);
  std::function<void(std::size_t, unsigned)> rec = [&](std::size_t i, unsigned left) {
    if (i == nvars) {
      Monomial m = cur;
      trim(m);
      out.push_back(std::move(m));
      return;
    }
    for (unsigned e = 0; e <= left; ++e) {
      cur[i] = e;
      rec(i + 1, left - e);
    }
    cur[i] = 0;
  };
  rec(0, max_degree);
  std::sort(out.begin(), out.end(), grlex_less);
  return out;
}

Polynomial::Polynomial(const Rational& c) {
  if (sgn(c) != 0) terms_.emplace(Monomial{}, c);
}

Polynomial Polynomial::variable(std::size_t i) {
  Monomial m(i + 1, 0);
  m[i] = 1;
  return term(std::move(m), Rational(1));
}

Polynomial Polynomial::term(Monomial m, const Rational& c) {
  Polynomial p;
  trim(m);
  p.add_term(m, c);
  return p;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
  if (sgn(c) == 0) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

bool Polynomial::is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty()); }

Rational Polynomial::constant_term() const { return coefficient({}); }

Rational Polynomial::coefficient(const Monomial& m) const {
  Monomial t = m;
  trim(t);
  auto it = terms_.find(t);
  return it == terms_.end() ? Rational(0) : it->second;
}

int Polynomial::total_degree() const {
  if (terms_.empty()) return -1;
  return static_cast<int>(gplab::total_degree(terms_.rbegin()->first));
}

std::size_t Polynomial::num_vars() const {
  std::size_t n = 0;
  for (const auto& [m, c] : terms_) n = std::max(n, m.size());
  return n;
}

const Monomial& Polynomial::leading_monomial() const {
  if (terms_.empty()) throw DomainError("leading monomial of the zero polynomial");
  return terms_.rbegin()->first;
}

const Rational& Polynomial::leading_coefficient() const {
  if (terms_.empty()) throw DomainError("leading coefficient of the zero polynomial");
  return terms_.rbegin()->second;
}

unsigned Polynomial::degree_in(std::size_t i) const {
  unsigned d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, exponent_at(m, i));
  return d;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  Polynomial r = a;
  for (const auto& [m, c] : b.terms_) r.add_term(m, c);
  return r;
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  Polynomial r = a;
  for (const auto& [m, c] : b.terms_) r.add_term(m, Rational(-c));
  return r;
}

Polynomial operator-(const Polynomial& a) { return a.scaled(Rational(-1)); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial r;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) r.add_term(monomial_product(ma, mb), Rational(ca * cb));
  return r;
}

Polynomial Polynomial::pow(unsigned e) const {
  Polynomial result(1);
  Polynomial base = *this;
  while (e) {
    if (e & 1U) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

Polynomial Polynomial::scaled(const Rational& c) const {
  Polynomial r;
  if (sgn(c) == 0) return r;
  for (const auto& [m, v] : terms_) r.terms_.emplace(m, Rational(v * c));
  return r;
}

Polynomial Polynomial::monic() const {
  if (terms_.empty()) return *this;
  return scaled(Rational(1 / leading_coefficient()));
}

ExactScalar Polynomial::evaluate(const std::vector<ExactScalar>& point) const {
  if (point.size() < num_vars()) throw DomainError("evaluation point has too few coordinates");
  std::vector<std::vector<ExactScalar>> powers(point.size());
  auto power_of = [&](std::size_t i, unsigned e) -> const ExactScalar& {
    auto& p = powers[i];
    if (p.empty()) p.push_back(ExactScalar(1));
    while (p.size() <= e) p.push_back(p.back() * point[i]);
    return p[e];
  };
  ExactScalar acc(0);
  for (const auto& [m, c] : terms_) {
    ExactScalar t(c);
    for (std::size_t i = 0; i < m.size(); ++i)
      if (m[i]) t = t * power_of(i, m[i]);
    acc = acc + t;
  }
  return acc;
}

Rational Polynomial::evaluate(const std::vector<Rational>& point) const {
  if (point.size() < num_vars()) throw DomainError("evaluation point has too few coordinates");
  Rational acc(0);
  for (const auto& [m, c] : terms_) {
    Rational t = c;
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (unsigned e = 0; e < m[i]; ++e) t *= point[i];
    }
    acc += t;
  }
  return acc;
}

Polynomial Polynomial::substitute(const std::vector<Polynomial>& images) const {
  Polynomial acc;
  for (const auto& [m, c] : terms_) {
    Polynomial t(c);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (!m[i]) continue;
      Polynomial base = i < images.size() ? images[i] : variable(i);
      t = t * base.pow(m[i]);
    }
    acc += t;
  }
  return acc;
}

std::string Polynomial::to_string(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  auto name = [&](std::size_t i) { return i < names.size() ? names[i] : "x_" + std::to_string(i + 1); };
  std::string out;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    Rational mag = abs(c);
    std::string mono;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (!m[i]) continue;
      if (!mono.empty()) mono += "*";
      mono += name(i);
      if (m[i] > 1) mono += "^" + std::to_string(m[i]);
    }
    std::string piece;
    if (mono.empty()) {
      piece = gplab::to_string(mag);
    } else if (mag == 1) {
      piece = mono;
    } else {
      piece = gplab::to_string(mag) + "*" + mono;
    }
    if (first) {
      out = (sgn(c) < 0 ? "-" : "") + piece;
    } else {
      out += (sgn(c) < 0 ? " - " : " + ") + piece;
    }
    first = false;
  }
  return out;
}

nlohmann::json Polynomial::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  std::size_t n = std::max<std::size_t>(num_vars(), 1);
  for (const auto& [m, c] : terms_) {
    std::string key;
    for (std::size_t i = 0; i < n; ++i) {
      if (i) key += ",";
      key += std::to_string(exponent_at(m, i));
    }
    j[key] = gplab::to_string(c);
  }
  return j;
}

Polynomial Polynomial::from_json(const nlohmann::json& j) {
  Polynomial p;
  for (const auto& [key, value] : j.items()) {
    Monomial m;
    std::stringstream ss(key);
    std::string part;
    while (std::getline(ss, part, ',')) m.push_back(static_cast<unsigned>(std::stoul(part)));
    trim(m);
    p.add_term(m, parse_rational(value.get<std::string>()));
  }
  return p;
}

std::optional<std::size_t> default_variable_resolver(std::string_view name) {
  if (name.size() < 3 || name.substr(0, 2) != "x_") return std::nullopt;
  std::size_t v = 0;
  for (char c : name.substr(2)) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    v = v * 10 + static_cast<std::size_t>(c - '0');
  }
  if (v == 0) return std::nullopt;
  return v - 1;
}

namespace {

class PolyParser {
 public:
  PolyParser(std::string_view s, const VariableResolver& r) : s_(s), resolve_(r) {}

  Polynomial parse() {
    Polynomial p = expr();
    skip();
    if (pos_ != s_.size()) throw SyntaxError("unexpected character '" + std::string(1, s_[pos_]) + "'", pos_);
    return p;
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

  Polynomial expr() {
    Polynomial p = term();
    for (;;) {
      if (eat('+')) {
        p += term();
      } else if (eat('-')) {
        p -= term();
      } else {
        return p;
      }
    }
  }

  Polynomial term() {
    Polynomial p = unary();
    for (;;) {
      if (eat('*')) {
        p *= unary();
      } else if (eat('/')) {
        std::size_t at = pos_;
        Polynomial d = unary();
        if (!d.is_constant() || d.is_zero()) throw SyntaxError("division by a non-constant or zero", at);
        p = p.scaled(Rational(1 / d.constant_term()));
      } else {
        return p;
      }
    }
  }

  Polynomial unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    Polynomial base = primary();
    if (eat('^')) {
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) throw SyntaxError("expected nonnegative integer exponent", pos_);
      base = base.pow(static_cast<unsigned>(std::stoul(std::string(s_.substr(start, pos_ - start)))));
    }
    return base;
  }

  Polynomial primary() {
    skip();
    if (pos_ >= s_.size()) throw SyntaxError("unexpected end of input", pos_);
    if (eat('(')) {
      Polynomial p = expr();
      if (!eat(')')) throw SyntaxError("expected ')'", pos_);
      return p;
    }
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
      return Polynomial(parse_rational(s_.substr(start, pos_ - start)));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string_view name = s_.substr(start, pos_ - start);
      auto v = resolve_(name);
      if (!v) throw UnknownVariable(std::string(name), start);
      return Polynomial::variable(*v);
    }
    throw SyntaxError("unexpected character '" + std::string(1, c) + "'", pos_);
  }

  std::string_view s_;
  const VariableResolver& resolve_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse_polynomial(std::string_view text, const VariableResolver& resolver) {
  return PolyParser(text, resolver).parse();
}

}  // namespace gplab
