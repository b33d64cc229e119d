#include <cctype>

#include "gplab/error.hpp"
#include "gplab/numbers.hpp"

namespace gplab {

namespace {

class ScalarParser {
 public:
  explicit ScalarParser(std::string_view text) : s_(text) {}

  ExactScalar parse() {
    ExactScalar v = expr();
    skip();
    if (pos_ != s_.size()) throw SyntaxError("unexpected character '" + std::string(1, s_[pos_]) + "'", pos_);
    return v;
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
    if (!eat(c)) throw SyntaxError(std::string("expected '") + c + "'", pos_);
  }

  ExactScalar expr() {
    ExactScalar v = term();
    for (;;) {
      if (eat('+')) {
        v = v + term();
      } else if (eat('-')) {
        v = v - term();
      } else {
        return v;
      }
    }
  }

  ExactScalar term() {
    ExactScalar v = unary();
    for (;;) {
      if (eat('*')) {
        v = v * unary();
      } else if (eat('/')) {
        std::size_t at = pos_;
        ExactScalar d = unary();
        if (d.is_zero()) throw SyntaxError("division by zero", at);
        v = v / d;
      } else {
        return v;
      }
    }
  }

  ExactScalar unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }

  ExactScalar power() {
    ExactScalar base = primary();
    if (eat('^')) {
      skip();
      bool neg = eat('-');
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) throw SyntaxError("expected integer exponent", pos_);
      long e = std::stol(std::string(s_.substr(start, pos_ - start)));
      return base.pow(neg ? -e : e);
    }
    return base;
  }

  ExactScalar primary() {
    skip();
    if (pos_ >= s_.size()) throw SyntaxError("unexpected end of input", pos_);
    if (eat('(')) {
      ExactScalar v = expr();
      expect(')');
      return v;
    }
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      std::string name(s_.substr(start, pos_ - start));
      if (name == "sqrt") {
        expect('(');
        ExactScalar v = expr();
        expect(')');
        return checked_root(v, 2, start);
      }
      if (name == "root") {
        expect('(');
        ExactScalar v = expr();
        expect(',');
        skip();
        std::size_t ds = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (ds == pos_) throw SyntaxError("expected root degree", pos_);
        unsigned long n = std::stoul(std::string(s_.substr(ds, pos_ - ds)));
        if (n == 0) throw SyntaxError("root degree must be positive", ds);
        expect(')');
        return checked_root(v, static_cast<unsigned>(n), start);
      }
      throw SyntaxError("unknown function '" + name + "'", start);
    }
    throw SyntaxError("unexpected character '" + std::string(1, c) + "'", pos_);
  }

  ExactScalar checked_root(const ExactScalar& v, unsigned n, std::size_t at) {
    try {
      return ExactScalar::root(v, n);
    } catch (const DomainError& e) {
      throw SyntaxError(e.what(), at);
    }
  }

  ExactScalar number() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    std::string whole(s_.substr(start, pos_ - start));
    std::string frac;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      std::size_t fs = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      frac = std::string(s_.substr(fs, pos_ - fs));
    }
    if (whole.empty() && frac.empty()) throw SyntaxError("malformed number", start);
    Integer num(whole.empty() ? "0" : whole);
    if (frac.empty()) return ExactScalar(num);
    Integer scale = ipow(Integer(10), frac.size());
    Rational q(num * scale + Integer(frac), scale);
    q.canonicalize();
    return ExactScalar(q);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

ExactScalar parse_scalar(std::string_view text) { return ScalarParser(text).parse(); }

Rational parse_rational(std::string_view text) {
  ExactScalar v = parse_scalar(text);
  if (!v.is_rational()) throw SyntaxError("expected a rational literal", 0);
  return v.rational();
}

}  // namespace gplab
