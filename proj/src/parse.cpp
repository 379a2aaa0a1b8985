#include "icis/parse.hpp"

#include <cctype>

namespace icis {

namespace {

class Parser {
 public:
  Parser(const std::string& s, Field f, int nvars, int prec)
      : s_(s), f_(f), nvars_(nvars), prec_(prec) {}

  Poly parse() {
    Poly p = expr();
    skip_ws();
    if (pos_ != s_.size()) throw ParseError("unexpected character", pos_);
    return p;
  }

 private:
  const std::string& s_;
  Field f_;
  int nvars_;
  int prec_;
  size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace((unsigned char)s_[pos_])) ++pos_;
  }
  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  Poly expr() {
    Poly acc = term();
    while (true) {
      char c = peek();
      if (c == '+') {
        ++pos_;
        acc += term();
      } else if (c == '-') {
        ++pos_;
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  Poly term() {
    Poly acc = factor();
    while (peek() == '*') {
      ++pos_;
      acc = acc * factor();
    }
    return acc;
  }

  Poly factor() {
    Poly base = atom();
    if (peek() == '^') {
      ++pos_;
      skip_ws();
      size_t at = pos_;
      long e = integer();
      if (e < 0) throw ParseError("negative exponent", at);
      Poly r = Poly::constant(f_, nvars_, f_.one(), prec_);
      for (long i = 0; i < e; ++i) r = r * base;
      return r;
    }
    return base;
  }

  Poly atom() {
    char c = peek();
    if (c == '(') {
      ++pos_;
      Poly p = expr();
      if (peek() != ')') throw ParseError("expected ')'", pos_);
      ++pos_;
      return p;
    }
    if (c == '-') {
      ++pos_;
      return -atom();
    }
    if (std::isdigit((unsigned char)c)) {
      size_t at = pos_;
      long v = integer();
      skip_ws();
      if (pos_ < s_.size() && std::isalpha((unsigned char)s_[pos_]))
        throw ParseError("juxtaposition not allowed, use '*'", pos_);
      (void)at;
      return Poly::constant(f_, nvars_, f_.from_int(v), prec_);
    }
    if (std::isalpha((unsigned char)c)) return variable();
    throw ParseError("expected a factor", pos_);
  }

  long integer() {
    skip_ws();
    if (pos_ >= s_.size() || !std::isdigit((unsigned char)s_[pos_]))
      throw ParseError("expected an integer", pos_);
    long v = 0;
    while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) {
      v = v * 10 + (s_[pos_] - '0');
      if (v > (1l << 40)) throw ParseError("integer literal too large", pos_);
      ++pos_;
    }
    return v;
  }

  Poly variable() {
    skip_ws();
    size_t at = pos_;
    char c = s_[pos_++];
    int idx = -1;
    if (c == 'x' && pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) {
      int n = s_[pos_] - '0';
      if (n >= 1 && n <= kMaxVars) {
        idx = n - 1;
        ++pos_;
      } else {
        throw ParseError("variable index out of range", at);
      }
    } else {
      switch (c) {
        case 'x': idx = 0; break;
        case 'y': idx = 1; break;
        case 'z': idx = 2; break;
        case 'w': idx = 3; break;
        default: throw ParseError("unknown variable", at);
      }
    }
    if (idx >= nvars_)
      throw WrongVariableCount("variable beyond declared count: " +
                               std::string(1, c));
    if (pos_ < s_.size() && std::isalpha((unsigned char)s_[pos_]))
      throw ParseError("juxtaposition not allowed, use '*'", pos_);
    return Poly::variable(f_, nvars_, idx, prec_);
  }
};

std::vector<std::string> split_components(const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == ';') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

}  // namespace

Poly parse_poly(const std::string& text, Field f, int nvars, int prec) {
  return Parser(text, f, nvars, prec).parse();
}

MapGerm parse_germ(const std::string& text, Field f, int nvars, int prec) {
  auto parts = split_components(text);
  int n = nvars > 0 ? nvars : (int)parts.size();
  if (n < 1 || n > kMaxVars)
    throw WrongVariableCount("germ needs between 1 and 8 variables");
  std::vector<Poly> comps;
  for (auto& part : parts) comps.push_back(parse_poly(part, f, n, prec));
  return MapGerm(std::move(comps));
}

}  // namespace icis
