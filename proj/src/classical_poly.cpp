#include "focklab/classical_poly.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>

namespace focklab {

namespace {
constexpr double kMergeDropRel = 1e-14;
}

std::string var_name(const Var& v) {
  const char* base = v.kind == VarKind::Phi ? "phi"
                     : v.kind == VarKind::Pi ? "pi"
                                             : "phidot";
  return base + std::to_string(v.mode);
}

ClassicalPoly ClassicalPoly::constant(double c, unsigned mode_count) {
  ClassicalPoly p(mode_count);
  p.add_term({}, c);
  return p;
}

ClassicalPoly ClassicalPoly::variable(Var v, unsigned mode_count) {
  ClassicalPoly p(std::max(mode_count, v.mode));
  p.add_term({{v, 1u}}, 1.0);
  return p;
}

unsigned ClassicalPoly::degree() const {
  unsigned d = 0;
  for (const auto& [e, c] : terms_) {
    unsigned td = 0;
    for (const auto& [v, k] : e) td += k;
    d = std::max(d, td);
  }
  return d;
}

void ClassicalPoly::add_term(const Exponents& e, double c) {
  if (c == 0.0) return;
  if (!std::isfinite(c)) throw std::invalid_argument("non-finite coefficient");
  for (const auto& [v, k] : e) {
    if (k > kMaxPolyDegree) throw DegreeOverflow("exponent exceeds degree limit");
    mode_count_ = std::max(mode_count_, v.mode);
  }
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, c);
  } else {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

ClassicalPoly ClassicalPoly::operator+(const ClassicalPoly& o) const {
  ClassicalPoly r = *this;
  r.mode_count_ = std::max(mode_count_, o.mode_count_);
  for (const auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

ClassicalPoly ClassicalPoly::operator-(const ClassicalPoly& o) const {
  ClassicalPoly r = *this;
  r.mode_count_ = std::max(mode_count_, o.mode_count_);
  for (const auto& [e, c] : o.terms_) r.add_term(e, -c);
  return r;
}

ClassicalPoly ClassicalPoly::operator*(double s) const {
  ClassicalPoly r(mode_count_);
  for (const auto& [e, c] : terms_) r.add_term(e, c * s);
  return r;
}

ClassicalPoly ClassicalPoly::operator*(const ClassicalPoly& o) const {
  ClassicalPoly r(std::max(mode_count_, o.mode_count_));
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : o.terms_) {
      Exponents e = ea;
      for (const auto& [v, k] : eb) {
        unsigned sum = (e[v] += k);
        if (sum > kMaxPolyDegree)
          throw DegreeOverflow("product exceeds degree limit");
      }
      r.add_term(e, ca * cb);
    }
  }
  // drop numerically negligible leftovers relative to the largest term
  double mx = 0;
  for (const auto& [e, c] : r.terms_) mx = std::max(mx, std::fabs(c));
  for (auto it = r.terms_.begin(); it != r.terms_.end();) {
    if (std::fabs(it->second) <= kMergeDropRel * mx)
      it = r.terms_.erase(it);
    else
      ++it;
  }
  return r;
}

ClassicalPoly ClassicalPoly::pow(unsigned k) const {
  ClassicalPoly r = constant(1.0, mode_count_);
  for (unsigned i = 0; i < k; ++i) r = r * (*this);
  return r;
}

bool ClassicalPoly::uses_kind(VarKind k) const {
  for (const auto& [e, c] : terms_)
    for (const auto& [v, p] : e)
      if (v.kind == k) return true;
  return false;
}

unsigned ClassicalPoly::max_mode(VarKind k) const {
  unsigned m = 0;
  for (const auto& [e, c] : terms_)
    for (const auto& [v, p] : e)
      if (v.kind == k) m = std::max(m, v.mode);
  return m;
}

double ClassicalPoly::eval(const std::vector<double>& phi,
                           const std::vector<double>& pi,
                           const std::vector<double>& phidot) const {
  double total = 0;
  for (const auto& [e, c] : terms_) {
    double t = c;
    for (const auto& [v, k] : e) {
      const std::vector<double>* src = v.kind == VarKind::Phi   ? &phi
                                       : v.kind == VarKind::Pi ? &pi
                                                               : &phidot;
      if (v.mode > src->size())
        throw std::out_of_range("variable " + var_name(v) +
                                " outside supplied state");
      double x = (*src)[v.mode - 1];
      for (unsigned i = 0; i < k; ++i) t *= x;
    }
    total += t;
  }
  return total;
}

std::string ClassicalPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    double mag = std::fabs(c);
    if (first) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    first = false;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", mag);
    out += buf;
    for (const auto& [v, k] : e) {
      out += "*" + var_name(v);
      if (k > 1) out += "^" + std::to_string(k);
    }
  }
  return out;
}

ClassicalPoly partial_derivative(const ClassicalPoly& f, Var v) {
  ClassicalPoly r(f.mode_count());
  for (const auto& [e, c] : f.terms()) {
    auto it = e.find(v);
    if (it == e.end()) continue;
    unsigned k = it->second;
    Exponents de = e;
    if (k == 1)
      de.erase(v);
    else
      de[v] = k - 1;
    r.add_term(de, c * k);
  }
  return r;
}

ClassicalPoly poisson_bracket(const ClassicalPoly& f, const ClassicalPoly& g) {
  unsigned n = std::max(f.mode_count(), g.mode_count());
  ClassicalPoly r(n);
  for (unsigned j = 1; j <= n; ++j) {
    r = r + partial_derivative(f, phi_var(j)) * partial_derivative(g, pi_var(j));
    r = r - partial_derivative(f, pi_var(j)) * partial_derivative(g, phi_var(j));
  }
  return r;
}

namespace {

struct Lexer {
  const std::string& s;
  size_t pos = 0;
  int line = 1, col = 1;

  explicit Lexer(const std::string& text) : s(text) {}

  void advance() {
    if (pos < s.size()) {
      if (s[pos] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++pos;
    }
  }
  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
      advance();
  }
  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }
  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(msg, line, col);
  }
};

unsigned parse_uint(Lexer& lx) {
  lx.skip_ws();
  if (lx.pos >= lx.s.size() || !std::isdigit(static_cast<unsigned char>(lx.s[lx.pos])))
    lx.fail("expected unsigned integer");
  unsigned long v = 0;
  while (lx.pos < lx.s.size() && std::isdigit(static_cast<unsigned char>(lx.s[lx.pos]))) {
    v = v * 10 + (lx.s[lx.pos] - '0');
    if (v > 1000000) lx.fail("integer too large");
    lx.advance();
  }
  return static_cast<unsigned>(v);
}

double parse_number(Lexer& lx) {
  lx.skip_ws();
  size_t start = lx.pos;
  int start_line = lx.line, start_col = lx.col;
  while (lx.pos < lx.s.size() &&
         (std::isdigit(static_cast<unsigned char>(lx.s[lx.pos])) ||
          lx.s[lx.pos] == '.' || lx.s[lx.pos] == 'e' || lx.s[lx.pos] == 'E' ||
          ((lx.s[lx.pos] == '+' || lx.s[lx.pos] == '-') && lx.pos > start &&
           (lx.s[lx.pos - 1] == 'e' || lx.s[lx.pos - 1] == 'E'))))
    lx.advance();
  if (lx.pos == start) lx.fail("expected number");
  try {
    size_t used = 0;
    double v = std::stod(lx.s.substr(start, lx.pos - start), &used);
    if (used != lx.pos - start)
      throw ParseError("malformed number", start_line, start_col);
    return v;
  } catch (const std::invalid_argument&) {
    throw ParseError("malformed number", start_line, start_col);
  }
}

bool at_var(Lexer& lx) {
  char c = lx.peek();
  return c == 'p';  // phi | pi | phidot
}

Var parse_var(Lexer& lx) {
  lx.skip_ws();
  int vl = lx.line, vc = lx.col;
  std::string name;
  while (lx.pos < lx.s.size() && std::isalpha(static_cast<unsigned char>(lx.s[lx.pos]))) {
    name += lx.s[lx.pos];
    lx.advance();
  }
  VarKind kind;
  if (name == "phi")
    kind = VarKind::Phi;
  else if (name == "pi")
    kind = VarKind::Pi;
  else if (name == "phidot")
    kind = VarKind::PhiDot;
  else
    throw ParseError("unknown variable name '" + name + "'", vl, vc);
  unsigned mode = parse_uint(lx);
  if (mode == 0) throw ParseError("mode index must be >= 1", vl, vc);
  return {kind, mode};
}

// factor := var ('^' uint)?
void parse_factor(Lexer& lx, Exponents& e) {
  Var v = parse_var(lx);
  unsigned k = 1;
  if (lx.peek() == '^') {
    lx.advance();
    k = parse_uint(lx);
    if (k > kMaxPolyDegree) lx.fail("exponent exceeds degree limit");
  }
  unsigned sum = (e[v] += k);
  if (sum > kMaxPolyDegree) lx.fail("exponent exceeds degree limit");
}

void parse_term(Lexer& lx, ClassicalPoly& p, double sign) {
  double coeff = 1.0;
  Exponents e;
  if (at_var(lx)) {
    parse_factor(lx, e);
  } else {
    coeff = parse_number(lx);
  }
  while (lx.peek() == '*') {
    lx.advance();
    parse_factor(lx, e);
  }
  p.add_term(e, sign * coeff);
}

}  // namespace

ClassicalPoly parse_poly(const std::string& text) {
  Lexer lx(text);
  ClassicalPoly p;
  double sign = 1.0;
  if (lx.peek() == '-') {
    lx.advance();
    sign = -1.0;
  } else if (lx.peek() == '+') {
    lx.advance();
  }
  parse_term(lx, p, sign);
  while (true) {
    char c = lx.peek();
    if (c == '+' || c == '-') {
      lx.advance();
      parse_term(lx, p, c == '+' ? 1.0 : -1.0);
    } else if (c == '\0') {
      break;
    } else {
      lx.fail(std::string("unexpected character '") + c + "'");
    }
  }
  return p;
}

}  // namespace focklab
