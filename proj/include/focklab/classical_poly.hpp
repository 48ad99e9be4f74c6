// classical_poly.hpp - real multivariate polynomials in phi_j, pi_j, phidot_j
//
// Coefficients are doubles; terms are kept merged with a deterministic
// ordering so that serialization is byte-stable.  The text grammar is
//   expr   := term (('+'|'-') term)*
//   term   := coeff ('*' factor)* | factor ('*' factor)*
//   factor := var ('^' uint)?
//   var    := ('phi'|'pi'|'phidot') uint
// with whitespace ignored.

#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace focklab {

inline constexpr unsigned kMaxPolyDegree = 16;

enum class VarKind : uint8_t { Phi, Pi, PhiDot };

struct Var {
  VarKind kind;
  unsigned mode;  // 1-based

  friend bool operator<(const Var& a, const Var& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    return a.mode < b.mode;
  }
  friend bool operator==(const Var& a, const Var& b) {
    return a.kind == b.kind && a.mode == b.mode;
  }
};

std::string var_name(const Var& v);

inline Var phi_var(unsigned j) { return {VarKind::Phi, j}; }
inline Var pi_var(unsigned j) { return {VarKind::Pi, j}; }
inline Var phidot_var(unsigned j) { return {VarKind::PhiDot, j}; }

struct ParseError : std::runtime_error {
  int line, column;
  ParseError(const std::string& msg, int line_, int col_)
      : std::runtime_error(msg + " at line " + std::to_string(line_) +
                           ", column " + std::to_string(col_)),
        line(line_), column(col_) {}
};

struct DegreeOverflow : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exponent map of one monomial; zero exponents are never stored.
using Exponents = std::map<Var, unsigned>;

class ClassicalPoly {
 public:
  ClassicalPoly() = default;
  explicit ClassicalPoly(unsigned mode_count) : mode_count_(mode_count) {}

  static ClassicalPoly constant(double c, unsigned mode_count = 0);
  static ClassicalPoly variable(Var v, unsigned mode_count = 0);

  unsigned mode_count() const { return mode_count_; }
  const std::map<Exponents, double>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  unsigned degree() const;

  void add_term(const Exponents& e, double c);

  ClassicalPoly operator+(const ClassicalPoly& o) const;
  ClassicalPoly operator-(const ClassicalPoly& o) const;
  ClassicalPoly operator*(const ClassicalPoly& o) const;
  ClassicalPoly operator*(double s) const;
  ClassicalPoly pow(unsigned k) const;

  bool uses_kind(VarKind k) const;
  unsigned max_mode(VarKind k) const;

  double eval(const std::vector<double>& phi, const std::vector<double>& pi,
              const std::vector<double>& phidot = {}) const;

  // Canonical text form: terms sorted, variables in (name, index) order,
  // coefficients with 17 significant digits.
  std::string to_string() const;

 private:
  unsigned mode_count_ = 0;
  std::map<Exponents, double> terms_;
};

inline ClassicalPoly operator*(double s, const ClassicalPoly& p) { return p * s; }

ClassicalPoly partial_derivative(const ClassicalPoly& f, Var v);

// {f, g} = sum_j df/dphi_j dg/dpi_j - df/dpi_j dg/dphi_j
ClassicalPoly poisson_bracket(const ClassicalPoly& f, const ClassicalPoly& g);

ClassicalPoly parse_poly(const std::string& text);

}  // namespace focklab
