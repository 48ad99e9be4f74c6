// ladder_algebra.hpp - exact symbolic algebra over bosonic ladder generators
//
// Two commuting families A and B with [a_j, a_k+] = delta_jk, [b_j, b_k+] =
// delta_jk and all cross-commutators zero.  OperatorPoly stores a finite sum
// of complex-weighted words of generators; normal_order() rewrites to the
// unique canonical form (all daggered generators left, blocks sorted by
// (family, mode)).  Equality is canonical-form equality with coefficient
// residuals below 1e-12 treated as symbolically zero.

#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "focklab/classical_poly.hpp"

namespace focklab {

using Complex = std::complex<double>;

inline constexpr unsigned kMaxWordLength = 16;
inline constexpr double kSymbolicZeroTol = 1e-12;
inline constexpr double kCoeffDropRel = 1e-14;

enum class Family : uint8_t { A, B };

struct Generator {
  Family family;
  unsigned mode;  // 1-based
  bool dagger;

  // daggered generators order before undaggered ones, so a normal-ordered
  // word is ascending under this comparison
  friend bool operator<(const Generator& x, const Generator& y) {
    if (x.dagger != y.dagger) return x.dagger > y.dagger;
    if (x.family != y.family) return x.family < y.family;
    return x.mode < y.mode;
  }
  friend bool operator==(const Generator& x, const Generator& y) {
    return x.dagger == y.dagger && x.family == y.family && x.mode == y.mode;
  }
};

inline Generator ann(unsigned j, Family f = Family::A) { return {f, j, false}; }
inline Generator cre(unsigned j, Family f = Family::A) { return {f, j, true}; }

using Word = std::vector<Generator>;

class OperatorPoly {
 public:
  OperatorPoly() = default;
  explicit OperatorPoly(unsigned mode_count) : mode_count_(mode_count) {}

  static OperatorPoly zero(unsigned n) { return OperatorPoly(n); }
  static OperatorPoly identity(unsigned n);
  static OperatorPoly generator(Generator g, unsigned n);

  unsigned mode_count() const { return mode_count_; }
  const std::map<Word, Complex>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  unsigned degree() const;
  double max_coeff() const;

  void add_word(const Word& w, Complex c);

  OperatorPoly operator+(const OperatorPoly& o) const;
  OperatorPoly operator-(const OperatorPoly& o) const;
  OperatorPoly operator*(Complex s) const;
  // ring product; result is returned in canonical (normal-ordered) form
  OperatorPoly operator*(const OperatorPoly& o) const;

  OperatorPoly adjoint() const;

  // true if the largest coefficient of the canonical form is <= tol
  bool is_zero(double tol = kSymbolicZeroTol) const;
  bool equals(const OperatorPoly& o, double tol = kSymbolicZeroTol) const;

  std::string to_string() const;

 private:
  void drop_small();
  unsigned mode_count_ = 0;
  std::map<Word, Complex> terms_;
};

inline OperatorPoly operator*(Complex s, const OperatorPoly& p) { return p * s; }

// canonical rewrite using the CCRs; algebraically equal to the input
OperatorPoly normal_order(const OperatorPoly& p);

// Wick colon: reorder every word daggers-left, DROPPING the commutator
// remainders (contraction constants)
OperatorPoly wick_strip(const OperatorPoly& p);

// written-order product of the factors followed by wick_strip; this is the
// normal product :f1 f2 ... fk: for linear factors
OperatorPoly wick_product(const std::vector<OperatorPoly>& factors);

// normal_order(p q - q p)
OperatorPoly commutator(const OperatorPoly& p, const OperatorPoly& q);

// Phi_j = (a_j + a_j+)/2,  Pi_j = (a_j - a_j+)/2i
OperatorPoly phi_op(unsigned j, unsigned n);
OperatorPoly pi_op(unsigned j, unsigned n);

// substitution map with Phi factors left of Pi factors, written order
OperatorPoly quantize_canonical(const ClassicalPoly& f, unsigned n = 0);
// the Wick normal product of the same substitution
OperatorPoly quantize_normal(const ClassicalPoly& f, unsigned n = 0);

// residual of the bracket identities
//   side phi: [Phi_j, f_n] - (i/2) (df/dpi_j)_n
//   side pi : [Pi_j,  f_n] + (i/2) (df/dphi_j)_n
enum class BracketSide { Phi, Pi };
OperatorPoly check_bracket_identity(const ClassicalPoly& f, unsigned j,
                                    BracketSide side, unsigned n = 0);

// replaces every generator by image(g) and multiplies out; used for the
// symbolic X-conjugation in the expanded-Fock module
OperatorPoly substitute(const OperatorPoly& p,
                        const std::function<OperatorPoly(Generator)>& image);

}  // namespace focklab
