#include "focklab/ladder_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace focklab {

OperatorPoly OperatorPoly::identity(unsigned n) {
  OperatorPoly p(n);
  p.add_word({}, Complex(1.0, 0.0));
  return p;
}

OperatorPoly OperatorPoly::generator(Generator g, unsigned n) {
  OperatorPoly p(std::max(n, g.mode));
  p.add_word({g}, Complex(1.0, 0.0));
  return p;
}

unsigned OperatorPoly::degree() const {
  unsigned d = 0;
  for (const auto& [w, c] : terms_) d = std::max<unsigned>(d, w.size());
  return d;
}

double OperatorPoly::max_coeff() const {
  double m = 0;
  for (const auto& [w, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

void OperatorPoly::add_word(const Word& w, Complex c) {
  if (c == Complex(0.0, 0.0)) return;
  if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
    throw std::invalid_argument("non-finite coefficient");
  if (w.size() > kMaxWordLength)
    throw DegreeOverflow("word exceeds configured maximum degree");
  for (const Generator& g : w) mode_count_ = std::max(mode_count_, g.mode);
  auto it = terms_.find(w);
  if (it == terms_.end()) {
    terms_.emplace(w, c);
  } else {
    it->second += c;
    if (it->second == Complex(0.0, 0.0)) terms_.erase(it);
  }
}

void OperatorPoly::drop_small() {
  double mx = max_coeff();
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) <= kCoeffDropRel * mx)
      it = terms_.erase(it);
    else
      ++it;
  }
}

OperatorPoly OperatorPoly::operator+(const OperatorPoly& o) const {
  OperatorPoly r = *this;
  r.mode_count_ = std::max(mode_count_, o.mode_count_);
  for (const auto& [w, c] : o.terms_) r.add_word(w, c);
  return r;
}

OperatorPoly OperatorPoly::operator-(const OperatorPoly& o) const {
  OperatorPoly r = *this;
  r.mode_count_ = std::max(mode_count_, o.mode_count_);
  for (const auto& [w, c] : o.terms_) r.add_word(w, -c);
  return r;
}

OperatorPoly OperatorPoly::operator*(Complex s) const {
  OperatorPoly r(mode_count_);
  for (const auto& [w, c] : terms_) r.add_word(w, c * s);
  return r;
}

OperatorPoly OperatorPoly::operator*(const OperatorPoly& o) const {
  OperatorPoly r(std::max(mode_count_, o.mode_count_));
  for (const auto& [wa, ca] : terms_) {
    for (const auto& [wb, cb] : o.terms_) {
      if (wa.size() + wb.size() > kMaxWordLength)
        throw DegreeOverflow("product exceeds configured maximum degree");
      Word w = wa;
      w.insert(w.end(), wb.begin(), wb.end());
      r.add_word(w, ca * cb);
    }
  }
  return normal_order(r);
}

OperatorPoly OperatorPoly::adjoint() const {
  OperatorPoly r(mode_count_);
  for (const auto& [w, c] : terms_) {
    Word rw(w.rbegin(), w.rend());
    for (Generator& g : rw) g.dagger = !g.dagger;
    r.add_word(rw, std::conj(c));
  }
  return r;
}

bool OperatorPoly::is_zero(double tol) const {
  return normal_order(*this).max_coeff() <= tol;
}

bool OperatorPoly::equals(const OperatorPoly& o, double tol) const {
  return (*this - o).is_zero(tol);
}

std::string OperatorPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [w, c] : terms_) {
    if (!out.empty()) out += " + ";
    char buf[96];
    std::snprintf(buf, sizeof(buf), "(%.17g%+.17gi)", c.real(), c.imag());
    out += buf;
    for (const Generator& g : w) {
      out += g.family == Family::A ? " a" : " b";
      out += std::to_string(g.mode);
      if (g.dagger) out += "+";
    }
  }
  return out;
}

namespace {

bool word_is_ordered(const Word& w, size_t* bad) {
  for (size_t i = 0; i + 1 < w.size(); ++i) {
    if (!w[i].dagger && w[i + 1].dagger) {
      *bad = i;
      return false;
    }
  }
  return true;
}

// sorts the daggered and undaggered blocks (generators within a block commute)
void sort_blocks(Word& w) {
  size_t split = 0;
  while (split < w.size() && w[split].dagger) ++split;
  std::sort(w.begin(), w.begin() + split);
  std::sort(w.begin() + split, w.end());
}

}  // namespace

OperatorPoly normal_order(const OperatorPoly& p) {
  OperatorPoly out(p.mode_count());
  std::vector<std::pair<Complex, Word>> stack;
  stack.reserve(p.terms().size());
  for (const auto& [w, c] : p.terms()) stack.emplace_back(c, w);
  while (!stack.empty()) {
    auto [c, w] = std::move(stack.back());
    stack.pop_back();
    size_t i;
    if (word_is_ordered(w, &i)) {
      sort_blocks(w);
      out.add_word(w, c);
      continue;
    }
    // w[i] annihilator, w[i+1] creator: swap, plus delta term if they match
    Word swapped = w;
    std::swap(swapped[i], swapped[i + 1]);
    if (w[i].family == w[i + 1].family && w[i].mode == w[i + 1].mode) {
      Word contracted = w;
      contracted.erase(contracted.begin() + i, contracted.begin() + i + 2);
      stack.emplace_back(c, std::move(contracted));
    }
    stack.emplace_back(c, std::move(swapped));
  }
  return out;
}

OperatorPoly wick_strip(const OperatorPoly& p) {
  OperatorPoly out(p.mode_count());
  for (const auto& [w, c] : p.terms()) {
    Word sorted = w;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const Generator& x, const Generator& y) {
                       return x.dagger > y.dagger;
                     });
    sort_blocks(sorted);
    out.add_word(sorted, c);
  }
  return out;
}

OperatorPoly wick_product(const std::vector<OperatorPoly>& factors) {
  unsigned n = 0;
  for (const auto& f : factors) n = std::max(n, f.mode_count());
  OperatorPoly prod(n);
  prod.add_word({}, Complex(1.0, 0.0));
  for (const auto& f : factors) {
    OperatorPoly next(n);
    for (const auto& [wa, ca] : prod.terms()) {
      for (const auto& [wb, cb] : f.terms()) {
        if (wa.size() + wb.size() > kMaxWordLength)
          throw DegreeOverflow("wick product exceeds maximum degree");
        Word w = wa;
        w.insert(w.end(), wb.begin(), wb.end());
        next.add_word(w, ca * cb);
      }
    }
    prod = std::move(next);
  }
  return wick_strip(prod);
}

OperatorPoly commutator(const OperatorPoly& p, const OperatorPoly& q) {
  return normal_order(p * q - q * p);
}

OperatorPoly phi_op(unsigned j, unsigned n) {
  if (j == 0 || j > n) throw std::out_of_range("phi_op: bad mode index");
  OperatorPoly p(n);
  p.add_word({ann(j)}, Complex(0.5, 0.0));
  p.add_word({cre(j)}, Complex(0.5, 0.0));
  return p;
}

OperatorPoly pi_op(unsigned j, unsigned n) {
  if (j == 0 || j > n) throw std::out_of_range("pi_op: bad mode index");
  OperatorPoly p(n);
  p.add_word({ann(j)}, Complex(0.0, -0.5));
  p.add_word({cre(j)}, Complex(0.0, 0.5));
  return p;
}

namespace {

unsigned quantize_mode_count(const ClassicalPoly& f, unsigned n) {
  if (f.uses_kind(VarKind::PhiDot))
    throw std::domain_error("quantization maps accept phi/pi variables only");
  unsigned need = std::max(f.max_mode(VarKind::Phi), f.max_mode(VarKind::Pi));
  return std::max(n, need);
}

// ordered factor list of one classical monomial: Phi block then Pi block,
// each sorted by mode (Phi factors written before Pi factors)
std::vector<OperatorPoly> monomial_factors(const Exponents& e, unsigned n) {
  std::vector<OperatorPoly> factors;
  for (const auto& [v, k] : e)
    if (v.kind == VarKind::Phi)
      for (unsigned i = 0; i < k; ++i) factors.push_back(phi_op(v.mode, n));
  for (const auto& [v, k] : e)
    if (v.kind == VarKind::Pi)
      for (unsigned i = 0; i < k; ++i) factors.push_back(pi_op(v.mode, n));
  return factors;
}

}  // namespace

OperatorPoly quantize_canonical(const ClassicalPoly& f, unsigned n) {
  n = quantize_mode_count(f, n);
  OperatorPoly out(n);
  for (const auto& [e, c] : f.terms()) {
    OperatorPoly term = OperatorPoly::identity(n);
    for (const auto& factor : monomial_factors(e, n)) term = term * factor;
    out = out + term * Complex(c, 0.0);
  }
  return out;
}

OperatorPoly quantize_normal(const ClassicalPoly& f, unsigned n) {
  n = quantize_mode_count(f, n);
  OperatorPoly out(n);
  for (const auto& [e, c] : f.terms()) {
    out = out + wick_product(monomial_factors(e, n)) * Complex(c, 0.0);
  }
  return out;
}

OperatorPoly check_bracket_identity(const ClassicalPoly& f, unsigned j,
                                    BracketSide side, unsigned n) {
  n = std::max(quantize_mode_count(f, n), j);
  OperatorPoly fn = quantize_normal(f, n);
  if (side == BracketSide::Phi) {
    OperatorPoly lhs = commutator(phi_op(j, n), fn);
    OperatorPoly rhs =
        quantize_normal(partial_derivative(f, pi_var(j)), n) * Complex(0.0, 0.5);
    return normal_order(lhs - rhs);
  }
  OperatorPoly lhs = commutator(pi_op(j, n), fn);
  OperatorPoly rhs =
      quantize_normal(partial_derivative(f, phi_var(j)), n) * Complex(0.0, 0.5);
  return normal_order(lhs + rhs);
}

OperatorPoly substitute(const OperatorPoly& p,
                        const std::function<OperatorPoly(Generator)>& image) {
  OperatorPoly out(p.mode_count());
  for (const auto& [w, c] : p.terms()) {
    OperatorPoly term = OperatorPoly::identity(p.mode_count());
    for (const Generator& g : w) term = term * image(g);
    out = out + term * c;
  }
  return normal_order(out);
}

}  // namespace focklab
