#include "focklab/fock_space.hpp"

#include <cmath>
#include <stdexcept>

namespace focklab {

FockSpace::FockSpace(unsigned a_modes, unsigned cutoff, unsigned b_modes,
                     size_t dimension_budget)
    : a_modes_(a_modes), b_modes_(b_modes), cutoff_(cutoff) {
  if (a_modes == 0) throw std::invalid_argument("FockSpace: need >= 1 mode");
  double dim = 1;
  for (unsigned j = 0; j < flat_modes(); ++j) {
    dim *= cutoff_ + 1.0;
    if (dim > static_cast<double>(dimension_budget))
      throw std::length_error("FockSpace dimension exceeds memory budget");
  }
  dimension_ = static_cast<size_t>(dim);
}

unsigned FockSpace::flat_mode(const Generator& g) const {
  if (g.mode == 0) throw std::out_of_range("generator mode index is 0");
  if (g.family == Family::A) {
    if (g.mode > a_modes_)
      throw std::out_of_range("A-family mode exceeds space mode count");
    return g.mode - 1;
  }
  if (g.mode > b_modes_)
    throw std::out_of_range("B-family generator outside this space");
  return a_modes_ + g.mode - 1;
}

size_t FockSpace::index(const std::vector<unsigned>& occ) const {
  if (occ.size() != flat_modes())
    throw std::invalid_argument("occupation tuple length mismatch");
  size_t idx = 0, stride = 1;
  for (unsigned j = 0; j < flat_modes(); ++j) {
    if (occ[j] > cutoff_) throw std::out_of_range("occupation above cutoff");
    idx += occ[j] * stride;
    stride *= cutoff_ + 1;
  }
  return idx;
}

std::vector<unsigned> FockSpace::occupation(size_t index) const {
  std::vector<unsigned> occ(flat_modes());
  for (unsigned j = 0; j < flat_modes(); ++j) {
    occ[j] = index % (cutoff_ + 1);
    index /= cutoff_ + 1;
  }
  return occ;
}

unsigned FockSpace::occupation_of(size_t index, unsigned flat_mode) const {
  size_t stride = 1;
  for (unsigned j = 0; j < flat_mode; ++j) stride *= cutoff_ + 1;
  return static_cast<unsigned>((index / stride) % (cutoff_ + 1));
}

Eigen::VectorXd FockSpace::interior_mask(unsigned margin) const {
  Eigen::VectorXd mask = Eigen::VectorXd::Ones(dimension_);
  unsigned limit = margin > cutoff_ ? 0 : cutoff_ - margin;
  for (size_t i = 0; i < dimension_; ++i)
    for (unsigned j = 0; j < flat_modes(); ++j)
      if (occupation_of(i, j) > limit) {
        mask(i) = 0;
        break;
      }
  return mask;
}

namespace {

// applies one word to basis state |col>; ladder words map basis states to
// scalar multiples of basis states (or kill them)
bool apply_word_to_basis(const FockSpace& space, const Word& word, size_t col,
                         size_t* row, double* amp) {
  std::vector<unsigned> occ = space.occupation(col);
  double a = 1.0;
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    unsigned m = space.flat_mode(*it);
    if (it->dagger) {
      if (occ[m] == space.cutoff()) return false;  // creation truncated at N
      a *= std::sqrt(occ[m] + 1.0);
      ++occ[m];
    } else {
      if (occ[m] == 0) return false;
      a *= std::sqrt(static_cast<double>(occ[m]));
      --occ[m];
    }
  }
  *row = space.index(occ);
  *amp = a;
  return true;
}

}  // namespace

Eigen::MatrixXcd ladder_matrix(const FockSpace& space, const Generator& g) {
  return realize(space, OperatorPoly::generator(g, space.a_modes()));
}

Eigen::MatrixXcd realize(const FockSpace& space, const OperatorPoly& p) {
  const size_t dim = space.dimension();
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [word, coeff] : p.terms()) {
    for (size_t col = 0; col < dim; ++col) {
      size_t row;
      double amp;
      if (apply_word_to_basis(space, word, col, &row, &amp))
        M(row, col) += coeff * amp;
    }
  }
  return M;
}

Eigen::VectorXcd apply(const FockSpace& space, const OperatorPoly& p,
                       const Eigen::VectorXcd& v) {
  const size_t dim = space.dimension();
  if (static_cast<size_t>(v.size()) != dim)
    throw std::invalid_argument("vector dimension mismatch");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(dim);
  for (const auto& [word, coeff] : p.terms()) {
    for (size_t col = 0; col < dim; ++col) {
      if (v(col) == Complex(0.0, 0.0)) continue;
      size_t row;
      double amp;
      if (apply_word_to_basis(space, word, col, &row, &amp))
        out(row) += coeff * amp * v(col);
    }
  }
  return out;
}

}  // namespace focklab
