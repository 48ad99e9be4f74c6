// fock_space.hpp - truncated Fock bases and matrix realizations
//
// Basis enumeration is mixed-radix over occupation tuples, least-significant
// mode first: index = sum_j k_j (N+1)^(j-1).  A space may carry a second,
// commuting B register (expanded-Fock contexts); B-family generators act on
// modes a_modes..a_modes+b_modes-1 of the flattened layout.

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "focklab/ladder_algebra.hpp"

namespace focklab {

inline constexpr size_t kDefaultDimensionBudget = 65536;

class FockSpace {
 public:
  FockSpace(unsigned a_modes, unsigned cutoff, unsigned b_modes = 0,
            size_t dimension_budget = kDefaultDimensionBudget);

  unsigned a_modes() const { return a_modes_; }
  unsigned b_modes() const { return b_modes_; }
  unsigned flat_modes() const { return a_modes_ + b_modes_; }
  unsigned cutoff() const { return cutoff_; }
  size_t dimension() const { return dimension_; }

  // flattened mode of a generator; throws on family/index mismatch
  unsigned flat_mode(const Generator& g) const;

  size_t index(const std::vector<unsigned>& occ) const;
  std::vector<unsigned> occupation(size_t index) const;
  unsigned occupation_of(size_t index, unsigned flat_mode) const;

  // diagonal 0/1 mask: 1 where every mode occupation <= cutoff - margin
  Eigen::VectorXd interior_mask(unsigned margin) const;

 private:
  unsigned a_modes_, b_modes_, cutoff_;
  size_t dimension_;
};

Eigen::MatrixXcd ladder_matrix(const FockSpace& space, const Generator& g);

// dense matrix of an operator polynomial; words act as generalized
// permutations so this is O(terms * dim * length)
Eigen::MatrixXcd realize(const FockSpace& space, const OperatorPoly& p);

Eigen::VectorXcd apply(const FockSpace& space, const OperatorPoly& p,
                       const Eigen::VectorXcd& v);

}  // namespace focklab
