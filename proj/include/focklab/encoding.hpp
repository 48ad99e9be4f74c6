// encoding.hpp - classical states on truncated Fock space
//
// moment_vector realizes v = exp(sum_j phi_j a_j+)|0>, coherent_vector the
// normalized w of a phase point with eigenvalue z_j = phi_j + i pi_j, and
// density_matrix the ensemble-weighted sum of coherent projectors.

#pragma once

#include <Eigen/Dense>

#include "focklab/fock_space.hpp"

namespace focklab {

struct PhasePoint {
  Eigen::VectorXd phi;
  Eigen::VectorXd pi;  // reinterpreted as phidot in second-order contexts
};

struct Ensemble {
  std::vector<PhasePoint> points;
  std::vector<double> weights;

  // throws unless nonempty, weights nonnegative and summing to 1 (1e-12)
  void validate(unsigned mode_count) const;
};

Ensemble single_point_ensemble(const PhasePoint& p);

struct TailBoundViolation : std::runtime_error {
  double bound;
  unsigned suggested_cutoff;
  TailBoundViolation(double bound_, unsigned suggested);
};

inline constexpr double kTailRefuseThreshold = 1e-6;

// exact Poisson tail mass beyond N at mean lambda
double poisson_tail(double lambda, unsigned cutoff);

// upper bound on lost probability mass for the ensemble's coherent
// encodings: max over points of the summed per-mode tails
double truncation_bound(const FockSpace& space, const Ensemble& ens);

// cutoff rule of thumb targeting tail < 1e-8
unsigned suggested_cutoff(double amplitude);

Eigen::VectorXcd moment_vector(const FockSpace& space,
                               const Eigen::VectorXd& phi);

Eigen::VectorXcd coherent_vector(const FockSpace& space,
                                 const PhasePoint& point);

Eigen::MatrixXcd density_matrix(const FockSpace& space, const Ensemble& ens);

Complex expectation(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& M);

// Tr(rho M) without forming rho: sum_k w_k <w_k|M|w_k>
Complex ensemble_expectation(const FockSpace& space, const Ensemble& ens,
                             const Eigen::MatrixXcd& M);

// moment u_{k} = sqrt(k!) <k|v> extraction for single-mode moment vectors
double extract_moment(const FockSpace& space, const Eigen::VectorXcd& v,
                      const std::vector<unsigned>& occ);

}  // namespace focklab
