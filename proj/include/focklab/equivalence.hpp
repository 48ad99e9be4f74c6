// equivalence.hpp - Heisenberg-picture propagation on truncated Fock space
// against classical ensemble dynamics
//
// Convention: [Phi, Pi] = i/2 fixes hbar_eff = 1/2, so observables evolve by
// conjugation with U = exp(-2i H_n t) and the instantaneous identities read
//   d<phi_j>/dt = <dH/dpi_j> = Tr(rho (-2i)[Phi_j, H_n])
//   d<pi_j>/dt = -<dH/dphi_j> = Tr(rho (-2i)[Pi_j, H_n])

#pragma once

#include <optional>
#include <string>

#include "focklab/classical_dynamics.hpp"
#include "focklab/fock_space.hpp"

namespace focklab {

bool is_separable(const ClassicalPoly& H);

// realize(quantize_normal(H)); throws unless the result is Hermitian to
// 1e-12 or allow_non_hermitian is set
Eigen::MatrixXcd heisenberg_generator(const FockSpace& space,
                                      const ClassicalPoly& H,
                                      bool allow_non_hermitian = false);

// cached eigendecomposition of a Hermitian generator
class HeisenbergPropagator {
 public:
  explicit HeisenbergPropagator(const Eigen::MatrixXcd& Hn);

  Eigen::MatrixXcd evolution(double t) const;  // U = exp(-2i Hn t)
  // Heisenberg picture: U^adj Q0 U
  Eigen::MatrixXcd evolve_operator(const Eigen::MatrixXcd& Q0, double t) const;
  // Schroedinger picture: U rho0 U^adj
  Eigen::MatrixXcd evolve_density(const Eigen::MatrixXcd& rho0,
                                  double t) const;

 private:
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXcd eigenvectors_;
};

// residuals of the instantaneous rate identities at the given ensemble:
// (phi side, pi side)
std::pair<double, double> instantaneous_identity_check(const FockSpace& space,
                                                       const Ensemble& ens,
                                                       const ClassicalPoly& H,
                                                       unsigned j);

// |d^k/dt^k <phi_j>|_0 classical (nested Poisson brackets) minus quantum
// (nested (2i) ad_{H_n} commutators)| for k = 0..max_order
std::vector<double> derivative_match(const FockSpace& space,
                                     const Ensemble& ens,
                                     const ClassicalPoly& H, unsigned j,
                                     unsigned max_order = 3);

struct EquivalenceConfig {
  unsigned modes = 1;
  unsigned cutoff = 40;
  std::string hamiltonian;  // polynomial DSL text
  Ensemble ensemble;
  double t_max = 10.0;
  double dt = 1e-3;
  unsigned sample_stride = 100;  // record every this many classical steps
  unsigned derivative_orders = 3;
  uint64_t seed = 0;
};

struct EquivalenceReport {
  EquivalenceConfig config;
  std::vector<double> times;
  // indexed [mode][time]
  std::vector<std::vector<double>> classical_phi, classical_pi;
  std::vector<std::vector<double>> quantum_phi, quantum_pi;
  std::vector<std::vector<double>> gap_phi, gap_pi;
  // indexed [mode][order]
  std::vector<std::vector<double>> derivative_residuals;
  double tail_bound = 0;
  bool truncated_early = false;
  std::string diagnostic;

  double max_gap() const;
};

EquivalenceReport compare_trajectories(const EquivalenceConfig& config);

}  // namespace focklab
