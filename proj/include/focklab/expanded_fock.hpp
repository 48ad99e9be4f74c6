// expanded_fock.hpp - second-order systems on the doubled (a, b) register
//
// The a-register carries phi amplitudes and the b-register carries phidot.
// v-encodings are unnormalized product moment vectors; the reification X maps
// a -> (a + a+)/sqrt(2), a+ -> (a+ - a)/sqrt(2) (same on b) and turns the
// gain generator into an antisymmetric (Schroedinger-form) one.

#pragma once

#include "focklab/classical_dynamics.hpp"
#include "focklab/fock_space.hpp"

namespace focklab {

struct SecondOrderSystem {
  unsigned mode_count;
  Eigen::VectorXd w;              // positive frequencies
  ClassicalPoly f;                // interaction, phi variables only
  std::vector<ClassicalPoly> g;   // g_j = -df/dphi_j
};

SecondOrderSystem make_second_order(const Eigen::VectorXd& w,
                                    const ClassicalPoly& f);

// equivalent first-order system with pi = phidot:
// H = sum_j (pi_j^2 + w_j^2 phi_j^2)/2 + f(phi)
HamiltonianSystem second_order_system(const SecondOrderSystem& sys);

FockSpace expanded_space(unsigned mode_count, unsigned cutoff,
                         size_t dimension_budget = kDefaultDimensionBudget);

// v = exp(sum_j phi_j a_j+ + phidot_j b_j+)|0>, unnormalized; point.pi is
// read as phidot
Eigen::VectorXcd encode_v(const FockSpace& space, const PhasePoint& point);

// f(a, b) v with annihilation operators only (phi -> a_j, phidot -> b_j)
Eigen::VectorXcd apply_classical_function(const FockSpace& space,
                                          const ClassicalPoly& f,
                                          const Eigen::VectorXcd& v);

// exact truncated matrix of the per-register factor exp(theta (a^2 + a+^2)):
// every stored element agrees with the untruncated operator
Eigen::MatrixXd single_mode_reification(unsigned cutoff, double theta);
Eigen::MatrixXd single_mode_reification(unsigned cutoff);  // theta = -pi/8

// dense X on the full space; construction is rejected unless the defining
// conjugations hold on the margin-2 interior
Eigen::MatrixXd reification_X(const FockSpace& space);

// X v without forming the dense matrix (per-mode tensor contraction)
Eigen::VectorXcd apply_reification(const FockSpace& space,
                                   const Eigen::VectorXcd& v);

Eigen::VectorXcd encode_z(const FockSpace& space, const PhasePoint& point);

enum class GainPicture { V, Z };

struct GainOperators {
  GainPicture picture;
  OperatorPoly G0;  // linear part: sum_j (a_j+ b_j - w_j^2 b_j+ a_j)
  OperatorPoly GI;  // interaction part: sum_j b_j+ g_j(a)
  OperatorPoly total;
};

// z-picture obtained from the v-picture by the symbolic X substitution
GainOperators gain_operators(const SecondOrderSystem& sys, GainPicture picture);

// Phi_j = (a_j + a_j+)/sqrt(2 w_j)
OperatorPoly phi_vector_op(const SecondOrderSystem& sys, unsigned j);

// H_v = sum_j (b_j^2 + w_j^2 a_j^2)/2 + f(a): annihilator-only, so encoded
// points are eigenvectors with eigenvalue equal to the classical energy
OperatorPoly build_Hv(const SecondOrderSystem& sys);
OperatorPoly build_Hz(const SecondOrderSystem& sys);

enum class EnergyVerdict { LambdaType, QType, Neither };

struct EnergyClassification {
  EnergyVerdict verdict;
  std::vector<double> energies;          // per-state Rayleigh quotients
  std::vector<double> lambda_residuals;  // ||H v - E v|| / ||v||
  std::vector<double> q_residuals;       // |Im <v, H v>| / ||v||^2
};

EnergyClassification classify_energy_operator(
    const Eigen::MatrixXcd& Hm, const std::vector<Eigen::VectorXcd>& states,
    double tol = 1e-6);

struct EquilibriumResidual {
  double v_picture;
  double z_picture;
};

// point must satisfy phidot = 0 and -w^2 phi + g(phi) = 0 within 1e-10
EquilibriumResidual equilibrium_gain_check(const FockSpace& space,
                                           const SecondOrderSystem& sys,
                                           const PhasePoint& point);

}  // namespace focklab
