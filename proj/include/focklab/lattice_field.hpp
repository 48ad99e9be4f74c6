// lattice_field.hpp - classical fields on small periodic lattices and their
// momentum-space coherent encodings
//
// Sites and momenta are enumerated mixed-radix, least-significant axis first;
// momenta are p_a = 2 pi k_a / (M dx), k_a in {-floor(M/2), ..., ceil(M/2)-1}.
// One Fock mode per (field j, momentum p).  The linear restoring force of the
// lattice dynamics is applied spectrally (multiplier m^2 + |p|^2 per momentum
// mode) so that the classical oscillation frequencies coincide with the
// dispersion weights used by the encoding.

#pragma once

#include "focklab/classical_dynamics.hpp"
#include "focklab/fock_space.hpp"

namespace focklab {

struct LatticeSpec {
  unsigned d;             // spatial dimension, 1..3
  unsigned M;             // sites per axis
  double dx;              // lattice spacing
  unsigned fields;        // n
  Eigen::VectorXd masses; // per-field mass, >= 0
};

void validate_spec(const LatticeSpec& spec);

size_t site_count(const LatticeSpec& spec);               // M^d
double lattice_volume(const LatticeSpec& spec);           // (M dx)^d
double cell_volume(const LatticeSpec& spec);              // (2 pi / (M dx))^d

Eigen::VectorXd site_position(const LatticeSpec& spec, size_t site);
std::vector<Eigen::VectorXd> momentum_grid(const LatticeSpec& spec);

struct LatticeState {
  Eigen::MatrixXd phi;  // fields x sites
  Eigen::MatrixXd pi;
};

LatticeState zero_state(const LatticeSpec& spec);

struct MomentumAmplitudes {
  Eigen::MatrixXcd theta;  // fields x momenta
  Eigen::MatrixXcd tau;
};

// theta_j(p) = dx^d sum_x phi_j(x) e^{-i p.x}; the inverse carries the
// momentum measure 1/V = cellvol/(2 pi)^d per mode
MomentumAmplitudes fourier_amplitudes(const LatticeSpec& spec,
                                      const LatticeState& state);
LatticeState inverse_fourier(const LatticeSpec& spec,
                             const MomentumAmplitudes& amps);

struct DispersionTable {
  Eigen::MatrixXd w;  // fields x momenta, w_j(p) = sqrt(m_j^2 + |p|^2)
};

DispersionTable dispersion(const LatticeSpec& spec);
bool has_massless_zero_mode(const LatticeSpec& spec);

FockSpace lattice_space(const LatticeSpec& spec, unsigned cutoff,
                        size_t dimension_budget = kDefaultDimensionBudget);

// 1-based Fock mode of (field j, momentum index pidx)
unsigned lattice_mode(const LatticeSpec& spec, unsigned j, size_t pidx);

// per-mode coherent amplitudes z_{j,p} = c (sqrt(w) theta + i tau / sqrt(w))
Eigen::MatrixXcd encoding_amplitudes(const LatticeSpec& spec,
                                     const LatticeState& state, double c);

Eigen::VectorXcd encode_lattice_state(const LatticeSpec& spec,
                                      const FockSpace& space,
                                      const LatticeState& state, double c);

// Phi_j^+(x) = (1/(2 sqrt(V))) sum_p w^{-1/2} e^{i p.x} a_{j,p};
// Pi_j^+(x) the w^{+1/2} analog with a -i factor; full operators are
// plus + adjoint(plus) and satisfy [Phi(x), Pi(y)] = (i/2) delta_xy / dx^d
OperatorPoly field_phi_plus(const LatticeSpec& spec, unsigned j, size_t site);
OperatorPoly field_pi_plus(const LatticeSpec& spec, unsigned j, size_t site);
OperatorPoly field_phi(const LatticeSpec& spec, unsigned j, size_t site);
OperatorPoly field_pi(const LatticeSpec& spec, unsigned j, size_t site);

// site variables for polynomials over the lattice: phi_j(x), pi_j(x) are
// phi_var/pi_var at index (j-1)*sites + site + 1
Var lattice_phi_var(const LatticeSpec& spec, unsigned j, size_t site);
Var lattice_pi_var(const LatticeSpec& spec, unsigned j, size_t site);

// Wick normal product of the field-operator substitution of f
OperatorPoly lattice_quantize_normal(const LatticeSpec& spec,
                                     const ClassicalPoly& f);

struct CalibrationResult {
  double c;
  double residual;
};

// worst |Tr(rho Phi_j(x)) - phi_j(x)| and Pi analog over samples and sites
double encoding_residual(const LatticeSpec& spec, const FockSpace& space,
                         const std::vector<LatticeState>& samples, double c);

CalibrationResult calibrate_c(const LatticeSpec& spec, const FockSpace& space,
                              const std::vector<LatticeState>& samples);

double continuum_c(const LatticeSpec& spec);  // 1/sqrt(V)

// H = sum_x dx^d (pi^2 + phi W^2 phi)/2 + f(site fields), W spectral
double lattice_energy(const LatticeSpec& spec, const ClassicalPoly& f,
                      const LatticeState& state);

// kick-drift-kick leapfrog; f is a polynomial over site phi variables and
// enters the force as -(1/dx^d) df/dphi_j(x); aborts on energy blow-up
LatticeState leapfrog_evolve(const LatticeSpec& spec, const ClassicalPoly& f,
                             const LatticeState& state, double dt,
                             unsigned steps);

// interior norm of [Phi_j(x), f_n] - (i/2)(1/dx^d)(df/dpi_j(x))_n
double functional_commutator_check(const LatticeSpec& spec,
                                   const FockSpace& space,
                                   const ClassicalPoly& f, unsigned j,
                                   size_t site);

}  // namespace focklab
