// classical_dynamics.hpp - Hamiltonian ODE systems and ensemble transport
//
// phidot_j = dH/dpi_j, pidot_j = -dH/dphi_j, integrated by fixed-step RK4.

#pragma once

#include "focklab/classical_poly.hpp"
#include "focklab/encoding.hpp"

namespace focklab {

struct HamiltonianSystem {
  unsigned mode_count;
  ClassicalPoly H;
  std::vector<ClassicalPoly> dH_dphi;
  std::vector<ClassicalPoly> dH_dpi;
};

HamiltonianSystem make_system(const ClassicalPoly& H, unsigned mode_count = 0);

struct Trajectory {
  std::vector<double> times;
  std::vector<PhasePoint> states;
};

void hamilton_vector_field(const HamiltonianSystem& sys, const PhasePoint& p,
                           Eigen::VectorXd* phidot, Eigen::VectorXd* pidot);

Trajectory integrate(const HamiltonianSystem& sys, const PhasePoint& start,
                     double dt, unsigned steps);

// one RK4 step (used by callers that do not need the whole trajectory)
PhasePoint rk4_step(const HamiltonianSystem& sys, const PhasePoint& p,
                    double dt);

Ensemble evolve_ensemble(const HamiltonianSystem& sys, const Ensemble& ens,
                         double dt, unsigned steps);

double classical_expectation(const Ensemble& ens, const ClassicalPoly& f);

double system_energy(const HamiltonianSystem& sys, const PhasePoint& p);

}  // namespace focklab
