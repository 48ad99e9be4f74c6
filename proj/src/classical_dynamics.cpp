#include "focklab/classical_dynamics.hpp"

#include <cmath>

namespace focklab {

HamiltonianSystem make_system(const ClassicalPoly& H, unsigned mode_count) {
  if (H.uses_kind(VarKind::PhiDot))
    throw std::domain_error("Hamiltonian must be in phi/pi variables");
  unsigned n = std::max({mode_count, H.max_mode(VarKind::Phi),
                         H.max_mode(VarKind::Pi), 1u});
  HamiltonianSystem sys{n, H, {}, {}};
  for (unsigned j = 1; j <= n; ++j) {
    sys.dH_dphi.push_back(partial_derivative(H, phi_var(j)));
    sys.dH_dpi.push_back(partial_derivative(H, pi_var(j)));
  }
  return sys;
}

namespace {

std::vector<double> to_std(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

}  // namespace

void hamilton_vector_field(const HamiltonianSystem& sys, const PhasePoint& p,
                           Eigen::VectorXd* phidot, Eigen::VectorXd* pidot) {
  auto phi = to_std(p.phi), pi = to_std(p.pi);
  phidot->resize(sys.mode_count);
  pidot->resize(sys.mode_count);
  for (unsigned j = 0; j < sys.mode_count; ++j) {
    (*phidot)(j) = sys.dH_dpi[j].eval(phi, pi);
    (*pidot)(j) = -sys.dH_dphi[j].eval(phi, pi);
  }
}

PhasePoint rk4_step(const HamiltonianSystem& sys, const PhasePoint& p,
                    double dt) {
  auto f = [&](const PhasePoint& q) {
    Eigen::VectorXd dphi, dpi;
    hamilton_vector_field(sys, q, &dphi, &dpi);
    return PhasePoint{dphi, dpi};
  };
  PhasePoint k1 = f(p);
  PhasePoint k2 = f({p.phi + 0.5 * dt * k1.phi, p.pi + 0.5 * dt * k1.pi});
  PhasePoint k3 = f({p.phi + 0.5 * dt * k2.phi, p.pi + 0.5 * dt * k2.pi});
  PhasePoint k4 = f({p.phi + dt * k3.phi, p.pi + dt * k3.pi});
  return {p.phi + dt / 6.0 * (k1.phi + 2 * k2.phi + 2 * k3.phi + k4.phi),
          p.pi + dt / 6.0 * (k1.pi + 2 * k2.pi + 2 * k3.pi + k4.pi)};
}

Trajectory integrate(const HamiltonianSystem& sys, const PhasePoint& start,
                     double dt, unsigned steps) {
  if (dt <= 0) throw std::invalid_argument("integrate: dt must be positive");
  Trajectory traj;
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);
  traj.times.push_back(0.0);
  traj.states.push_back(start);
  PhasePoint p = start;
  for (unsigned s = 1; s <= steps; ++s) {
    p = rk4_step(sys, p, dt);
    if (!p.phi.allFinite() || !p.pi.allFinite())
      throw std::runtime_error("integrate: non-finite state at step " +
                               std::to_string(s));
    traj.times.push_back(s * dt);
    traj.states.push_back(p);
  }
  return traj;
}

Ensemble evolve_ensemble(const HamiltonianSystem& sys, const Ensemble& ens,
                         double dt, unsigned steps) {
  ens.validate(sys.mode_count);
  Ensemble out = ens;
  for (auto& p : out.points) {
    for (unsigned s = 0; s < steps; ++s) p = rk4_step(sys, p, dt);
    if (!p.phi.allFinite() || !p.pi.allFinite())
      throw std::runtime_error("evolve_ensemble: non-finite state");
  }
  return out;
}

double classical_expectation(const Ensemble& ens, const ClassicalPoly& f) {
  double total = 0;
  for (size_t k = 0; k < ens.points.size(); ++k) {
    total += ens.weights[k] * f.eval(to_std(ens.points[k].phi),
                                     to_std(ens.points[k].pi));
  }
  return total;
}

double system_energy(const HamiltonianSystem& sys, const PhasePoint& p) {
  return sys.H.eval(to_std(p.phi), to_std(p.pi));
}

}  // namespace focklab
