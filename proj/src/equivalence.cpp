#include "focklab/equivalence.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace focklab {

bool is_separable(const ClassicalPoly& H) {
  for (const auto& [e, c] : H.terms()) {
    bool has_phi = false, has_pi = false;
    for (const auto& [v, k] : e) {
      if (k == 0) continue;
      if (v.kind == VarKind::Phi) has_phi = true;
      if (v.kind == VarKind::Pi) has_pi = true;
      if (v.kind == VarKind::PhiDot)
        throw std::domain_error("phidot has no Hamiltonian quantization");
    }
    if (has_phi && has_pi) return false;
  }
  return true;
}

Eigen::MatrixXcd heisenberg_generator(const FockSpace& space,
                                      const ClassicalPoly& H,
                                      bool allow_non_hermitian) {
  Eigen::MatrixXcd Hn = realize(space, quantize_normal(H, space.a_modes()));
  double defect = (Hn - Hn.adjoint()).norm();
  if (defect > 1e-12 && !allow_non_hermitian) {
    std::ostringstream msg;
    msg << "quantized Hamiltonian not Hermitian (defect " << defect
        << "); pass allow_non_hermitian to override";
    throw std::runtime_error(msg.str());
  }
  return Hn;
}

HeisenbergPropagator::HeisenbergPropagator(const Eigen::MatrixXcd& Hn) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(Hn);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition of H_n failed");
  eigenvalues_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();
}

Eigen::MatrixXcd HeisenbergPropagator::evolution(double t) const {
  Eigen::VectorXcd phases(eigenvalues_.size());
  for (Eigen::Index i = 0; i < eigenvalues_.size(); ++i)
    phases(i) = std::exp(Complex(0.0, -2.0 * eigenvalues_(i) * t));
  return eigenvectors_ * phases.asDiagonal() * eigenvectors_.adjoint();
}

Eigen::MatrixXcd HeisenbergPropagator::evolve_operator(
    const Eigen::MatrixXcd& Q0, double t) const {
  Eigen::MatrixXcd U = evolution(t);
  return U.adjoint() * Q0 * U;
}

Eigen::MatrixXcd HeisenbergPropagator::evolve_density(
    const Eigen::MatrixXcd& rho0, double t) const {
  Eigen::MatrixXcd U = evolution(t);
  return U * rho0 * U.adjoint();
}

std::pair<double, double> instantaneous_identity_check(const FockSpace& space,
                                                       const Ensemble& ens,
                                                       const ClassicalPoly& H,
                                                       unsigned j) {
  unsigned n = space.a_modes();
  ens.validate(n);
  Eigen::MatrixXcd Hn = heisenberg_generator(space, H);
  Eigen::MatrixXcd Phi = realize(space, phi_op(j, n));
  Eigen::MatrixXcd Pi = realize(space, pi_op(j, n));

  auto quantum_rate = [&](const Eigen::MatrixXcd& Q) {
    Eigen::MatrixXcd comm = Complex(0.0, -2.0) * (Q * Hn - Hn * Q);
    return ensemble_expectation(space, ens, comm).real();
  };
  double phi_side = std::fabs(
      classical_expectation(ens, partial_derivative(H, pi_var(j))) -
      quantum_rate(Phi));
  double pi_side = std::fabs(
      -classical_expectation(ens, partial_derivative(H, phi_var(j))) -
      quantum_rate(Pi));
  return {phi_side, pi_side};
}

std::vector<double> derivative_match(const FockSpace& space,
                                     const Ensemble& ens,
                                     const ClassicalPoly& H, unsigned j,
                                     unsigned max_order) {
  unsigned n = space.a_modes();
  ens.validate(n);
  Eigen::MatrixXcd Hn = heisenberg_generator(space, H);

  ClassicalPoly g = ClassicalPoly::variable(phi_var(j), n);
  Eigen::MatrixXcd Q = realize(space, phi_op(j, n));

  std::vector<double> residuals;
  for (unsigned k = 0; k <= max_order; ++k) {
    double classical = classical_expectation(ens, g);
    double quantum = ensemble_expectation(space, ens, Q).real();
    residuals.push_back(std::fabs(classical - quantum));
    if (k == max_order) break;
    g = poisson_bracket(g, H);
    Q = Complex(0.0, 2.0) * (Hn * Q - Q * Hn);  // d/dt Q = 2i [Hn, Q]
  }
  return residuals;
}

double EquivalenceReport::max_gap() const {
  double m = 0;
  for (const auto& row : gap_phi)
    for (double g : row) m = std::max(m, g);
  for (const auto& row : gap_pi)
    for (double g : row) m = std::max(m, g);
  return m;
}

EquivalenceReport compare_trajectories(const EquivalenceConfig& config) {
  if (config.dt <= 0 || config.t_max < 0)
    throw std::invalid_argument("t_max must be >= 0 and dt > 0");
  if (config.sample_stride == 0)
    throw std::invalid_argument("sample_stride must be positive");

  ClassicalPoly H = parse_poly(config.hamiltonian);
  if (H.mode_count() > config.modes)
    throw std::invalid_argument("hamiltonian references more modes than configured");
  HamiltonianSystem sys = make_system(H, config.modes);
  config.ensemble.validate(config.modes);

  FockSpace space(config.modes, config.cutoff);

  EquivalenceReport report;
  report.config = config;
  report.tail_bound = truncation_bound(space, config.ensemble);

  Eigen::MatrixXcd Hn = heisenberg_generator(space, H);
  HeisenbergPropagator prop(Hn);
  Eigen::MatrixXcd rho0 = density_matrix(space, config.ensemble);

  std::vector<Eigen::MatrixXcd> Phi0(config.modes), Pi0(config.modes);
  for (unsigned j = 0; j < config.modes; ++j) {
    Phi0[j] = realize(space, phi_op(j + 1, config.modes));
    Pi0[j] = realize(space, pi_op(j + 1, config.modes));
  }

  report.classical_phi.resize(config.modes);
  report.classical_pi.resize(config.modes);
  report.quantum_phi.resize(config.modes);
  report.quantum_pi.resize(config.modes);
  report.gap_phi.resize(config.modes);
  report.gap_pi.resize(config.modes);

  unsigned total_steps =
      static_cast<unsigned>(std::llround(config.t_max / config.dt));

  Ensemble ens = config.ensemble;
  unsigned step = 0;
  while (true) {
    double t = step * config.dt;

    // refuse to keep sampling once the encoding has drifted past the cutoff
    double bound = truncation_bound(space, ens);
    report.tail_bound = std::max(report.tail_bound, bound);
    if (bound > kTailRefuseThreshold) {
      std::ostringstream msg;
      msg << "truncation bound " << bound << " exceeds "
          << kTailRefuseThreshold << " at t=" << t
          << "; raise the cutoff beyond " << space.cutoff();
      report.truncated_early = true;
      report.diagnostic = msg.str();
      break;
    }

    report.times.push_back(t);
    for (unsigned j = 0; j < config.modes; ++j) {
      double cphi = 0, cpi = 0;
      for (size_t k = 0; k < ens.points.size(); ++k) {
        cphi += ens.weights[k] * ens.points[k].phi(j);
        cpi += ens.weights[k] * ens.points[k].pi(j);
      }
      double qphi =
          expectation(rho0, prop.evolve_operator(Phi0[j], t)).real();
      double qpi = expectation(rho0, prop.evolve_operator(Pi0[j], t)).real();
      report.classical_phi[j].push_back(cphi);
      report.classical_pi[j].push_back(cpi);
      report.quantum_phi[j].push_back(qphi);
      report.quantum_pi[j].push_back(qpi);
      report.gap_phi[j].push_back(std::fabs(cphi - qphi));
      report.gap_pi[j].push_back(std::fabs(cpi - qpi));
    }

    if (step >= total_steps) break;
    unsigned burst = std::min(config.sample_stride, total_steps - step);
    ens = evolve_ensemble(sys, ens, config.dt, burst);
    step += burst;
  }

  report.derivative_residuals.resize(config.modes);
  for (unsigned j = 0; j < config.modes; ++j)
    report.derivative_residuals[j] = derivative_match(
        space, config.ensemble, H, j + 1, config.derivative_orders);

  return report;
}

}  // namespace focklab
