#include "focklab/lattice_field.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace focklab {

namespace {

constexpr double kPi = 3.14159265358979323846;

size_t ipow(size_t b, unsigned e) {
  size_t r = 1;
  while (e--) r *= b;
  return r;
}

// mixed-radix digits of a flat site/momentum index, least-significant axis
// first
void digits(const LatticeSpec& spec, size_t flat, unsigned* out) {
  for (unsigned a = 0; a < spec.d; ++a) {
    out[a] = static_cast<unsigned>(flat % spec.M);
    flat /= spec.M;
  }
}

// p.x phase for momentum index pidx at site index s: 2 pi k.c / M
double phase_dot(const LatticeSpec& spec, size_t pidx, size_t s) {
  unsigned kc[3], xc[3];
  digits(spec, pidx, kc);
  digits(spec, s, xc);
  long acc = 0;
  for (unsigned a = 0; a < spec.d; ++a)
    acc += (long(kc[a]) - long(spec.M / 2)) * long(xc[a]);
  return 2.0 * kPi * double(acc) / double(spec.M);
}

}  // namespace

void validate_spec(const LatticeSpec& spec) {
  if (spec.d < 1 || spec.d > 3)
    throw std::invalid_argument("lattice dimension must be 1, 2, or 3");
  if (spec.M < 1) throw std::invalid_argument("sites per axis must be >= 1");
  if (!(spec.dx > 0)) throw std::invalid_argument("lattice spacing must be > 0");
  if (spec.fields < 1) throw std::invalid_argument("need at least one field");
  if (spec.masses.size() != spec.fields)
    throw std::invalid_argument("one mass per field required");
  for (unsigned j = 0; j < spec.fields; ++j)
    if (!(spec.masses(j) >= 0))
      throw std::invalid_argument("masses must be >= 0");
}

size_t site_count(const LatticeSpec& spec) { return ipow(spec.M, spec.d); }

double lattice_volume(const LatticeSpec& spec) {
  return std::pow(spec.M * spec.dx, double(spec.d));
}

double cell_volume(const LatticeSpec& spec) {
  return std::pow(2.0 * kPi / (spec.M * spec.dx), double(spec.d));
}

Eigen::VectorXd site_position(const LatticeSpec& spec, size_t site) {
  unsigned c[3];
  digits(spec, site, c);
  Eigen::VectorXd x(spec.d);
  for (unsigned a = 0; a < spec.d; ++a) x(a) = spec.dx * c[a];
  return x;
}

std::vector<Eigen::VectorXd> momentum_grid(const LatticeSpec& spec) {
  validate_spec(spec);
  size_t P = site_count(spec);
  std::vector<Eigen::VectorXd> grid(P);
  for (size_t i = 0; i < P; ++i) {
    unsigned kc[3];
    digits(spec, i, kc);
    Eigen::VectorXd p(spec.d);
    for (unsigned a = 0; a < spec.d; ++a)
      p(a) = 2.0 * kPi * (long(kc[a]) - long(spec.M / 2)) / (spec.M * spec.dx);
    grid[i] = p;
  }
  return grid;
}

LatticeState zero_state(const LatticeSpec& spec) {
  size_t S = site_count(spec);
  return {Eigen::MatrixXd::Zero(spec.fields, S),
          Eigen::MatrixXd::Zero(spec.fields, S)};
}

MomentumAmplitudes fourier_amplitudes(const LatticeSpec& spec,
                                      const LatticeState& state) {
  validate_spec(spec);
  size_t S = site_count(spec);
  if (state.phi.rows() != spec.fields || state.phi.cols() != Eigen::Index(S) ||
      state.pi.rows() != spec.fields || state.pi.cols() != Eigen::Index(S))
    throw std::invalid_argument("lattice state shape mismatch");
  double meas = std::pow(spec.dx, double(spec.d));
  MomentumAmplitudes amps{Eigen::MatrixXcd::Zero(spec.fields, S),
                          Eigen::MatrixXcd::Zero(spec.fields, S)};
  for (size_t p = 0; p < S; ++p)
    for (size_t x = 0; x < S; ++x) {
      Complex ph = std::exp(Complex(0.0, -phase_dot(spec, p, x)));
      for (unsigned j = 0; j < spec.fields; ++j) {
        amps.theta(j, p) += meas * state.phi(j, x) * ph;
        amps.tau(j, p) += meas * state.pi(j, x) * ph;
      }
    }
  return amps;
}

LatticeState inverse_fourier(const LatticeSpec& spec,
                             const MomentumAmplitudes& amps) {
  size_t S = site_count(spec);
  double inv_vol = 1.0 / lattice_volume(spec);
  LatticeState state = zero_state(spec);
  for (size_t x = 0; x < S; ++x)
    for (size_t p = 0; p < S; ++p) {
      Complex ph = std::exp(Complex(0.0, phase_dot(spec, p, x)));
      for (unsigned j = 0; j < spec.fields; ++j) {
        state.phi(j, x) += inv_vol * (amps.theta(j, p) * ph).real();
        state.pi(j, x) += inv_vol * (amps.tau(j, p) * ph).real();
      }
    }
  return state;
}

DispersionTable dispersion(const LatticeSpec& spec) {
  auto grid = momentum_grid(spec);
  DispersionTable table{Eigen::MatrixXd(spec.fields, grid.size())};
  for (unsigned j = 0; j < spec.fields; ++j)
    for (size_t p = 0; p < grid.size(); ++p)
      table.w(j, p) =
          std::sqrt(spec.masses(j) * spec.masses(j) + grid[p].squaredNorm());
  return table;
}

bool has_massless_zero_mode(const LatticeSpec& spec) {
  return dispersion(spec).w.minCoeff() == 0.0;
}

FockSpace lattice_space(const LatticeSpec& spec, unsigned cutoff,
                        size_t dimension_budget) {
  validate_spec(spec);
  unsigned modes = spec.fields * static_cast<unsigned>(site_count(spec));
  return FockSpace(modes, cutoff, 0, dimension_budget);
}

unsigned lattice_mode(const LatticeSpec& spec, unsigned j, size_t pidx) {
  size_t P = site_count(spec);
  if (j < 1 || j > spec.fields || pidx >= P)
    throw std::out_of_range("lattice mode index out of range");
  return static_cast<unsigned>((j - 1) * P + pidx) + 1;
}

Eigen::MatrixXcd encoding_amplitudes(const LatticeSpec& spec,
                                     const LatticeState& state, double c) {
  if (has_massless_zero_mode(spec))
    throw std::domain_error(
        "massless zero mode: dispersion weight vanishes, encoding unsupported");
  MomentumAmplitudes amps = fourier_amplitudes(spec, state);
  DispersionTable disp = dispersion(spec);
  size_t P = site_count(spec);
  Eigen::MatrixXcd z(spec.fields, P);
  for (unsigned j = 0; j < spec.fields; ++j)
    for (size_t p = 0; p < P; ++p) {
      double sw = std::sqrt(disp.w(j, p));
      z(j, p) = c * (sw * amps.theta(j, p) +
                     Complex(0.0, 1.0) * amps.tau(j, p) / sw);
    }
  return z;
}

Eigen::VectorXcd encode_lattice_state(const LatticeSpec& spec,
                                      const FockSpace& space,
                                      const LatticeState& state, double c) {
  size_t P = site_count(spec);
  if (space.flat_modes() != spec.fields * P)
    throw std::invalid_argument("Fock space mode count does not match lattice");
  Eigen::MatrixXcd z = encoding_amplitudes(spec, state, c);
  PhasePoint point{Eigen::VectorXd(space.flat_modes()),
                   Eigen::VectorXd(space.flat_modes())};
  for (unsigned j = 1; j <= spec.fields; ++j)
    for (size_t p = 0; p < P; ++p) {
      unsigned m = lattice_mode(spec, j, p) - 1;
      point.phi(m) = z(j - 1, p).real();
      point.pi(m) = z(j - 1, p).imag();
    }
  return coherent_vector(space, point);
}

OperatorPoly field_phi_plus(const LatticeSpec& spec, unsigned j, size_t site) {
  validate_spec(spec);
  size_t P = site_count(spec);
  if (site >= P) throw std::out_of_range("bad site index");
  DispersionTable disp = dispersion(spec);
  unsigned modes = spec.fields * static_cast<unsigned>(P);
  double scale = 0.5 / std::sqrt(lattice_volume(spec));
  OperatorPoly op(modes);
  for (size_t p = 0; p < P; ++p) {
    Complex ph = std::exp(Complex(0.0, phase_dot(spec, p, site)));
    op.add_word({ann(lattice_mode(spec, j, p))},
                scale * ph / std::sqrt(disp.w(j - 1, p)));
  }
  return op;
}

OperatorPoly field_pi_plus(const LatticeSpec& spec, unsigned j, size_t site) {
  validate_spec(spec);
  size_t P = site_count(spec);
  if (site >= P) throw std::out_of_range("bad site index");
  DispersionTable disp = dispersion(spec);
  unsigned modes = spec.fields * static_cast<unsigned>(P);
  double scale = 0.5 / std::sqrt(lattice_volume(spec));
  OperatorPoly op(modes);
  for (size_t p = 0; p < P; ++p) {
    Complex ph = std::exp(Complex(0.0, phase_dot(spec, p, site)));
    op.add_word({ann(lattice_mode(spec, j, p))},
                Complex(0.0, -1.0) * scale * ph * std::sqrt(disp.w(j - 1, p)));
  }
  return op;
}

OperatorPoly field_phi(const LatticeSpec& spec, unsigned j, size_t site) {
  OperatorPoly plus = field_phi_plus(spec, j, site);
  return plus + plus.adjoint();
}

OperatorPoly field_pi(const LatticeSpec& spec, unsigned j, size_t site) {
  OperatorPoly plus = field_pi_plus(spec, j, site);
  return plus + plus.adjoint();
}

Var lattice_phi_var(const LatticeSpec& spec, unsigned j, size_t site) {
  return phi_var(lattice_mode(spec, j, site));
}

Var lattice_pi_var(const LatticeSpec& spec, unsigned j, size_t site) {
  return pi_var(lattice_mode(spec, j, site));
}

OperatorPoly lattice_quantize_normal(const LatticeSpec& spec,
                                     const ClassicalPoly& f) {
  size_t S = site_count(spec);
  unsigned modes = spec.fields * static_cast<unsigned>(S);
  if (f.uses_kind(VarKind::PhiDot))
    throw std::domain_error("phidot has no lattice quantization");
  if (f.max_mode(VarKind::Phi) > modes || f.max_mode(VarKind::Pi) > modes)
    throw std::invalid_argument("polynomial references sites beyond lattice");
  OperatorPoly result(modes);
  for (const auto& [e, coeff] : f.terms()) {
    std::vector<OperatorPoly> factors;
    for (const auto& [v, k] : e) {
      unsigned j = (v.mode - 1) / static_cast<unsigned>(S) + 1;
      size_t site = (v.mode - 1) % S;
      OperatorPoly factor = v.kind == VarKind::Phi
                                ? field_phi(spec, j, site)
                                : field_pi(spec, j, site);
      for (unsigned r = 0; r < k; ++r) factors.push_back(factor);
    }
    if (factors.empty())
      result = result + OperatorPoly::identity(modes) * Complex(coeff, 0.0);
    else
      result = result + wick_product(factors) * Complex(coeff, 0.0);
  }
  return result;
}

namespace {

struct FieldMatrices {
  std::vector<Eigen::MatrixXcd> phi, pi;  // indexed (j-1)*sites + x
};

FieldMatrices realize_field_ops(const LatticeSpec& spec,
                                const FockSpace& space) {
  size_t S = site_count(spec);
  FieldMatrices ops;
  for (unsigned j = 1; j <= spec.fields; ++j)
    for (size_t x = 0; x < S; ++x) {
      ops.phi.push_back(realize(space, field_phi(spec, j, x)));
      ops.pi.push_back(realize(space, field_pi(spec, j, x)));
    }
  return ops;
}

double residual_with_ops(const LatticeSpec& spec, const FockSpace& space,
                         const FieldMatrices& ops,
                         const std::vector<LatticeState>& samples, double c) {
  size_t S = site_count(spec);
  double worst = 0;
  for (const LatticeState& state : samples) {
    Eigen::VectorXcd w = encode_lattice_state(spec, space, state, c);
    size_t idx = 0;
    for (unsigned j = 0; j < spec.fields; ++j)
      for (size_t x = 0; x < S; ++x, ++idx) {
        double qphi = (w.adjoint() * (ops.phi[idx] * w))(0).real();
        double qpi = (w.adjoint() * (ops.pi[idx] * w))(0).real();
        worst = std::max(worst, std::fabs(qphi - state.phi(j, x)));
        worst = std::max(worst, std::fabs(qpi - state.pi(j, x)));
      }
  }
  return worst;
}

}  // namespace

double encoding_residual(const LatticeSpec& spec, const FockSpace& space,
                         const std::vector<LatticeState>& samples, double c) {
  return residual_with_ops(spec, space, realize_field_ops(spec, space),
                           samples, c);
}

CalibrationResult calibrate_c(const LatticeSpec& spec, const FockSpace& space,
                              const std::vector<LatticeState>& samples) {
  if (samples.size() < 3)
    throw std::invalid_argument("calibration needs at least 3 sample states");
  double mass = 0;
  std::vector<LatticeState> live;
  for (const LatticeState& s : samples) {
    double m = s.phi.cwiseAbs().maxCoeff() + s.pi.cwiseAbs().maxCoeff();
    mass = std::max(mass, m);
    if (m > 0) live.push_back(s);
  }
  if (mass == 0.0)
    throw std::invalid_argument("degenerate calibration samples (all zero)");
  // the samples must excite more than one momentum or the fit is
  // rank-deficient in the w-weight placement
  {
    Eigen::VectorXd excited = Eigen::VectorXd::Zero(site_count(spec));
    for (const LatticeState& s : live) {
      MomentumAmplitudes amps = fourier_amplitudes(spec, s);
      for (Eigen::Index p = 0; p < excited.size(); ++p)
        if (amps.theta.col(p).norm() + amps.tau.col(p).norm() > 1e-12)
          excited(p) = 1.0;
    }
    if (excited.sum() < 2.0)
      throw std::invalid_argument(
          "degenerate calibration samples (single momentum)");
  }

  FieldMatrices ops = realize_field_ops(spec, space);
  auto objective = [&](double c) {
    return residual_with_ops(spec, space, ops, live, c);
  };

  // coarse scan around the continuum constant, then golden-section refine;
  // the objective is a V-shaped max of near-linear absolute residuals
  double c0 = continuum_c(spec);
  double lo = 0.2 * c0, hi = 5.0 * c0;
  double best = lo, best_val = objective(lo);
  const int scan = 64;
  for (int i = 1; i <= scan; ++i) {
    double c = lo + (hi - lo) * i / scan;
    double val = objective(c);
    if (val < best_val) {
      best_val = val;
      best = c;
    }
  }
  double a = std::max(lo, best - (hi - lo) / scan);
  double b = std::min(hi, best + (hi - lo) / scan);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = objective(x1), f2 = objective(x2);
  while (b - a > 1e-13) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = objective(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = objective(x2);
    }
  }
  double c = 0.5 * (a + b);
  return {c, objective(c)};
}

double continuum_c(const LatticeSpec& spec) {
  return 1.0 / std::sqrt(lattice_volume(spec));
}

namespace {

// spectral linear force multiplier: (W^2 phi)_j(x) with W = dispersion
Eigen::MatrixXd spectral_w2(const LatticeSpec& spec,
                            const Eigen::MatrixXd& phi) {
  LatticeState tmp{phi, Eigen::MatrixXd::Zero(phi.rows(), phi.cols())};
  MomentumAmplitudes amps = fourier_amplitudes(spec, tmp);
  DispersionTable disp = dispersion(spec);
  for (unsigned j = 0; j < spec.fields; ++j)
    for (Eigen::Index p = 0; p < amps.theta.cols(); ++p)
      amps.theta(j, p) *= disp.w(j, p) * disp.w(j, p);
  return inverse_fourier(spec, amps).phi;
}

std::vector<double> flat_phi(const LatticeSpec& spec,
                             const Eigen::MatrixXd& phi) {
  size_t S = site_count(spec);
  std::vector<double> out(spec.fields * S);
  for (unsigned j = 0; j < spec.fields; ++j)
    for (size_t x = 0; x < S; ++x) out[j * S + x] = phi(j, x);
  return out;
}

}  // namespace

double lattice_energy(const LatticeSpec& spec, const ClassicalPoly& f,
                      const LatticeState& state) {
  double meas = std::pow(spec.dx, double(spec.d));
  Eigen::MatrixXd w2phi = spectral_w2(spec, state.phi);
  double e = 0.5 * meas *
             (state.pi.squaredNorm() + (state.phi.array() * w2phi.array()).sum());
  if (!f.is_zero()) e += f.eval(flat_phi(spec, state.phi), {});
  return e;
}

LatticeState leapfrog_evolve(const LatticeSpec& spec, const ClassicalPoly& f,
                             const LatticeState& state, double dt,
                             unsigned steps) {
  validate_spec(spec);
  if (dt == 0.0) throw std::invalid_argument("dt must be nonzero");
  if (f.uses_kind(VarKind::Pi) || f.uses_kind(VarKind::PhiDot))
    throw std::domain_error("interaction must depend on site phi only");
  double wmax = dispersion(spec).w.maxCoeff();
  double bound = std::min(spec.dx / std::sqrt(double(spec.d)),
                          wmax > 0 ? 2.0 / wmax : spec.dx);
  if (std::fabs(dt) > bound) {
    std::ostringstream msg;
    msg << "dt " << std::fabs(dt) << " exceeds stability bound " << bound;
    throw std::invalid_argument(msg.str());
  }

  size_t S = site_count(spec);
  std::vector<ClassicalPoly> grad(spec.fields * S);
  if (!f.is_zero())
    for (unsigned j = 1; j <= spec.fields; ++j)
      for (size_t x = 0; x < S; ++x)
        grad[(j - 1) * S + x] = partial_derivative(f, lattice_phi_var(spec, j, x));

  double inv_meas = 1.0 / std::pow(spec.dx, double(spec.d));
  auto force = [&](const Eigen::MatrixXd& phi) {
    Eigen::MatrixXd F = -spectral_w2(spec, phi);
    if (!f.is_zero()) {
      std::vector<double> fp = flat_phi(spec, phi);
      for (unsigned j = 0; j < spec.fields; ++j)
        for (size_t x = 0; x < S; ++x)
          F(j, x) -= inv_meas * grad[j * S + x].eval(fp, {});
    }
    return F;
  };

  double e0 = std::fabs(lattice_energy(spec, f, state)) + 1.0;
  LatticeState cur = state;
  Eigen::MatrixXd F = force(cur.phi);
  for (unsigned s = 0; s < steps; ++s) {
    cur.pi += 0.5 * dt * F;
    cur.phi += dt * cur.pi;
    F = force(cur.phi);
    cur.pi += 0.5 * dt * F;
    double e = lattice_energy(spec, f, cur);
    if (!std::isfinite(e) || std::fabs(e) > 1e6 * e0) {
      std::ostringstream msg;
      msg << "leapfrog unstable: energy " << e << " at step " << s + 1;
      throw std::runtime_error(msg.str());
    }
  }
  return cur;
}

double functional_commutator_check(const LatticeSpec& spec,
                                   const FockSpace& space,
                                   const ClassicalPoly& f, unsigned j,
                                   size_t site) {
  if (f.degree() > 3)
    throw std::invalid_argument("functional commutator check needs degree <= 3");
  size_t P = site_count(spec);
  if (space.flat_modes() != spec.fields * P)
    throw std::invalid_argument("Fock space mode count does not match lattice");
  OperatorPoly fn = lattice_quantize_normal(spec, f);
  OperatorPoly lhs = commutator(field_phi(spec, j, site), fn);
  ClassicalPoly df = partial_derivative(f, lattice_pi_var(spec, j, site));
  double inv_meas = 1.0 / std::pow(spec.dx, double(spec.d));
  OperatorPoly rhs =
      lattice_quantize_normal(spec, df) * Complex(0.0, 0.5 * inv_meas);
  Eigen::MatrixXcd diff = realize(space, lhs - rhs);
  unsigned margin = std::max(1u, f.degree());
  Eigen::VectorXd mask = space.interior_mask(margin);
  return (mask.asDiagonal() * diff * mask.asDiagonal()).norm();
}

}  // namespace focklab
