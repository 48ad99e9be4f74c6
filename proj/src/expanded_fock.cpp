#include "focklab/expanded_fock.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace focklab {

namespace {

void require_phi_only(const ClassicalPoly& f, const char* what) {
  for (const auto& [e, c] : f.terms())
    for (const auto& [v, k] : e)
      if (k > 0 && v.kind != VarKind::Phi)
        throw std::domain_error(std::string(what) +
                                ": interaction must depend on phi only");
}

// phi -> a_j, phidot -> b_j annihilator substitution; ordering-free
OperatorPoly annihilator_image(const ClassicalPoly& f, unsigned n) {
  OperatorPoly p(n);
  for (const auto& [e, c] : f.terms()) {
    Word w;
    for (const auto& [v, k] : e) {
      Family fam;
      if (v.kind == VarKind::Phi)
        fam = Family::A;
      else if (v.kind == VarKind::PhiDot)
        fam = Family::B;
      else
        throw std::domain_error("pi variables have no annihilator image");
      for (unsigned i = 0; i < k; ++i) w.push_back(ann(v.mode, fam));
    }
    p.add_word(w, Complex(c, 0.0));
  }
  return p;
}

// X a X^-1 = (a + a+)/sqrt(2), X a+ X^-1 = (a+ - a)/sqrt(2), same on b
OperatorPoly reified_generator(Generator g, unsigned n) {
  const double s = 1.0 / std::sqrt(2.0);
  OperatorPoly p(n);
  if (!g.dagger) {
    p.add_word({{g.family, g.mode, false}}, Complex(s, 0.0));
    p.add_word({{g.family, g.mode, true}}, Complex(s, 0.0));
  } else {
    p.add_word({{g.family, g.mode, true}}, Complex(s, 0.0));
    p.add_word({{g.family, g.mode, false}}, Complex(-s, 0.0));
  }
  return p;
}

}  // namespace

SecondOrderSystem make_second_order(const Eigen::VectorXd& w,
                                    const ClassicalPoly& f) {
  if (w.size() == 0) throw std::invalid_argument("no modes");
  for (Eigen::Index j = 0; j < w.size(); ++j)
    if (!(w(j) > 0)) throw std::invalid_argument("frequencies must be positive");
  require_phi_only(f, "make_second_order");
  unsigned n = static_cast<unsigned>(w.size());
  if (f.mode_count() > n)
    throw std::invalid_argument("interaction references more modes than w");
  SecondOrderSystem sys{n, w, f, {}};
  for (unsigned j = 1; j <= n; ++j)
    sys.g.push_back(partial_derivative(f, phi_var(j)) * -1.0);
  return sys;
}

HamiltonianSystem second_order_system(const SecondOrderSystem& sys) {
  ClassicalPoly H = sys.f;
  for (unsigned j = 1; j <= sys.mode_count; ++j) {
    H.add_term({{pi_var(j), 2u}}, 0.5);
    H.add_term({{phi_var(j), 2u}}, 0.5 * sys.w(j - 1) * sys.w(j - 1));
  }
  return make_system(H, sys.mode_count);
}

FockSpace expanded_space(unsigned mode_count, unsigned cutoff,
                         size_t dimension_budget) {
  return FockSpace(mode_count, cutoff, mode_count, dimension_budget);
}

Eigen::VectorXcd encode_v(const FockSpace& space, const PhasePoint& point) {
  if (space.b_modes() != space.a_modes())
    throw std::invalid_argument("encode_v needs a doubled register");
  if (point.phi.size() != space.a_modes() ||
      point.pi.size() != space.a_modes())
    throw std::invalid_argument("encode_v: dimension mismatch");
  Eigen::VectorXd amps(space.flat_modes());
  amps << point.phi, point.pi;
  return moment_vector(space, amps);
}

Eigen::VectorXcd apply_classical_function(const FockSpace& space,
                                          const ClassicalPoly& f,
                                          const Eigen::VectorXcd& v) {
  return apply(space, annihilator_image(f, space.a_modes()), v);
}

Eigen::MatrixXd single_mode_reification(unsigned cutoff, double theta) {
  // SU(1,1) disentangling of exp(theta (a^2 + a+^2)) with tau = 2 theta:
  //   X = exp(tan(tau) a+^2/2) (cos tau)^{-(N+1/2)} exp(tan(tau) a^2/2)
  // lowering first keeps every intermediate occupation <= cutoff, so the
  // truncated product carries the exact untruncated matrix elements
  long double tau = 2.0L * static_cast<long double>(theta);
  if (!(std::fabs(static_cast<double>(tau)) < M_PI / 2.0))
    throw std::invalid_argument("reification angle out of range");
  long double half_tan = 0.5L * std::tan(tau);
  long double sec = 1.0L / std::cos(tau);
  unsigned d = cutoff + 1;
  // L(j, k) = <j| exp(half_tan a^2) |k> via the downward recurrence; the
  // triple product is accumulated in long double because the summands at
  // high occupation alternate in sign at magnitudes ~2^{k/2}
  std::vector<std::vector<long double>> L(d, std::vector<long double>(d, 0.0L));
  for (unsigned k = 0; k < d; ++k) {
    long double c = 1.0L;
    L[k][k] = c;
    for (unsigned q = 0; 2 * (q + 1) <= k; ++q) {
      unsigned j = k - 2 * q;
      c *= half_tan / (q + 1.0L) * std::sqrt((long double)j * (j - 1));
      L[k - 2 * (q + 1)][k] = c;
    }
  }
  std::vector<long double> D(d);
  long double p = std::sqrt(sec);
  for (unsigned k = 0; k < d; ++k) {
    D[k] = p;
    p *= sec;
  }
  Eigen::MatrixXd X(d, d);
  for (unsigned m = 0; m < d; ++m)
    for (unsigned k = 0; k < d; ++k) {
      long double acc = 0.0L;
      for (unsigned i = std::min(m, k) % 2; i <= std::min(m, k); i += 2)
        acc += L[i][m] * D[i] * L[i][k];
      X(m, k) = static_cast<double>(acc);
    }
  return X;
}

Eigen::MatrixXd single_mode_reification(unsigned cutoff) {
  return single_mode_reification(cutoff, -M_PI / 8.0);
}

Eigen::VectorXcd apply_reification(const FockSpace& space,
                                   const Eigen::VectorXcd& v) {
  if (static_cast<size_t>(v.size()) != space.dimension())
    throw std::invalid_argument("apply_reification: dimension mismatch");
  Eigen::MatrixXd Xs = single_mode_reification(space.cutoff());
  unsigned radix = space.cutoff() + 1;
  Eigen::VectorXcd cur = v;
  size_t dim = space.dimension();
  for (unsigned m = 0; m < space.flat_modes(); ++m) {
    size_t stride = 1;
    for (unsigned i = 0; i < m; ++i) stride *= radix;
    Eigen::VectorXcd next = Eigen::VectorXcd::Zero(dim);
    for (size_t idx = 0; idx < dim; ++idx) {
      unsigned occ = (idx / stride) % radix;
      size_t base = idx - occ * stride;
      Complex acc = 0;
      for (unsigned k = 0; k < radix; ++k)
        acc += Xs(occ, k) * cur(base + k * stride);
      next(idx) = acc;
    }
    cur.swap(next);
  }
  return cur;
}

Eigen::MatrixXd reification_X(const FockSpace& space) {
  size_t dim = space.dimension();
  if (dim > 2048)
    throw std::invalid_argument("space too large for a dense reification");
  Eigen::MatrixXd Xs = single_mode_reification(space.cutoff());
  Eigen::MatrixXd X(dim, dim);
  for (size_t r = 0; r < dim; ++r) {
    std::vector<unsigned> ro = space.occupation(r);
    for (size_t c = 0; c < dim; ++c) {
      std::vector<unsigned> co = space.occupation(c);
      double e = 1.0;
      for (unsigned m = 0; m < space.flat_modes(); ++m) e *= Xs(ro[m], co[m]);
      X(r, c) = e;
    }
  }

  // accept only if the defining conjugations hold away from the boundary
  // (X couples occupations two apart, hence margin 2 on both sides);
  // residuals are relative to ||X P|| because X is unnormalized with entries
  // spanning many decades
  Eigen::VectorXd interior = space.interior_mask(2);
  double xnorm = (X * interior.asDiagonal()).norm();
  const double s = 1.0 / std::sqrt(2.0);
  auto check = [&](Family fam) {
    unsigned n = space.a_modes();
    Eigen::MatrixXcd A = realize(space, OperatorPoly::generator(ann(1, fam), n));
    Eigen::MatrixXcd Adag = A.adjoint();
    Eigen::MatrixXcd lhs1 = X * A - s * (A + Adag) * X;
    Eigen::MatrixXcd lhs2 = X * Adag - s * (Adag - A) * X;
    double r1 =
        (interior.asDiagonal() * lhs1 * interior.asDiagonal()).norm() / xnorm;
    double r2 =
        (interior.asDiagonal() * lhs2 * interior.asDiagonal()).norm() / xnorm;
    if (r1 > 1e-6 || r2 > 1e-6) {
      std::ostringstream msg;
      msg << "reification conjugation residuals " << r1 << ", " << r2
          << " exceed 1e-6; construction rejected";
      throw std::runtime_error(msg.str());
    }
  };
  check(Family::A);
  if (space.b_modes() > 0) check(Family::B);
  return X;
}

Eigen::VectorXcd encode_z(const FockSpace& space, const PhasePoint& point) {
  return apply_reification(space, encode_v(space, point));
}

GainOperators gain_operators(const SecondOrderSystem& sys,
                             GainPicture picture) {
  unsigned n = sys.mode_count;
  OperatorPoly G0(n), GI(n);
  for (unsigned j = 1; j <= n; ++j) {
    G0.add_word({cre(j, Family::A), ann(j, Family::B)}, Complex(1.0, 0.0));
    G0.add_word({cre(j, Family::B), ann(j, Family::A)},
                Complex(-sys.w(j - 1) * sys.w(j - 1), 0.0));
    OperatorPoly gj = annihilator_image(sys.g[j - 1], n);
    GI = GI + OperatorPoly::generator(cre(j, Family::B), n) * gj;
  }
  if (picture == GainPicture::Z) {
    auto image = [n](Generator g) { return reified_generator(g, n); };
    G0 = substitute(G0, image);
    GI = substitute(GI, image);
  }
  return {picture, G0, GI, G0 + GI};
}

OperatorPoly phi_vector_op(const SecondOrderSystem& sys, unsigned j) {
  if (j == 0 || j > sys.mode_count) throw std::out_of_range("bad mode index");
  double s = 1.0 / std::sqrt(2.0 * sys.w(j - 1));
  OperatorPoly p(sys.mode_count);
  p.add_word({ann(j, Family::A)}, Complex(s, 0.0));
  p.add_word({cre(j, Family::A)}, Complex(s, 0.0));
  return p;
}

OperatorPoly build_Hv(const SecondOrderSystem& sys) {
  unsigned n = sys.mode_count;
  OperatorPoly H = annihilator_image(sys.f, n);
  for (unsigned j = 1; j <= n; ++j) {
    H.add_word({ann(j, Family::B), ann(j, Family::B)}, Complex(0.5, 0.0));
    H.add_word({ann(j, Family::A), ann(j, Family::A)},
               Complex(0.5 * sys.w(j - 1) * sys.w(j - 1), 0.0));
  }
  return H;
}

OperatorPoly build_Hz(const SecondOrderSystem& sys) {
  unsigned n = sys.mode_count;
  auto image = [n](Generator g) { return reified_generator(g, n); };
  return substitute(build_Hv(sys), image);
}

EnergyClassification classify_energy_operator(
    const Eigen::MatrixXcd& Hm, const std::vector<Eigen::VectorXcd>& states,
    double tol) {
  if (states.empty()) throw std::invalid_argument("no states supplied");
  EnergyClassification out;
  bool all_lambda = true, all_q = true;
  for (const auto& v : states) {
    double n2 = v.squaredNorm();
    if (n2 == 0.0) throw std::invalid_argument("zero-norm state");
    Complex rq = v.dot(Hm * v) / n2;
    double lres = (Hm * v - rq * v).norm() / std::sqrt(n2);
    double qres = std::fabs(rq.imag());
    out.energies.push_back(rq.real());
    out.lambda_residuals.push_back(lres);
    out.q_residuals.push_back(qres);
    if (lres > tol) all_lambda = false;
    if (qres > tol) all_q = false;
  }
  out.verdict = all_lambda ? EnergyVerdict::LambdaType
                           : (all_q ? EnergyVerdict::QType
                                    : EnergyVerdict::Neither);
  return out;
}

EquilibriumResidual equilibrium_gain_check(const FockSpace& space,
                                           const SecondOrderSystem& sys,
                                           const PhasePoint& point) {
  unsigned n = sys.mode_count;
  if (point.phi.size() != n || point.pi.size() != n)
    throw std::invalid_argument("equilibrium point dimension mismatch");
  std::vector<double> phi(point.phi.data(), point.phi.data() + n);
  std::vector<double> zero(n, 0.0);
  for (unsigned j = 0; j < n; ++j) {
    double force = -sys.w(j) * sys.w(j) * point.phi(j) +
                   sys.g[j].eval(phi, zero);
    if (std::fabs(point.pi(j)) > 1e-10 || std::fabs(force) > 1e-10)
      throw std::invalid_argument("point is not a classical equilibrium");
  }
  Eigen::VectorXcd v = encode_v(space, point);
  Eigen::VectorXcd z = apply_reification(space, v);
  GainOperators gv = gain_operators(sys, GainPicture::V);
  GainOperators gz = gain_operators(sys, GainPicture::Z);
  // z-encodings are only marginally normalizable and X entries grow like
  // 2^{k/2} with occupation, so the z residual is meaningful on rows with
  // occupation at most half the cutoff
  Eigen::VectorXd mask = space.interior_mask((space.cutoff() + 1) / 2);
  Eigen::VectorXcd gzz = apply(space, gz.total, z);
  return {apply(space, gv.total, v).norm() / v.norm(),
          (mask.asDiagonal() * gzz).norm() / (mask.asDiagonal() * z).norm()};
}

}  // namespace focklab
