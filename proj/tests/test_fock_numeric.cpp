#include <random>

#include "doctest.h"
#include "focklab/encoding.hpp"

using namespace focklab;

namespace {

ClassicalPoly random_poly(std::mt19937_64& rng, unsigned n, unsigned deg,
                          unsigned terms) {
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  std::uniform_int_distribution<unsigned> pick_deg(0, deg);
  std::uniform_int_distribution<unsigned> pick_mode(1, n);
  std::uniform_int_distribution<unsigned> pick_kind(0, 1);
  ClassicalPoly p(n);
  for (unsigned t = 0; t < terms; ++t) {
    Exponents e;
    unsigned d = pick_deg(rng);
    for (unsigned i = 0; i < d; ++i) {
      Var v = pick_kind(rng) ? phi_var(pick_mode(rng)) : pi_var(pick_mode(rng));
      e[v] += 1;
    }
    p.add_term(e, coeff(rng));
  }
  return p;
}

Ensemble random_ensemble(std::mt19937_64& rng, unsigned n, unsigned max_pts) {
  std::uniform_int_distribution<size_t> npts(1, max_pts);
  std::uniform_real_distribution<double> amp(-0.7, 0.7);
  Ensemble ens;
  size_t m = npts(rng);
  double wsum = 0;
  std::vector<double> raw(m);
  for (auto& w : raw) {
    w = std::uniform_real_distribution<double>(0.1, 1.0)(rng);
    wsum += w;
  }
  for (size_t k = 0; k < m; ++k) {
    Eigen::VectorXd phi(n), pi(n);
    for (unsigned j = 0; j < n; ++j) {
      phi(j) = amp(rng);
      pi(j) = amp(rng);
    }
    ens.points.push_back({phi, pi});
    ens.weights.push_back(raw[k] / wsum);
  }
  // renormalize exactly
  double s = 0;
  for (double w : ens.weights) s += w;
  ens.weights.back() += 1.0 - s;
  return ens;
}

}  // namespace

TEST_CASE("ladder matrix elements") {
  FockSpace space(1, 5);
  Eigen::MatrixXcd a = ladder_matrix(space, ann(1));
  Eigen::MatrixXcd ad = ladder_matrix(space, cre(1));
  Eigen::VectorXcd vac = Eigen::VectorXcd::Zero(space.dimension());
  vac(0) = 1.0;
  CHECK((a * vac).norm() == 0.0);
  Eigen::VectorXcd one = ad * vac;
  CHECK(std::abs(one(1) - Complex(1.0, 0.0)) < 1e-15);
  CHECK(std::abs(ad(2, 1) - Complex(std::sqrt(2.0), 0.0)) < 1e-15);
  CHECK((a - ad.adjoint()).norm() == 0.0);
}

TEST_CASE("realize basics") {
  FockSpace space(2, 4);
  CHECK((realize(space, OperatorPoly::identity(2)) -
         Eigen::MatrixXcd::Identity(space.dimension(), space.dimension()))
            .norm() == 0.0);

  OperatorPoly num(2);
  num.add_word({cre(1), ann(1)}, Complex(1.0, 0.0));
  Eigen::MatrixXcd Nm = realize(space, num);
  for (size_t i = 0; i < space.dimension(); ++i)
    CHECK(std::abs(Nm(i, i) - Complex(space.occupation_of(i, 0), 0.0)) <
          1e-14);
}

TEST_CASE("realize respects adjoints and products") {
  std::mt19937_64 rng(5);
  FockSpace space(2, 8);
  // the symbolic product is normal-ordered, so the matrix identity holds on
  // interior columns (the truncated CCR fails only at the boundary)
  Eigen::VectorXd interior = space.interior_mask(4);
  for (int trial = 0; trial < 5; ++trial) {
    OperatorPoly p = quantize_canonical(random_poly(rng, 2, 2, 3), 2);
    OperatorPoly q = quantize_canonical(random_poly(rng, 2, 2, 3), 2);
    Eigen::MatrixXcd Mp = realize(space, p), Mq = realize(space, q);
    CHECK((realize(space, p.adjoint()) - Mp.adjoint()).norm() < 1e-12);
    CHECK(((realize(space, p * q) - Mp * Mq) * interior.asDiagonal()).norm() <
          1e-10);
  }
}

TEST_CASE("interior CCR and boundary defect") {
  FockSpace space(1, 8);
  Eigen::MatrixXcd a = ladder_matrix(space, ann(1));
  Eigen::MatrixXcd ad = ladder_matrix(space, cre(1));
  Eigen::MatrixXcd comm = a * ad - ad * a;
  const unsigned N = space.cutoff();
  for (unsigned k = 0; k < N; ++k)
    CHECK(std::abs(comm(k, k) - Complex(1.0, 0.0)) < 1e-14);
  // truncated boundary: [a, a+] at occupation N equals 1 - (N+1) = -N
  CHECK(std::abs(comm(N, N) - Complex(-static_cast<double>(N), 0.0)) < 1e-13);
}

TEST_CASE("realized field commutator is (i/2) I on the interior") {
  FockSpace space(1, 12);
  Eigen::MatrixXcd f = realize(space, phi_op(1, 1));
  Eigen::MatrixXcd g = realize(space, pi_op(1, 1));
  Eigen::MatrixXcd comm = f * g - g * f;
  for (size_t i = 0; i + 2 < space.dimension(); ++i)
    CHECK(std::abs(comm(i, i) - Complex(0.0, 0.5)) < 1e-14);
}

TEST_CASE("matrix consistency of normal ordering on the interior") {
  std::mt19937_64 rng(19);
  FockSpace space(2, 8);
  Eigen::VectorXd interior = space.interior_mask(4);
  for (int trial = 0; trial < 10; ++trial) {
    OperatorPoly p = quantize_canonical(random_poly(rng, 2, 4, 3), 2);
    Eigen::MatrixXcd Mp = realize(space, p);
    Eigen::MatrixXcd Mn = realize(space, normal_order(p));
    Eigen::MatrixXcd diff = (Mp - Mn) * interior.asDiagonal();
    CHECK(diff.norm() < 1e-10);
  }
}

TEST_CASE("moment vector examples") {
  FockSpace space(1, 30);
  Eigen::VectorXd zero(1);
  zero << 0.0;
  Eigen::VectorXcd v0 = moment_vector(space, zero);
  CHECK(std::abs(v0(0) - Complex(1.0, 0.0)) < 1e-15);
  CHECK(v0.tail(space.dimension() - 1).norm() == 0.0);

  Eigen::VectorXd two(1);
  two << 2.0;
  Eigen::VectorXcd v = moment_vector(space, two);
  double fact = 1.0;
  for (unsigned k = 0; k <= 8; ++k) {
    if (k > 0) fact *= k;
    CHECK(std::abs(v(k) - Complex(std::pow(2.0, k) / std::sqrt(fact), 0.0)) <
          1e-12);
  }
  // <phi^2> of the point ensemble at phi = 2 via moment extraction
  CHECK(extract_moment(space, v, {2u}) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("moment extraction matches brute-force weighted moments") {
  FockSpace space(1, 25);
  // two-point ensemble phi in {0.5, -0.25}, weights 0.25/0.75
  std::vector<double> phis = {0.5, -0.25};
  std::vector<double> ws = {0.25, 0.75};
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(space.dimension());
  for (size_t k = 0; k < phis.size(); ++k) {
    Eigen::VectorXd p(1);
    p << phis[k];
    v += ws[k] * moment_vector(space, p);
  }
  for (unsigned m = 0; m <= 4; ++m) {
    double brute = 0;
    for (size_t k = 0; k < phis.size(); ++k)
      brute += ws[k] * std::pow(phis[k], m);
    CHECK(extract_moment(space, v, {m}) ==
          doctest::Approx(brute).epsilon(1e-12));
  }
}

TEST_CASE("coherent vector examples") {
  FockSpace space(1, 30);
  Eigen::VectorXd z1(1), z2(1);
  z1 << 0.0;
  z2 << 0.0;
  Eigen::VectorXcd w0 = coherent_vector(space, {z1, z2});
  CHECK(std::abs(w0(0) - Complex(1.0, 0.0)) < 1e-15);

  Eigen::VectorXd phi(1), pi(1);
  phi << 0.5;
  pi << 0.5;
  Eigen::VectorXcd w = coherent_vector(space, {phi, pi});
  CHECK(std::abs(w.norm() - 1.0) < 1e-10);

  // coherent eigen-relation: a w = z w with z = phi + i pi
  Eigen::MatrixXcd a = ladder_matrix(space, ann(1));
  Complex z(0.5, 0.5);
  CHECK((a * w - z * w).norm() < 1e-8);
}

TEST_CASE("density matrix examples") {
  FockSpace space(1, 30);
  Eigen::VectorXd o(1);
  o << 0.0;
  Eigen::MatrixXcd rho0 = density_matrix(space, single_point_ensemble({o, o}));
  CHECK(std::abs(rho0(0, 0) - Complex(1.0, 0.0)) < 1e-14);
  CHECK(std::abs(rho0.trace() - Complex(1.0, 0.0)) < 1e-14);

  Eigen::VectorXd p1(1), p2(1), q1(1), q2(1);
  p1 << 0.4;
  q1 << 0.1;
  p2 << -0.3;
  q2 << 0.2;
  Ensemble two{{{p1, q1}, {p2, q2}}, {0.5, 0.5}};
  Eigen::MatrixXcd rho = density_matrix(space, two);
  CHECK(std::abs(rho.trace() - Complex(1.0, 0.0)) < 1e-10);
  CHECK((rho - rho.adjoint()).norm() < 1e-12);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
  CHECK(es.eigenvalues().minCoeff() > -1e-10);
  int rank = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) > 1e-12) ++rank;
  CHECK(rank <= 2);
}

TEST_CASE("first-moment traces at cutoff 40") {
  FockSpace space(1, 40);
  Eigen::VectorXd phi(1), pi(1);
  phi << 0.3;
  pi << 0.1;
  Eigen::MatrixXcd rho = density_matrix(space, single_point_ensemble({phi, pi}));
  Complex tphi = expectation(rho, realize(space, phi_op(1, 1)));
  Complex tpi = expectation(rho, realize(space, pi_op(1, 1)));
  CHECK(std::abs(tphi - Complex(0.3, 0.0)) < 1e-8);
  CHECK(std::abs(tpi - Complex(0.1, 0.0)) < 1e-8);
  CHECK(std::abs(expectation(rho, Eigen::MatrixXcd::Identity(
                                      space.dimension(), space.dimension())) -
                 Complex(1.0, 0.0)) < 1e-10);
}

TEST_CASE("normal-product traces equal classical expectations") {
  FockSpace space(1, 30);
  Eigen::VectorXd f1(1), g1(1), f2(1), g2(1), f3(1), g3(1);
  f1 << 0.3;
  g1 << 0.2;
  f2 << -0.5;
  g2 << 0.1;
  f3 << 0.0;
  g3 << -0.4;
  Ensemble ens{{{f1, g1}, {f2, g2}, {f3, g3}}, {0.2, 0.5, 0.3}};
  ClassicalPoly f = parse_poly("phi1^2*pi1");
  Eigen::MatrixXcd rho = density_matrix(space, ens);
  Complex tr = expectation(rho, realize(space, quantize_normal(f, 1)));
  double classical = 0;
  for (size_t k = 0; k < ens.points.size(); ++k)
    classical += ens.weights[k] * ens.points[k].phi(0) * ens.points[k].phi(0) *
                 ens.points[k].pi(0);
  CHECK(std::abs(tr - Complex(classical, 0.0)) < 1e-7);
  CHECK(std::abs(tr.imag()) < 1e-10);
}

TEST_CASE("normal-product trace property over seeded random f and ensembles") {
  std::mt19937_64 rng(101);
  FockSpace space(2, 30, 0, 2000);
  for (int trial = 0; trial < 10; ++trial) {
    ClassicalPoly f = random_poly(rng, 2, 4, 4);
    Ensemble ens = random_ensemble(rng, 2, 5);
    Complex tr = ensemble_expectation(space, ens,
                                      realize(space, quantize_normal(f, 2)));
    double classical = 0;
    for (size_t k = 0; k < ens.points.size(); ++k) {
      std::vector<double> phi(ens.points[k].phi.data(),
                              ens.points[k].phi.data() + 2);
      std::vector<double> pi(ens.points[k].pi.data(),
                             ens.points[k].pi.data() + 2);
      classical += ens.weights[k] * f.eval(phi, pi);
    }
    CHECK(std::abs(tr - Complex(classical, 0.0)) < 1e-7);
  }
}

TEST_CASE("truncation bound oracle") {
  FockSpace s20(1, 20);
  Eigen::VectorXd o(1);
  o << 0.0;
  CHECK(truncation_bound(s20, single_point_ensemble({o, o})) == 0.0);

  Eigen::VectorXd one(1);
  one << 1.0;
  CHECK(truncation_bound(s20, single_point_ensemble({one, o})) <= 1e-8);

  FockSpace s10(1, 10);
  Eigen::VectorXd three(1);
  three << 3.0;
  CHECK(truncation_bound(s10, single_point_ensemble({three, o})) > 1e-3);
  // refusal with guidance
  CHECK_THROWS_AS(coherent_vector(s10, {three, o}), TailBoundViolation);
  try {
    coherent_vector(s10, {three, o});
  } catch (const TailBoundViolation& e) {
    CHECK(e.suggested_cutoff >= 30);
  }
}

TEST_CASE("ensemble validation errors") {
  Eigen::VectorXd o(1);
  o << 0.0;
  Ensemble bad{{{o, o}}, {0.5}};
  CHECK_THROWS_AS(bad.validate(1), std::invalid_argument);
  Ensemble empty;
  CHECK_THROWS_AS(empty.validate(1), std::invalid_argument);
}
