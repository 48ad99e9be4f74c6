#include <random>

#include "doctest.h"
#include "focklab/ladder_algebra.hpp"

using namespace focklab;

namespace {

OperatorPoly gen(Generator g, unsigned n) {
  return OperatorPoly::generator(g, n);
}

// seeded random polynomial in phi/pi on n modes, total degree <= deg
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

OperatorPoly random_operator(std::mt19937_64& rng, unsigned n, unsigned deg) {
  return quantize_canonical(random_poly(rng, n, deg, 4), n);
}

}  // namespace

TEST_CASE("arith examples") {
  unsigned n = 2;
  OperatorPoly a1 = gen(ann(1), n);
  CHECK((a1 + a1).equals(a1 * Complex(2.0, 0.0)));

  OperatorPoly prod = gen(ann(1), n) * gen(cre(2), n);
  OperatorPoly adj = prod.adjoint();
  CHECK(adj.equals(gen(ann(2), n) * gen(cre(1), n)));

  OperatorPoly c2 = gen(cre(1), n) * gen(cre(1), n);
  OperatorPoly expect(n);
  expect.add_word({cre(1), cre(1)}, Complex(1.0, 0.0));
  CHECK(c2.equals(expect));
}

TEST_CASE("normal order CCR rewrites") {
  unsigned n = 2;
  OperatorPoly p(n);
  p.add_word({ann(1), cre(1)}, Complex(1.0, 0.0));
  OperatorPoly no = normal_order(p);
  OperatorPoly expect(n);
  expect.add_word({cre(1), ann(1)}, Complex(1.0, 0.0));
  expect.add_word({}, Complex(1.0, 0.0));
  CHECK(no.equals(expect));

  OperatorPoly q(n);
  q.add_word({ann(1), cre(2)}, Complex(1.0, 0.0));
  OperatorPoly qe(n);
  qe.add_word({cre(2), ann(1)}, Complex(1.0, 0.0));
  CHECK(normal_order(q).equals(qe));

  // a1 a1 a1+ -> a1+ a1 a1 + 2 a1
  OperatorPoly r(n);
  r.add_word({ann(1), ann(1), cre(1)}, Complex(1.0, 0.0));
  OperatorPoly re(n);
  re.add_word({cre(1), ann(1), ann(1)}, Complex(1.0, 0.0));
  re.add_word({ann(1)}, Complex(2.0, 0.0));
  CHECK(normal_order(r).equals(re));
}

TEST_CASE("normal order is idempotent") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    OperatorPoly p = random_operator(rng, 2, 4);
    OperatorPoly once = normal_order(p);
    CHECK(normal_order(once).equals(once, 1e-13));
  }
}

TEST_CASE("[Phi_j, Pi_k] = (i/2) delta_jk for j,k <= 3") {
  unsigned n = 3;
  for (unsigned j = 1; j <= n; ++j) {
    for (unsigned k = 1; k <= n; ++k) {
      OperatorPoly c = commutator(phi_op(j, n), pi_op(k, n));
      if (j == k) {
        CHECK(c.equals(OperatorPoly::identity(n) * Complex(0.0, 0.5), 0.0));
      } else {
        CHECK(c.is_zero(0.0));
      }
    }
  }
}

TEST_CASE("[Phi^m, Pi] = (i/2) m Phi^(m-1) for m=1..5") {
  unsigned n = 1;
  OperatorPoly phi_pow = OperatorPoly::identity(n);
  for (unsigned m = 1; m <= 5; ++m) {
    phi_pow = phi_pow * phi_op(1, n);
    OperatorPoly lower = OperatorPoly::identity(n);
    for (unsigned i = 0; i + 1 < m; ++i) lower = lower * phi_op(1, n);
    OperatorPoly lhs = commutator(phi_pow, pi_op(1, n));
    OperatorPoly rhs = lower * Complex(0.0, 0.5 * m);
    CHECK((lhs - rhs).is_zero());
  }
}

TEST_CASE("commutator of distinct-mode fields vanishes") {
  CHECK(commutator(phi_op(1, 2), phi_op(2, 2)).is_zero(0.0));
}

TEST_CASE("commutator Phi^3 with Pi gives (3i/2) Phi^2") {
  unsigned n = 1;
  OperatorPoly cube = phi_op(1, n) * phi_op(1, n) * phi_op(1, n);
  OperatorPoly sq = phi_op(1, n) * phi_op(1, n);
  CHECK(commutator(cube, pi_op(1, n)).equals(sq * Complex(0.0, 1.5)));
}

TEST_CASE("commutator antisymmetry, bilinearity, Jacobi") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 15; ++trial) {
    OperatorPoly p = random_operator(rng, 2, 2);
    OperatorPoly q = random_operator(rng, 2, 2);
    OperatorPoly r = random_operator(rng, 2, 2);
    CHECK((commutator(p, q) + commutator(q, p)).is_zero(1e-12));
    Complex s(0.7, -0.3);
    CHECK((commutator(p * s + q, r) - commutator(p, r) * s - commutator(q, r))
              .is_zero(1e-12));
    OperatorPoly jac = commutator(p, commutator(q, r)) +
                       commutator(q, commutator(r, p)) +
                       commutator(r, commutator(p, q));
    CHECK(jac.is_zero(1e-11));
  }
}

TEST_CASE("phi_op and pi_op are Hermitian, bad index throws") {
  CHECK((phi_op(1, 2) - phi_op(1, 2).adjoint()).is_zero(0.0));
  CHECK((pi_op(2, 2) - pi_op(2, 2).adjoint()).is_zero(0.0));
  CHECK_THROWS_AS(phi_op(3, 2), std::out_of_range);
  CHECK_THROWS_AS(pi_op(0, 2), std::out_of_range);
}

TEST_CASE("quantize_canonical examples") {
  // phi1*pi1 -> Phi1 Pi1 in written order
  OperatorPoly got = quantize_canonical(parse_poly("phi1*pi1"));
  CHECK(got.equals(phi_op(1, 1) * pi_op(1, 1)));

  CHECK(quantize_canonical(parse_poly("phi1^2"))
            .equals(phi_op(1, 1) * phi_op(1, 1)));

  OperatorPoly ho = quantize_canonical(parse_poly("0.5*pi1^2 + 0.5*phi1^2"));
  OperatorPoly expect = pi_op(1, 1) * pi_op(1, 1) * Complex(0.5, 0.0) +
                        phi_op(1, 1) * phi_op(1, 1) * Complex(0.5, 0.0);
  CHECK(ho.equals(expect));

  CHECK_THROWS_AS(quantize_canonical(parse_poly("phidot1")), std::domain_error);
}

TEST_CASE("quantize_normal examples") {
  // phi1^2 -> 1/4 (a+a+ + 2 a+a + aa)
  OperatorPoly got = quantize_normal(parse_poly("phi1^2"));
  OperatorPoly expect(1);
  expect.add_word({cre(1), cre(1)}, Complex(0.25, 0.0));
  expect.add_word({cre(1), ann(1)}, Complex(0.5, 0.0));
  expect.add_word({ann(1), ann(1)}, Complex(0.25, 0.0));
  CHECK(got.equals(expect, 0.0));

  // linear terms unchanged
  CHECK(quantize_normal(parse_poly("phi1")).equals(phi_op(1, 1), 0.0));

  // pi1^2 -> 1/4 (2 a+a - aa - a+a+)
  OperatorPoly got_pi = quantize_normal(parse_poly("pi1^2"));
  OperatorPoly expect_pi(1);
  expect_pi.add_word({cre(1), ann(1)}, Complex(0.5, 0.0));
  expect_pi.add_word({ann(1), ann(1)}, Complex(-0.25, 0.0));
  expect_pi.add_word({cre(1), cre(1)}, Complex(-0.25, 0.0));
  CHECK(got_pi.equals(expect_pi, 0.0));
}

TEST_CASE("quantize_normal equals colon-stripped normal order of canonical") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 20; ++trial) {
    ClassicalPoly f = random_poly(rng, 2, 4, 4);
    // expand the canonical substitution WITHOUT applying CCRs, then strip
    std::vector<OperatorPoly> factors;
    OperatorPoly direct(2);
    for (const auto& [e, c] : f.terms()) {
      std::vector<OperatorPoly> fac;
      for (const auto& [v, k] : e)
        if (v.kind == VarKind::Phi)
          for (unsigned i = 0; i < k; ++i) fac.push_back(phi_op(v.mode, 2));
      for (const auto& [v, k] : e)
        if (v.kind == VarKind::Pi)
          for (unsigned i = 0; i < k; ++i) fac.push_back(pi_op(v.mode, 2));
      direct = direct + wick_product(fac) * Complex(c, 0.0);
    }
    CHECK(quantize_normal(f, 2).equals(direct, 1e-13));
  }
}

TEST_CASE("separable quantizations are Hermitian") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    // f = T(pi) + V(phi)
    ClassicalPoly f(2);
    for (unsigned d = 0; d <= 4; ++d) {
      f.add_term({{pi_var(1), d}}, coeff(rng));
      f.add_term({{phi_var(2), d}}, coeff(rng));
    }
    OperatorPoly c = quantize_canonical(f, 2);
    OperatorPoly n = quantize_normal(f, 2);
    CHECK((c - c.adjoint()).is_zero(1e-12));
    CHECK((n - n.adjoint()).is_zero(1e-12));
  }
}

TEST_CASE("bracket identity examples") {
  CHECK(check_bracket_identity(parse_poly("0.5*pi1^2"), 1, BracketSide::Phi)
            .is_zero());
  CHECK(check_bracket_identity(parse_poly("phi1^3"), 1, BracketSide::Pi)
            .is_zero());
  CHECK(check_bracket_identity(parse_poly("phi1*pi2"), 1, BracketSide::Phi)
            .is_zero());
}

TEST_CASE("bracket identities hold for 100 seeded random f") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    ClassicalPoly f = random_poly(rng, 2, 4, 5);
    unsigned j = 1 + (trial % 2);
    CHECK(check_bracket_identity(f, j, BracketSide::Phi, 2).is_zero());
    CHECK(check_bracket_identity(f, j, BracketSide::Pi, 2).is_zero());
  }
}

TEST_CASE("degree overflow is an explicit error") {
  OperatorPoly big(1);
  big.add_word(Word(10, cre(1)), Complex(1.0, 0.0));
  CHECK_THROWS_AS(big * big, DegreeOverflow);
}
