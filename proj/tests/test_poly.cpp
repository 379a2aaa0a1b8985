#include <doctest.h>

#include "icis/parse.hpp"
#include "icis/poly.hpp"
#include "icis/rng.hpp"

using namespace icis;

namespace {

Poly P(const std::string& s, Field f, int nvars = 2, int prec = kExact) {
  return parse_poly(s, f, nvars, prec);
}

MapGerm G(const std::string& s, Field f, int nvars = 0, int prec = kExact) {
  return parse_germ(s, f, nvars, prec);
}

Poly random_poly(Rng& rng, Field f, int nvars, int maxdeg, int terms) {
  Poly p(f, nvars, kExact);
  for (int t = 0; t < terms; ++t) {
    Monomial m;
    for (int v = 0; v < nvars; ++v) m.e[v] = (std::uint16_t)rng.below(maxdeg + 1);
    p.add_term(m, rng.elem(f, 9));
  }
  return p;
}

}  // namespace

TEST_CASE("parser grammar") {
  Field q = Field::rationals();
  Poly p = P("x^2 + y^3 - 2*x*y^4", q);
  CHECK(p.coeff(Monomial::var(0, 2)) == q.one());
  CHECK(p.coeff(Monomial::var(1, 3)) == q.one());
  Monomial xy4 = Monomial::var(0) * Monomial::var(1, 4);
  CHECK(p.coeff(xy4) == q.from_int(-2));

  CHECK_THROWS_AS(P("x^^2", q), ParseError);
  try {
    P("x^^2", q);
  } catch (const ParseError& e) {
    CHECK(e.position == 2);
  }
  CHECK_THROWS_AS(P("3x", q), ParseError);      // juxtaposition
  CHECK_THROWS_AS(P("x y", q), ParseError);     // missing operator
  CHECK(P("x1 + x2", q).equals(P("x + y", q)));

  // coefficients reduce into the field
  Field f2 = Field::gf(2);
  CHECK(P("x^2 - 2*x*y^4", f2).equals(P("x^2", f2)));
}

TEST_CASE("ring axioms on random polynomials") {
  for (auto [p, k] : {std::pair<std::uint64_t, unsigned>{0, 1},
                      {2, 1},
                      {3, 1},
                      {7, 1}}) {
    Field F = Field::make(p, k);
    Rng rng(7 + p);
    for (int it = 0; it < 250; ++it) {
      Poly a = random_poly(rng, F, 2, 4, 4);
      Poly b = random_poly(rng, F, 2, 4, 4);
      Poly c = random_poly(rng, F, 2, 4, 4);
      CHECK((a + b).equals(b + a));
      CHECK((a * b).equals(b * a));
      CHECK(((a + b) + c).equals(a + (b + c)));
      CHECK(((a * b) * c).equals(a * (b * c)));
      CHECK((a * (b + c)).equals(a * b + a * c));
    }
  }
}

TEST_CASE("orders") {
  Field q = Field::rationals();
  Poly f = P("x^2 + y^3", q);
  CHECK(f.a_order({1, 1}) == 2);
  CHECK(f.a_order({2, 1}) == 3);
  CHECK(Poly::zero(q, 2).a_order({1, 1}) == kInfinity);

  // v_{d,a}
  MapGerm g = G("x*y ; x^3 + y^3", q);
  WeightSystem ws{{6, 9}, {3, 3}};
  CHECK(dw_order(g, ws) == 0);
  MapGerm g2({Poly::zero(q, 2), P("x^4", q)});
  CHECK(dw_order(g2, ws) == 3);
  MapGerm g3({Poly::zero(q, 2), Poly::zero(q, 2)});
  CHECK(dw_order(g3, ws) == kInfinity);
}

TEST_CASE("jets") {
  Field q = Field::rationals();
  MapGerm g = G("x^2 + y^3 ; y^5", q);
  MapGerm j = jet(g, 2);
  CHECK(j[0].equals_to_degree(P("x^2", q), 2));
  CHECK(j[1].is_zero());
  CHECK(j.precision() == 2);

  MapGerm g2 = G("x^2 + x*y^2 + y^4 ; y^3 + x^4", q);
  MapGerm j3 = jet(g2, 3);
  CHECK(j3[0].equals_to_degree(P("x^2 + x*y^2", q), 3));
  CHECK(j3[1].equals_to_degree(P("y^3", q), 3));
}

TEST_CASE("quasi-homogeneous pieces") {
  Field q = Field::rationals();
  // f = (x^2 + y^3, 0), d = (2), a = (1,1): the nu = 1 piece of the first
  // component is y^3
  MapGerm f({P("x^2 + y^3", q), Poly::zero(q, 2)});
  WeightSystem ws{{2, 2}, {1, 1}};
  MapGerm piece = qh_part(f, ws, 1);
  CHECK(piece[0].equals(P("y^3", q)));
  CHECK(piece[1].is_zero());

  // quasi-homogeneous tuple: everything in piece 0
  MapGerm fh = G("x*y ; x^3 + y^3", q);
  WeightSystem wsh{{2, 3}, {1, 1}};
  CHECK(is_quasi_homogeneous(fh, wsh));
  CHECK(dw_order(fh, wsh) == 0);
  MapGerm p0 = qh_part(fh, wsh, 0);
  CHECK(p0[0].equals(fh[0]));
  CHECK(p0[1].equals(fh[1]));
  // pieces below the order vanish
  CHECK(qh_part(fh, wsh, -1)[0].is_zero());
}

TEST_CASE("qh decomposition reconstructs") {
  Field q = Field::rationals();
  Rng rng(12);
  WeightSystem ws{{4, 5}, {2, 1}};
  for (int it = 0; it < 30; ++it) {
    MapGerm f({random_poly(rng, q, 2, 4, 5), random_poly(rng, q, 2, 4, 5)});
    MapGerm acc({Poly::zero(q, 2), Poly::zero(q, 2)});
    for (long nu = -10; nu <= 10; ++nu) {
      MapGerm piece = qh_part(f, ws, nu);
      acc[0] += piece[0];
      acc[1] += piece[1];
    }
    CHECK(acc[0].equals(f[0]));
    CHECK(acc[1].equals(f[1]));
  }
}

TEST_CASE("substitution") {
  Field q = Field::rationals();
  // (x^2) under x -> x + y at precision 2
  Poly f = P("x^2", q);
  std::vector<Poly> phi = {P("x + y", q, 2, 2), P("y", q, 2, 2)};
  CHECK(f.substitute(phi, 2).equals_to_degree(P("x^2 + 2*x*y + y^2", q), 2));

  // (xy) under y -> y + x^2 at precision 3
  Poly g = P("x*y", q);
  std::vector<Poly> phi2 = {P("x", q, 2, 3), P("y + x^2", q, 2, 3)};
  CHECK(g.substitute(phi2, 3).equals_to_degree(P("x*y + x^3", q), 3));

  // identity is the identity
  std::vector<Poly> id = {P("x", q, 2, 5), P("y", q, 2, 5)};
  Poly h = P("x^2 + y^3 - 2*x*y^4", q);
  CHECK(h.substitute(id, 5).equals_to_degree(h, 5));
}

TEST_CASE("substitution composes") {
  for (auto pp : {std::uint64_t(0), std::uint64_t(5)}) {
    Field F = Field::make(pp, 1);
    Rng rng(99 + pp);
    int prec = 6;
    for (int it = 0; it < 50; ++it) {
      // random truncated automorphisms: invertible linear part
      auto rand_auto = [&]() {
        while (true) {
          std::vector<Poly> phi;
          for (int v = 0; v < 2; ++v) {
            Poly im(F, 2, prec);
            for (int w = 0; w < 2; ++w)
              im.add_term(Monomial::var(w), rng.elem(F, 5));
            im.add_term(Monomial::var(0, 2), rng.elem(F, 3));
            im.add_term(Monomial::var(0) * Monomial::var(1), rng.elem(F, 3));
            phi.push_back(im);
          }
          FieldElem det = phi[0].coeff(Monomial::var(0)) *
                              phi[1].coeff(Monomial::var(1)) -
                          phi[0].coeff(Monomial::var(1)) *
                              phi[1].coeff(Monomial::var(0));
          if (!det.is_zero()) return phi;
        }
      };
      auto phi = rand_auto();
      auto psi = rand_auto();
      Poly f = random_poly(rng, F, 2, 3, 4);
      // (f . phi) . psi == f . (phi . psi)
      Poly lhs = f.substitute(phi, prec).substitute(psi, prec);
      std::vector<Poly> comp;
      for (auto& im : phi) comp.push_back(im.substitute(psi, prec));
      Poly rhs = f.substitute(comp, prec);
      CHECK(lhs.equals_to_degree(rhs, prec));
    }
  }
}

TEST_CASE("derivatives kill p-th powers") {
  Field f5 = Field::gf(5);
  Poly f = P("x^5 + x^3*y^2 + y^5", f5);
  Poly dx = f.derivative(0);
  CHECK(dx.equals(P("3*x^2*y^2", f5)));
  Poly dy = f.derivative(1);
  CHECK(dy.equals(P("2*x^3*y", f5)));
}

TEST_CASE("jacobian and minors") {
  Field f5 = Field::gf(5);
  MapGerm f = G("x^2 ; y^3", f5);
  auto j = jacobian(f);
  CHECK(j[0][0].equals(P("2*x", f5)));
  CHECK(j[0][1].is_zero());
  CHECK(j[1][0].is_zero());
  CHECK(j[1][1].equals(P("3*y^2", f5)));
  auto m2 = minors(j, 2);
  REQUIRE(m2.size() == 1);
  CHECK(m2[0].equals(P("x*y^2", f5)));  // 6 = 1 mod 5
  auto m1 = minors(j, 1);
  CHECK(m1.size() == 4);

  Field q = Field::rationals();
  auto j2 = jacobian(G("x*y ; x^3 + y^3", q));
  CHECK(j2[0][0].equals(P("y", q)));
  CHECK(j2[0][1].equals(P("x", q)));
  CHECK(j2[1][0].equals(P("3*x^2", q)));
  CHECK(j2[1][1].equals(P("3*y^2", q)));
}

TEST_CASE("hessian corank") {
  Field q = Field::rationals();
  CHECK(hessian_corank(P("x^2 + y^2", q)).corank == 0);
  CHECK(hessian_corank(P("x^2 + y^3", q)).corank == 1);
  CHECK(hessian_corank(P("x^3 + y^3", q)).corank == 2);
}

TEST_CASE("weierstrass reduction") {
  Field q = Field::rationals();
  int prec = 12;
  // g = y^2: already reduced
  auto r1 = weierstrass_reduce(P("y^2", q).jet(prec), 3, q.one(), prec);
  CHECK(r1.a_coeffs.equals_to_degree(P("y^2", q), prec));
  CHECK(r1.b_coeffs.is_zero());
  // g = x^2 against x^2 + y^3: A = -y^3
  auto r2 = weierstrass_reduce(P("x^2", q).jet(prec), 3, q.one(), prec);
  CHECK(r2.a_coeffs.equals_to_degree(P("-1*y^3", q), prec));
  CHECK(r2.b_coeffs.is_zero());
  // g = x^3: x^3 = x(x^2 + y^3) - x y^3, so B = -y^3
  auto r3 = weierstrass_reduce(P("x^3", q).jet(prec), 3, q.one(), prec);
  CHECK(r3.a_coeffs.is_zero());
  CHECK(r3.b_coeffs.equals_to_degree(P("-1*y^3", q, 2), prec));

  // reconstruction: A + x B + quotient * divisor = g, on random inputs
  Rng rng(5);
  for (int it = 0; it < 40; ++it) {
    Poly g = random_poly(rng, q, 2, 5, 6);
    int s = 3 + (int)rng.below(3);
    FieldElem alpha = rng.below(2) ? q.one() : q.zero();
    auto w = weierstrass_reduce(g.jet(prec), s, alpha, prec);
    Poly divisor = P("x^2", q);
    if (!alpha.is_zero()) divisor.add_term(Monomial::var(1, s), alpha);
    Poly rebuilt = w.a_coeffs + P("x", q).jet(prec) * w.b_coeffs +
                   w.quotient * divisor;
    CHECK(rebuilt.equals_to_degree(g, prec));
  }
}

TEST_CASE("series inverse") {
  Field q = Field::rationals();
  Poly u = P("1 + x + y^2", q, 2, 8);
  Poly v = u.series_inverse(8);
  Poly one = Poly::constant(q, 2, q.one(), 8);
  CHECK((u * v).equals_to_degree(one, 8));
}
