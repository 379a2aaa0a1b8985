#include <doctest.h>

#include <set>

#include "icis/classify.hpp"
#include "icis/parse.hpp"
#include "icis/rng.hpp"

using namespace icis;

namespace {

MapGerm G(const std::string& s, Field f, int nvars = 0, int prec = kExact) {
  return parse_germ(s, f, nvars, prec);
}

SingularityType classify_text(const std::string& s, std::uint64_t p,
                              unsigned k = 1) {
  Field F = Field::make(p, k);
  return classify_icis(G(s, F)).type;
}

}  // namespace

TEST_CASE("classification of table normal forms") {
  CHECK(classify_text("x*y ; x^3 + y^3", 5) == SingularityType::F(3, 3));
  CHECK(classify_text("x^2 + y^3 ; y^5 + x*y^4", 5) ==
        SingularityType::simple_tag(TypeTag::I1_odd, 5));
  CHECK(classify_text("x^2 ; x*y^2 + y^3", 3) ==
        SingularityType::simple_tag(TypeTag::G5_1));
  // (x^2, xy + y^2) maps to (x^2 + y^2, xy) under x -> x + y, so it is the
  // same contact class as F(2,2); the classifier reports the invariant tag
  CHECK(classify_text("x^2 ; x*y + y^2", 2) == SingularityType::F(2, 2));
  CHECK(classify_text("x^2 ; y^2", 2) ==
        SingularityType::simple_tag(TypeTag::F22_0));
  CHECK(classify_text("x^2 ; y^3", 7) ==
        SingularityType::simple_tag(TypeTag::G5_0));
  CHECK(classify_text("x^2 ; y^4", 0) ==
        SingularityType::simple_tag(TypeTag::G7));
  CHECK(classify_text("x^2 + y^5 ; x*y^2", 0) ==
        SingularityType::simple_tag(TypeTag::H, 5));
  CHECK(classify_text("x^2 + y^3 ; y^4", 5) ==
        SingularityType::simple_tag(TypeTag::I0_odd, 4));
  CHECK(classify_text("x^2 + y^3 ; x*y^3", 0) ==
        SingularityType::simple_tag(TypeTag::I0_even, 3));
  CHECK(classify_text("x^2 + y^3 ; x*y^3 + y^5", 3) ==
        SingularityType::simple_tag(TypeTag::I1_even, 3));
}

TEST_CASE("not simple verdicts") {
  auto t = classify_text("x^3 + y^4 ; x^2*y^2", 0);
  CHECK(t.tag == TypeTag::NotSimple);

  auto t2 = classify_text("x^2 + y^4 ; y^5 + 2*x*y^3", 7);
  CHECK(t2.tag == TypeTag::NotSimple);
  CHECK(t2.moduli);

  // three variables, order 2
  Field q = Field::rationals();
  auto rep = classify_icis(G("x^2 + y*z ; y^2 + x*z ; z^2 + x*y", q));
  CHECK(rep.type.tag == TypeTag::NotSimple);

  // char 2, cubic second component modulo the first
  auto t3 = classify_text("x^2 ; y^3", 2);
  CHECK(t3.tag == TypeTag::NotSimple);
}

TEST_CASE("not an ICIS") {
  auto t = classify_text("x*y ; x^2*y", 5);
  CHECK(t.tag == TypeTag::NotICIS);
  // common factor in characteristic 2
  auto t2 = classify_text("x^2 + x*y ; y^3 + x^3", 2);
  CHECK(t2.tag == TypeTag::NotICIS);
}

TEST_CASE("order-1 elimination and A_k") {
  CHECK(classify_text("x + y^2 ; y^3", 0) == SingularityType::A_k(2));
  CHECK(classify_text("x ; y^5", 0) == SingularityType::A_k(4));
  CHECK(classify_text("x^4", 5, 1) == SingularityType::A_k(3));
  // the chain (x + y, y + x^2) ends smooth
  auto t = classify_text("x + y ; y + x^2", 0);
  CHECK(t.tag == TypeTag::A);
}

TEST_CASE("nonsimple screen") {
  Field q = Field::rationals();
  CHECK(nonsimple_screen(G("x^3 ; y^4", q)).has_value());
  CHECK(!nonsimple_screen(G("x^2 ; y^3", q)).has_value());
  Field q3 = Field::rationals();
  CHECK(nonsimple_screen(G("x^2 + y*z ; y^2 + x*z ; z^2 + x*y", q3)).has_value());
  // char 2 square pencil
  Field f2 = Field::gf(2);
  CHECK(nonsimple_screen(G("x^2 ; y^3", f2)).has_value());
  CHECK(!nonsimple_screen(G("x*y ; x^3 + y^3", f2)).has_value());
  CHECK(!nonsimple_screen(G("x^2 ; x*y + y^2", f2)).has_value());
}

TEST_CASE("normal forms and validation") {
  Field f5 = Field::gf(5);
  MapGerm nf = normal_form_of(SingularityType::simple_tag(TypeTag::I0_even, 3),
                              f5);
  CHECK(nf[0].equals(parse_poly("x^2 + y^3", f5, 2)));
  CHECK(nf[1].equals(parse_poly("x*y^3", f5, 2)));

  Field f2 = Field::gf(2);
  MapGerm nf2 = normal_form_of(SingularityType::F(2, 2), f2);
  CHECK(nf2[1].equals(parse_poly("x^2 + y^2", f2, 2)));

  CHECK_THROWS_AS(
      normal_form_of(SingularityType::simple_tag(TypeTag::G5_1), f5),
      InvalidParameters);
  CHECK_THROWS_AS(
      normal_form_of(SingularityType::simple_tag(TypeTag::H, 4), f2),
      InvalidParameters);
  CHECK_THROWS_AS(
      normal_form_of(SingularityType::simple_tag(TypeTag::I1_odd, 5),
                     Field::gf(3)),
      InvalidParameters);
}

TEST_CASE("expected bases: published lists") {
  Field q = Field::rationals();
  auto b = expected_t1sec_basis(SingularityType::F(3, 4), q);
  CHECK(b.size() == 7);
  auto g7 = expected_t1sec_basis(SingularityType::simple_tag(TypeTag::G7), q);
  CHECK(g7.size() == 10);
  Field f2 = Field::gf(2);
  auto f220 =
      expected_t1sec_basis(SingularityType::simple_tag(TypeTag::F22_0), f2);
  CHECK(f220.size() == 6);
  // the p-divisibility splits change cardinalities
  Field f5 = Field::gf(5);
  auto i5 = expected_t1sec_basis(
      SingularityType::simple_tag(TypeTag::I0_odd, 5), f5);
  CHECK(i5.size() == 12);  // 2t + 2 with p | t
  auto i4 = expected_t1sec_basis(
      SingularityType::simple_tag(TypeTag::I0_odd, 4), f5);
  CHECK(i4.size() == 9);  // 2t + 1
  Field f55 = Field::gf(5);
  auto ff = expected_t1sec_basis(SingularityType::F(5, 5), f55);
  CHECK(ff.size() == 11);  // m + n + 1 when p | m and p | n
}

TEST_CASE("round trip on a sample of the grid") {
  for (std::uint64_t p : {0ull, 2ull, 3ull, 5ull, 7ull}) {
    Field F = Field::make(p, 1);
    for (auto& t : table_types(F, 5)) {
      MapGerm nf = normal_form_of(t, F);
      auto rep = classify_icis(nf);
      INFO("type ", t.str(), " over char ", p, " -> ", rep.type.str());
      if (t.tag == TypeTag::F22_1) {
        // (x^2, xy + y^2) ~ (xy, x^2 + y^2): the table row coincides with
        // F(2,2) and the classifier keeps the invariant label
        CHECK(rep.type == SingularityType::F(2, 2));
      } else {
        CHECK(rep.type == t);
      }
    }
  }
}

TEST_CASE("jet sufficiency at the determinacy bound") {
  Field f5 = Field::gf(5);
  MapGerm f = G("x^2 + y^3 ; y^4 + x*y^3", f5);
  auto rep = classify_icis(f);
  MapGerm j = f.jet((int)rep.determinacy);
  auto rep2 = classify_icis(j);
  CHECK(rep.type == rep2.type);
}

TEST_CASE("classification report fields") {
  Field f7 = Field::gf(7);
  auto rep = classify_icis(G("x^2 ; y^3", f7));
  CHECK(rep.tau == 7);
  CHECK(rep.tau_sec == 7);
  CHECK(rep.determinacy == 14);
  CHECK(rep.type == SingularityType::simple_tag(TypeTag::G5_0));
  CHECK(rep.witness == WitnessStatus::Full);

  // insufficient precision is an error, not a wrong answer
  MapGerm low = G("x^2 ; y^3", f7, 0, 5);
  CHECK_THROWS_AS(classify_icis(low), PrecisionLoss);
}

TEST_CASE("witness traces replay onto normal forms") {
  Field q = Field::rationals();
  MapGerm f = G("x*y + x^3 ; x^2 + y^2 + y^3", q);
  auto rep = classify_icis(f);
  CHECK(rep.type == SingularityType::F(2, 2));
  REQUIRE(rep.witness == WitnessStatus::Full);
  int prec = (int)rep.determinacy;
  MapGerm replayed = rep.trace.replay(f.jet(prec + 4), prec);
  MapGerm nf = normal_form_of(rep.type, q);
  CHECK(replayed.equals_to_degree(nf.jet(prec), prec));
}

TEST_CASE("witnesses replay exactly onto normal forms") {
  struct Case {
    const char* text;
    std::uint64_t p;
  };
  Case cases[] = {
      {"x^2 + y^3 + y^5 ; 3*y^4 + y^6", 0},            // I0_odd(4)
      {"x^2 ; 2*y^3 + y^4", 0},                        // G5_0
      {"x^2 + y^4 ; 5*x*y^2 + x*y^3", 0},              // H(4)
      {"x^2 + y^3 ; 2*x*y^3 + x*y^4 + y^7", 0},        // I0_even(3)
      {"x^2 + 2*x*y + y^2 + y^5 ; 4*x*y^2 + 4*y^3", 0},  // H(5) in disguise
      {"x*y + x^3 ; x^2 + y^2 + y^3", 0},              // F(2,2)
      {"x^2 + y^3 ; 2*y^4 + y^5", 7},                  // I0_odd(4) over GF(7)
  };
  for (auto& c : cases) {
    Field F = Field::make(c.p, 1);
    MapGerm f = G(c.text, F);
    auto rep = classify_icis(f);
    INFO(c.text, " -> ", rep.type.str());
    REQUIRE(rep.witness == WitnessStatus::Full);
    int prec = (int)rep.determinacy;
    MapGerm replayed = rep.trace.replay(f.jet(prec + 2), prec);
    MapGerm nf = normal_form_of(rep.type, F).jet(prec);
    CHECK(replayed.equals_to_degree(nf, prec));
  }
}

TEST_CASE("contact invariance of the classification") {
  Rng rng(2024);
  for (std::uint64_t p : {0ull, 3ull}) {
    Field F = Field::make(p, 1);
    MapGerm f = normal_form_of(SingularityType::simple_tag(TypeTag::H, 4), F);
    auto base = classify_icis(f);
    int prec = (int)base.determinacy;
    for (int it = 0; it < 25; ++it) {
      std::vector<Poly> phi;
      while (true) {
        phi.clear();
        for (int v = 0; v < 2; ++v) {
          Poly im(F, 2, prec);
          for (int w = 0; w < 2; ++w) im.add_term(Monomial::var(w), rng.elem(F, 5));
          im.add_term(Monomial::var(0) * Monomial::var(1), rng.elem(F, 3));
          phi.push_back(im);
        }
        FieldElem det =
            phi[0].coeff(Monomial::var(0)) * phi[1].coeff(Monomial::var(1)) -
            phi[0].coeff(Monomial::var(1)) * phi[1].coeff(Monomial::var(0));
        if (!det.is_zero()) break;
      }
      MapGerm g = f.jet(prec).substitute(phi, prec);
      FieldElem c0 = rng.nonzero_elem(F, 5), c1 = rng.nonzero_elem(F, 5);
      MapGerm ug({g[0].scaled(c0), g[1].scaled(c1)});
      auto rep = classify_icis(ug);
      CHECK(rep.type == base.type);
      CHECK(rep.tau == base.tau);
      CHECK(rep.tau_sec == base.tau_sec);
    }
  }
}
