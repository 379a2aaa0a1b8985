#include <doctest.h>

#include "icis/deform.hpp"
#include "icis/jetalg.hpp"
#include "icis/rng.hpp"
#include "icis/parse.hpp"

using namespace icis;

namespace {

MapGerm G(const std::string& s, Field f, int nvars = 0, int prec = kExact) {
  return parse_germ(s, f, nvars, prec);
}

}  // namespace

TEST_CASE("unfolding construction") {
  Field f3 = Field::gf(3);
  MapGerm g5 = G("x^2 ; y^3", f3);
  Unfolding full = build_unfolding(g5, false);
  CHECK(full.dim() == 8);  // tau_sec over GF(3)
  Unfolding filtered = build_unfolding(g5, true);
  CHECK(filtered.dim() == 4);  // (y^2,0), (0,xy), (0,y^2), (0,xy^2)
  // evaluate at zero gives the base back
  std::vector<FieldElem> zero(filtered.dim(), f3.zero());
  MapGerm f0 = filtered.at(zero);
  CHECK(f0[0].equals(g5[0]));
  CHECK(f0[1].equals(g5[1]));
}

TEST_CASE("G5_0 fibers over GF(3)") {
  Field f3 = Field::gf(3);
  Unfolding u = build_unfolding(G("x^2 ; y^3", f3), true);
  REQUIRE(u.dim() == 4);
  auto h = enumerate_fibers(u);
  CHECK(h.total == 81);
  // every ICIS fiber lands in {F types, G5_0, G5_1}
  for (auto& [type, count] : h.counts) {
    bool ok = type.rfind("F(", 0) == 0 || type == "G5_0" || type == "G5_1" ||
              type.rfind("NotICIS", 0) == 0;
    INFO("fiber type ", type);
    CHECK(ok);
  }
  CHECK(h.counts.count("G5_0") == 1);  // the base point
}

TEST_CASE("F22 fibers over GF(2)") {
  Field f2 = Field::gf(2);
  Unfolding u0 = unfolding_from_basis(
      G("x^2 ; y^2", f2),
      expected_t1sec_basis(SingularityType::simple_tag(TypeTag::F22_0), f2),
      true);
  CHECK(u0.dim() == 2);  // (xy, 0) and (0, xy)
  auto h0 = enumerate_fibers(u0);
  CHECK(h0.total == 4);
  for (auto& [type, count] : h0.counts) {
    bool ok = type == "F22_0" || type == "F22_1" || type.rfind("F(", 0) == 0 ||
              type.rfind("NotICIS", 0) == 0;
    INFO("fiber type ", type);
    CHECK(ok);
  }
  // the fiber at a = b = 1 is (x^2+xy, y^2+xy), not a complete intersection
  CHECK(h0.not_icis == 1);
}

TEST_CASE("random mode is deterministic") {
  Field f3 = Field::gf(3);
  Unfolding u = build_unfolding(G("x^2 ; y^3", f3), true);
  auto h1 = enumerate_fibers_random(u, 20, 7);
  auto h2 = enumerate_fibers_random(u, 20, 7);
  CHECK(h1.counts == h2.counts);
  auto h3 = enumerate_fibers_random(u, 0, 7);
  CHECK(h3.total == 0);
}

TEST_CASE("semicontinuity probe over the rationals") {
  Field q = Field::rationals();
  Unfolding u = build_unfolding(G("x^2 + y^3 ; x*y^2", q), true);  // H_6
  auto probe = semicontinuity_probe(u, 25, 11, 50);
  CHECK(probe.checked > 0);
  CHECK(probe.violations.empty());
}

TEST_CASE("unfolding fibers over GF(5) stay simple") {
  Field f5 = Field::gf(5);
  for (auto t : {SingularityType::simple_tag(TypeTag::H, 3),
                 SingularityType::simple_tag(TypeTag::I0_odd, 4)}) {
    Unfolding u = build_unfolding(normal_form_of(t, f5), true);
    auto h = enumerate_fibers(u);
    for (auto& [type, count] : h.counts) {
      bool ok = type.rfind("NotICIS", 0) == 0 ||
                type.rfind("NotSimple", 0) != 0;
      INFO(t.str(), " fiber ", type);
      CHECK(ok);
      CHECK(type.rfind("NotSimple", 0) != 0);
    }
    CHECK(h.counts.count(t.str()) == 1);
  }
}

TEST_CASE("basis cardinality equals tau_sec") {
  Field q = Field::rationals();
  for (const char* text : {"x^2 ; y^3", "x^2 + y^3 ; x*y^3", "x*y ; x^2 + y^5"}) {
    MapGerm f = G(text, q);
    auto sec = tjurina_sec(f);
    auto basis = t1sec_basis(f);
    CHECK((long)basis.size() == sec.value);
  }
}

TEST_CASE("budget guard") {
  Field f3 = Field::gf(3);
  Unfolding u = build_unfolding(G("x^2 ; y^3", f3), false);  // 3^8 fibers
  EnumerateOptions opts;
  opts.budget = 100;
  CHECK_THROWS_AS(enumerate_fibers(u, opts), BudgetExceeded);
}
