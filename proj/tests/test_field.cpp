#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "icis/field.hpp"
#include "icis/rng.hpp"

using namespace icis;

TEST_CASE("field construction") {
  Field q = Field::make(0, 1);
  CHECK(q.is_rational());
  Field f7 = Field::make(7, 1);
  CHECK(f7.characteristic() == 7);
  CHECK(f7.spec().modulus.empty());
  CHECK_THROWS_AS(Field::make(6, 1), NonPrimeCharacteristic);

  // GF(8): the smallest irreducible cubic over GF(2); brute-force check
  // that it has no root and no linear factor
  Field f8 = Field::make(2, 3);
  auto mod = f8.spec().modulus;
  REQUIRE(mod.size() == 4);
  CHECK(mod[3] == 1);
  for (std::uint64_t r = 0; r < 2; ++r) {
    std::uint64_t val = 0;
    for (int i = 3; i >= 0; --i) val = (val * r + mod[i]) % 2;
    CHECK(val != 0);
  }
  // x^3 + x + 1 is the smallest in the enumeration
  CHECK(mod[0] == 1);
  CHECK(mod[1] == 1);
  CHECK(mod[2] == 0);

  // deterministic: same (p, k) gives the same spec object
  CHECK(Field::make(2, 3).raw() == f8.raw());
}

TEST_CASE("field axioms on random triples") {
  for (auto [p, k] : {std::pair<std::uint64_t, unsigned>{0, 1},
                      {5, 1},
                      {2, 3},
                      {3, 2}}) {
    Field F = Field::make(p, k);
    Rng rng(42 + p + k);
    for (int it = 0; it < 2500; ++it) {
      FieldElem a = rng.elem(F), b = rng.elem(F), c = rng.elem(F);
      CHECK((a + b) + c == a + (b + c));
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
      CHECK(a + (-a) == F.zero());
      if (!a.is_zero()) CHECK(a * a.inv() == F.one());
      CHECK(a * b == b * a);
    }
  }
}

TEST_CASE("nth_root examples") {
  Field f7 = Field::gf(7);
  // 3^2 = 2 mod 7; the canonical pick is the smaller root
  auto r = nth_root(f7.from_int(2), 2);
  REQUIRE(r.has_value());
  CHECK(r->index() == 3);
  // 3 is a quadratic non-residue mod 7
  CHECK(!nth_root(f7.from_int(3), 2).has_value());
  // identity
  CHECK(*nth_root(f7.one(), 5) == f7.one());

  Field q = Field::rationals();
  auto rq = nth_root(q.from_mpq(mpq_class(8, 27)), 3);
  REQUIRE(rq.has_value());
  CHECK(*rq == q.from_mpq(mpq_class(2, 3)));
  CHECK(!nth_root(q.from_int(2), 2).has_value());
  CHECK(!nth_root(q.from_int(-4), 2).has_value());
  auto rneg = nth_root(q.from_int(-8), 3);
  REQUIRE(rneg.has_value());
  CHECK(*rneg == q.from_int(-2));
}

TEST_CASE("nth_root roundtrip exhaustive on small prime fields") {
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13}) {
    Field F = Field::gf(p);
    for (unsigned r = 1; r <= 6; ++r) {
      for (std::uint64_t i = 0; i < p; ++i) {
        FieldElem a = F.from_index(i);
        auto root = nth_root(a, r);
        if (root) CHECK(root->pow(r) == a);
        // oracle: exhaustive existence
        bool exists = false;
        for (std::uint64_t j = 0; j < p; ++j)
          if (F.from_index(j).pow(r) == a) exists = true;
        CHECK(root.has_value() == exists);
      }
    }
  }
}

TEST_CASE("rational arithmetic has no word-size limits") {
  Field q = Field::rationals();
  FieldElem big = q.from_mpq(mpq_class("18446744073709551616/3"));  // 2^64 / 3
  FieldElem prod = big * big;
  CHECK(prod == q.from_mpq(mpq_class("340282366920938463463374607431768211456/9")));
  CHECK(prod * prod.inv() == q.one());
}

TEST_CASE("char-2 extension arithmetic") {
  Field f4 = Field::gf(2, 2);
  CHECK(f4.spec().order() == 4);
  // every element is a square (Frobenius)
  for (std::uint64_t i = 0; i < 4; ++i) {
    FieldElem a = f4.from_index(i);
    auto r = nth_root(a, 2);
    REQUIRE(r.has_value());
    CHECK(*r * *r == a);
  }
}
