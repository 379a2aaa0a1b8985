#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "icis/field.hpp"

namespace icis {

/// Polynomial ring for the Groebner engine: up to 32 variables over an
/// exact field, with degrevlex or a block elimination order (the first
/// `elim_block` variables are eliminated first; degrevlex inside each
/// block).
struct GBRing {
  Field field;
  std::vector<std::string> vars;
  int elim_block = 0;  // 0 = plain degrevlex

  int nvars() const { return (int)vars.size(); }
  int index_of(const std::string& name) const;
};

using GBExp = std::vector<std::uint16_t>;

struct GBTermLess {
  const GBRing* ring;
  // ascending; leading term is the largest
  bool operator()(const GBExp& a, const GBExp& b) const;
};

class GBPoly {
 public:
  GBPoly() = default;
  explicit GBPoly(std::shared_ptr<const GBRing> r)
      : ring_(std::move(r)), terms_(GBTermLess{ring_.get()}) {}

  static GBPoly var(const std::shared_ptr<const GBRing>& r, int i,
                    int pow = 1);
  static GBPoly constant(const std::shared_ptr<const GBRing>& r,
                         const FieldElem& c);

  const GBRing* ring() const { return ring_.get(); }
  const std::shared_ptr<const GBRing>& ring_handle() const { return ring_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<GBExp, FieldElem, GBTermLess>& terms() const { return terms_; }

  void add_term(const GBExp& e, const FieldElem& c);
  GBPoly operator+(const GBPoly& o) const;
  GBPoly operator-(const GBPoly& o) const;
  GBPoly operator*(const GBPoly& o) const;
  GBPoly operator-() const;
  GBPoly scaled(const FieldElem& c) const;
  GBPoly& operator+=(const GBPoly& o) { return *this = *this + o; }
  GBPoly& operator-=(const GBPoly& o) { return *this = *this - o; }

  const GBExp& lead_exp() const;
  const FieldElem& lead_coeff() const;
  GBPoly monic() const;
  long total_degree() const;

  bool operator==(const GBPoly& o) const { return terms_ == o.terms_; }
  std::string str() const;

 private:
  std::shared_ptr<const GBRing> ring_;
  std::map<GBExp, FieldElem, GBTermLess> terms_{GBTermLess{nullptr}};
};

struct GBProblem {
  std::shared_ptr<GBRing> ring;
  std::vector<GBPoly> generators;
};

struct GBBudget {
  long max_pairs = 500000;
  long max_basis = 5000;
  long max_degree = 64;
};

/// Unique reduced Groebner basis for the ring's order.
std::vector<GBPoly> buchberger(const GBProblem& p, const GBBudget& budget = {});

/// Full normal form of f against the basis.
GBPoly gb_normal_form(const GBPoly& f, const std::vector<GBPoly>& basis);

/// Generators of the elimination ideal: computes a basis for the block
/// order eliminating `drop` and keeps the generators free of them.
std::vector<GBPoly> eliminate(const std::shared_ptr<GBRing>& ring,
                              const std::vector<GBPoly>& gens,
                              const std::vector<int>& drop,
                              const GBBudget& budget = {});

/// Reproduces the characteristic-2 elimination end to end: the coefficient
/// ideal of the contact-equivalence conditions between (x^2+a xy, c xy^2 +
/// d y^3) and (x^2+b xy, c xy^2 + d y^3) under a linear substitution and a
/// constant unit matrix, saturated by the invertibility conditions, then
/// eliminated down to {a, b, c, d}.
GBPoly repro_char2_elimination(const GBBudget& budget = {});

/// The expected output as a string over GF(2), for convenience.
std::string repro_char2_expected();

}  // namespace icis
