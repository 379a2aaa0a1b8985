#pragma once

#include <array>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "icis/field.hpp"

namespace icis {

constexpr int kMaxVars = 8;
/// Precision sentinel: the polynomial is exact, not a truncated series.
constexpr int kExact = std::numeric_limits<int>::max() / 2;
constexpr long kInfinity = std::numeric_limits<long>::max() / 2;

struct Monomial {
  std::array<std::uint16_t, kMaxVars> e{};

  static Monomial one() { return {}; }
  static Monomial var(int i, int pow = 1) {
    Monomial m;
    m.e[i] = (std::uint16_t)pow;
    return m;
  }

  int total() const {
    int d = 0;
    for (auto x : e) d += x;
    return d;
  }
  long weighted(const std::vector<int>& a) const {
    long d = 0;
    for (size_t i = 0; i < a.size(); ++i) d += (long)a[i] * e[i];
    return d;
  }
  Monomial operator*(const Monomial& o) const {
    Monomial m;
    for (int i = 0; i < kMaxVars; ++i) m.e[i] = e[i] + o.e[i];
    return m;
  }
  bool divides(const Monomial& o) const {
    for (int i = 0; i < kMaxVars; ++i)
      if (e[i] > o.e[i]) return false;
    return true;
  }
  Monomial operator/(const Monomial& o) const {
    Monomial m;
    for (int i = 0; i < kMaxVars; ++i) m.e[i] = e[i] - o.e[i];
    return m;
  }
  bool operator==(const Monomial& o) const { return e == o.e; }
};

/// Ascending degrevlex with x1 > x2 > ... > xn: lower total degree first;
/// within a degree the term with the larger exponent on the latest
/// differing variable is smaller.
struct DrlLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    int da = a.total(), db = b.total();
    if (da != db) return da < db;
    for (int i = kMaxVars - 1; i >= 0; --i)
      if (a.e[i] != b.e[i]) return a.e[i] > b.e[i];
    return false;
  }
};

class MapGerm;

class Poly {
 public:
  Poly() = default;
  Poly(Field f, int nvars, int prec = kExact);

  static Poly zero(Field f, int nvars, int prec = kExact) {
    return Poly(f, nvars, prec);
  }
  static Poly constant(Field f, int nvars, const FieldElem& c,
                       int prec = kExact);
  static Poly variable(Field f, int nvars, int i, int prec = kExact);

  Field field() const { return field_; }
  int nvars() const { return nvars_; }
  int precision() const { return prec_; }
  bool exact() const { return prec_ >= kExact; }
  bool is_zero() const { return terms_.empty(); }

  const std::map<Monomial, FieldElem, DrlLess>& terms() const {
    return terms_;
  }
  FieldElem coeff(const Monomial& m) const;
  FieldElem constant_term() const { return coeff(Monomial::one()); }

  void set_coeff(const Monomial& m, const FieldElem& c);
  void add_term(const Monomial& m, const FieldElem& c);

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator-() const;
  Poly scaled(const FieldElem& c) const;
  Poly& operator+=(const Poly& o) { return *this = *this + o; }
  Poly& operator-=(const Poly& o) { return *this = *this - o; }

  /// Truncation to total degree <= k; the result has precision k.
  Poly jet(int k) const;
  Poly with_precision(int k) const;

  /// Formal partial derivative; in characteristic p the rule e * x^(e-1)
  /// kills terms with p | e automatically through field arithmetic.
  Poly derivative(int var) const;

  long order() const;  // min total degree of support, kInfinity if zero
  long a_order(const std::vector<int>& weights) const;

  /// Terms with weighted degree exactly d.
  Poly weighted_part(const std::vector<int>& weights, long d) const;

  /// Multiplicative inverse of a unit series, to precision k.
  Poly series_inverse(int k) const;

  /// f(phi_1, ..., phi_n) truncated to total degree k.  Each phi must have
  /// zero constant term.
  Poly substitute(const std::vector<Poly>& phi, int k) const;

  /// Exact equality; requires matching precision unless both are exact.
  bool equals(const Poly& o) const;
  bool equals_to_degree(const Poly& o, int k) const;

  std::string str() const;

 private:
  Field field_;
  int nvars_ = 0;
  int prec_ = kExact;
  std::map<Monomial, FieldElem, DrlLess> terms_;

  void check_compatible(const Poly& o) const;
};

/// Tuple (f_1, ..., f_m) of series sharing field, variable count and
/// precision; the element of R^m.
class MapGerm {
 public:
  MapGerm() = default;
  explicit MapGerm(std::vector<Poly> comps) : c_(std::move(comps)) {}

  int size() const { return (int)c_.size(); }
  int nvars() const { return c_.empty() ? 0 : c_[0].nvars(); }
  Field field() const { return c_[0].field(); }
  int precision() const;

  const Poly& operator[](int i) const { return c_[i]; }
  Poly& operator[](int i) { return c_[i]; }
  const std::vector<Poly>& components() const { return c_; }

  bool in_maximal_ideal() const;
  long order() const;  // min over components
  MapGerm jet(int k) const;
  MapGerm substitute(const std::vector<Poly>& phi, int k) const;
  bool equals_to_degree(const MapGerm& o, int k) const;

  std::string str() const;

 private:
  std::vector<Poly> c_;
};

struct WeightSystem {
  std::vector<int> degrees;  // d_1..d_m
  std::vector<int> weights;  // a_1..a_n
};

/// v_a order of a single series; Infinity iff f = 0.  A truncated series
/// with no known term is not known zero: PrecisionLoss.
long a_order(const Poly& f, const std::vector<int>& weights);
/// v_{d,a} of a tuple: min_i (v_a(f_i) - d_i); Infinity iff f = 0.
long dw_order(const MapGerm& f, const WeightSystem& ws);
/// Sound lower bound for v_{d,a} that treats truncated-empty components as
/// having order at least precision + 1.
long dw_order_lower_bound(const MapGerm& f, const WeightSystem& ws);
/// Component of f in the nu-th graded piece of the (d;a)-grading.
MapGerm qh_part(const MapGerm& f, const WeightSystem& ws, long nu);
/// True when f is quasi-homogeneous of type ws (all weight in piece 0).
bool is_quasi_homogeneous(const MapGerm& f, const WeightSystem& ws);

MapGerm jet(const MapGerm& f, int k);

std::vector<std::vector<Poly>> jacobian(const MapGerm& f);
/// All r x r minors, rows/column index sets in lexicographic order.
std::vector<Poly> minors(const std::vector<std::vector<Poly>>& m, int r);

struct HessianInfo {
  int corank;
  std::vector<std::vector<FieldElem>> matrix;
};
HessianInfo hessian_corank(const Poly& f);

struct WeierstrassResult {
  Poly a_coeffs;  // A(y)
  Poly b_coeffs;  // B(y), remainder = A + x*B
  Poly quotient;  // g = quotient*(divisor) + A + x*B up to precision
};
/// Reduction of g modulo the distinguished divisor x^2 + alpha*y^s in two
/// variables (x = var 0, y = var 1), exact to total degree k.
WeierstrassResult weierstrass_reduce(const Poly& g, int s,
                                     const FieldElem& alpha, int k);
/// Same reduction for a general divisor x^2 + C(y) with ord C >= 3.
WeierstrassResult weierstrass_reduce_general(const Poly& g, const Poly& c_of_y,
                                             int k);

/// Rank of a dense matrix over the field (exact Gaussian elimination).
int matrix_rank(std::vector<std::vector<FieldElem>> m);

}  // namespace icis
