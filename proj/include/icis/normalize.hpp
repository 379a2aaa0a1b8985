#pragma once

#include <optional>
#include <string>
#include <vector>

#include "icis/poly.hpp"

namespace icis {

struct DerivativeNotUnit : Error {
  using Error::Error;
};
struct NotCompleteIntersection : Error {
  using Error::Error;
};

/// One recorded reduction move: a coordinate substitution, a unit-matrix
/// action on the components, or a certified tail absorption (the only
/// non-constructive kind; replay skips it).
struct TraceStep {
  enum class Kind { Substitution, UnitMatrix, AbsorbTail };
  Kind kind;
  std::vector<Poly> phi;                // Substitution: images of x_1..x_n
  std::vector<std::vector<Poly>> unit;  // UnitMatrix: m x m with unit det
  std::string label;
};

struct ReductionTrace {
  std::vector<TraceStep> steps;
  MapGerm result;
  /// False when a required root was unavailable (the transform is recorded
  /// only up to that point) or a tail was absorbed by the jet-absorption
  /// criterion rather than an explicit automorphism.
  bool constructive = true;
  std::string note;

  void record_subst(std::vector<Poly> phi, std::string label = {});
  void record_unit(std::vector<std::vector<Poly>> u, std::string label = {});
  void record_absorb(std::string label);
  /// Applies the constructive steps to `input` at precision `prec`.
  MapGerm replay(const MapGerm& input, int prec) const;
};

struct SplitResult {
  int corank;
  Poly residual;             // g in the corank variables, in m^3
  std::vector<FieldElem> square_coeffs;  // c_i of the rank part c_i x_i^2
  bool units_normalized;     // true when all c_i were scaled to 1
  ReductionTrace trace;
};

/// Right splitting in characteristic != 2: f ~ sum c_i x_i^2 + g(rest),
/// g in m^3.  With normalize_units the c_i are scaled to 1, which may
/// require square roots (NeedsExtension when absent).
SplitResult split_quadratic(const Poly& f, int precision,
                            bool normalize_units = true);

struct SplitChar2Result {
  int l;           // number of hyperbolic planes x1x2 + ...
  bool has_square; // residual begins with x_{2l+1}^2
  Poly residual;   // g (cubic part, or x^2 + h shape)
  ReductionTrace trace;
};

/// Right splitting in characteristic 2: f ~ x1x2 + ... + x_{2l-1}x_{2l} + g.
/// Square roots always exist in GF(2^k) (Frobenius), so NeedsExtension is
/// unreachable over the finite presentations this artifact supports.
SplitChar2Result split_quadratic_char2(const Poly& f, int precision);

/// The two-variable degenerate shape (x^2 + C(y), A(y) + x B(y)).
struct DegenerateShape {
  Field field;
  int precision = 0;
  Poly c_of_y;   // C(y), ord >= 3 or zero
  Poly a_series; // A(y)
  Poly b_series; // B(y)
  long s = kInfinity;  // ord C (kInfinity when alpha = 0)
  long t = kInfinity;  // ord A
  long q = kInfinity;  // ord B
  int alpha = 0;       // 1 iff C != 0
  bool unit_normalized = false;  // C was brought to y^s exactly
  ReductionTrace trace;          // from the input germ to the shape
  MapGerm current;               // (x^2 + C, A + x B)

  FieldElem a_coeff(long i) const;
  FieldElem b_coeff(long j) const;
};

/// Splits f1 (order 2, degenerate 2-jet) to x^2 + C(y) by contact moves and
/// Weierstrass-reduces f2; p != 2, two variables.
DegenerateShape reduce_degenerate_shape(const MapGerm& f, int precision);

struct BranchSeed {
  bool vertical = false;   // branch tangent x = 0, parametrized by y
  FieldElem lambda;        // else tangent y = lambda * x, parametrized by x
};

struct BranchSplit {
  bool rational = false;       // tangent directions live in the field
  std::vector<BranchSeed> seeds;  // two seeds when rational
};

/// Tangent directions of a nondegenerate binary quadric A x^2 + B xy + C y^2.
BranchSplit quadric_branches(const FieldElem& A, const FieldElem& B,
                             const FieldElem& C);

/// Series parametrization of the branch of f1 = 0 through the seed, to
/// parameter order N.  Returns the substitution images (x(t), y(t)) in the
/// single parameter (stored as variable 0 of a 1-variable ring... kept as
/// 2-variable polys in the parametrizing variable).
std::vector<Poly> solve_branch(const Poly& f1, const BranchSeed& seed, int N);

/// Intersection order of g along the branch (kInfinity if it vanishes to
/// order N).
long branch_order(const Poly& g, const std::vector<Poly>& param, int N);

struct FReduction {
  long n = 0, m = 0;  // n <= m
  bool witness_constructive = false;
  ReductionTrace trace;
  std::string note;
};

/// Reduction of a germ with a nondegenerate component 2-jet to (xy, x^n+y^m).
/// The pair (n, m) needs only order computations (branch intersection
/// orders, or the quotient dimension when the tangent directions are not in
/// the field); the explicit witness may require roots.
FReduction reduce_nondegenerate(const MapGerm& f, long dim_ci_quotient,
                                int precision);

/// Solves F(z(y), y) = 0 for a unit series z with z(0) = 1 by Newton
/// iteration; F is a polynomial in (z, y) with z = variable 0.
/// Requires F(1, y) in <y> and dF/dz(1, 0) a unit.
Poly newton_unit_solve(const Poly& F, int k);

/// Jet-absorption criterion: true certifies f + g ~ f, when f is
/// quasi-homogeneous of type ws and v_{d,a}(g) exceeds sup{0, top T^1
/// weight}.
bool merle_absorb(const MapGerm& f, const MapGerm& g, const WeightSystem& ws,
                  int k_cap = 64);

/// Square root in characteristic 2 via Frobenius (always exists).
FieldElem char2_sqrt(const FieldElem& a);

/// Unit-series square root (1 + m)-normalized part by binomial iteration;
/// the constant part needs a field square root (nullopt when absent).
std::optional<Poly> series_sqrt(const Poly& u, int k);

}  // namespace icis
