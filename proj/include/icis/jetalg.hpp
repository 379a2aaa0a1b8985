#pragma once

#include <map>
#include <optional>
#include <vector>

#include "icis/poly.hpp"

namespace icis {

/// One coordinate of the jet space R^m / m^(k+1) R^m: a monomial slotted
/// into a component.  Ordered by degrevlex on the monomial, then by
/// component; elimination pivots on the smallest coordinate of a vector, so
/// the quotient staircase keeps lowest degrees first.
struct Coord {
  Monomial m;
  int comp = 0;

  bool operator==(const Coord& o) const { return comp == o.comp && m == o.m; }
};

struct CoordLess {
  bool operator()(const Coord& a, const Coord& b) const {
    DrlLess less;
    if (less(a.m, b.m)) return true;
    if (less(b.m, a.m)) return false;
    return a.comp < b.comp;
  }
};

using SparseVec = std::map<Coord, FieldElem, CoordLess>;

/// Degree-truncated submodule of R^m spanned by all monomial multiples of
/// the generators up to a working precision, held in echelon form.  The
/// pivot set (initial coordinates of the span) is canonical for the
/// coordinate order, so staircase complements are deterministic.
class TruncatedSubmodule {
 public:
  TruncatedSubmodule(Field f, int m_rank, int nvars, int precision);

  /// Adds the full monomial-multiple closure of a generator.
  void add_generator_closure(const MapGerm& g);
  /// Adds a single vector (no multiples).  Returns true if the rank grew.
  bool add_vector(SparseVec v);

  bool is_pivot(const Coord& c) const { return rows_.count(c) > 0; }
  long rank() const { return (long)rows_.size(); }
  int precision() const { return prec_; }
  int rank_of_ambient() const { return m_; }

  /// Reduces v against the echelon rows; empty result means membership.
  SparseVec reduce(SparseVec v) const;

  /// Non-pivot coordinates of degree in [lo, hi].
  std::vector<Coord> complement(int lo, int hi) const;
  /// True when every coordinate of degree exactly k is a pivot, i.e.
  /// m^k R^m is contained in D + m^(k+1) R^m; the sound stabilization
  /// certificate (all higher degrees follow since D is a module).
  bool degree_saturated(int k) const;

 private:
  Field field_;
  int m_;
  int nvars_;
  int prec_;
  std::map<Coord, SparseVec, CoordLess> rows_;
};

SparseVec germ_to_sparse(const MapGerm& g, int max_deg);

struct QuotientResult {
  bool finite = false;
  long dim = -1;               // valid when finite
  int stabilized_at = -1;      // certificate degree
  std::vector<long> profile;   // dim of R^m/(D + m^(k+1)) for k = 0..
  std::vector<Coord> basis;    // staircase complement, ascending
};

struct QuotientOptions {
  int k_cap = 64;
  bool mod_maximal = false;  // quotient of m R^m instead of R^m
  int min_precision = 4;
};

/// dim_K of R^m / <generators as a module>, by jet stabilization with the
/// degree-saturation certificate; Infinite when no certificate fires by
/// k_cap.
QuotientResult quotient_dim(const std::vector<MapGerm>& gens, int m_rank,
                            const QuotientOptions& opts = {});

/// Generators of the Tjurina module denominator:
/// <f_1..f_m> R^m + <df/dx_1, ..., df/dx_n> R.
std::vector<MapGerm> tjurina_generators(const MapGerm& f);
/// Tangent-image generators: <f_1..f_m> R^m + m * <df/dx_l>.
std::vector<MapGerm> tangent_image_generators(const MapGerm& f);

struct TauResult {
  bool finite = false;
  long value = -1;
  QuotientResult detail;
};

TauResult tjurina(const MapGerm& f, int k_cap = 64);
TauResult tjurina_sec(const MapGerm& f, int k_cap = 64);

/// Monomial-vector basis of T^1,sec(f): the staircase complement, lowest
/// degree first.
std::vector<Coord> t1sec_basis(const MapGerm& f, int k_cap = 64);

/// Dimensions of the graded pieces T^1_nu(f) for quasi-homogeneous f.
std::map<long, long> t1_graded_dims(const MapGerm& f, const WeightSystem& ws,
                                    long lo, long hi, int k_cap = 64);
/// Largest nu with T^1_nu(f) != 0 (may be negative); requires tau finite.
long t1_top_weight(const MapGerm& f, const WeightSystem& ws, int k_cap = 64);

struct IcisResult {
  bool icis = false;
  std::string reason;   // set when not an ICIS
  int certificate = -1; // k with m^k inside I + I_m(Jac f)
  long dim_jacobian_quotient = -1;
  long dim_ci_quotient = -1;  // dim R/I when m = n
};

/// ICIS test per the minors criterion, with the complete-intersection and
/// minimal-generator checks for square germs.
IcisResult is_icis(const MapGerm& f, int k_cap = 64);

struct InvariantReport {
  TauResult tau;
  TauResult tau_sec;
  std::vector<int> corank_vector;
  bool icis = false;
  long determinacy = -1;  // 2 tau - ord + 2 when tau finite
  long deformation_determinacy = -1;  // 2 tau + 1
};

InvariantReport invariants(const MapGerm& f, int k_cap = 64);

/// 2 tau(f) - ord(f) + 2; throws if tau is infinite.
long determinacy_bound(const MapGerm& f, int k_cap = 64);

std::string coord_str(const Coord& c, int nvars, int m_rank);

}  // namespace icis
