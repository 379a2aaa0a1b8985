#pragma once

#include <optional>
#include <string>
#include <vector>

#include "icis/jetalg.hpp"
#include "icis/normalize.hpp"
#include "icis/poly.hpp"

namespace icis {

enum class TypeTag {
  A,        // A_k, parameter k
  F,        // F(m, n) = (xy, x^m + y^n), m <= n
  F22_0,    // (x^2, y^2), p = 2
  F22_1,    // (x^2, xy + y^2), p = 2
  G5_0,     // (x^2, y^3)
  G5_1,     // (x^2, xy^2 + y^3), p = 3
  G7,       // (x^2, y^4)
  H,        // H(n) = (x^2 + y^n, xy^2), n >= 3
  I0_odd,   // (x^2 + y^3, y^t), t >= 4
  I1_odd,   // (x^2 + y^3, y^t + x y^{t-1}), p | t
  I0_even,  // (x^2 + y^3, x y^q), q >= 3
  I1_even,  // (x^2 + y^3, x y^q + y^{q+2}), p | 2q + 3
  NotSimple,
  NotICIS,
};

struct SingularityType {
  TypeTag tag = TypeTag::NotICIS;
  long a = 0, b = 0;   // A: k | F: (m, n) | H: n | I: t or q
  std::string reason;  // NotSimple / NotICIS verdicts
  bool moduli = false; // NotSimple with a residual continuous parameter

  bool simple() const {
    return tag != TypeTag::NotSimple && tag != TypeTag::NotICIS;
  }
  bool operator==(const SingularityType& o) const {
    return tag == o.tag && a == o.a && b == o.b;
  }
  bool operator!=(const SingularityType& o) const { return !(*this == o); }
  std::string str() const;
  std::string tag_str() const;

  static SingularityType A_k(long k) { return {TypeTag::A, k}; }
  static SingularityType F(long m, long n) {
    return {TypeTag::F, std::min(m, n), std::max(m, n)};
  }
  static SingularityType simple_tag(TypeTag t, long a = 0) {
    return {t, a};
  }
  static SingularityType not_simple(std::string reason, bool moduli = false) {
    SingularityType t;
    t.tag = TypeTag::NotSimple;
    t.reason = std::move(reason);
    t.moduli = moduli;
    return t;
  }
  static SingularityType not_icis(std::string reason) {
    SingularityType t;
    t.tag = TypeTag::NotICIS;
    t.reason = std::move(reason);
    return t;
  }
};

enum class WitnessStatus { Full, Partial, NeedsExtension, None };

struct ClassifyReport {
  SingularityType type;
  std::uint64_t characteristic = 0;
  unsigned extension = 1;
  long tau = -1;      // -1 encodes infinite / not computed
  long tau_sec = -1;
  long determinacy = -1;
  WitnessStatus witness = WitnessStatus::None;
  ReductionTrace trace;
  std::vector<std::string> case_chain;
};

struct ClassifyOptions {
  int k_cap = 64;
  bool want_witness = true;
};

/// The full decision procedure: ICIS validation, order-1 elimination, the
/// non-simpleness screens, and the characteristic-specific reduction trees.
ClassifyReport classify_icis(const MapGerm& f, const ClassifyOptions& opts = {});

/// The dimension-count screens; nullopt means no verdict (pass).
std::optional<SingularityType> nonsimple_screen(const MapGerm& f);

/// Solves one order-1 component by the formal implicit function theorem and
/// substitutes it away, dropping a component and a variable.
MapGerm reduce_order_one(const MapGerm& f, int precision);

/// The table normal form for a type over the given field; validates the
/// characteristic conditions.
MapGerm normal_form_of(const SingularityType& t, Field F);

/// The published T^1,sec basis table for the type, with every
/// p-divisibility case split.
std::vector<Coord> expected_t1sec_basis(const SingularityType& t, Field F);

/// All valid (type, parameter) cells with parameters bounded by max_param
/// for the characteristic of F.
std::vector<SingularityType> table_types(Field F, long max_param);

}  // namespace icis
