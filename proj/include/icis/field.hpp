#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace icis {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonPrimeCharacteristic : Error {
  using Error::Error;
};
struct NeedsExtension : Error {
  using Error::Error;
};
struct PrecisionLoss : Error {
  using Error::Error;
};
struct CapExceeded : Error {
  std::vector<long> profile;
  explicit CapExceeded(std::string msg, std::vector<long> prof = {})
      : Error(std::move(msg)), profile(std::move(prof)) {}
};
struct BudgetExceeded : Error {
  using Error::Error;
};
struct NotQuasiHomogeneous : Error {
  using Error::Error;
};
struct InvalidParameters : Error {
  using Error::Error;
};

/// Immutable presentation of a coefficient field: the rationals (p = 0) or
/// GF(p^k) given by the lexicographically smallest monic irreducible modulus
/// of degree k over GF(p).
struct FieldSpec {
  std::uint64_t p = 0;  // 0 means the rationals
  unsigned k = 1;
  // Monic modulus, coefficients modulus[i] of x^i, size k+1.  Only
  // meaningful when p > 0 and k > 1.
  std::vector<std::uint64_t> modulus;

  bool is_rational() const { return p == 0; }
  std::uint64_t order() const;  // p^k, finite fields only
};

class FieldElem;

/// Shared handle to a FieldSpec.  Specs are interned by (p, k) so that raw
/// FieldSpec pointers held by elements stay valid for the program lifetime.
class Field {
 public:
  Field() = default;

  static Field rationals();
  static Field gf(std::uint64_t p, unsigned k = 1);
  /// make_field(0, 1) is the rationals; make_field(p, k) is GF(p^k).
  static Field make(std::uint64_t p, unsigned k = 1);

  const FieldSpec& spec() const { return *spec_; }
  const FieldSpec* raw() const { return spec_; }
  std::uint64_t characteristic() const { return spec_->p; }
  unsigned extension_degree() const { return spec_->k; }
  bool is_rational() const { return spec_->is_rational(); }

  FieldElem zero() const;
  FieldElem one() const;
  FieldElem from_int(long long v) const;
  FieldElem from_mpq(const mpq_class& v) const;
  /// Element with canonical index i (finite fields: digits of i base p).
  FieldElem from_index(std::uint64_t i) const;

  bool operator==(const Field& o) const { return spec_ == o.spec_; }
  bool operator!=(const Field& o) const { return spec_ != o.spec_; }

  std::string describe() const;

 private:
  explicit Field(const FieldSpec* s) : spec_(s) {}
  const FieldSpec* spec_ = nullptr;
};

/// Exact field element.  Storage depends on the field kind: mpq for the
/// rationals, one machine word for prime fields, a residue-coefficient
/// vector for proper extensions.
class FieldElem {
 public:
  FieldElem() = default;

  const FieldSpec* spec() const { return f_; }
  Field field() const;

  bool is_zero() const;
  bool is_one() const;

  FieldElem operator+(const FieldElem& o) const;
  FieldElem operator-(const FieldElem& o) const;
  FieldElem operator*(const FieldElem& o) const;
  FieldElem operator/(const FieldElem& o) const;
  FieldElem operator-() const;
  FieldElem inv() const;
  FieldElem pow(std::uint64_t e) const;

  FieldElem& operator+=(const FieldElem& o) { return *this = *this + o; }
  FieldElem& operator-=(const FieldElem& o) { return *this = *this - o; }
  FieldElem& operator*=(const FieldElem& o) { return *this = *this * o; }

  bool operator==(const FieldElem& o) const;
  bool operator!=(const FieldElem& o) const { return !(*this == o); }
  /// Canonical total order (used for deterministic choices).
  bool operator<(const FieldElem& o) const;

  /// Canonical index in the field enumeration (finite fields only).
  std::uint64_t index() const;
  const mpq_class& rational() const { return *q_; }

  std::string str() const;

 private:
  friend class Field;
  friend std::optional<FieldElem> nth_root(const FieldElem&, unsigned);

  const FieldSpec* f_ = nullptr;
  std::uint64_t r0_ = 0;           // p > 0, k = 1: the residue
  std::vector<std::uint64_t> rk_;  // p > 0, k > 1: residue coefficients
  std::optional<mpq_class> q_;     // p = 0 only (no allocation otherwise)
};

/// Smallest r-th root of a in the canonical element order, if one exists in
/// the presented field.  Callers that need a missing root must extend the
/// field or report the gap.
std::optional<FieldElem> nth_root(const FieldElem& a, unsigned r);

bool is_prime_u64(std::uint64_t n);

}  // namespace icis
