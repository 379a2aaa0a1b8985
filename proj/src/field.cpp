#include "icis/field.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <mutex>

namespace icis {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>((u128)a * b % p); }

u64 powmod(u64 a, u64 e, u64 p) {
  u64 r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

u64 invmod(u64 a, u64 p) {
  // p prime, a != 0 mod p
  return powmod(a % p, p - 2, p);
}

// ---- polynomial helpers over GF(p), coefficient vectors low-to-high ----

using PVec = std::vector<u64>;

int pdeg(const PVec& a) {
  for (int i = (int)a.size() - 1; i >= 0; --i)
    if (a[i]) return i;
  return -1;
}

void ptrim(PVec& a) { a.resize(pdeg(a) + 1); }

PVec pmul(const PVec& a, const PVec& b, u64 p) {
  if (a.empty() || b.empty()) return {};
  PVec c(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (size_t j = 0; j < b.size(); ++j)
      c[i + j] = (c[i + j] + (u128)a[i] * b[j]) % p;
  }
  ptrim(c);
  return c;
}

// a mod m, m monic
PVec pmod(PVec a, const PVec& m, u64 p) {
  int dm = pdeg(m);
  assert(dm >= 0 && m[dm] == 1);
  int da = pdeg(a);
  while (da >= dm) {
    u64 c = a[da];
    if (c) {
      int shift = da - dm;
      for (int i = 0; i <= dm; ++i) {
        u64 sub = mulmod(c, m[i], p);
        a[i + shift] = (a[i + shift] + p - sub) % p;
      }
    }
    --da;
    while (da >= 0 && !a[da]) --da;
  }
  ptrim(a);
  return a;
}

PVec padd(const PVec& a, const PVec& b, u64 p) {
  PVec c(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < c.size(); ++i) {
    u64 x = i < a.size() ? a[i] : 0, y = i < b.size() ? b[i] : 0;
    c[i] = (x + y) % p;
  }
  ptrim(c);
  return c;
}

PVec pscale(const PVec& a, u64 s, u64 p) {
  PVec c(a.size());
  for (size_t i = 0; i < a.size(); ++i) c[i] = mulmod(a[i], s, p);
  ptrim(c);
  return c;
}

// extended euclid: returns g = gcd(a, b) monic, and u with u*a = g mod b
PVec pinv_mod(const PVec& a, const PVec& m, u64 p) {
  // invert a modulo monic m (gcd must be 1)
  PVec r0 = m, r1 = pmod(a, m, p);
  PVec s0 = {}, s1 = {1};
  while (pdeg(r1) >= 0) {
    // divide r0 by r1
    PVec q(std::max<int>(pdeg(r0) - pdeg(r1) + 1, 0), 0);
    PVec rem = r0;
    int d1 = pdeg(r1);
    u64 lead_inv = invmod(r1[d1], p);
    for (int d = pdeg(rem); d >= d1; --d) {
      if (!rem[d]) continue;
      u64 c = mulmod(rem[d], lead_inv, p);
      q[d - d1] = c;
      for (int i = 0; i <= d1; ++i)
        rem[i + d - d1] = (rem[i + d - d1] + p - mulmod(c, r1[i], p)) % p;
    }
    ptrim(rem);
    ptrim(q);
    PVec s2 = s0;
    PVec qs = pmul(q, s1, p);
    // s2 = s0 - q*s1
    PVec neg = pscale(qs, p - 1, p);
    s2 = padd(s0, neg, p);
    r0 = r1;
    r1 = rem;
    s0 = s1;
    s1 = s2;
  }
  int d0 = pdeg(r0);
  if (d0 != 0) throw Error("element not invertible in GF(p^k)");
  u64 gi = invmod(r0[0], p);
  return pmod(pscale(s0, gi, p), m, p);
}

bool poly_divides(const PVec& d, const PVec& a, u64 p) {
  return pdeg(pmod(a, d, p)) < 0;
}

// Irreducibility by trial division against all monic polynomials of degree
// <= deg/2.  Adequate for the small k * log p this artifact uses.
bool irreducible(const PVec& m, u64 p) {
  int d = pdeg(m);
  if (d <= 0) return false;
  if (d == 1) return true;
  for (int dd = 1; 2 * dd <= d; ++dd) {
    // enumerate monic divisor candidates of degree dd
    u64 count = 1;
    for (int i = 0; i < dd; ++i) count *= p;  // p^dd small by construction
    for (u64 idx = 0; idx < count; ++idx) {
      PVec g(dd + 1, 0);
      g[dd] = 1;
      u64 t = idx;
      for (int i = 0; i < dd; ++i) {
        g[i] = t % p;
        t /= p;
      }
      if (poly_divides(g, m, p)) return false;
    }
  }
  return true;
}

PVec smallest_irreducible(u64 p, unsigned k) {
  // index counts up through the non-leading coefficients base p
  u64 count = 1;
  for (unsigned i = 0; i < k; ++i) {
    if (count > (u64)1 << 40) throw Error("field too large for modulus search");
    count *= p;
  }
  for (u64 idx = 0; idx < count; ++idx) {
    PVec m(k + 1, 0);
    m[k] = 1;
    u64 t = idx;
    for (unsigned i = 0; i < k; ++i) {
      m[i] = t % p;
      t /= p;
    }
    if (irreducible(m, p)) return m;
  }
  throw Error("no irreducible modulus found");  // unreachable
}

std::map<std::pair<u64, unsigned>, std::unique_ptr<FieldSpec>>& intern_table() {
  static std::map<std::pair<u64, unsigned>, std::unique_ptr<FieldSpec>> t;
  return t;
}
std::mutex& intern_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 d : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull}) {
    if (n % d == 0) return n == d;
  }
  // deterministic Miller-Rabin for 64-bit
  u64 d = n - 1;
  int s = 0;
  while (!(d & 1)) d >>= 1, ++s;
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                29ull, 31ull, 37ull}) {
    if (a % n == 0) continue;
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool comp = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        comp = false;
        break;
      }
    }
    if (comp) return false;
  }
  return true;
}

u64 FieldSpec::order() const {
  u64 q = 1;
  for (unsigned i = 0; i < k; ++i) q *= p;
  return q;
}

Field Field::rationals() { return make(0, 1); }
Field Field::gf(u64 p, unsigned k) { return make(p, k); }

Field Field::make(u64 p, unsigned k) {
  if (k < 1) throw InvalidParameters("extension degree must be positive");
  if (p == 0) k = 1;
  if (p > 0 && !is_prime_u64(p))
    throw NonPrimeCharacteristic("characteristic " + std::to_string(p) +
                                 " is composite");
  std::lock_guard<std::mutex> lock(intern_mutex());
  auto& tab = intern_table();
  auto it = tab.find({p, k});
  if (it == tab.end()) {
    auto spec = std::make_unique<FieldSpec>();
    spec->p = p;
    spec->k = k;
    if (p > 0 && k > 1) spec->modulus = smallest_irreducible(p, k);
    it = tab.emplace(std::make_pair(p, k), std::move(spec)).first;
  }
  return Field(it->second.get());
}

FieldElem Field::zero() const { return from_int(0); }
FieldElem Field::one() const { return from_int(1); }

FieldElem Field::from_int(long long v) const {
  FieldElem e;
  e.f_ = spec_;
  if (spec_->p == 0) {
    e.q_.emplace((long)v);
  } else {
    long long m = v % (long long)spec_->p;
    if (m < 0) m += (long long)spec_->p;
    if (spec_->k == 1)
      e.r0_ = (u64)m;
    else {
      e.rk_.assign(spec_->k, 0);
      e.rk_[0] = (u64)m;
    }
  }
  return e;
}

FieldElem Field::from_mpq(const mpq_class& v) const {
  FieldElem e;
  e.f_ = spec_;
  if (spec_->p == 0) {
    e.q_.emplace(v);
    e.q_->canonicalize();
  } else {
    mpz_class num = v.get_num(), den = v.get_den();
    mpz_class pz((unsigned long)spec_->p);
    mpz_class nm = num % pz, dm = den % pz;
    if (nm < 0) nm += pz;
    if (dm < 0) dm += pz;
    u64 n = nm.get_ui(), d = dm.get_ui();
    if (d == 0) throw Error("denominator divisible by characteristic");
    u64 val = mulmod(n, invmod(d, spec_->p), spec_->p);
    if (spec_->k == 1)
      e.r0_ = val;
    else {
      e.rk_.assign(spec_->k, 0);
      e.rk_[0] = val;
    }
  }
  return e;
}

FieldElem Field::from_index(u64 i) const {
  FieldElem e;
  e.f_ = spec_;
  if (spec_->p == 0) throw Error("from_index requires a finite field");
  if (spec_->k == 1) {
    e.r0_ = i % spec_->p;
    return e;
  }
  e.rk_.assign(spec_->k, 0);
  for (unsigned j = 0; j < spec_->k; ++j) {
    e.rk_[j] = i % spec_->p;
    i /= spec_->p;
  }
  return e;
}

std::string Field::describe() const {
  if (is_rational()) return "QQ";
  std::string s = "GF(" + std::to_string(spec_->p);
  if (spec_->k > 1) s += "^" + std::to_string(spec_->k);
  return s + ")";
}

Field FieldElem::field() const {
  if (!f_) throw Error("uninitialized field element");
  return Field::make(f_->p, f_->k);
}

bool FieldElem::is_zero() const {
  if (f_->p == 0) return *q_ == 0;
  if (f_->k == 1) return r0_ == 0;
  for (u64 c : rk_)
    if (c) return false;
  return true;
}

bool FieldElem::is_one() const {
  if (f_->p == 0) return *q_ == 1;
  if (f_->k == 1) return r0_ == 1;
  if (rk_[0] != 1) return false;
  for (size_t i = 1; i < rk_.size(); ++i)
    if (rk_[i]) return false;
  return true;
}

FieldElem FieldElem::operator+(const FieldElem& o) const {
  assert(f_ == o.f_);
  FieldElem e;
  e.f_ = f_;
  if (f_->p == 0) {
    e.q_.emplace(*q_ + *o.q_);
  } else if (f_->k == 1) {
    e.r0_ = (r0_ + o.r0_) % f_->p;
  } else {
    e.rk_.resize(f_->k);
    for (unsigned i = 0; i < f_->k; ++i) e.rk_[i] = (rk_[i] + o.rk_[i]) % f_->p;
  }
  return e;
}

FieldElem FieldElem::operator-(const FieldElem& o) const {
  assert(f_ == o.f_);
  FieldElem e;
  e.f_ = f_;
  if (f_->p == 0) {
    e.q_.emplace(*q_ - *o.q_);
  } else if (f_->k == 1) {
    e.r0_ = (r0_ + f_->p - o.r0_) % f_->p;
  } else {
    e.rk_.resize(f_->k);
    for (unsigned i = 0; i < f_->k; ++i)
      e.rk_[i] = (rk_[i] + f_->p - o.rk_[i]) % f_->p;
  }
  return e;
}

FieldElem FieldElem::operator-() const {
  FieldElem e;
  e.f_ = f_;
  if (f_->p == 0) {
    e.q_.emplace(-*q_);
  } else if (f_->k == 1) {
    e.r0_ = (f_->p - r0_) % f_->p;
  } else {
    e.rk_.resize(f_->k);
    for (unsigned i = 0; i < f_->k; ++i) e.rk_[i] = (f_->p - rk_[i]) % f_->p;
  }
  return e;
}

FieldElem FieldElem::operator*(const FieldElem& o) const {
  assert(f_ == o.f_);
  FieldElem e;
  e.f_ = f_;
  if (f_->p == 0) {
    e.q_.emplace(*q_ * *o.q_);
  } else if (f_->k == 1) {
    e.r0_ = mulmod(r0_, o.r0_, f_->p);
  } else {
    PVec prod = pmul(rk_, o.rk_, f_->p);
    prod = pmod(prod, f_->modulus, f_->p);
    prod.resize(f_->k, 0);
    e.rk_ = std::move(prod);
  }
  return e;
}

FieldElem FieldElem::inv() const {
  if (is_zero()) throw Error("division by zero");
  FieldElem e;
  e.f_ = f_;
  if (f_->p == 0) {
    e.q_.emplace(1 / *q_);
  } else if (f_->k == 1) {
    e.r0_ = invmod(r0_, f_->p);
  } else {
    PVec iv = pinv_mod(rk_, f_->modulus, f_->p);
    iv.resize(f_->k, 0);
    e.rk_ = std::move(iv);
  }
  return e;
}

FieldElem FieldElem::operator/(const FieldElem& o) const {
  return *this * o.inv();
}

FieldElem FieldElem::pow(u64 e) const {
  FieldElem r = field().one();
  FieldElem b = *this;
  while (e) {
    if (e & 1) r = r * b;
    b = b * b;
    e >>= 1;
  }
  return r;
}

bool FieldElem::operator==(const FieldElem& o) const {
  assert(f_ == o.f_);
  if (f_->p == 0) return *q_ == *o.q_;
  if (f_->k == 1) return r0_ == o.r0_;
  return rk_ == o.rk_;
}

bool FieldElem::operator<(const FieldElem& o) const {
  assert(f_ == o.f_);
  if (f_->p == 0) return *q_ < *o.q_;
  return index() < o.index();
}

u64 FieldElem::index() const {
  if (f_->p == 0) throw Error("index requires a finite field");
  if (f_->k == 1) return r0_;
  u64 idx = 0;
  for (int i = (int)rk_.size() - 1; i >= 0; --i) idx = idx * f_->p + rk_[i];
  return idx;
}

std::string FieldElem::str() const {
  if (f_->p == 0) return q_->get_str();
  if (f_->k == 1) return std::to_string(r0_);
  std::string s;
  bool first = true;
  for (unsigned i = 0; i < f_->k; ++i) {
    if (!rk_[i]) continue;
    if (!first) s += "+";
    first = false;
    if (i == 0 || rk_[i] != 1) s += std::to_string(rk_[i]);
    if (i > 0) {
      if (rk_[i] != 1) s += "*";
      s += "g";
      if (i > 1) s += "^" + std::to_string(i);
    }
  }
  return first ? "0" : s;
}

std::optional<FieldElem> nth_root(const FieldElem& a, unsigned r) {
  if (r == 0) throw InvalidParameters("root index must be positive");
  if (r == 1 || a.is_zero() || a.is_one()) return a;
  const FieldSpec* f = a.spec();
  if (f->p == 0) {
    // exact rational root: numerator and denominator must both be perfect
    // r-th powers (sign handled for odd r)
    mpq_class q = a.rational();
    bool neg = q < 0;
    if (neg && r % 2 == 0) return std::nullopt;
    mpq_class aq = neg ? mpq_class(-q) : q;
    mpz_class num = aq.get_num(), den = aq.get_den();
    mpz_class rn, rd;
    int exact_n = mpz_root(rn.get_mpz_t(), num.get_mpz_t(), r);
    int exact_d = mpz_root(rd.get_mpz_t(), den.get_mpz_t(), r);
    if (!exact_n || !exact_d) return std::nullopt;
    mpq_class root(rn, rd);
    root.canonicalize();
    if (neg) root = -root;
    return a.field().from_mpq(root);
  }
  u64 q = f->order();
  if (q > (1u << 20))
    throw Error("nth_root: field too large for exhaustive search");
  Field F = a.field();
  for (u64 i = 0; i < q; ++i) {
    FieldElem b = F.from_index(i);
    if (b.pow(r) == a) return b;
  }
  return std::nullopt;
}

}  // namespace icis
