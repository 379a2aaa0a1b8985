#include "icis/poly.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace icis {

Poly::Poly(Field f, int nvars, int prec)
    : field_(f), nvars_(nvars), prec_(prec) {
  if (nvars < 1 || nvars > kMaxVars)
    throw InvalidParameters("variable count out of range");
}

Poly Poly::constant(Field f, int nvars, const FieldElem& c, int prec) {
  Poly p(f, nvars, prec);
  p.add_term(Monomial::one(), c);
  return p;
}

Poly Poly::variable(Field f, int nvars, int i, int prec) {
  Poly p(f, nvars, prec);
  p.add_term(Monomial::var(i), f.one());
  return p;
}

FieldElem Poly::coeff(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? field_.zero() : it->second;
}

void Poly::set_coeff(const Monomial& m, const FieldElem& c) {
  if (m.total() > prec_) return;
  if (c.is_zero())
    terms_.erase(m);
  else
    terms_[m] = c;
}

void Poly::add_term(const Monomial& m, const FieldElem& c) {
  if (c.is_zero() || m.total() > prec_) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
  } else {
    it->second = it->second + c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void Poly::check_compatible(const Poly& o) const {
  if (field_ != o.field_ || nvars_ != o.nvars_)
    throw Error("polynomials over different rings");
}

namespace {

// merge two canonically ordered term streams
template <typename Neg>
void merge_terms(std::map<Monomial, FieldElem, DrlLess>& out,
                 const std::map<Monomial, FieldElem, DrlLess>& a,
                 const std::map<Monomial, FieldElem, DrlLess>& b, int prec,
                 Neg negate_b) {
  DrlLess less;
  auto ia = a.begin(), ib = b.begin();
  auto hint = out.end();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && less(ia->first, ib->first))) {
      if (ia->first.total() <= prec)
        hint = out.emplace_hint(hint, ia->first, ia->second);
      ++ia;
    } else if (ia == a.end() || less(ib->first, ia->first)) {
      if (ib->first.total() <= prec)
        hint = out.emplace_hint(hint, ib->first, negate_b(ib->second));
      ++ib;
    } else {
      FieldElem c = ia->second + negate_b(ib->second);
      if (!c.is_zero() && ia->first.total() <= prec)
        hint = out.emplace_hint(hint, ia->first, std::move(c));
      ++ia;
      ++ib;
    }
  }
}

}  // namespace

Poly Poly::operator+(const Poly& o) const {
  check_compatible(o);
  Poly r(field_, nvars_, std::min(prec_, o.prec_));
  merge_terms(r.terms_, terms_, o.terms_, r.prec_,
              [](const FieldElem& c) { return c; });
  return r;
}

Poly Poly::operator-(const Poly& o) const {
  check_compatible(o);
  Poly r(field_, nvars_, std::min(prec_, o.prec_));
  merge_terms(r.terms_, terms_, o.terms_, r.prec_,
              [](const FieldElem& c) { return -c; });
  return r;
}

Poly Poly::operator-() const {
  Poly r(field_, nvars_, prec_);
  for (auto& [m, c] : terms_) r.terms_.emplace(m, -c);
  return r;
}

Poly Poly::scaled(const FieldElem& c) const {
  Poly r(field_, nvars_, prec_);
  if (c.is_zero()) return r;
  for (auto& [m, co] : terms_) r.terms_.emplace(m, co * c);
  return r;
}

Poly Poly::operator*(const Poly& o) const {
  check_compatible(o);
  // known-part orders bound where truncation noise can first appear
  long of = order(), og = o.order();
  long pf = prec_, pg = o.prec_;
  int prec;
  if (exact() && o.exact()) {
    prec = kExact;
  } else {
    long a = std::min<long>(pf + std::min<long>(og, pg + 1),
                            pg + std::min<long>(of, pf + 1));
    prec = (int)std::min<long>(a, kExact);
  }
  Poly r(field_, nvars_, prec);
  for (auto& [ma, ca] : terms_) {
    int da = ma.total();
    for (auto& [mb, cb] : o.terms_) {
      if (da + mb.total() > prec) continue;
      r.add_term(ma * mb, ca * cb);
    }
  }
  return r;
}

Poly Poly::jet(int k) const {
  Poly r(field_, nvars_, k);
  for (auto& [m, c] : terms_) {
    if (m.total() <= k) r.terms_.emplace(m, c);
  }
  return r;
}

Poly Poly::with_precision(int k) const {
  if (k > prec_ && !exact())
    throw PrecisionLoss("cannot raise precision of a truncated series");
  return jet(std::min(k, kExact));
}

Poly Poly::derivative(int var) const {
  Poly r(field_, nvars_, exact() ? kExact : prec_ - 1);
  for (auto& [m, c] : terms_) {
    if (m.e[var] == 0) continue;
    FieldElem e = field_.from_int(m.e[var]);
    Monomial dm = m;
    dm.e[var] -= 1;
    r.add_term(dm, c * e);
  }
  return r;
}

long Poly::order() const {
  if (terms_.empty()) return kInfinity;
  return terms_.begin()->first.total();
}

long Poly::a_order(const std::vector<int>& weights) const {
  if (terms_.empty()) return kInfinity;
  long best = kInfinity;
  for (auto& [m, c] : terms_) best = std::min(best, m.weighted(weights));
  return best;
}

Poly Poly::weighted_part(const std::vector<int>& weights, long d) const {
  Poly r(field_, nvars_, prec_);
  for (auto& [m, c] : terms_)
    if (m.weighted(weights) == d) r.terms_.emplace(m, c);
  return r;
}

Poly Poly::series_inverse(int k) const {
  FieldElem c0 = constant_term();
  if (c0.is_zero()) throw Error("series not a unit");
  if (!exact() && prec_ < k) throw PrecisionLoss("series_inverse");
  // Newton iteration v <- v(2 - f v), doubling correct degrees
  Poly v = Poly::constant(field_, nvars_, c0.inv(), k);
  Poly two = Poly::constant(field_, nvars_, field_.from_int(2), k);
  int correct = 0;
  Poly f = jet(k);
  f = f.with_precision(k);
  while (correct < k) {
    correct = 2 * correct + 1;
    int kk = std::min(correct, k);
    Poly fv = (f.jet(kk) * v.jet(kk)).jet(kk);
    v = (v.jet(kk) * (two.jet(kk) - fv)).jet(kk);
  }
  return v.with_precision(k);
}

Poly Poly::substitute(const std::vector<Poly>& phi, int k) const {
  if ((int)phi.size() != nvars_)
    throw InvalidParameters("substitution arity mismatch");
  int out_vars = phi.empty() ? nvars_ : phi[0].nvars();
  for (auto& p : phi) {
    if (!p.constant_term().is_zero())
      throw InvalidParameters("substitution image must have zero constant term");
  }
  // variables mapped to themselves are handled by an exponent shift
  std::vector<bool> ident(nvars_, false);
  if (out_vars == nvars_) {
    for (int i = 0; i < nvars_; ++i) {
      const Poly& p = phi[i];
      ident[i] = p.terms().size() == 1 &&
                 p.terms().begin()->first == Monomial::var(i) &&
                 p.terms().begin()->second.is_one();
    }
  }
  std::vector<std::vector<Poly>> pow(nvars_);
  for (int i = 0; i < nvars_; ++i)
    pow[i].push_back(Poly::constant(field_, out_vars, field_.one(), k));
  Poly r(field_, out_vars, k);
  for (auto& [m, c] : terms_) {
    if (m.total() > k) continue;  // images have order >= 1
    Monomial shift;
    int shift_deg = 0;
    for (int i = 0; i < nvars_; ++i) {
      if (m.e[i] && ident[i]) {
        shift.e[i] = m.e[i];
        shift_deg += m.e[i];
      }
    }
    int cap = k - shift_deg;
    if (cap < 0) continue;
    Poly term = Poly::constant(field_, out_vars, c, cap);
    for (int i = 0; i < nvars_; ++i) {
      int e = m.e[i];
      if (!e || ident[i]) continue;
      while ((int)pow[i].size() <= e)
        pow[i].push_back((pow[i].back() * phi[i]).jet(k));
      term = (term * pow[i][e]).jet(cap);
    }
    if (shift_deg > 0) {
      Poly shifted(field_, out_vars, k);
      for (auto& [mm, cc] : term.terms()) {
        Monomial nm = mm * shift;
        if (nm.total() <= k) shifted.terms_.emplace(nm, cc);
      }
      r += shifted;
    } else {
      r += term;
    }
  }
  return r.jet(k);
}

bool Poly::equals(const Poly& o) const {
  if (prec_ != o.prec_)
    throw PrecisionLoss("comparing series of different precision");
  return terms_ == o.terms_;
}

bool Poly::equals_to_degree(const Poly& o, int k) const {
  if (std::min(prec_, o.prec_) < k)
    throw PrecisionLoss("comparison beyond known precision");
  return jet(k).terms_ == o.jet(k).terms_;
}

std::string Poly::str() const {
  if (terms_.empty()) return "0";
  static const char* names[] = {"x", "y", "z", "w", "x5", "x6", "x7", "x8"};
  std::ostringstream out;
  bool first = true;
  // print leading (highest) terms first
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const Monomial& m = it->first;
    const FieldElem& c = it->second;
    std::string cs = c.str();
    bool neg = !cs.empty() && cs[0] == '-';
    if (first) {
      if (neg) out << "-";
    } else {
      out << (neg ? " - " : " + ");
    }
    if (neg) cs = cs.substr(1);
    bool unit_coeff = (cs == "1") && m.total() > 0;
    bool printed = false;
    if (!unit_coeff) {
      out << cs;
      printed = true;
    }
    for (int i = 0; i < nvars_; ++i) {
      if (!m.e[i]) continue;
      if (printed) out << "*";
      out << names[i];
      if (m.e[i] > 1) out << "^" << (int)m.e[i];
      printed = true;
    }
    first = false;
  }
  return out.str();
}

int MapGerm::precision() const {
  int p = kExact;
  for (auto& f : c_) p = std::min(p, f.precision());
  return p;
}

bool MapGerm::in_maximal_ideal() const {
  for (auto& f : c_)
    if (!f.constant_term().is_zero()) return false;
  return true;
}

long MapGerm::order() const {
  long o = kInfinity;
  for (auto& f : c_) o = std::min(o, f.order());
  return o;
}

MapGerm MapGerm::jet(int k) const {
  std::vector<Poly> out;
  out.reserve(c_.size());
  for (auto& f : c_) out.push_back(f.jet(k));
  return MapGerm(std::move(out));
}

MapGerm MapGerm::substitute(const std::vector<Poly>& phi, int k) const {
  std::vector<Poly> out;
  out.reserve(c_.size());
  for (auto& f : c_) out.push_back(f.substitute(phi, k));
  return MapGerm(std::move(out));
}

bool MapGerm::equals_to_degree(const MapGerm& o, int k) const {
  if (size() != o.size()) return false;
  for (int i = 0; i < size(); ++i)
    if (!c_[i].equals_to_degree(o.c_[i], k)) return false;
  return true;
}

std::string MapGerm::str() const {
  std::string s = "(";
  for (int i = 0; i < size(); ++i) {
    if (i) s += ", ";
    s += c_[i].str();
  }
  return s + ")";
}

long a_order(const Poly& f, const std::vector<int>& weights) {
  if (f.is_zero() && !f.exact())
    throw PrecisionLoss("series with no known term is not known to be zero");
  return f.a_order(weights);
}

long dw_order(const MapGerm& f, const WeightSystem& ws) {
  long v = kInfinity;
  for (int i = 0; i < f.size(); ++i) {
    if (f[i].is_zero() && !f[i].exact())
      throw PrecisionLoss("series with no known term is not known to be zero");
    long o = f[i].a_order(ws.weights);
    if (o < kInfinity) v = std::min(v, o - ws.degrees[i]);
  }
  return v;
}

long dw_order_lower_bound(const MapGerm& f, const WeightSystem& ws) {
  // weights are >= 1, so unknown terms beyond the precision have weighted
  // degree at least precision + 1
  long v = kInfinity;
  for (int i = 0; i < f.size(); ++i) {
    long o;
    if (f[i].is_zero())
      o = f[i].exact() ? kInfinity : f[i].precision() + 1;
    else
      o = f[i].a_order(ws.weights);
    if (o < kInfinity) v = std::min(v, o - ws.degrees[i]);
  }
  return v;
}

MapGerm qh_part(const MapGerm& f, const WeightSystem& ws, long nu) {
  std::vector<Poly> out;
  for (int i = 0; i < f.size(); ++i)
    out.push_back(f[i].weighted_part(ws.weights, ws.degrees[i] + nu));
  return MapGerm(std::move(out));
}

bool is_quasi_homogeneous(const MapGerm& f, const WeightSystem& ws) {
  for (int i = 0; i < f.size(); ++i) {
    for (auto& [m, c] : f[i].terms())
      if (m.weighted(ws.weights) != ws.degrees[i]) return false;
  }
  return true;
}

MapGerm jet(const MapGerm& f, int k) { return f.jet(k); }

std::vector<std::vector<Poly>> jacobian(const MapGerm& f) {
  std::vector<std::vector<Poly>> j(f.size());
  for (int i = 0; i < f.size(); ++i)
    for (int v = 0; v < f.nvars(); ++v) j[i].push_back(f[i].derivative(v));
  return j;
}

namespace {

Poly det_rec(const std::vector<std::vector<Poly>>& m,
             const std::vector<int>& rows, const std::vector<int>& cols) {
  if (rows.size() == 1) return m[rows[0]][cols[0]];
  const Poly& sample = m[rows[0]][cols[0]];
  Poly acc = Poly::zero(sample.field(), sample.nvars(), sample.precision());
  std::vector<int> sub_rows(rows.begin() + 1, rows.end());
  for (size_t j = 0; j < cols.size(); ++j) {
    std::vector<int> sub_cols;
    for (size_t t = 0; t < cols.size(); ++t)
      if (t != j) sub_cols.push_back(cols[t]);
    Poly minor = det_rec(m, sub_rows, sub_cols);
    Poly contrib = m[rows[0]][cols[j]] * minor;
    if (j % 2 == 0)
      acc += contrib;
    else
      acc -= contrib;
  }
  return acc;
}

void index_sets(int n, int r, std::vector<std::vector<int>>& out) {
  std::vector<int> cur(r);
  for (int i = 0; i < r; ++i) cur[i] = i;
  while (true) {
    out.push_back(cur);
    int i = r - 1;
    while (i >= 0 && cur[i] == n - r + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < r; ++j) cur[j] = cur[j - 1] + 1;
  }
}

}  // namespace

std::vector<Poly> minors(const std::vector<std::vector<Poly>>& m, int r) {
  int rows = (int)m.size();
  int cols = rows ? (int)m[0].size() : 0;
  if (r < 1 || r > std::min(rows, cols))
    throw InvalidParameters("minor size out of range");
  std::vector<std::vector<int>> rsets, csets;
  index_sets(rows, r, rsets);
  index_sets(cols, r, csets);
  std::vector<Poly> out;
  for (auto& rs : rsets)
    for (auto& cs : csets) out.push_back(det_rec(m, rs, cs));
  return out;
}

int matrix_rank(std::vector<std::vector<FieldElem>> m) {
  if (m.empty()) return 0;
  int rows = (int)m.size(), cols = (int)m[0].size();
  int rank = 0;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int pivot = -1;
    for (int r = rank; r < rows; ++r)
      if (!m[r][c].is_zero()) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(m[rank], m[pivot]);
    FieldElem inv = m[rank][c].inv();
    for (int cc = c; cc < cols; ++cc) m[rank][cc] = m[rank][cc] * inv;
    for (int r = 0; r < rows; ++r) {
      if (r == rank || m[r][c].is_zero()) continue;
      FieldElem f = m[r][c];
      for (int cc = c; cc < cols; ++cc)
        m[r][cc] = m[r][cc] - f * m[rank][cc];
    }
    ++rank;
  }
  return rank;
}

HessianInfo hessian_corank(const Poly& f) {
  int n = f.nvars();
  std::vector<std::vector<FieldElem>> h(
      n, std::vector<FieldElem>(n, f.field().zero()));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      h[i][j] = f.derivative(i).derivative(j).constant_term();
  int rank = matrix_rank(h);
  return HessianInfo{n - rank, std::move(h)};
}

WeierstrassResult weierstrass_reduce_general(const Poly& g, const Poly& c_of_y,
                                             int k) {
  if (g.nvars() != 2) throw InvalidParameters("weierstrass_reduce needs n = 2");
  Field F = g.field();
  Poly rem = g.jet(k);
  Poly quot(F, 2, k);
  // peel x-degree >= 2 terms, highest first; each step trades x^2 for -C(y)
  while (true) {
    Monomial top;
    bool found = false;
    int best_xdeg = 1;
    for (auto& [m, c] : rem.terms()) {
      if (m.e[0] >= 2 && m.e[0] > best_xdeg) {
        best_xdeg = m.e[0];
        top = m;
        found = true;
      }
    }
    if (!found) break;
    // process all terms with maximal x-degree in one sweep
    std::vector<std::pair<Monomial, FieldElem>> batch;
    for (auto& [m, c] : rem.terms())
      if (m.e[0] == best_xdeg) batch.emplace_back(m, c);
    for (auto& [m, c] : batch) {
      Monomial q = m;
      q.e[0] -= 2;
      quot.add_term(q, c);
      // rem -= c * x^(e0-2) y^e1 * (x^2 + C(y))
      rem.add_term(m, -c);
      for (auto& [cm, cc] : c_of_y.terms()) {
        Monomial nm = q * cm;
        if (nm.total() <= k) rem.add_term(nm, -(c * cc));
      }
    }
  }
  WeierstrassResult out;
  out.quotient = quot;
  out.a_coeffs = Poly(F, 2, k);
  out.b_coeffs = Poly(F, 2, k);
  for (auto& [m, c] : rem.terms()) {
    if (m.e[0] == 0) {
      out.a_coeffs.add_term(m, c);
    } else {
      assert(m.e[0] == 1);
      Monomial ym = m;
      ym.e[0] = 0;
      out.b_coeffs.add_term(ym, c);
    }
  }
  return out;
}

WeierstrassResult weierstrass_reduce(const Poly& g, int s,
                                     const FieldElem& alpha, int k) {
  Field F = g.field();
  Poly c(F, 2, kExact);
  if (!alpha.is_zero()) c.add_term(Monomial::var(1, s), alpha);
  return weierstrass_reduce_general(g, c, k);
}

}  // namespace icis
