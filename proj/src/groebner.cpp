#include "icis/groebner.hpp"

#include <algorithm>
#include <cassert>
#include <queue>
#include <sstream>

namespace icis {

int GBRing::index_of(const std::string& name) const {
  for (int i = 0; i < (int)vars.size(); ++i)
    if (vars[i] == name) return i;
  throw InvalidParameters("unknown variable " + name);
}

namespace {

long block_degree(const GBExp& e, int lo, int hi) {
  long d = 0;
  for (int i = lo; i < hi; ++i) d += e[i];
  return d;
}

// degrevlex within [lo, hi): larger degree wins; ties broken by the
// smaller exponent on the latest variable
int drl_cmp(const GBExp& a, const GBExp& b, int lo, int hi) {
  long da = block_degree(a, lo, hi), db = block_degree(b, lo, hi);
  if (da != db) return da < db ? -1 : 1;
  for (int i = hi - 1; i >= lo; --i)
    if (a[i] != b[i]) return a[i] > b[i] ? -1 : 1;
  return 0;
}

}  // namespace

bool GBTermLess::operator()(const GBExp& a, const GBExp& b) const {
  int n = ring->nvars();
  int split = ring->elim_block;
  if (split > 0) {
    int c = drl_cmp(a, b, 0, split);
    if (c != 0) return c < 0;
    return drl_cmp(a, b, split, n) < 0;
  }
  return drl_cmp(a, b, 0, n) < 0;
}

GBPoly GBPoly::var(const std::shared_ptr<const GBRing>& r, int i, int pow) {
  GBPoly p(r);
  GBExp e(r->nvars(), 0);
  e[i] = (std::uint16_t)pow;
  p.terms_.emplace(std::move(e), r->field.one());
  return p;
}

GBPoly GBPoly::constant(const std::shared_ptr<const GBRing>& r,
                        const FieldElem& c) {
  GBPoly p(r);
  if (!c.is_zero()) p.terms_.emplace(GBExp(r->nvars(), 0), c);
  return p;
}

void GBPoly::add_term(const GBExp& e, const FieldElem& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, c);
  } else {
    it->second = it->second + c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

GBPoly GBPoly::operator+(const GBPoly& o) const {
  GBPoly r(ring_);
  for (auto& [e, c] : terms_) r.add_term(e, c);
  for (auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

GBPoly GBPoly::operator-(const GBPoly& o) const {
  GBPoly r(ring_);
  for (auto& [e, c] : terms_) r.add_term(e, c);
  for (auto& [e, c] : o.terms_) r.add_term(e, -c);
  return r;
}

GBPoly GBPoly::operator-() const {
  GBPoly r(ring_);
  for (auto& [e, c] : terms_) r.terms_.emplace(e, -c);
  return r;
}

GBPoly GBPoly::scaled(const FieldElem& c) const {
  GBPoly r(ring_);
  if (c.is_zero()) return r;
  for (auto& [e, co] : terms_) r.terms_.emplace(e, co * c);
  return r;
}

GBPoly GBPoly::operator*(const GBPoly& o) const {
  GBPoly r(ring_);
  int n = ring_->nvars();
  for (auto& [ea, ca] : terms_)
    for (auto& [eb, cb] : o.terms_) {
      GBExp e(n);
      for (int i = 0; i < n; ++i) e[i] = ea[i] + eb[i];
      r.add_term(e, ca * cb);
    }
  return r;
}

const GBExp& GBPoly::lead_exp() const {
  if (terms_.empty()) throw Error("lead of zero");
  return terms_.rbegin()->first;
}
const FieldElem& GBPoly::lead_coeff() const {
  if (terms_.empty()) throw Error("lead of zero");
  return terms_.rbegin()->second;
}

GBPoly GBPoly::monic() const {
  if (terms_.empty()) return *this;
  return scaled(lead_coeff().inv());
}

long GBPoly::total_degree() const {
  long d = 0;
  for (auto& [e, c] : terms_) d = std::max(d, block_degree(e, 0, (int)e.size()));
  return d;
}

std::string GBPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    std::string cs = it->second.str();
    bool neg = !cs.empty() && cs[0] == '-';
    if (!first)
      out << (neg ? "-" : "+");
    else if (neg)
      out << "-";
    if (neg) cs = cs.substr(1);
    bool printed = false;
    bool has_var = false;
    for (auto e : it->first)
      if (e) has_var = true;
    if (cs != "1" || !has_var) {
      out << cs;
      printed = true;
    }
    for (int i = 0; i < ring_->nvars(); ++i) {
      if (!it->first[i]) continue;
      if (printed) out << "*";
      out << ring_->vars[i];
      if (it->first[i] > 1) out << "^" << (int)it->first[i];
      printed = true;
    }
    first = false;
  }
  return out.str();
}

namespace {

bool exp_divides(const GBExp& a, const GBExp& b) {
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

GBExp exp_lcm(const GBExp& a, const GBExp& b) {
  GBExp e(a.size());
  for (size_t i = 0; i < a.size(); ++i) e[i] = std::max(a[i], b[i]);
  return e;
}

bool exp_coprime(const GBExp& a, const GBExp& b) {
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] && b[i]) return false;
  return true;
}

long exp_total(const GBExp& e) {
  long d = 0;
  for (auto x : e) d += x;
  return d;
}

GBPoly times_monomial(const GBPoly& f, const GBExp& e, const FieldElem& c) {
  GBPoly r(f.ring_handle());
  int n = (int)e.size();
  for (auto& [fe, fc] : f.terms()) {
    GBExp ne(n);
    for (int i = 0; i < n; ++i) ne[i] = fe[i] + e[i];
    r.add_term(ne, fc * c);
  }
  return r;
}

}  // namespace

GBPoly gb_normal_form(const GBPoly& f, const std::vector<GBPoly>& basis) {
  GBPoly rem(f.ring_handle());
  GBPoly cur = f;
  while (!cur.is_zero()) {
    const GBExp& le = cur.lead_exp();
    bool reduced = false;
    for (auto& g : basis) {
      if (g.is_zero()) continue;
      if (!exp_divides(g.lead_exp(), le)) continue;
      GBExp quo(le.size());
      for (size_t i = 0; i < le.size(); ++i) quo[i] = le[i] - g.lead_exp()[i];
      FieldElem c = cur.lead_coeff() / g.lead_coeff();
      cur = cur - times_monomial(g, quo, c);
      reduced = true;
      break;
    }
    if (!reduced) {
      // move the lead into the remainder
      rem.add_term(le, cur.lead_coeff());
      GBPoly rest(f.ring_handle());
      for (auto& [e, c] : cur.terms())
        if (!(e == le)) rest.add_term(e, c);
      cur = rest;
    }
  }
  return rem;
}

std::vector<GBPoly> buchberger(const GBProblem& p, const GBBudget& budget) {
  std::vector<GBPoly> basis;
  for (auto& g : p.generators)
    if (!g.is_zero()) basis.push_back(g.monic());

  struct Pair {
    long deg;
    int i, j;
    bool operator>(const Pair& o) const { return deg > o.deg; }
  };
  std::priority_queue<Pair, std::vector<Pair>, std::greater<Pair>> pairs;
  auto push_pairs = [&](int jn) {
    for (int i = 0; i < jn; ++i) {
      const GBExp &a = basis[i].lead_exp(), &b = basis[jn].lead_exp();
      if (exp_coprime(a, b)) continue;  // product criterion
      pairs.push(Pair{exp_total(exp_lcm(a, b)), i, jn});
    }
  };
  for (int j = 0; j < (int)basis.size(); ++j) push_pairs(j);

  long processed = 0;
  while (!pairs.empty()) {
    if (++processed > budget.max_pairs)
      throw BudgetExceeded("pair budget exhausted");
    Pair pr = pairs.top();
    pairs.pop();
    const GBPoly &f = basis[pr.i], &g = basis[pr.j];
    GBExp lcm = exp_lcm(f.lead_exp(), g.lead_exp());
    // chain criterion: some other basis lead strictly divides the lcm and
    // both sub-pairs have smaller lcm
    bool skip = false;
    for (int k = 0; k < (int)basis.size() && !skip; ++k) {
      if (k == pr.i || k == pr.j) continue;
      const GBExp& lk = basis[k].lead_exp();
      if (!exp_divides(lk, lcm)) continue;
      GBExp l1 = exp_lcm(f.lead_exp(), lk), l2 = exp_lcm(g.lead_exp(), lk);
      if (!(l1 == lcm) && !(l2 == lcm)) skip = true;
    }
    if (skip) continue;

    GBExp qa(lcm.size()), qb(lcm.size());
    for (size_t t = 0; t < lcm.size(); ++t) {
      qa[t] = lcm[t] - f.lead_exp()[t];
      qb[t] = lcm[t] - g.lead_exp()[t];
    }
    GBPoly s = times_monomial(f, qa, f.ring()->field.one()) -
               times_monomial(g, qb, f.ring()->field.one());
    s = gb_normal_form(s, basis);
    if (s.is_zero()) continue;
    if (s.total_degree() > budget.max_degree)
      throw BudgetExceeded("degree budget exhausted");
    basis.push_back(s.monic());
    if ((long)basis.size() > budget.max_basis)
      throw BudgetExceeded("basis budget exhausted");
    push_pairs((int)basis.size() - 1);
  }

  // reduce: drop redundant leads, then tail-reduce
  std::vector<GBPoly> minimal;
  for (int i = 0; i < (int)basis.size(); ++i) {
    bool redundant = false;
    for (int j = 0; j < (int)basis.size() && !redundant; ++j) {
      if (i == j) continue;
      if (exp_divides(basis[j].lead_exp(), basis[i].lead_exp())) {
        if (!(basis[j].lead_exp() == basis[i].lead_exp()) || j < i)
          redundant = true;
      }
    }
    if (!redundant) minimal.push_back(basis[i]);
  }
  std::vector<GBPoly> reduced;
  for (int i = 0; i < (int)minimal.size(); ++i) {
    std::vector<GBPoly> others;
    for (int j = 0; j < (int)minimal.size(); ++j)
      if (j != i) others.push_back(minimal[j]);
    GBPoly r = gb_normal_form(minimal[i], others);
    if (!r.is_zero()) reduced.push_back(r.monic());
  }
  std::sort(reduced.begin(), reduced.end(),
            [](const GBPoly& a, const GBPoly& b) {
              return GBTermLess{a.ring()}(a.lead_exp(), b.lead_exp());
            });
  return reduced;
}

std::vector<GBPoly> eliminate(const std::shared_ptr<GBRing>& ring,
                              const std::vector<GBPoly>& gens,
                              const std::vector<int>& drop,
                              const GBBudget& budget) {
  // block order: dropped variables first
  auto elim_ring = std::make_shared<GBRing>();
  elim_ring->field = ring->field;
  std::vector<int> order;  // new position -> old index
  std::vector<bool> dropped(ring->nvars(), false);
  for (int d : drop) dropped[d] = true;
  for (int i = 0; i < ring->nvars(); ++i)
    if (dropped[i]) order.push_back(i);
  elim_ring->elim_block = (int)order.size();
  for (int i = 0; i < ring->nvars(); ++i)
    if (!dropped[i]) order.push_back(i);
  for (int i : order) elim_ring->vars.push_back(ring->vars[i]);
  std::vector<int> new_pos(ring->nvars());
  for (int np = 0; np < (int)order.size(); ++np) new_pos[order[np]] = np;

  GBProblem prob;
  prob.ring = elim_ring;
  std::shared_ptr<const GBRing> elim_const = elim_ring;
  for (auto& g : gens) {
    GBPoly ng(elim_const);
    for (auto& [e, c] : g.terms()) {
      GBExp ne(e.size());
      for (size_t i = 0; i < e.size(); ++i) ne[new_pos[i]] = e[i];
      ng.add_term(ne, c);
    }
    prob.generators.push_back(ng);
  }
  auto gb = buchberger(prob, budget);
  std::vector<GBPoly> kept;
  for (auto& g : gb) {
    bool pure = true;
    for (auto& [e, c] : g.terms())
      for (int i = 0; i < elim_ring->elim_block; ++i)
        if (e[i]) pure = false;
    if (!pure) continue;
    GBPoly back{std::shared_ptr<const GBRing>(ring)};
    for (auto& [e, c] : g.terms()) {
      GBExp ne(e.size());
      for (size_t i = 0; i < e.size(); ++i) ne[order[i]] = e[i];
      back.add_term(ne, c);
    }
    kept.push_back(back);
  }
  return kept;
}

// ------------------------------------------------------------------
// the characteristic-2 reproduction
// ------------------------------------------------------------------

GBPoly repro_char2_elimination(const GBBudget& budget) {
  auto ring = std::make_shared<GBRing>();
  ring->field = Field::gf(2);
  ring->vars = {"x", "y", "a", "b", "c", "d", "m0", "m1", "n0",
                "n1", "o", "s", "t", "u", "v", "u2", "z"};
  std::shared_ptr<const GBRing> R = ring;
  auto V = [&](const char* n) { return GBPoly::var(R, ring->index_of(n)); };
  GBPoly x = V("x"), y = V("y"), a = V("a"), b = V("b"), c = V("c"),
         d = V("d"), m0 = V("m0"), m1 = V("m1"), n0 = V("n0"), n1 = V("n1"),
         o = V("o"), s = V("s"), t = V("t"), u = V("u"), v = V("v"),
         z = V("z");
  GBPoly one = GBPoly::constant(R, ring->field.one());

  // phi(x) = m0 y + m1 x, phi(y) = n0 y + n1 x
  GBPoly px = m0 * y + m1 * x;
  GBPoly py = n0 * y + n1 * x;

  GBPoly f = px * px + a * px * py;          // phi(x^2 + a xy)
  GBPoly g = c * px * py * py + d * py * py * py;  // phi(c xy^2 + d y^3)
  GBPoly h = x * x + b * x * y;
  GBPoly k = c * x * y * y + d * y * y * y;

  GBPoly F = f - s * h - t * k;
  GBPoly G = g - u * h - v * k;

  // collect coefficients with respect to the (x, y) monomials
  int ix = ring->index_of("x"), iy = ring->index_of("y");
  auto coefficients = [&](const GBPoly& P) {
    std::map<std::pair<int, int>, GBPoly> by_xy;
    for (auto& [e, co] : P.terms()) {
      GBExp rest = e;
      std::pair<int, int> key{e[ix], e[iy]};
      rest[ix] = rest[iy] = 0;
      auto it = by_xy.find(key);
      if (it == by_xy.end()) it = by_xy.emplace(key, GBPoly(R)).first;
      it->second.add_term(rest, co);
    }
    std::vector<GBPoly> out;
    for (auto& [key, poly] : by_xy) out.push_back(poly);
    return out;
  };

  std::vector<GBPoly> ideal;
  for (auto& cf : coefficients(F)) ideal.push_back(cf);
  for (auto& cf : coefficients(G)) ideal.push_back(cf);
  // invertibility of the substitution and of the unit matrix
  ideal.push_back((m0 * n1 - n0 * m1) * o - one);
  ideal.push_back((s * v - u * t) * z - one);

  std::vector<int> drop;
  for (auto name : {"x", "y", "m0", "m1", "n0", "n1", "o", "s", "t", "u",
                    "v", "u2", "z"})
    drop.push_back(ring->index_of(name));
  auto kept = eliminate(ring, ideal, drop, budget);
  if (kept.size() != 1)
    throw Error("elimination returned " + std::to_string(kept.size()) +
                " generators");
  return kept[0];
}

std::string repro_char2_expected() {
  return "a^4*b^2*c^4*d+a^2*b^4*c^4*d+a^4*c^2*d^3+b^4*c^2*d^3";
}

}  // namespace icis
