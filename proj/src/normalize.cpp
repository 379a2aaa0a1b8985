#include "icis/normalize.hpp"

#include <algorithm>
#include <cassert>

#include "icis/jetalg.hpp"

namespace icis {

namespace {

Poly zero_like(const Poly& p) {
  return Poly::zero(p.field(), p.nvars(), p.precision());
}

std::vector<Poly> identity_subst(Field f, int n, int prec) {
  std::vector<Poly> phi;
  for (int i = 0; i < n; ++i) phi.push_back(Poly::variable(f, n, i, prec));
  return phi;
}

std::vector<std::vector<Poly>> identity_unit(Field f, int m, int n, int prec) {
  std::vector<std::vector<Poly>> u(m, std::vector<Poly>(m, Poly::zero(f, n, prec)));
  for (int i = 0; i < m; ++i) u[i][i] = Poly::constant(f, n, f.one(), prec);
  return u;
}

MapGerm apply_unit(const MapGerm& g, const std::vector<std::vector<Poly>>& u,
                   int prec) {
  std::vector<Poly> out;
  for (size_t i = 0; i < u.size(); ++i) {
    Poly acc = Poly::zero(g.field(), g.nvars(), prec);
    for (size_t j = 0; j < u[i].size(); ++j)
      acc += (u[i][j] * g[(int)j]).jet(prec);
    out.push_back(acc.jet(prec));
  }
  return MapGerm(std::move(out));
}

}  // namespace

void ReductionTrace::record_subst(std::vector<Poly> phi, std::string label) {
  TraceStep s;
  s.kind = TraceStep::Kind::Substitution;
  s.phi = std::move(phi);
  s.label = std::move(label);
  steps.push_back(std::move(s));
}

void ReductionTrace::record_unit(std::vector<std::vector<Poly>> u,
                                 std::string label) {
  TraceStep s;
  s.kind = TraceStep::Kind::UnitMatrix;
  s.unit = std::move(u);
  s.label = std::move(label);
  steps.push_back(std::move(s));
}

void ReductionTrace::record_absorb(std::string label) {
  TraceStep s;
  s.kind = TraceStep::Kind::AbsorbTail;
  s.label = std::move(label);
  steps.push_back(std::move(s));
  constructive = false;
}

MapGerm ReductionTrace::replay(const MapGerm& input, int prec) const {
  MapGerm g = input.jet(prec);
  for (auto& s : steps) {
    switch (s.kind) {
      case TraceStep::Kind::Substitution:
        g = g.substitute(s.phi, prec);
        break;
      case TraceStep::Kind::UnitMatrix:
        g = apply_unit(g, s.unit, prec);
        break;
      case TraceStep::Kind::AbsorbTail:
        break;
    }
  }
  return g;
}

FieldElem char2_sqrt(const FieldElem& a) {
  const FieldSpec* s = a.spec();
  if (s->p != 2) throw Error("char2_sqrt outside characteristic 2");
  unsigned k = s->k;
  if (k == 1) return a;
  std::uint64_t e = 1;
  for (unsigned i = 0; i + 1 < k; ++i) e *= 2;  // 2^(k-1)
  return a.pow(e);
}

std::optional<Poly> series_sqrt(const Poly& u, int k) {
  Field F = u.field();
  if (F.characteristic() == 2) throw Error("series_sqrt needs p != 2");
  FieldElem c0 = u.constant_term();
  if (c0.is_zero()) throw Error("series_sqrt of a non-unit");
  auto r0 = nth_root(c0, 2);
  if (!r0) return std::nullopt;
  Poly v = u.scaled(c0.inv()).jet(k);  // 1 + m
  Poly s = Poly::constant(F, u.nvars(), F.one(), k);
  FieldElem half = F.from_int(2).inv();
  int correct = 0;
  while (correct < k) {
    correct = 2 * correct + 1;
    int kk = std::min(correct, k);
    Poly si = s.jet(kk).series_inverse(kk);
    s = ((s.jet(kk) + (v.jet(kk) * si).jet(kk)).scaled(half)).jet(kk);
  }
  return s.scaled(*r0).with_precision(k);
}

// ------------------------------------------------------------------
// splitting lemma, p != 2
// ------------------------------------------------------------------

SplitResult split_quadratic(const Poly& f, int precision,
                            bool normalize_units) {
  Field F = f.field();
  if (F.characteristic() == 2)
    throw Error("split_quadratic requires characteristic != 2");
  int n = f.nvars();
  if (!f.constant_term().is_zero() || f.order() < 2)
    throw InvalidParameters("germ must lie in m^2");

  SplitResult out;
  out.trace.constructive = true;
  Poly cur = f.jet(precision);

  FieldElem half = F.from_int(2).inv();
  // symmetric matrix of the quadratic part
  std::vector<std::vector<FieldElem>> M(n, std::vector<FieldElem>(n, F.zero()));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Monomial m = Monomial::var(i) * Monomial::var(j);
      FieldElem c = cur.coeff(m);
      if (i == j) {
        M[i][i] = c;
      } else {
        M[i][j] = M[j][i] = c * half;
      }
    }

  // congruence diagonalization, tracking the substitution matrix T (x = T x')
  std::vector<std::vector<FieldElem>> T(n, std::vector<FieldElem>(n, F.zero()));
  for (int i = 0; i < n; ++i) T[i][i] = F.one();
  auto col_op = [&](int dst, int src, const FieldElem& lam) {
    // column dst += lam * column src, congruent row op mirrored
    for (int r = 0; r < n; ++r) M[r][dst] = M[r][dst] + lam * M[r][src];
    for (int c = 0; c < n; ++c) M[dst][c] = M[dst][c] + lam * M[src][c];
    for (int r = 0; r < n; ++r) T[r][dst] = T[r][dst] + lam * T[r][src];
  };
  auto col_swap = [&](int a, int b) {
    for (int r = 0; r < n; ++r) std::swap(M[r][a], M[r][b]);
    for (int c = 0; c < n; ++c) std::swap(M[a][c], M[b][c]);
    for (int r = 0; r < n; ++r) std::swap(T[r][a], T[r][b]);
  };
  int rank = 0;
  for (int k = 0; k < n; ++k) {
    if (M[k][k].is_zero()) {
      int j = -1;
      for (int t = k + 1; t < n; ++t)
        if (!M[t][t].is_zero()) {
          j = t;
          break;
        }
      if (j >= 0) {
        col_swap(k, j);
      } else {
        for (int t = k + 1; t < n && j < 0; ++t)
          if (!M[k][t].is_zero()) j = t;
        if (j < 0) continue;  // row/col already zero
        col_op(k, j, F.one());  // makes M[k][k] = 2 M[k][j] != 0
      }
    }
    FieldElem piv = M[k][k];
    for (int j = k + 1; j < n; ++j) {
      if (M[k][j].is_zero()) continue;
      col_op(j, k, -(M[k][j] / piv));
    }
    ++rank;
  }
  // move rank columns to the back: corank variables first (spec shape)
  int corank = n - rank;
  {
    // columns with nonzero diagonal, in order
    std::vector<int> rigid, kerv;
    for (int i = 0; i < n; ++i)
      (M[i][i].is_zero() ? kerv : rigid).push_back(i);
    std::vector<std::vector<FieldElem>> P(n, std::vector<FieldElem>(n, F.zero()));
    std::vector<int> order;
    for (int i : kerv) order.push_back(i);
    for (int i : rigid) order.push_back(i);
    std::vector<std::vector<FieldElem>> T2(n, std::vector<FieldElem>(n, F.zero()));
    std::vector<FieldElem> diag;
    for (int newc = 0; newc < n; ++newc) {
      int oldc = order[newc];
      for (int r = 0; r < n; ++r) T2[r][newc] = T[r][oldc];
    }
    T = T2;
    (void)P;
  }
  std::vector<Poly> phi;
  for (int i = 0; i < n; ++i) {
    Poly im(F, n, precision);
    for (int j = 0; j < n; ++j)
      im.add_term(Monomial::var(j), T[i][j]);
    phi.push_back(im);
  }
  cur = cur.substitute(phi, precision);
  out.trace.record_subst(phi, "diagonalize quadratic part");

  std::vector<FieldElem> cs;
  for (int i = corank; i < n; ++i)
    cs.push_back(cur.coeff(Monomial::var(i) * Monomial::var(i)));

  // absorb higher terms containing rigid variables; batched per pass, each
  // offender assigned to the first rigid variable it contains
  for (int guard = 0;; ++guard) {
    if (guard > 4 * precision + 8) throw Error("splitting did not settle");
    std::vector<Poly> corr(n, Poly::zero(F, n, precision));
    bool any = false;
    for (auto& [m, c] : cur.terms()) {
      if (m.total() < 3) continue;
      int rv = -1;
      for (int i = corank; i < n; ++i)
        if (m.e[i] >= 1) {
          rv = i;
          break;
        }
      if (rv < 0) continue;
      FieldElem ci = cur.coeff(Monomial::var(rv) * Monomial::var(rv));
      Monomial rest = m;
      rest.e[rv] -= 1;
      corr[rv].add_term(rest, -(c * half / ci));
      any = true;
    }
    if (!any) break;
    std::vector<Poly> sub = identity_subst(F, n, precision);
    for (int i = 0; i < n; ++i) sub[i] += corr[i];
    cur = cur.substitute(sub, precision);
    out.trace.record_subst(sub, "absorb cross terms");
  }

  if (normalize_units) {
    std::vector<Poly> sub = identity_subst(F, n, precision);
    bool any = false;
    for (int i = corank; i < n; ++i) {
      FieldElem ci = cur.coeff(Monomial::var(i) * Monomial::var(i));
      if (ci.is_one()) continue;
      auto root = nth_root(ci.inv(), 2);
      if (!root)
        throw NeedsExtension("square root of " + ci.str() +
                             " not in the field");
      sub[i] = Poly::variable(F, n, i, precision).scaled(*root);
      any = true;
    }
    if (any) {
      cur = cur.substitute(sub, precision);
      out.trace.record_subst(sub, "normalize square coefficients");
    }
    out.units_normalized = true;
    cs.assign(rank, F.one());
  }

  out.corank = corank;
  out.square_coeffs = cs;
  out.residual = Poly(F, n, precision);
  for (auto& [m, c] : cur.terms()) {
    bool rigid = false;
    for (int i = corank; i < n; ++i)
      if (m.e[i]) rigid = true;
    if (!rigid) out.residual.add_term(m, c);
  }
  out.trace.result = MapGerm({cur});
  return out;
}

// ------------------------------------------------------------------
// splitting lemma, p = 2
// ------------------------------------------------------------------

SplitChar2Result split_quadratic_char2(const Poly& f, int precision) {
  Field F = f.field();
  if (F.characteristic() != 2)
    throw Error("split_quadratic_char2 requires characteristic 2");
  int n = f.nvars();
  if (!f.constant_term().is_zero() || f.order() < 2)
    throw InvalidParameters("germ must lie in m^2");

  SplitChar2Result out;
  Poly cur = f.jet(precision);
  auto qcoef = [&](int i, int j) {
    return cur.coeff(Monomial::var(i) * Monomial::var(j));
  };

  int l = 0;
  int base = 0;  // variables < base are settled hyperbolic pairs
  while (true) {
    // hyperbolic cross term among the free variables?
    int pi = -1, pj = -1;
    for (int i = base; i < n && pi < 0; ++i)
      for (int j = i + 1; j < n; ++j)
        if (!qcoef(i, j).is_zero()) {
          pi = i;
          pj = j;
          break;
        }
    if (pi < 0) break;
    // bring the pair to (base, base+1)
    auto swap_vars = [&](int a, int b) {
      if (a == b) return;
      std::vector<Poly> sub = identity_subst(F, n, precision);
      std::swap(sub[a], sub[b]);
      cur = cur.substitute(sub, precision);
      out.trace.record_subst(sub, "swap variables");
    };
    // pj > pi >= base, so pj is untouched by the first swap
    swap_vars(base, pi);
    swap_vars(base + 1, pj);
    int a = base, b = base + 1;
    FieldElem cab = qcoef(a, b);
    // clear remaining quadratic couplings of x_a and x_b
    for (int t = b + 1; t < n; ++t) {
      FieldElem cat = qcoef(a, t);
      if (!cat.is_zero()) {
        std::vector<Poly> sub = identity_subst(F, n, precision);
        Poly corr(F, n, precision);
        corr.add_term(Monomial::var(t), cat / cab);
        sub[b] += corr;
        cur = cur.substitute(sub, precision);
        out.trace.record_subst(sub, "clear coupling");
      }
      FieldElem cbt = qcoef(b, t);
      if (!cbt.is_zero()) {
        std::vector<Poly> sub = identity_subst(F, n, precision);
        Poly corr(F, n, precision);
        corr.add_term(Monomial::var(t), cbt / cab);
        sub[a] += corr;
        cur = cur.substitute(sub, precision);
        out.trace.record_subst(sub, "clear coupling");
      }
    }
    // clear the squares on the pair
    FieldElem caa = qcoef(a, a);
    if (!caa.is_zero()) {
      std::vector<Poly> sub = identity_subst(F, n, precision);
      Poly corr(F, n, precision);
      corr.add_term(Monomial::var(a), caa / cab);
      sub[b] += corr;
      cur = cur.substitute(sub, precision);
      out.trace.record_subst(sub, "clear square");
    }
    FieldElem cbb = qcoef(b, b);
    if (!cbb.is_zero()) {
      std::vector<Poly> sub = identity_subst(F, n, precision);
      Poly corr(F, n, precision);
      corr.add_term(Monomial::var(b), cbb / cab);
      sub[a] += corr;
      cur = cur.substitute(sub, precision);
      out.trace.record_subst(sub, "clear square");
    }
    // scale the cross coefficient to 1
    cab = qcoef(a, b);
    if (!cab.is_one()) {
      std::vector<Poly> sub = identity_subst(F, n, precision);
      sub[a] = sub[a].scaled(cab.inv());
      cur = cur.substitute(sub, precision);
      out.trace.record_subst(sub, "normalize cross coefficient");
    }
    ++l;
    base += 2;
  }

  // remaining quadratic part is a perfect square sum c_i x_i^2
  int sq_var = -1;
  {
    std::vector<FieldElem> cs(n, F.zero());
    bool any = false;
    for (int i = base; i < n; ++i) {
      cs[i] = qcoef(i, i);
      if (!cs[i].is_zero()) any = true;
    }
    if (any) {
      int j0 = -1;
      for (int i = base; i < n; ++i)
        if (!cs[i].is_zero()) {
          j0 = i;
          break;
        }
      FieldElem r0 = char2_sqrt(cs[j0]);
      std::vector<Poly> sub = identity_subst(F, n, precision);
      Poly im(F, n, precision);
      im.add_term(Monomial::var(j0), r0.inv());
      for (int i = base; i < n; ++i) {
        if (i == j0 || cs[i].is_zero()) continue;
        im.add_term(Monomial::var(i), char2_sqrt(cs[i]) / r0);
      }
      sub[j0] = im;
      cur = cur.substitute(sub, precision);
      out.trace.record_subst(sub, "collect perfect square");
      // move the square variable right after the hyperbolic block
      if (j0 != base) {
        std::vector<Poly> sw = identity_subst(F, n, precision);
        std::swap(sw[j0], sw[base]);
        cur = cur.substitute(sw, precision);
        out.trace.record_subst(sw, "swap variables");
      }
      sq_var = base;
    }
  }

  // absorb higher-order terms involving the hyperbolic variables; batched
  for (int guard = 0; l > 0; ++guard) {
    if (guard > 4 * precision + 8) throw Error("char-2 splitting did not settle");
    std::vector<Poly> corr(n, Poly::zero(F, n, precision));
    bool any = false;
    for (auto& [m, c] : cur.terms()) {
      if (m.total() < 3) continue;
      int pair = -1;
      for (int i = 0; i < 2 * l; ++i)
        if (m.e[i]) {
          pair = i;
          break;
        }
      if (pair < 0) continue;
      int partner = (pair % 2 == 0) ? pair + 1 : pair - 1;
      Monomial rest = m;
      rest.e[pair] -= 1;
      corr[partner].add_term(rest, c);  // char 2: += cancels
      any = true;
    }
    if (!any) break;
    std::vector<Poly> sub = identity_subst(F, n, precision);
    for (int i = 0; i < n; ++i) sub[i] += corr[i];
    cur = cur.substitute(sub, precision);
    out.trace.record_subst(sub, "absorb hyperbolic terms");
  }

  out.l = l;
  out.has_square = sq_var >= 0;
  out.residual = Poly(F, n, precision);
  for (auto& [m, c] : cur.terms()) {
    bool hyp = false;
    for (int i = 0; i < 2 * l; ++i)
      if (m.e[i]) hyp = true;
    if (!hyp) out.residual.add_term(m, c);
  }
  out.trace.result = MapGerm({cur});
  return out;
}

// ------------------------------------------------------------------
// degenerate shape (p != 2)
// ------------------------------------------------------------------

FieldElem DegenerateShape::a_coeff(long i) const {
  return a_series.coeff(Monomial::var(1, (int)i));
}
FieldElem DegenerateShape::b_coeff(long j) const {
  return b_series.coeff(Monomial::var(1, (int)j));
}

DegenerateShape reduce_degenerate_shape(const MapGerm& f, int precision) {
  Field F = f.field();
  if (F.characteristic() == 2)
    throw Error("degenerate shape reduction requires p != 2");
  if (f.size() != 2 || f.nvars() != 2)
    throw InvalidParameters("degenerate shape needs two components, two variables");

  DegenerateShape out;
  out.field = F;
  out.precision = precision;
  ReductionTrace& tr = out.trace;
  MapGerm cur = f.jet(precision);
  FieldElem half = F.from_int(2).inv();

  // rank-1 quadratic part of f1 -> c x^2 by a linear change
  Poly j2 = cur[0].jet(2);
  FieldElem A = j2.coeff(Monomial::var(0, 2));
  FieldElem B = j2.coeff(Monomial::var(0) * Monomial::var(1));
  FieldElem C = j2.coeff(Monomial::var(1, 2));
  if (A.is_zero() && B.is_zero() && C.is_zero())
    throw InvalidParameters("first component has order > 2");
  std::vector<Poly> lin = identity_subst(F, 2, precision);
  if (A.is_zero()) {
    // rank 1 with A = 0 forces B = 0; swap the variables
    std::swap(lin[0], lin[1]);
    cur = cur.substitute(lin, precision);
    tr.record_subst(lin, "swap variables");
    std::swap(A, C);
  }
  B = cur[0].coeff(Monomial::var(0) * Monomial::var(1));
  if (!B.is_zero()) {
    std::vector<Poly> sub = identity_subst(F, 2, precision);
    Poly corr(F, 2, precision);
    corr.add_term(Monomial::var(1), -(B * half / A));
    sub[0] += corr;  // x -> x - (B/2A) y
    cur = cur.substitute(sub, precision);
    tr.record_subst(sub, "align square direction");
  }
  A = cur[0].coeff(Monomial::var(0, 2));
  {
    auto u = identity_unit(F, 2, 2, precision);
    u[0][0] = Poly::constant(F, 2, A.inv(), precision);
    cur = apply_unit(cur, u, precision);
    tr.record_unit(u, "scale first component");
  }

  // absorb every x-containing term of f1 except the pure square; one batched
  // substitution per pass (corrections from the lowest offending degree up
  // interact only above themselves)
  while (true) {
    Poly corr(F, 2, precision);
    for (auto& [m, c] : cur[0].terms()) {
      if (m.e[0] == 2 && m.e[1] == 0) continue;
      if (m.e[0] == 0) continue;
      Monomial rest = m;
      rest.e[0] -= 1;
      corr.add_term(rest, -(c * half));
    }
    if (corr.is_zero()) break;
    std::vector<Poly> sub = identity_subst(F, 2, precision);
    sub[0] += corr;
    cur = cur.substitute(sub, precision);
    tr.record_subst(sub, "complete the square");
  }

  Poly c_of_y(F, 2, precision);
  for (auto& [m, c] : cur[0].terms())
    if (m.e[0] == 0) c_of_y.add_term(m, c);

  // Weierstrass reduction of f2 modulo x^2 + C(y)
  auto w = weierstrass_reduce_general(cur[1], c_of_y, precision);
  {
    auto u = identity_unit(F, 2, 2, precision);
    u[1][0] = -w.quotient;
    cur = apply_unit(cur, u, precision);
    tr.record_unit(u, "reduce second component");
  }

  out.c_of_y = c_of_y;
  out.s = c_of_y.order() >= kInfinity ? kInfinity : c_of_y.order();
  out.alpha = out.s < kInfinity ? 1 : 0;

  // attempt the unit normalization C -> y^s (witness only)
  if (out.alpha == 1) {
    long s = out.s;
    Poly e(F, 2, precision);  // C / y^s
    for (auto& [m, c] : c_of_y.terms()) {
      Monomial mm = m;
      mm.e[1] -= (std::uint16_t)s;
      e.add_term(mm, c);
    }
    auto root = series_sqrt(e, precision);
    if (root) {
      std::vector<Poly> sub = identity_subst(F, 2, precision);
      sub[0] = (Poly::variable(F, 2, 0, precision) * *root).jet(precision);
      cur = cur.substitute(sub, precision);
      tr.record_subst(sub, "normalize unit of C");
      auto u = identity_unit(F, 2, 2, precision);
      u[0][0] = e.series_inverse(precision);
      cur = apply_unit(cur, u, precision);
      tr.record_unit(u, "normalize unit of C");
      out.unit_normalized = true;
      // x^2 + y^s exactly; f2 remainder shape is preserved up to the
      // substitution, re-reduce to be safe
      Poly cy(F, 2, precision);
      cy.add_term(Monomial::var(1, (int)s), F.one());
      auto w2 = weierstrass_reduce_general(cur[1], cy, precision);
      auto u2 = identity_unit(F, 2, 2, precision);
      u2[1][0] = -w2.quotient;
      cur = apply_unit(cur, u2, precision);
      tr.record_unit(u2, "re-reduce second component");
      out.c_of_y = cy;
      out.a_series = w2.a_coeffs;
      out.b_series = w2.b_coeffs;
    } else {
      tr.constructive = false;
      tr.note = "needs-extension: square root of the unit of C";
      out.a_series = w.a_coeffs;
      out.b_series = w.b_coeffs;
    }
  } else {
    out.a_series = w.a_coeffs;
    out.b_series = w.b_coeffs;
  }

  out.t = out.a_series.is_zero() ? kInfinity : out.a_series.order();
  out.q = out.b_series.is_zero() ? kInfinity : out.b_series.order();
  out.current = cur;
  tr.result = cur;
  return out;
}

// ------------------------------------------------------------------
// nondegenerate branch machinery
// ------------------------------------------------------------------

BranchSplit quadric_branches(const FieldElem& A, const FieldElem& B,
                             const FieldElem& C) {
  Field F = A.field();
  BranchSplit out;
  if (C.is_zero()) {
    // q = x (A x + B y), B != 0: vertical branch plus slope -A/B
    BranchSeed v;
    v.vertical = true;
    v.lambda = F.zero();
    BranchSeed s;
    s.vertical = false;
    s.lambda = -(A / B);
    out.rational = true;
    out.seeds = {v, s};
    return out;
  }
  if (F.characteristic() == 2) {
    // lambda^2 + (B/C) lambda + (A/C) = 0, B != 0
    std::uint64_t q = F.spec().order();
    if (q > (1u << 20)) throw Error("field too large for branch search");
    for (std::uint64_t i = 0; i < q; ++i) {
      FieldElem lam = F.from_index(i);
      if ((C * lam * lam + B * lam + A).is_zero()) {
        BranchSeed s1{false, lam};
        BranchSeed s2{false, lam + B / C};
        out.rational = true;
        out.seeds = {s1, s2};
        return out;
      }
    }
    out.rational = false;
    return out;
  }
  FieldElem four = F.from_int(4);
  FieldElem disc = B * B - four * A * C;
  auto root = nth_root(disc, 2);
  if (!root) {
    out.rational = false;
    return out;
  }
  FieldElem twoC = F.from_int(2) * C;
  BranchSeed s1{false, (-B + *root) / twoC};
  BranchSeed s2{false, (-B - *root) / twoC};
  out.rational = true;
  out.seeds = {s1, s2};
  return out;
}

std::vector<Poly> solve_branch(const Poly& f1, const BranchSeed& seed, int N) {
  Field F = f1.field();
  int pv = seed.vertical ? 1 : 0;   // parameter variable
  int sv = 1 - pv;                  // solved variable
  Poly param = Poly::variable(F, 2, pv, N);
  Poly solved(F, 2, N);
  if (!seed.vertical)
    solved.add_term(Monomial::var(0), seed.lambda);  // y = lambda x + ...
  std::vector<Poly> images(2, Poly::zero(F, 2, N));
  images[pv] = param;
  images[sv] = solved;
  // iterate: lowest residual term decides the next coefficient
  Poly dfs = f1.derivative(sv);
  for (int guard = 0; guard < 4 * N + 8; ++guard) {
    images[sv] = solved;
    Poly res = f1.substitute(images, N);
    if (res.is_zero()) break;
    long d = res.order();
    if (d > N) break;
    Poly dcur = dfs.substitute(images, N);
    FieldElem u = dcur.coeff(Monomial::var(pv, 1));
    if (u.is_zero()) throw Error("branch slope degenerated");
    FieldElem cd = res.coeff(Monomial::var(pv, (int)d));
    Poly corr(F, 2, N);
    corr.add_term(Monomial::var(pv, (int)d - 1), -(cd / u));
    solved += corr;
  }
  images[sv] = solved;
  return images;
}

long branch_order(const Poly& g, const std::vector<Poly>& param, int N) {
  Poly r = g.substitute(param, N);
  long o = r.order();
  return o > N ? kInfinity : o;
}

// ------------------------------------------------------------------
// reduction to F type
// ------------------------------------------------------------------

namespace {

// kill every term of f1 that is a pure power of one variable, against the
// cross term c * xy; batched, one substitution per pass
void normalize_to_xy(MapGerm& cur, ReductionTrace& tr, int prec) {
  Field F = cur.field();
  for (int guard = 0;; ++guard) {
    if (guard > 4 * prec + 8) throw Error("xy normalization did not settle");
    FieldElem cross = cur[0].coeff(Monomial::var(0) * Monomial::var(1));
    Poly corr_x(F, 2, prec), corr_y(F, 2, prec);
    for (auto& [m, c] : cur[0].terms()) {
      if (m.e[0] >= 1 && m.e[1] >= 1) continue;
      int pure = m.e[0] ? 0 : 1;
      Monomial rest = m;
      rest.e[pure] -= 1;
      (pure == 0 ? corr_y : corr_x).add_term(rest, -(c / cross));
    }
    if (corr_x.is_zero() && corr_y.is_zero()) break;
    std::vector<Poly> sub = identity_subst(F, 2, prec);
    sub[0] += corr_x;
    sub[1] += corr_y;
    cur = cur.substitute(sub, prec);
    tr.record_subst(sub, "kill pure terms");
  }
  // f1 = xy * u: scale the component by u^{-1}
  Poly u(F, 2, prec);
  for (auto& [m, c] : cur[0].terms()) {
    Monomial mm = m;
    mm.e[0] -= 1;
    mm.e[1] -= 1;
    u.add_term(mm, c);
  }
  auto um = identity_unit(F, 2, 2, prec);
  um[0][0] = u.series_inverse(prec);
  cur = apply_unit(cur, um, prec);
  tr.record_unit(um, "normalize f1 to xy");
}

// subtract the xy-divisible part of f2 using f1 = xy
void kill_xy_multiples(MapGerm& cur, ReductionTrace& tr, int prec) {
  Field F = cur.field();
  Poly quot(F, 2, prec);
  for (auto& [m, c] : cur[1].terms()) {
    if (m.e[0] >= 1 && m.e[1] >= 1) {
      Monomial mm = m;
      mm.e[0] -= 1;
      mm.e[1] -= 1;
      quot.add_term(mm, c);
    }
  }
  if (quot.is_zero()) return;
  auto u = identity_unit(F, 2, 2, prec);
  u[1][0] = -quot;
  cur = apply_unit(cur, u, prec);
  tr.record_unit(u, "kill xy multiples");
}

}  // namespace

FReduction reduce_nondegenerate(const MapGerm& f, long dim_ci_quotient,
                                int precision) {
  Field F = f.field();
  bool char2 = F.characteristic() == 2;
  FReduction out;
  MapGerm cur = f.jet(precision);
  ReductionTrace& tr = out.trace;

  auto nondeg = [&](const Poly& g) {
    Poly j2 = g.jet(2);
    FieldElem A = j2.coeff(Monomial::var(0, 2));
    FieldElem B = j2.coeff(Monomial::var(0) * Monomial::var(1));
    FieldElem C = j2.coeff(Monomial::var(1, 2));
    if (char2) return !B.is_zero();
    FieldElem disc = B * B - F.from_int(4) * A * C;
    return !disc.is_zero();
  };
  if (!nondeg(cur[0])) {
    if (!nondeg(cur[1]))
      throw InvalidParameters("no component with nondegenerate 2-jet");
    auto u = identity_unit(F, 2, 2, precision);
    std::swap(u[0], u[1]);
    cur = apply_unit(cur, u, precision);
    tr.record_unit(u, "swap components");
  }

  Poly j2 = cur[0].jet(2);
  FieldElem A = j2.coeff(Monomial::var(0, 2));
  FieldElem B = j2.coeff(Monomial::var(0) * Monomial::var(1));
  FieldElem C = j2.coeff(Monomial::var(1, 2));
  BranchSplit br = quadric_branches(A, B, C);

  if (!br.rational) {
    // conjugate branches: equal intersection orders, read off the quotient
    if (dim_ci_quotient < 0 || dim_ci_quotient % 2 != 0)
      throw Error("conjugate-branch case needs an even quotient dimension");
    out.n = out.m = dim_ci_quotient / 2;
    out.witness_constructive = false;
    out.note = "needs-extension: tangent directions outside the field";
    tr.constructive = false;
    tr.note = out.note;
    tr.result = cur;
    return out;
  }

  // align the two tangent directions with the axes
  {
    std::vector<Poly> sub = identity_subst(F, 2, precision);
    const BranchSeed& s1 = br.seeds[0];
    const BranchSeed& s2 = br.seeds[1];
    if (s1.vertical || s2.vertical) {
      // q = B x (y - lam x) up to scale; map x -> x, y -> y + lam x
      FieldElem lam = s1.vertical ? s2.lambda : s1.lambda;
      Poly imy(F, 2, precision);
      imy.add_term(Monomial::var(1), F.one());
      imy.add_term(Monomial::var(0), lam);
      sub[1] = imy;
    } else {
      // q = C (y - l1 x)(y - l2 x); send it to a multiple of xy
      FieldElem l1 = s1.lambda, l2 = s2.lambda;
      FieldElem d = (l2 - l1).inv();
      Poly imx(F, 2, precision);  // phi(x) = (x - y) / (l2 - l1)
      imx.add_term(Monomial::var(0), d);
      imx.add_term(Monomial::var(1), -d);
      Poly imy(F, 2, precision);  // phi(y) = x + l1 (x - y)/(l2 - l1)
      imy.add_term(Monomial::var(0), F.one() + l1 * d);
      imy.add_term(Monomial::var(1), -(l1 * d));
      sub[0] = imx;
      sub[1] = imy;
    }
    cur = cur.substitute(sub, precision);
    tr.record_subst(sub, "align branch tangents");
  }

  normalize_to_xy(cur, tr, precision);
  kill_xy_multiples(cur, tr, precision);

  // f2 = P(x) + Q(y); one unit-scaling round leaves alpha x^n + beta y^m
  Poly P(F, 2, precision), Q(F, 2, precision);
  for (auto& [m, c] : cur[1].terms())
    (m.e[1] == 0 ? P : Q).add_term(m, c);
  if (P.is_zero() || Q.is_zero())
    throw NotCompleteIntersection("second component vanishes on a branch");
  long n = P.order(), m = Q.order();
  {
    Poly u1(F, 2, precision), u2(F, 2, precision);
    for (auto& [mm, c] : P.terms()) {
      Monomial r = mm;
      r.e[0] -= (std::uint16_t)n;
      u1.add_term(r, c);
    }
    for (auto& [mm, c] : Q.terms()) {
      Monomial r = mm;
      r.e[1] -= (std::uint16_t)m;
      u2.add_term(r, c);
    }
    auto um = identity_unit(F, 2, 2, precision);
    um[1][1] = (u1.series_inverse(precision) * u2.series_inverse(precision))
                   .jet(precision);
    cur = apply_unit(cur, um, precision);
    tr.record_unit(um, "normalize branch units");
    kill_xy_multiples(cur, tr, precision);
  }
  FieldElem alpha = cur[1].coeff(Monomial::var(0, (int)n));
  FieldElem beta = cur[1].coeff(Monomial::var(1, (int)m));

  // final scaling x -> s x, y -> t y with s^n alpha = 1, t^m beta = 1
  auto sroot = nth_root(alpha.inv(), (unsigned)n);
  auto troot = nth_root(beta.inv(), (unsigned)m);
  if (sroot && troot) {
    std::vector<Poly> sub = identity_subst(F, 2, precision);
    sub[0] = sub[0].scaled(*sroot);
    sub[1] = sub[1].scaled(*troot);
    cur = cur.substitute(sub, precision);
    tr.record_subst(sub, "scale to unit coefficients");
    auto um = identity_unit(F, 2, 2, precision);
    um[0][0] = Poly::constant(F, 2, (*sroot * *troot).inv(), precision);
    cur = apply_unit(cur, um, precision);
    tr.record_unit(um, "rescale xy");
    out.witness_constructive = true;
  } else {
    tr.constructive = false;
    tr.note = "needs-extension: n-th roots for the final scaling";
    out.note = tr.note;
  }

  out.n = std::min(n, m);
  out.m = std::max(n, m);
  if (out.n != n) {
    // swap variables so the smaller exponent sits on x
    std::vector<Poly> sub = identity_subst(F, 2, precision);
    std::swap(sub[0], sub[1]);
    cur = cur.substitute(sub, precision);
    tr.record_subst(sub, "order exponents");
  }
  if (dim_ci_quotient >= 0 && out.n + out.m != dim_ci_quotient)
    throw Error("branch orders inconsistent with quotient dimension");
  tr.result = cur;
  return out;
}

// ------------------------------------------------------------------

Poly newton_unit_solve(const Poly& F_poly, int k) {
  Field F = F_poly.field();
  if (F_poly.nvars() != 2)
    throw InvalidParameters("newton_unit_solve wants F(z, y) in two variables");
  // F(1, y) in <y>, dF/dz(1, 0) a unit
  auto eval_at_z1 = [&](const Poly& g) {
    Poly r(F, 2, g.precision());
    for (auto& [m, c] : g.terms()) {
      Monomial mm = m;
      mm.e[0] = 0;
      r.add_term(mm, c);
    }
    return r;
  };
  Poly f1 = eval_at_z1(F_poly);
  if (!f1.constant_term().is_zero())
    throw DerivativeNotUnit("F(1) not in <y>");
  Poly dz = F_poly.derivative(0);
  FieldElem slope = eval_at_z1(dz).constant_term();
  if (slope.is_zero())
    throw DerivativeNotUnit("dF/dz(1, 0) vanishes in the field");

  // solve for w(y) with z = 1 + w via coefficient recursion
  Poly w(F, 2, k);
  for (int guard = 0; guard < 4 * k + 8; ++guard) {
    // residual F(1 + w(y), y)
    std::vector<Poly> images(2, Poly::zero(F, 2, k));
    // substitute needs zero constant terms; expand F(1 + w) manually
    Poly res(F, 2, k);
    // cache powers of (1 + w)
    std::vector<Poly> pw = {Poly::constant(F, 2, F.one(), k)};
    Poly onew = Poly::constant(F, 2, F.one(), k) + w;
    int maxz = 0;
    for (auto& [m, c] : F_poly.terms()) maxz = std::max(maxz, (int)m.e[0]);
    while ((int)pw.size() <= maxz) pw.push_back((pw.back() * onew).jet(k));
    for (auto& [m, c] : F_poly.terms()) {
      Poly term = (pw[m.e[0]] * Poly::constant(F, 2, c, k)).jet(k);
      Monomial ym;
      ym.e[1] = m.e[1];
      Poly yt(F, 2, k);
      yt.add_term(ym, F.one());
      res += (term * yt).jet(k);
    }
    if (res.is_zero()) break;
    long d = res.order();
    if (d > k) break;
    FieldElem cd = res.coeff(Monomial::var(1, (int)d));
    Poly corr(F, 2, k);
    corr.add_term(Monomial::var(1, (int)d), -(cd / slope));
    w += corr;
  }
  Poly z = Poly::constant(F, 2, F.one(), k) + w;
  return z;
}

bool merle_absorb(const MapGerm& f, const MapGerm& g, const WeightSystem& ws,
                  int k_cap) {
  long vg = dw_order_lower_bound(g, ws);
  if (vg >= kInfinity) return true;
  long alpha = t1_top_weight(f, ws, k_cap);
  long beta = std::max<long>(0, alpha);
  return vg > beta;
}

}  // namespace icis
