#include "icis/classify.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace icis {

namespace {

std::vector<Poly> identity_subst(Field f, int n, int prec) {
  std::vector<Poly> phi;
  for (int i = 0; i < n; ++i) phi.push_back(Poly::variable(f, n, i, prec));
  return phi;
}

std::vector<std::vector<Poly>> identity_unit(Field f, int m, int n, int prec) {
  std::vector<std::vector<Poly>> u(
      m, std::vector<Poly>(m, Poly::zero(f, n, prec)));
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

struct Quad {
  FieldElem A, B, C;  // coefficients of x^2, xy, y^2
  bool zero() const { return A.is_zero() && B.is_zero() && C.is_zero(); }
};

Quad quad_of(const Poly& g) {
  return Quad{g.coeff(Monomial::var(0, 2)),
              g.coeff(Monomial::var(0) * Monomial::var(1)),
              g.coeff(Monomial::var(1, 2))};
}

bool quad_nondegenerate(const Quad& q, std::uint64_t p) {
  if (p == 2) return !q.B.is_zero();
  Field F = q.A.field();
  return !(q.B * q.B - F.from_int(4) * q.A * q.C).is_zero();
}

// j2(f2) proportional to j2(f1) (f1 the order-2 representative)?
bool pencil_dependent(const Quad& q1, const Quad& q2) {
  // rank of the 2x3 coefficient matrix <= 1
  FieldElem d1 = q1.A * q2.B - q1.B * q2.A;
  FieldElem d2 = q1.A * q2.C - q1.C * q2.A;
  FieldElem d3 = q1.B * q2.C - q1.C * q2.B;
  return d1.is_zero() && d2.is_zero() && d3.is_zero();
}

long dim_ci_quotient(const MapGerm& f, int k_cap) {
  std::vector<MapGerm> gens;
  for (int i = 0; i < f.size(); ++i)
    gens.emplace_back(std::vector<Poly>{f[i]});
  QuotientOptions opts;
  opts.k_cap = k_cap;
  auto q = quotient_dim(gens, 1, opts);
  return q.finite ? q.dim : -1;
}

Poly shift_down_y(const Poly& g, long k) {
  Poly out(g.field(), g.nvars(), g.precision());
  for (auto& [m, c] : g.terms()) {
    Monomial mm = m;
    mm.e[1] -= (std::uint16_t)k;
    out.add_term(mm, c);
  }
  return out;
}

}  // namespace

std::string SingularityType::tag_str() const {
  switch (tag) {
    case TypeTag::A: return "A";
    case TypeTag::F: return "F";
    case TypeTag::F22_0: return "F22_0";
    case TypeTag::F22_1: return "F22_1";
    case TypeTag::G5_0: return "G5_0";
    case TypeTag::G5_1: return "G5_1";
    case TypeTag::G7: return "G7";
    case TypeTag::H: return "H";
    case TypeTag::I0_odd: return "I0_odd";
    case TypeTag::I1_odd: return "I1_odd";
    case TypeTag::I0_even: return "I0_even";
    case TypeTag::I1_even: return "I1_even";
    case TypeTag::NotSimple: return "NotSimple";
    case TypeTag::NotICIS: return "NotICIS";
  }
  return "?";
}

std::string SingularityType::str() const {
  std::ostringstream out;
  switch (tag) {
    case TypeTag::A: out << "A_" << a; break;
    case TypeTag::F: out << "F(" << a << "," << b << ")"; break;
    case TypeTag::H: out << "H(" << a << ")"; break;
    case TypeTag::I0_odd: out << "I0_odd(" << a << ")"; break;
    case TypeTag::I1_odd: out << "I1_odd(" << a << ")"; break;
    case TypeTag::I0_even: out << "I0_even(" << a << ")"; break;
    case TypeTag::I1_even: out << "I1_even(" << a << ")"; break;
    case TypeTag::NotSimple:
      out << "NotSimple(" << reason << (moduli ? ", moduli" : "") << ")";
      break;
    case TypeTag::NotICIS: out << "NotICIS(" << reason << ")"; break;
    default: out << tag_str();
  }
  return out.str();
}

// ------------------------------------------------------------------
// normal forms and published basis tables
// ------------------------------------------------------------------

MapGerm normal_form_of(const SingularityType& t, Field F) {
  std::uint64_t p = F.characteristic();
  auto mono = [&](int n, std::initializer_list<std::pair<Monomial, int>> tt) {
    Poly g(F, n, kExact);
    for (auto& [m, c] : tt) g.add_term(m, F.from_int(c));
    return g;
  };
  Monomial x = Monomial::var(0), y = Monomial::var(1);
  auto xp = [&](int e) { return Monomial::var(0, e); };
  auto yp = [&](int e) { return Monomial::var(1, e); };
  switch (t.tag) {
    case TypeTag::A: {
      if (t.a < 0) throw InvalidParameters("A_k needs k >= 0");
      Poly g(F, 1, kExact);
      g.add_term(Monomial::var(0, (int)t.a + 1), F.one());
      return MapGerm({g});
    }
    case TypeTag::F: {
      if (t.a < 2 || t.b < 2) throw InvalidParameters("F(m,n) needs m,n >= 2");
      return MapGerm({mono(2, {{x * y, 1}}),
                      mono(2, {{xp((int)t.a), 1}, {yp((int)t.b), 1}})});
    }
    case TypeTag::F22_0:
      if (p != 2) throw InvalidParameters("F22_0 only in characteristic 2");
      return MapGerm({mono(2, {{xp(2), 1}}), mono(2, {{yp(2), 1}})});
    case TypeTag::F22_1:
      if (p != 2) throw InvalidParameters("F22_1 only in characteristic 2");
      return MapGerm(
          {mono(2, {{xp(2), 1}}), mono(2, {{x * y, 1}, {yp(2), 1}})});
    case TypeTag::G5_0:
      if (p == 2) throw InvalidParameters("G5_0 needs characteristic != 2");
      return MapGerm({mono(2, {{xp(2), 1}}), mono(2, {{yp(3), 1}})});
    case TypeTag::G5_1:
      if (p != 3) throw InvalidParameters("G5_1 only in characteristic 3");
      return MapGerm(
          {mono(2, {{xp(2), 1}}), mono(2, {{x * yp(2), 1}, {yp(3), 1}})});
    case TypeTag::G7:
      if (p == 2) throw InvalidParameters("G7 needs characteristic != 2");
      return MapGerm({mono(2, {{xp(2), 1}}), mono(2, {{yp(4), 1}})});
    case TypeTag::H:
      if (p == 2) throw InvalidParameters("H needs characteristic != 2");
      if (t.a < 3) throw InvalidParameters("H(n) needs n >= 3");
      return MapGerm({mono(2, {{xp(2), 1}, {yp((int)t.a), 1}}),
                      mono(2, {{x * yp(2), 1}})});
    case TypeTag::I0_odd:
      if (p == 2) throw InvalidParameters("I types need characteristic != 2");
      if (t.a < 4) throw InvalidParameters("I0_odd(t) needs t >= 4");
      return MapGerm({mono(2, {{xp(2), 1}, {yp(3), 1}}),
                      mono(2, {{yp((int)t.a), 1}})});
    case TypeTag::I1_odd:
      if (p == 2) throw InvalidParameters("I types need characteristic != 2");
      if (t.a < 4 || p == 0 || t.a % (long)p != 0)
        throw InvalidParameters("I1_odd(t) needs p | t, t >= 4");
      return MapGerm({mono(2, {{xp(2), 1}, {yp(3), 1}}),
                      mono(2, {{yp((int)t.a), 1}, {x * yp((int)t.a - 1), 1}})});
    case TypeTag::I0_even:
      if (p == 2) throw InvalidParameters("I types need characteristic != 2");
      if (t.a < 3) throw InvalidParameters("I0_even(q) needs q >= 3");
      return MapGerm({mono(2, {{xp(2), 1}, {yp(3), 1}}),
                      mono(2, {{x * yp((int)t.a), 1}})});
    case TypeTag::I1_even:
      if (p == 2) throw InvalidParameters("I types need characteristic != 2");
      if (t.a < 3 || p == 0 || (2 * t.a + 3) % (long)p != 0)
        throw InvalidParameters("I1_even(q) needs p | 2q+3, q >= 3");
      return MapGerm({mono(2, {{xp(2), 1}, {yp(3), 1}}),
                      mono(2, {{x * yp((int)t.a), 1}, {yp((int)t.a + 2), 1}})});
    default:
      throw InvalidParameters("no normal form for " + t.str());
  }
}

std::vector<Coord> expected_t1sec_basis(const SingularityType& t, Field F) {
  std::uint64_t p = F.characteristic();
  std::vector<Coord> out;
  auto add = [&](int comp, int xe, int ye) {
    Monomial m;
    m.e[0] = (std::uint16_t)xe;
    m.e[1] = (std::uint16_t)ye;
    out.push_back({m, comp});
  };
  auto validate = [&] { (void)normal_form_of(t, F); };
  switch (t.tag) {
    case TypeTag::F: {
      validate();
      long m = t.a, n = t.b;
      bool pm = p > 0 && m % (long)p == 0, pn = p > 0 && n % (long)p == 0;
      add(0, 1, 0);
      add(0, 0, 1);
      if (pm && pn) {
        long xtop = m >= n ? m : m - 1;
        long ytop = m >= n ? n - 1 : n;
        for (long i = 1; i <= xtop; ++i) add(1, (int)i, 0);
        for (long j = 1; j <= ytop; ++j) add(1, 0, (int)j);
      } else {
        for (long i = 1; i <= m - 1; ++i) add(1, (int)i, 0);
        for (long j = 1; j <= n - 1; ++j) add(1, 0, (int)j);
      }
      break;
    }
    case TypeTag::G5_0:
      validate();
      add(0, 1, 0);
      add(0, 0, 1);
      add(0, 0, 2);
      add(1, 1, 0);
      add(1, 0, 1);
      add(1, 1, 1);
      add(1, 0, 2);
      if (p == 3) add(1, 1, 2);
      break;
    case TypeTag::G5_1:
      validate();
      add(0, 1, 0);
      add(0, 0, 1);
      add(0, 0, 2);
      add(1, 1, 0);
      add(1, 0, 1);
      add(1, 1, 1);
      add(1, 0, 2);
      break;
    case TypeTag::G7:
      validate();
      add(0, 1, 0);
      add(0, 0, 1);
      add(0, 0, 2);
      add(0, 0, 3);
      add(1, 1, 0);
      add(1, 0, 1);
      add(1, 1, 1);
      add(1, 0, 2);
      add(1, 1, 2);
      add(1, 0, 3);
      break;
    case TypeTag::H: {
      validate();
      long n = t.a;
      add(0, 1, 0);
      for (long i = 1; i <= n - 1; ++i) add(0, 0, (int)i);
      add(1, 1, 0);
      add(1, 0, 1);
      add(1, 1, 1);
      add(1, 0, 2);
      add(1, 0, 3);
      break;
    }
    case TypeTag::I0_odd: {
      validate();
      long tt = t.a;
      bool pt = p > 0 && tt % (long)p == 0;
      add(0, 1, 0);
      add(0, 0, 1);
      add(0, 0, 2);
      for (long i = 1; i <= tt - 1; ++i) add(1, 0, (int)i);
      add(1, 1, 0);
      long top = pt ? tt - 1 : tt - 2;
      for (long i = 1; i <= top; ++i) add(1, 1, (int)i);
      break;
    }
    case TypeTag::I1_odd: {
      validate();
      long tt = t.a;
      add(0, 1, 0);
      add(0, 0, 1);
      add(0, 0, 2);
      for (long i = 1; i <= tt - 1; ++i) add(1, 0, (int)i);
      add(1, 1, 0);
      for (long i = 1; i <= tt - 2; ++i) add(1, 1, (int)i);
      break;
    }
    case TypeTag::I0_even: {
      validate();
      long q = t.a;
      bool pq = p > 0 && (2 * q + 3) % (long)p == 0;
      add(0, 1, 0);
      add(0, 0, 1);
      add(0, 0, 2);
      add(1, 1, 0);
      long ytop = pq ? q + 2 : q + 1;
      for (long i = 1; i <= ytop; ++i) add(1, 0, (int)i);
      for (long i = 1; i <= q - 1; ++i) add(1, 1, (int)i);
      break;
    }
    case TypeTag::I1_even: {
      validate();
      long q = t.a;
      add(0, 1, 0);
      add(0, 0, 1);
      add(0, 0, 2);
      add(1, 1, 0);
      for (long i = 1; i <= q + 1; ++i) add(1, 0, (int)i);
      for (long i = 1; i <= q - 1; ++i) add(1, 1, (int)i);
      break;
    }
    case TypeTag::F22_0:
      validate();
      add(0, 1, 0);
      add(0, 0, 1);
      add(0, 1, 1);
      add(1, 1, 0);
      add(1, 0, 1);
      add(1, 1, 1);
      break;
    case TypeTag::F22_1:
      validate();
      add(0, 1, 0);
      add(0, 0, 1);
      add(0, 0, 2);
      break;
    default:
      throw InvalidParameters("no published basis for " + t.str());
  }
  std::sort(out.begin(), out.end(),
            [](const Coord& a, const Coord& b) { return CoordLess()(a, b); });
  return out;
}

std::vector<SingularityType> table_types(Field F, long max_param) {
  std::uint64_t p = F.characteristic();
  std::vector<SingularityType> out;
  for (long m = 2; m <= max_param; ++m)
    for (long n = m; n <= max_param; ++n) out.push_back(SingularityType::F(m, n));
  if (p == 2) {
    out.push_back(SingularityType::simple_tag(TypeTag::F22_0));
    out.push_back(SingularityType::simple_tag(TypeTag::F22_1));
    return out;
  }
  out.push_back(SingularityType::simple_tag(TypeTag::G5_0));
  if (p == 3) out.push_back(SingularityType::simple_tag(TypeTag::G5_1));
  out.push_back(SingularityType::simple_tag(TypeTag::G7));
  for (long n = 3; n <= max_param; ++n)
    out.push_back(SingularityType::simple_tag(TypeTag::H, n));
  for (long t = 4; t <= max_param; ++t) {
    out.push_back(SingularityType::simple_tag(TypeTag::I0_odd, t));
    if (p > 0 && t % (long)p == 0)
      out.push_back(SingularityType::simple_tag(TypeTag::I1_odd, t));
  }
  for (long q = 3; q <= max_param; ++q) {
    out.push_back(SingularityType::simple_tag(TypeTag::I0_even, q));
    if (p > 0 && (2 * q + 3) % (long)p == 0)
      out.push_back(SingularityType::simple_tag(TypeTag::I1_even, q));
  }
  return out;
}

// ------------------------------------------------------------------
// order-1 elimination
// ------------------------------------------------------------------

MapGerm reduce_order_one(const MapGerm& f, int precision) {
  Field F = f.field();
  int m = f.size(), n = f.nvars();
  int ci = -1, vj = -1;
  for (int i = 0; i < m && ci < 0; ++i) {
    if (f[i].order() != 1) continue;
    for (int j = 0; j < n; ++j)
      if (!f[i].coeff(Monomial::var(j)).is_zero()) {
        ci = i;
        vj = j;
        break;
      }
  }
  if (ci < 0) throw InvalidParameters("no order-1 component");

  // solve f_ci = 0 for x_vj by Newton; the solution has no x_vj dependence
  Poly S(F, n, precision);
  const Poly& g = f[ci].jet(precision);
  Poly dg = g.derivative(vj);
  for (int guard = 0; guard < precision + 4; ++guard) {
    std::vector<Poly> images = identity_subst(F, n, precision);
    images[vj] = S;
    Poly R = g.substitute(images, precision);
    if (R.is_zero()) break;
    if (R.order() > precision) break;
    Poly D = dg.substitute(images, precision);
    S -= (R * D.series_inverse(precision)).jet(precision);
  }

  std::vector<Poly> images = identity_subst(F, n, precision);
  images[vj] = S;
  std::vector<Poly> reduced;
  for (int i = 0; i < m; ++i) {
    if (i == ci) continue;
    Poly h = f[i].jet(precision).substitute(images, precision);
    // relabel: drop variable vj
    Poly hh(F, std::max(n - 1, 1), precision);
    for (auto& [mm, c] : h.terms()) {
      Monomial nm;
      int t = 0;
      for (int v = 0; v < n; ++v) {
        if (v == vj) continue;
        nm.e[t++] = mm.e[v];
      }
      if (mm.e[vj] != 0) throw Error("elimination left a solved variable");
      hh.add_term(nm, c);
    }
    reduced.push_back(hh);
  }
  if (reduced.empty()) {
    // m = 1 smooth germ; callers handle before this point
    throw InvalidParameters("cannot eliminate the last component");
  }
  return MapGerm(std::move(reduced));
}

// ------------------------------------------------------------------
// screens
// ------------------------------------------------------------------

std::optional<SingularityType> nonsimple_screen(const MapGerm& f) {
  int n = f.nvars();
  long ord = f.order();
  if (n >= 2 && ord >= 3)
    return SingularityType::not_simple("order >= 3 in >= 2 variables");
  if (n >= 3 && ord == 2)
    return SingularityType::not_simple("order 2 in >= 3 variables");
  if (f.field().characteristic() == 2 && n == 2 && f.size() == 2 && ord == 2) {
    Quad q1 = quad_of(f[0]), q2 = quad_of(f[1]);
    const Quad& rep = q1.zero() ? q2 : q1;
    if (!rep.zero() && pencil_dependent(q1, q2) && rep.B.is_zero())
      return SingularityType::not_simple(
          "characteristic 2: square 2-jet with cubic second component");
  }
  return std::nullopt;
}

// ------------------------------------------------------------------
// the classifier
// ------------------------------------------------------------------

namespace {

struct Ctx {
  Field F;
  std::uint64_t p;
  int prec;
  int k_cap;
  ClassifyReport* rep;
  ReductionTrace* tr;

  void chain(std::string s) { rep->case_chain.push_back(std::move(s)); }
};

// when the second component is y^t times a unit (B empty or t <= q), scale
// the unit away so cur carries (x^2 + C, y^t) exactly
void normalize_second_to_yt(Ctx& ctx, MapGerm& cur, long t) {
  Field F = ctx.F;
  // every term of cur[1] is divisible by y^t here, so u is a unit
  Poly u = shift_down_y(cur[1], t);
  auto um = identity_unit(F, 2, 2, ctx.prec);
  um[1][1] = u.series_inverse(ctx.prec);
  cur = apply_unit(cur, um, ctx.prec);
  ctx.tr->record_unit(um, "scale the second component to y^t");
}

// endgame for (x^2 + alpha y^s, y^t); when tail_unit is set the second
// component of cur is y^t times a unit and the witness is completed
SingularityType dispatch_bt(Ctx& ctx, MapGerm& cur, const DegenerateShape& sh,
                            long t, bool tail_unit) {
  Field F = ctx.F;
  int alpha = sh.alpha;
  long s = sh.s;
  if (tail_unit) normalize_second_to_yt(ctx, cur, t);
  if (alpha == 0 || t <= s) {
    ctx.chain("pure power: (x^2, y^t)");
    if (tail_unit && alpha == 1) {
      // <x^2 + C, y^t> = <x^2, y^t> since t <= s = ord C
      auto um = identity_unit(F, 2, 2, ctx.prec);
      um[0][1] = -shift_down_y(sh.c_of_y, t);
      cur = apply_unit(cur, um, ctx.prec);
      ctx.tr->record_unit(um, "reduce C against y^t");
    }
    if (t == 2) {
      if (tail_unit) {
        // (x^2, y^2) to (xy, x^2 + y^2): rotate and remix (p != 2)
        std::vector<Poly> sub = identity_subst(F, 2, ctx.prec);
        Poly px(F, 2, ctx.prec), py(F, 2, ctx.prec);
        px.add_term(Monomial::var(0), F.one());
        px.add_term(Monomial::var(1), F.one());
        py.add_term(Monomial::var(0), F.one());
        py.add_term(Monomial::var(1), -F.one());
        sub[0] = px;
        sub[1] = py;
        cur = cur.substitute(sub, ctx.prec);
        ctx.tr->record_subst(sub, "rotate to the hyperbolic frame");
        FieldElem half = F.from_int(2).inv();
        FieldElem quarter = F.from_int(4).inv();
        auto um = identity_unit(F, 2, 2, ctx.prec);
        um[0][0] = Poly::constant(F, 2, quarter, ctx.prec);
        um[0][1] = Poly::constant(F, 2, -quarter, ctx.prec);
        um[1][0] = Poly::constant(F, 2, half, ctx.prec);
        um[1][1] = Poly::constant(F, 2, half, ctx.prec);
        cur = apply_unit(cur, um, ctx.prec);
        ctx.tr->record_unit(um, "remix to (xy, x^2 + y^2)");
      }
      return SingularityType::F(2, 2);
    }
    if (t == 3) return SingularityType::simple_tag(TypeTag::G5_0);
    if (t == 4) return SingularityType::simple_tag(TypeTag::G7);
    return SingularityType::not_simple("pure power y^t with t >= 5");
  }
  ctx.chain("pure power over x^2+y^s, t > s");
  if (s == 3) return SingularityType::simple_tag(TypeTag::I0_odd, t);
  return SingularityType::not_simple("t > s >= 4");
}

// concrete reduction of (x^2 + C, A + x B) with ord B = 2 to
// (x^2 + G(y), x y^2); returns ord G
long h_transform(Ctx& ctx, MapGerm& cur, const DegenerateShape& sh) {
  Field F = ctx.F;
  int prec = ctx.prec;
  long t = sh.t;
  Poly atil = shift_down_y(sh.a_series, t);
  Poly btil = shift_down_y(sh.b_series, 2);
  Poly btil_inv = btil.series_inverse(prec);
  // x -> Btilde^{-1} (x - Atilde y^{t-2})
  Poly yt2(F, 2, prec);
  yt2.add_term(Monomial::var(1, (int)t - 2), F.one());
  std::vector<Poly> sub = identity_subst(F, 2, prec);
  sub[0] = (btil_inv * (Poly::variable(F, 2, 0, prec) - (atil * yt2).jet(prec)))
               .jet(prec);
  cur = cur.substitute(sub, prec);
  ctx.tr->record_subst(sub, "absorb A into the x coordinate");
  // scale f1 by Btilde^2
  auto u = identity_unit(F, 2, 2, prec);
  u[0][0] = (btil * btil).jet(prec);
  cur = apply_unit(cur, u, prec);
  ctx.tr->record_unit(u, "rescale f1");
  // kill the cross term with 2 Atilde y^{t-4} * f2 (f2 = x y^2 exactly)
  Poly yt4(F, 2, prec);
  yt4.add_term(Monomial::var(1, (int)t - 4), F.one());
  auto u2 = identity_unit(F, 2, 2, prec);
  u2[0][1] = (Poly::constant(F, 2, F.from_int(2), prec) * atil * yt4).jet(prec);
  cur = apply_unit(cur, u2, prec);
  ctx.tr->record_unit(u2, "kill the cross term");
  Poly G(F, 2, prec);
  for (auto& [m, c] : cur[0].terms())
    if (m.e[0] == 0) G.add_term(m, c);
  if (G.is_zero()) throw Error("h_transform produced a non-CI germ");
  return G.order();
}

// normalize (x^2 + G(y), x y^2) to (x^2 + y^m, x y^2) when the unit square
// root exists; otherwise leave the germ and mark the witness incomplete
void finish_h_form(Ctx& ctx, MapGerm& cur, long m) {
  Field F = ctx.F;
  int prec = ctx.prec;
  Poly G(F, 2, prec);
  for (auto& [mm, c] : cur[0].terms())
    if (mm.e[0] == 0) G.add_term(mm, c);
  Poly g_unit = shift_down_y(G, m);
  bool already_one =
      g_unit.terms().size() == 1 && g_unit.constant_term().is_one();
  if (!already_one) {
    auto root = series_sqrt(g_unit, prec);
    if (!root) {
      ctx.tr->constructive = false;
      ctx.tr->note = "needs-extension: square root of the H unit";
      return;
    }
    std::vector<Poly> sub = identity_subst(F, 2, prec);
    sub[0] = (Poly::variable(F, 2, 0, prec) * *root).jet(prec);
    cur = cur.substitute(sub, prec);
    ctx.tr->record_subst(sub, "normalize the H unit");
    auto um = identity_unit(F, 2, 2, prec);
    um[0][0] = g_unit.series_inverse(prec);
    um[1][1] = root->series_inverse(prec);
    cur = apply_unit(cur, um, prec);
    ctx.tr->record_unit(um, "rescale to the H form");
  }
}

SingularityType classify_two_var(Ctx& ctx, MapGerm cur);

SingularityType f_type_path(Ctx& ctx, MapGerm& cur) {
  long dimRI = dim_ci_quotient(cur, ctx.k_cap);
  FReduction fr = reduce_nondegenerate(cur, dimRI, ctx.prec);
  for (auto& s : fr.trace.steps) ctx.tr->steps.push_back(s);
  if (!fr.trace.constructive) {
    ctx.tr->constructive = false;
    ctx.tr->note = fr.trace.note;
  }
  cur = fr.trace.result;
  ctx.chain("nondegenerate 2-jet: F type");
  return SingularityType::F(fr.n, fr.m);
}

// characteristic != 2 tree for two components, two variables, order 2
SingularityType classify_degenerate(Ctx& ctx, MapGerm& cur) {
  for (int round = 0; round < 6; ++round) {
    Quad q1 = quad_of(cur[0]), q2 = quad_of(cur[1]);
    if (quad_nondegenerate(q1, ctx.p) || quad_nondegenerate(q2, ctx.p))
      return f_type_path(ctx, cur);

    // order the components: f1 must have order 2
    if (q1.zero()) {
      auto u = identity_unit(ctx.F, 2, 2, ctx.prec);
      std::swap(u[0], u[1]);
      cur = apply_unit(cur, u, ctx.prec);
      ctx.tr->record_unit(u, "swap components");
    }

    DegenerateShape sh = reduce_degenerate_shape(cur, ctx.prec);
    for (auto& s : sh.trace.steps) ctx.tr->steps.push_back(s);
    if (!sh.trace.constructive) {
      ctx.tr->constructive = false;
      ctx.tr->note = sh.trace.note;
    }
    cur = sh.current;
    long s = sh.s, t = sh.t, q = sh.q;
    ctx.chain("degenerate shape: s=" + (s >= kInfinity ? "inf" : std::to_string(s)) +
              " t=" + (t >= kInfinity ? "inf" : std::to_string(t)) +
              " q=" + (q >= kInfinity ? "inf" : std::to_string(q)));

    // the not-simple region s >= 4, t >= 5, q >= 3 (alpha = 0 counts s as
    // infinite; it deforms into the alpha = 1 family)
    if (s >= 4 && t >= 5 && q >= 3) {
      bool moduli = sh.alpha == 1 && t < kInfinity && q < kInfinity &&
                    2 * t - 2 * q - s == 0;
      ctx.chain("not simple: s>=4, t>=5, q>=3");
      return SingularityType::not_simple("s >= 4, t >= 5 and q >= 3", moduli);
    }

    if (t >= kInfinity) {  // A empty
      if (sh.alpha == 0)
        return SingularityType::not_icis("x^2 shares a factor with x B(y)");
      if (q >= 2) {
        // f2 = x y^q times a unit in y: scale the unit away
        Poly btil = shift_down_y(sh.b_series, q);
        auto um = identity_unit(ctx.F, 2, 2, ctx.prec);
        um[1][1] = btil.series_inverse(ctx.prec);
        cur = apply_unit(cur, um, ctx.prec);
        ctx.tr->record_unit(um, "scale the second component to x*y^q");
      }
      if (q == 2) {
        ctx.chain("A empty, q = 2: H type");
        return SingularityType::simple_tag(TypeTag::H, s);
      }
      if (q >= 3) {
        ctx.chain("A empty, q >= 3, s = 3: I0_even");
        return SingularityType::simple_tag(TypeTag::I0_even, q);
      }
      // q = 1: the reduced second component has a nondegenerate 2-jet
      ctx.chain("q = 1: reroute to the nondegenerate path");
      continue;
    }

    if (q >= kInfinity || t <= q)  // B empty, or A dominates
      return dispatch_bt(ctx, cur, sh, t, true);

    // both present, t > q
    if (q == 1) {
      ctx.chain("q = 1: reroute to the nondegenerate path");
      continue;
    }
    if (t == q + 1) {
      bool p_div_t = ctx.p > 0 && t % (long)ctx.p == 0;
      if (!p_div_t) {
        ctx.chain("t = q+1, p does not divide t: A dominates");
        return dispatch_bt(ctx, cur, sh, t, false);
      }
      ctx.chain("t = q+1, p | t");
      if (t == 3) {
        // p = 3; alpha and s irrelevant for the verdict
        return SingularityType::simple_tag(TypeTag::G5_1);
      }
      if (sh.alpha == 1 && s == 3)
        return SingularityType::simple_tag(TypeTag::I1_odd, t);
      // remaining combinations are excluded by the not-simple region
      return SingularityType::not_simple("t = q+1, p | t outside the table");
    }
    // t > q + 1
    if (q == 2) {
      ctx.chain("t > q+1, q = 2: reduce to (x^2 + G, x y^2)");
      long m = h_transform(ctx, cur, sh);
      finish_h_form(ctx, cur, m);
      return SingularityType::simple_tag(TypeTag::H, m);
    }
    // q >= 3 and the not-simple region did not fire, so s = 3
    if (t >= q + 3) {
      ctx.chain("s = 3, t >= q+3: tail absorbs into x y^q");
      if (sh.unit_normalized) {
        // subtract (A / y^3) (x^2 + y^3) from f2: the pure tail A trades
        // for an x-multiple, leaving x times a unit multiple of y^q
        Poly atil = shift_down_y(sh.a_series, 3);
        auto um = identity_unit(ctx.F, 2, 2, ctx.prec);
        um[1][0] = -atil;
        cur = apply_unit(cur, um, ctx.prec);
        ctx.tr->record_unit(um, "absorb the tail into the first component");
        // cur[1] = x W with W = y^q (Btilde - Atilde x y^{t-q-3})
        Poly w(ctx.F, 2, ctx.prec);
        for (auto& [mm, cc] : cur[1].terms()) {
          Monomial nm = mm;
          nm.e[0] -= 1;
          nm.e[1] -= (std::uint16_t)q;
          w.add_term(nm, cc);
        }
        auto um2 = identity_unit(ctx.F, 2, 2, ctx.prec);
        um2[1][1] = w.series_inverse(ctx.prec);
        cur = apply_unit(cur, um2, ctx.prec);
        ctx.tr->record_unit(um2, "scale the second component to x*y^q");
      }
      return SingularityType::simple_tag(TypeTag::I0_even, q);
    }
    // t = q + 2
    bool pdiv = ctx.p > 0 && (2 * q + 3) % (long)ctx.p == 0;
    ctx.chain("s = 3, t = q+2: I_even split on p | 2q+3");
    return SingularityType::simple_tag(pdiv ? TypeTag::I1_even : TypeTag::I0_even,
                                       q);
  }
  throw Error("degenerate dispatch did not terminate");
}

// characteristic 2 tree
SingularityType classify_char2(Ctx& ctx, MapGerm& cur) {
  Field F = ctx.F;
  int prec = ctx.prec;
  Quad q1 = quad_of(cur[0]), q2 = quad_of(cur[1]);
  if (!q1.B.is_zero() || !q2.B.is_zero()) return f_type_path(ctx, cur);

  // both 2-jets are perfect squares; put an order-2 component first
  if (q1.zero()) {
    auto u = identity_unit(F, 2, 2, prec);
    std::swap(u[0], u[1]);
    cur = apply_unit(cur, u, prec);
    ctx.tr->record_unit(u, "swap components");
    std::swap(q1, q2);
  }
  // linear change sending sqrt(A) x + sqrt(C) y to x
  {
    FieldElem A = q1.A, C = q1.C;
    std::vector<Poly> sub = identity_subst(F, 2, prec);
    if (A.is_zero()) {
      std::swap(sub[0], sub[1]);
      cur = cur.substitute(sub, prec);
      ctx.tr->record_subst(sub, "swap variables");
      std::swap(A, C);
      sub = identity_subst(F, 2, prec);
    }
    FieldElem ra = char2_sqrt(A);
    if (!C.is_zero()) {
      Poly im(F, 2, prec);
      im.add_term(Monomial::var(0), ra.inv());
      im.add_term(Monomial::var(1), char2_sqrt(C) / ra);
      sub[0] = im;
      cur = cur.substitute(sub, prec);
      ctx.tr->record_subst(sub, "collapse the square 2-jet");
    } else if (!ra.is_one()) {
      sub[0] = sub[0].scaled(ra.inv());
      cur = cur.substitute(sub, prec);
      ctx.tr->record_subst(sub, "normalize the square 2-jet");
    }
  }

  // reduce the x^2 part of f2
  FieldElem a = cur[1].coeff(Monomial::var(0, 2));
  if (!a.is_zero()) {
    auto u = identity_unit(F, 2, 2, prec);
    u[1][0] = Poly::constant(F, 2, -a, prec);
    cur = apply_unit(cur, u, prec);
    ctx.tr->record_unit(u, "reduce the x^2 term of f2");
  }
  FieldElem b = cur[1].coeff(Monomial::var(0) * Monomial::var(1));
  FieldElem c = cur[1].coeff(Monomial::var(1, 2));

  if (b.is_zero() && c.is_zero()) {
    ctx.chain("characteristic 2: f2 cubic modulo f1");
    return SingularityType::not_simple(
        "characteristic 2: square 2-jet with cubic second component");
  }
  if (!b.is_zero() && c.is_zero()) {
    // j2(f2) = b xy is hyperbolic: swap and rerun the F path
    auto u = identity_unit(F, 2, 2, prec);
    std::swap(u[0], u[1]);
    cur = apply_unit(cur, u, prec);
    ctx.tr->record_unit(u, "swap components");
    ctx.chain("characteristic 2: cross term after reduction");
    return f_type_path(ctx, cur);
  }

  // F22 cases via the jet-absorption criterion
  SingularityType target;
  MapGerm base(cur);
  if (b.is_zero()) {
    auto u = identity_unit(F, 2, 2, prec);
    u[1][1] = Poly::constant(F, 2, c.inv(), prec);
    cur = apply_unit(cur, u, prec);
    ctx.tr->record_unit(u, "scale f2");
    target = SingularityType::simple_tag(TypeTag::F22_0);
    base = normal_form_of(target, F).jet(prec);
  } else {
    // x -> (c/b) x scales b xy + c y^2 to c (xy + y^2)
    std::vector<Poly> sub = identity_subst(F, 2, prec);
    sub[0] = sub[0].scaled(c / b);
    cur = cur.substitute(sub, prec);
    ctx.tr->record_subst(sub, "match the cross coefficient");
    auto u = identity_unit(F, 2, 2, prec);
    u[0][0] = Poly::constant(F, 2, (b / c) * (b / c), prec);
    u[1][1] = Poly::constant(F, 2, c.inv(), prec);
    cur = apply_unit(cur, u, prec);
    ctx.tr->record_unit(u, "scale components");
    target = SingularityType::simple_tag(TypeTag::F22_1);
    base = normal_form_of(target, F).jet(prec);
  }
  // absorption certificate: T^1_nu(base) = 0 for nu >= 1 and the tail has
  // positive weighted order
  WeightSystem ws{{2, 2}, {1, 1}};
  std::vector<Poly> tail;
  for (int i = 0; i < 2; ++i) tail.push_back(cur[i] - base[i]);
  MapGerm h(std::move(tail));
  if (!merle_absorb(base, h, ws, ctx.k_cap))
    throw Error("absorption certificate failed for the F22 reduction");
  ctx.tr->record_absorb("absorb the weighted tail into " + target.str());
  ctx.chain("characteristic 2: " + target.str() + " by tail absorption");
  cur = base;
  return target;
}

SingularityType classify_two_var(Ctx& ctx, MapGerm cur) {
  SingularityType t = ctx.p == 2 ? classify_char2(ctx, cur)
                                 : classify_degenerate(ctx, cur);
  ctx.tr->result = cur;
  return t;
}

}  // namespace

ClassifyReport classify_icis(const MapGerm& f, const ClassifyOptions& opts) {
  ClassifyReport rep;
  Field F = f.field();
  rep.characteristic = F.characteristic();
  rep.extension = F.extension_degree();

  if (f.size() != f.nvars())
    throw InvalidParameters("classification needs m components in m variables");
  if (!f.in_maximal_ideal()) {
    rep.type = SingularityType::not_icis("component with nonzero constant term");
    return rep;
  }

  auto icis = is_icis(f, opts.k_cap);
  if (!icis.icis) {
    rep.type = SingularityType::not_icis(icis.reason);
    return rep;
  }

  auto tau = tjurina(f, opts.k_cap);
  auto tausec = tjurina_sec(f, opts.k_cap);
  if (!tau.finite || !tausec.finite)
    throw CapExceeded("ICIS with tau beyond the cap", tau.detail.profile);
  rep.tau = tau.value;
  rep.tau_sec = tausec.value;
  long ord = f.order();
  rep.determinacy = 2 * tau.value - ord + 2;

  int input_prec = f.precision();
  if (input_prec < rep.determinacy)
    throw PrecisionLoss("input precision " + std::to_string(input_prec) +
                        " below the determinacy bound " +
                        std::to_string(rep.determinacy) +
                        "; re-run with a higher precision");
  int prec = (int)std::min<long>(input_prec, rep.determinacy + 2);

  MapGerm cur = f.jet(prec);
  Ctx ctx{F, F.characteristic(), prec, opts.k_cap, &rep, &rep.trace};

  // order-1 components: implicit function theorem, one variable at a time
  bool eliminated = false;
  while (cur.size() >= 1) {
    bool has1 = false;
    for (int i = 0; i < cur.size(); ++i)
      if (cur[i].order() == 1) has1 = true;
    if (!has1) break;
    if (cur.size() == 1) {
      rep.type = SingularityType::A_k(0);
      rep.witness = WitnessStatus::None;
      ctx.chain("smooth after elimination");
      return rep;
    }
    cur = reduce_order_one(cur, prec);
    eliminated = true;
    ctx.chain("order-1 component eliminated");
  }

  if (cur.size() == 1) {
    long k = cur[0].order() - 1;
    rep.type = SingularityType::A_k(k);
    rep.witness = WitnessStatus::None;
    ctx.chain("hypersurface in one variable: A_" + std::to_string(k));
    return rep;
  }

  if (auto screened = nonsimple_screen(cur)) {
    rep.type = *screened;
    rep.witness = WitnessStatus::None;
    ctx.chain("screen: " + screened->reason);
    return rep;
  }

  rep.type = classify_two_var(ctx, cur);

  if (!rep.type.simple()) {
    rep.witness = WitnessStatus::None;
  } else if (eliminated) {
    rep.witness = WitnessStatus::None;
  } else if (!rep.trace.constructive) {
    bool absorbed = false;
    for (auto& s : rep.trace.steps)
      if (s.kind == TraceStep::Kind::AbsorbTail) absorbed = true;
    rep.witness = absorbed && rep.trace.note.empty()
                      ? WitnessStatus::Partial
                      : WitnessStatus::NeedsExtension;
  } else {
    // constructive trace: full when it lands on the normal form
    try {
      MapGerm nf = normal_form_of(rep.type, F).jet(prec);
      rep.witness = rep.trace.result.equals_to_degree(nf, prec)
                        ? WitnessStatus::Full
                        : WitnessStatus::Partial;
    } catch (const Error&) {
      rep.witness = WitnessStatus::Partial;
    }
  }
  return rep;
}

}  // namespace icis
