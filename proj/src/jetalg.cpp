#include "icis/jetalg.hpp"

#include <algorithm>
#include <cassert>

namespace icis {

namespace {

long binom(long n, long k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (long i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

// number of monomials in n variables of total degree exactly d
long monomials_of_degree(int n, int d) { return binom(d + n - 1, n - 1); }

void enumerate_monomials(int nvars, int deg, Monomial cur, int var,
                         std::vector<Monomial>& out) {
  if (var == nvars - 1) {
    cur.e[var] = (std::uint16_t)deg;
    out.push_back(cur);
    return;
  }
  for (int d = 0; d <= deg; ++d) {
    cur.e[var] = (std::uint16_t)d;
    enumerate_monomials(nvars, deg - d, cur, var + 1, out);
  }
}

std::vector<Monomial> monomials_up_to(int nvars, int deg) {
  std::vector<Monomial> out;
  for (int d = 0; d <= deg; ++d)
    enumerate_monomials(nvars, d, Monomial::one(), 0, out);
  return out;
}

}  // namespace

SparseVec germ_to_sparse(const MapGerm& g, int max_deg) {
  SparseVec v;
  for (int i = 0; i < g.size(); ++i)
    for (auto& [m, c] : g[i].terms())
      if (m.total() <= max_deg) v[{m, i}] = c;
  return v;
}

TruncatedSubmodule::TruncatedSubmodule(Field f, int m_rank, int nvars,
                                       int precision)
    : field_(f), m_(m_rank), nvars_(nvars), prec_(precision) {}

SparseVec TruncatedSubmodule::reduce(SparseVec v) const {
  while (!v.empty()) {
    const Coord& lead = v.begin()->first;
    auto it = rows_.find(lead);
    if (it == rows_.end()) return v;
    FieldElem c = v.begin()->second;  // row is normalized, pivot = 1
    for (auto& [rc, rv] : it->second) {
      auto ve = v.find(rc);
      if (ve == v.end()) {
        FieldElem nv = -(c * rv);
        if (!nv.is_zero()) v.emplace(rc, nv);
      } else {
        ve->second = ve->second - c * rv;
        if (ve->second.is_zero()) v.erase(ve);
      }
    }
  }
  return v;
}

bool TruncatedSubmodule::add_vector(SparseVec v) {
  v = reduce(std::move(v));
  if (v.empty()) return false;
  FieldElem inv = v.begin()->second.inv();
  for (auto& [c, val] : v) val = val * inv;
  Coord pivot = v.begin()->first;
  rows_.emplace(pivot, std::move(v));
  return true;
}

void TruncatedSubmodule::add_generator_closure(const MapGerm& g) {
  long o = g.order();
  if (o >= kInfinity) return;
  if (g.precision() < prec_)
    throw PrecisionLoss("generator precision below working precision");
  auto mons = monomials_up_to(nvars_, prec_ - (int)o);
  for (auto& b : mons) {
    SparseVec v;
    int bd = b.total();
    for (int i = 0; i < g.size(); ++i)
      for (auto& [m, c] : g[i].terms()) {
        if (m.total() + bd > prec_) continue;
        v[{m * b, i}] = c;
      }
    add_vector(std::move(v));
  }
}

std::vector<Coord> TruncatedSubmodule::complement(int lo, int hi) const {
  std::vector<Coord> out;
  auto mons = monomials_up_to(nvars_, hi);
  for (auto& m : mons) {
    if (m.total() < lo) continue;
    for (int comp = 0; comp < m_; ++comp) {
      Coord c{m, comp};
      if (!is_pivot(c)) out.push_back(c);
    }
  }
  std::sort(out.begin(), out.end(), [](const Coord& a, const Coord& b) {
    return CoordLess()(a, b);
  });
  return out;
}

bool TruncatedSubmodule::degree_saturated(int k) const {
  std::vector<Monomial> mons;
  enumerate_monomials(nvars_, k, Monomial::one(), 0, mons);
  for (auto& m : mons)
    for (int comp = 0; comp < m_; ++comp)
      if (!is_pivot({m, comp})) return false;
  return true;
}

QuotientResult quotient_dim(const std::vector<MapGerm>& gens, int m_rank,
                            const QuotientOptions& opts) {
  if (gens.empty()) throw InvalidParameters("no generators");
  Field f = gens[0].field();
  int nvars = gens[0].nvars();
  long max_ord = 0;
  int gen_prec = kExact;
  for (auto& g : gens) {
    long o = g.order();
    if (o < kInfinity) max_ord = std::max(max_ord, o);
    gen_prec = std::min(gen_prec, g.precision());
  }
  int low_deg = opts.mod_maximal ? 1 : 0;
  int max_allowed = opts.k_cap + 1;
  if (gen_prec < max_allowed) max_allowed = gen_prec;
  if (max_allowed < 2)
    throw PrecisionLoss("quotient_dim: generators carry no usable precision");
  int prec = std::max<int>(opts.min_precision, (int)max_ord + 2);
  prec = std::min(prec, max_allowed);

  while (true) {
    TruncatedSubmodule sub(f, m_rank, nvars, prec);
    for (auto& g : gens) sub.add_generator_closure(g);

    QuotientResult res;
    long running = 0;
    for (int k = 0; k <= prec - 1; ++k) {
      std::vector<Monomial> mons;
      enumerate_monomials(nvars, k, Monomial::one(), 0, mons);
      long free_here = 0;
      if (k >= low_deg) {
        for (auto& m : mons)
          for (int comp = 0; comp < m_rank; ++comp)
            if (!sub.is_pivot({m, comp})) ++free_here;
      }
      running += free_here;
      res.profile.push_back(running);
      if (k >= 1 && free_here == 0 && sub.degree_saturated(k)) {
        res.finite = true;
        res.dim = running;
        res.stabilized_at = k;
        res.basis = sub.complement(low_deg, k);
        return res;
      }
    }
    if (prec >= max_allowed) {
      if (max_allowed < opts.k_cap + 1)
        throw PrecisionLoss(
            "quotient_dim: no stabilization within the input precision " +
            std::to_string(gen_prec));
      res.finite = false;
      res.stabilized_at = opts.k_cap;
      return res;
    }
    prec = std::min(2 * prec, max_allowed);
  }
}

std::vector<MapGerm> tjurina_generators(const MapGerm& f) {
  int m = f.size(), n = f.nvars();
  Field F = f.field();
  std::vector<MapGerm> gens;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      std::vector<Poly> comps(m, Poly::zero(F, n, f[i].precision()));
      comps[j] = f[i];
      gens.emplace_back(std::move(comps));
    }
  auto jac = jacobian(f);
  for (int v = 0; v < n; ++v) {
    std::vector<Poly> col;
    for (int i = 0; i < m; ++i) col.push_back(jac[i][v]);
    gens.emplace_back(std::move(col));
  }
  return gens;
}

std::vector<MapGerm> tangent_image_generators(const MapGerm& f) {
  int m = f.size(), n = f.nvars();
  Field F = f.field();
  std::vector<MapGerm> gens;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      std::vector<Poly> comps(m, Poly::zero(F, n, f[i].precision()));
      comps[j] = f[i];
      gens.emplace_back(std::move(comps));
    }
  auto jac = jacobian(f);
  for (int v = 0; v < n; ++v)
    for (int t = 0; t < n; ++t) {
      Poly xt = Poly::variable(F, n, t, kExact);
      std::vector<Poly> col;
      for (int i = 0; i < m; ++i) col.push_back(jac[i][v] * xt);
      gens.emplace_back(std::move(col));
    }
  return gens;
}

TauResult tjurina(const MapGerm& f, int k_cap) {
  QuotientOptions opts;
  opts.k_cap = k_cap;
  auto q = quotient_dim(tjurina_generators(f), f.size(), opts);
  return TauResult{q.finite, q.finite ? q.dim : -1, std::move(q)};
}

TauResult tjurina_sec(const MapGerm& f, int k_cap) {
  QuotientOptions opts;
  opts.k_cap = k_cap;
  opts.mod_maximal = true;
  auto q = quotient_dim(tangent_image_generators(f), f.size(), opts);
  return TauResult{q.finite, q.finite ? q.dim : -1, std::move(q)};
}

std::vector<Coord> t1sec_basis(const MapGerm& f, int k_cap) {
  auto r = tjurina_sec(f, k_cap);
  if (!r.finite) throw CapExceeded("tjurina_sec not finite", r.detail.profile);
  return r.detail.basis;
}

std::map<long, long> t1_graded_dims(const MapGerm& f, const WeightSystem& ws,
                                    long lo, long hi, int k_cap) {
  if (!is_quasi_homogeneous(f, ws))
    throw NotQuasiHomogeneous("germ is not quasi-homogeneous of given type");
  auto t = tjurina(f, k_cap);
  if (!t.finite) throw CapExceeded("tjurina not finite", t.detail.profile);
  std::map<long, long> dims;
  for (long nu = lo; nu <= hi; ++nu) dims[nu] = 0;
  for (auto& c : t.detail.basis) {
    long nu = c.m.weighted(ws.weights) - ws.degrees[c.comp];
    if (nu >= lo && nu <= hi) ++dims[nu];
  }
  return dims;
}

long t1_top_weight(const MapGerm& f, const WeightSystem& ws, int k_cap) {
  if (!is_quasi_homogeneous(f, ws))
    throw NotQuasiHomogeneous("germ is not quasi-homogeneous of given type");
  auto t = tjurina(f, k_cap);
  if (!t.finite) throw CapExceeded("tjurina not finite", t.detail.profile);
  long top = -kInfinity;
  for (auto& c : t.detail.basis) {
    long nu = c.m.weighted(ws.weights) - ws.degrees[c.comp];
    top = std::max(top, nu);
  }
  return top;
}

IcisResult is_icis(const MapGerm& f, int k_cap) {
  IcisResult out;
  int m = f.size(), n = f.nvars();
  if (m > n) {
    out.reason = "more components than variables";
    return out;
  }
  if (!f.in_maximal_ideal()) {
    out.reason = "component with nonzero constant term";
    return out;
  }
  for (int i = 0; i < m; ++i)
    if (f[i].is_zero()) {
      out.reason = "zero component";
      return out;
    }

  Field F = f.field();
  QuotientOptions opts;
  opts.k_cap = k_cap;

  // complete-intersection test for square germs: dim R/I finite
  if (m == n && m > 1) {
    std::vector<MapGerm> igens;
    for (int i = 0; i < m; ++i) igens.emplace_back(std::vector<Poly>{f[i]});
    auto ci = quotient_dim(igens, 1, opts);
    if (!ci.finite) {
      out.reason = "not a zero-dimensional complete intersection";
      // distinguish the minimal-generator failure for reporting
      TruncatedSubmodule probe(F, 1, n, std::min(k_cap, 2 * (int)f[0].order() +
                                                            (int)6));
      // span of m * I
      for (int i = 0; i < m; ++i) {
        for (int v = 0; v < n; ++v) {
          Poly xi = Poly::variable(F, n, v, kExact);
          probe.add_generator_closure(MapGerm({f[i] * xi}));
        }
      }
      int indep = 0;
      for (int i = 0; i < m; ++i)
        if (probe.add_vector(germ_to_sparse(MapGerm({f[i]}), probe.precision())))
          ++indep;
      if (indep < m)
        out.reason = "minimal generator count " + std::to_string(indep) +
                     " below " + std::to_string(m);
      return out;
    }
    out.dim_ci_quotient = ci.dim;
  }

  // isolated singularity: dim R/(I + I_m(Jac f)) finite
  std::vector<MapGerm> jgens;
  for (int i = 0; i < m; ++i) jgens.emplace_back(std::vector<Poly>{f[i]});
  for (auto& mi : minors(jacobian(f), m))
    if (!mi.is_zero()) jgens.emplace_back(std::vector<Poly>{mi});
  auto jq = quotient_dim(jgens, 1, opts);
  if (!jq.finite) {
    out.reason = "singular locus not isolated";
    return out;
  }
  out.icis = true;
  out.certificate = jq.stabilized_at;
  out.dim_jacobian_quotient = jq.dim;
  return out;
}

InvariantReport invariants(const MapGerm& f, int k_cap) {
  InvariantReport rep;
  rep.icis = is_icis(f, k_cap).icis;
  rep.tau = tjurina(f, k_cap);
  rep.tau_sec = tjurina_sec(f, k_cap);
  for (auto& c : f.components()) rep.corank_vector.push_back(hessian_corank(c).corank);
  if (rep.tau.finite) {
    rep.determinacy = 2 * rep.tau.value - f.order() + 2;
    rep.deformation_determinacy = 2 * rep.tau.value + 1;
  }
  return rep;
}

long determinacy_bound(const MapGerm& f, int k_cap) {
  auto t = tjurina(f, k_cap);
  if (!t.finite) throw CapExceeded("tjurina not finite", t.detail.profile);
  return 2 * t.value - f.order() + 2;
}

std::string coord_str(const Coord& c, int nvars, int m_rank) {
  static const char* names[] = {"x", "y", "z", "w", "x5", "x6", "x7", "x8"};
  std::string mono;
  for (int i = 0; i < nvars; ++i) {
    if (!c.m.e[i]) continue;
    if (!mono.empty()) mono += "*";
    mono += names[i];
    if (c.m.e[i] > 1) mono += "^" + std::to_string((int)c.m.e[i]);
  }
  if (mono.empty()) mono = "1";
  std::string s = "(";
  for (int i = 0; i < m_rank; ++i) {
    if (i) s += ",";
    s += (i == c.comp) ? mono : "0";
  }
  return s + ")";
}

}  // namespace icis
