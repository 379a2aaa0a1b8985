#include "icis/deform.hpp"

#include <sstream>

#include "icis/rng.hpp"

namespace icis {

MapGerm Unfolding::at(const std::vector<FieldElem>& t) const {
  if (t.size() != directions.size())
    throw InvalidParameters("unfolding parameter arity mismatch");
  std::vector<Poly> comps;
  for (auto& c : base.components()) comps.push_back(c);
  for (size_t i = 0; i < t.size(); ++i) {
    if (t[i].is_zero()) continue;
    comps[directions[i].comp].add_term(directions[i].m, t[i]);
  }
  return MapGerm(std::move(comps));
}

Unfolding unfolding_from_basis(const MapGerm& f, std::vector<Coord> basis,
                               bool filter_order2) {
  Unfolding u;
  u.base = f;
  for (auto& c : basis) {
    if (filter_order2 && c.m.total() < 2) continue;
    u.directions.push_back(c);
  }
  return u;
}

Unfolding build_unfolding(const MapGerm& f, bool filter_order2, int k_cap) {
  return unfolding_from_basis(f, t1sec_basis(f, k_cap), filter_order2);
}

namespace {

std::string t_string(const std::vector<FieldElem>& t) {
  std::string s = "(";
  for (size_t i = 0; i < t.size(); ++i) {
    if (i) s += ",";
    s += t[i].str();
  }
  return s + ")";
}

void record(FiberHistogram& h, const SingularityType& ty,
            const std::vector<FieldElem>& t) {
  std::string key = ty.str();
  ++h.counts[key];
  ++h.total;
  if (ty.tag == TypeTag::NotICIS) ++h.not_icis;
  h.example_t.emplace(key, t_string(t));
}

void classify_fiber(FiberHistogram& h, const Unfolding& u,
                    const std::vector<FieldElem>& t, int k_cap) {
  MapGerm fiber = u.at(t);
  ClassifyOptions opts;
  opts.k_cap = k_cap;
  opts.want_witness = false;
  ClassifyReport rep = classify_icis(fiber, opts);
  record(h, rep.type, t);
}

}  // namespace

FiberHistogram enumerate_fibers(const Unfolding& u,
                                const EnumerateOptions& opts) {
  Field F = u.base.field();
  if (F.is_rational())
    throw InvalidParameters("exhaustive enumeration needs a finite field");
  std::uint64_t q = F.spec().order();
  int d = u.dim();
  double size = 1;
  for (int i = 0; i < d; ++i) size *= (double)q;
  if (size > (double)opts.budget)
    throw BudgetExceeded("fiber count exceeds the configured budget");

  FiberHistogram h;
  std::vector<std::uint64_t> idx(d, 0);
  std::vector<FieldElem> t(d, F.zero());
  while (true) {
    for (int i = 0; i < d; ++i) t[i] = F.from_index(idx[i]);
    classify_fiber(h, u, t, opts.k_cap);
    int pos = 0;
    while (pos < d && ++idx[pos] == q) idx[pos++] = 0;
    if (pos == d) break;
    if (d == 0) break;
  }
  return h;
}

FiberHistogram enumerate_fibers_random(const Unfolding& u, long samples,
                                       std::uint64_t seed,
                                       const EnumerateOptions& opts) {
  FiberHistogram h;
  Rng rng(seed);
  Field F = u.base.field();
  for (long s = 0; s < samples; ++s) {
    std::vector<FieldElem> t;
    for (int i = 0; i < u.dim(); ++i) t.push_back(rng.elem(F, 50));
    classify_fiber(h, u, t, opts.k_cap);
  }
  return h;
}

ProbeResult semicontinuity_probe(const Unfolding& u, long samples,
                                 std::uint64_t seed, long height, int k_cap) {
  Field F = u.base.field();
  if (!F.is_rational())
    throw InvalidParameters("the probe samples rational points");
  ProbeResult out;
  auto base_sec = tjurina_sec(u.base, k_cap);
  if (!base_sec.finite) throw CapExceeded("base tau_sec not finite");
  out.base_tau_sec = base_sec.value;

  Rng rng(seed);
  for (long s = 0; s < samples; ++s) {
    std::vector<FieldElem> t;
    for (int i = 0; i < u.dim(); ++i) t.push_back(rng.elem(F, height));
    MapGerm fiber = u.at(t);
    auto icis = is_icis(fiber, k_cap);
    if (!icis.icis) {
      ++out.skipped_not_icis;
      continue;
    }
    ++out.checked;
    auto sec = tjurina_sec(fiber, k_cap);
    if (sec.finite && sec.value <= base_sec.value) continue;
    // re-verify before reporting: recompute from scratch with a higher cap
    auto again = tjurina_sec(fiber, 2 * k_cap);
    if (!again.finite || again.value > base_sec.value) {
      ProbeViolation v;
      for (auto& e : t) v.t.push_back(e.str());
      v.tau_sec_fiber = again.finite ? again.value : -1;
      out.violations.push_back(std::move(v));
    }
  }
  return out;
}

namespace {

std::pair<std::string, std::string> split_type_key(const std::string& k) {
  auto open = k.find('(');
  if (open == std::string::npos || k.back() != ')') return {k, ""};
  return {k.substr(0, open), k.substr(open + 1, k.size() - open - 2)};
}

}  // namespace

std::string histogram_csv(const FiberHistogram& h) {
  std::ostringstream out;
  out << "type,params,count,example_t\n";
  for (auto& [k, v] : h.counts) {
    auto it = h.example_t.find(k);
    auto [tag, params] = split_type_key(k);
    out << '"' << tag << '"' << ',' << '"' << params << '"' << ',' << v << ','
        << '"' << (it == h.example_t.end() ? "" : it->second) << '"' << '\n';
  }
  return out.str();
}

}  // namespace icis
