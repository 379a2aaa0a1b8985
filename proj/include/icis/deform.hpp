#pragma once

#include <map>
#include <string>
#include <vector>

#include "icis/classify.hpp"
#include "icis/jetalg.hpp"

namespace icis {

/// Unfolding with section f + sum t_i g_i over monomial-vector directions.
struct Unfolding {
  MapGerm base;
  std::vector<Coord> directions;

  int dim() const { return (int)directions.size(); }
  MapGerm at(const std::vector<FieldElem>& t) const;
};

/// Directions from the computed T^1,sec staircase basis; with filter_order2
/// the order-1 directions are dropped (they lead to hypersurface germs of
/// bounded type and do not affect the finiteness of the class list).
Unfolding build_unfolding(const MapGerm& f, bool filter_order2,
                          int k_cap = 64);
/// Same, from an explicitly given basis (e.g. the published tables).
Unfolding unfolding_from_basis(const MapGerm& f, std::vector<Coord> basis,
                               bool filter_order2);

struct FiberHistogram {
  std::map<std::string, long> counts;            // type string -> count
  std::map<std::string, std::string> example_t;  // type -> first parameter
  long total = 0;
  long not_icis = 0;
};

struct EnumerateOptions {
  long budget = 1000000;
  int k_cap = 64;
};

/// Classifies every fiber over the finite base field (|field|^d points).
FiberHistogram enumerate_fibers(const Unfolding& u,
                                const EnumerateOptions& opts = {});
/// Classifies `samples` random fibers; deterministic under the seed.
FiberHistogram enumerate_fibers_random(const Unfolding& u, long samples,
                                       std::uint64_t seed,
                                       const EnumerateOptions& opts = {});

struct ProbeViolation {
  std::vector<std::string> t;
  long tau_sec_fiber;
};

struct ProbeResult {
  long checked = 0;
  long skipped_not_icis = 0;
  long base_tau_sec = 0;
  std::vector<ProbeViolation> violations;  // re-verified increases only
};

/// Samples rational fibers and reports any re-verified tau^sec increase;
/// expected empty (the jump loci are proper closed subsets).
ProbeResult semicontinuity_probe(const Unfolding& u, long samples,
                                 std::uint64_t seed, long height = 1000,
                                 int k_cap = 64);

std::string histogram_csv(const FiberHistogram& h);

}  // namespace icis
