#pragma once

#include <string>

#include <json.hpp>

#include "icis/classify.hpp"
#include "icis/deform.hpp"

namespace icis {

/// Stable report schema: {"type", "params", "char", "ext", "tau",
/// "tau_sec", "determinacy", "simple", "reason", "witness", "case_chain"}.
nlohmann::json report_json(const ClassifyReport& rep);

/// Human-readable table form with the same numeric content.
std::string report_table(const ClassifyReport& rep);

nlohmann::json histogram_json(const FiberHistogram& h);

std::string coords_str(const std::vector<Coord>& basis, int nvars, int m);

}  // namespace icis
