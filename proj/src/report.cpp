#include "icis/report.hpp"

#include <sstream>

namespace icis {

using nlohmann::json;

nlohmann::json report_json(const ClassifyReport& rep) {
  json j;
  j["type"] = rep.type.tag_str();
  json params = json::object();
  switch (rep.type.tag) {
    case TypeTag::A: params["k"] = rep.type.a; break;
    case TypeTag::F:
      params["m"] = rep.type.a;
      params["n"] = rep.type.b;
      break;
    case TypeTag::H: params["n"] = rep.type.a; break;
    case TypeTag::I0_odd:
    case TypeTag::I1_odd: params["t"] = rep.type.a; break;
    case TypeTag::I0_even:
    case TypeTag::I1_even: params["q"] = rep.type.a; break;
    default: break;
  }
  if (rep.type.moduli) params["moduli"] = true;
  j["params"] = params;
  j["char"] = rep.characteristic;
  j["ext"] = rep.extension;
  j["tau"] = rep.tau;
  j["tau_sec"] = rep.tau_sec;
  j["determinacy"] = rep.determinacy;
  j["simple"] = rep.type.simple();
  j["reason"] = rep.type.reason.empty() ? json() : json(rep.type.reason);
  switch (rep.witness) {
    case WitnessStatus::Full:
      j["witness"] = {{"status", "full"}, {"steps", rep.trace.steps.size()}};
      break;
    case WitnessStatus::Partial:
      j["witness"] = {{"status", "partial"}, {"steps", rep.trace.steps.size()}};
      break;
    case WitnessStatus::NeedsExtension: j["witness"] = "needs-extension"; break;
    case WitnessStatus::None: j["witness"] = json(); break;
  }
  j["case_chain"] = rep.case_chain;
  return j;
}

std::string report_table(const ClassifyReport& rep) {
  std::ostringstream out;
  out << "type          " << rep.type.str() << "\n";
  out << "char          " << rep.characteristic;
  if (rep.extension > 1) out << "^" << rep.extension;
  out << "\n";
  out << "tau           " << (rep.tau < 0 ? "inf" : std::to_string(rep.tau))
      << "\n";
  out << "tau_sec       "
      << (rep.tau_sec < 0 ? "inf" : std::to_string(rep.tau_sec)) << "\n";
  out << "determinacy   "
      << (rep.determinacy < 0 ? "-" : std::to_string(rep.determinacy)) << "\n";
  out << "simple        " << (rep.type.simple() ? "yes" : "no") << "\n";
  if (!rep.type.reason.empty()) out << "reason        " << rep.type.reason << "\n";
  const char* w = nullptr;
  switch (rep.witness) {
    case WitnessStatus::Full: w = "full"; break;
    case WitnessStatus::Partial: w = "partial"; break;
    case WitnessStatus::NeedsExtension: w = "needs-extension"; break;
    case WitnessStatus::None: w = "-"; break;
  }
  out << "witness       " << w << "\n";
  return out.str();
}

nlohmann::json histogram_json(const FiberHistogram& h) {
  json rows = json::array();
  for (auto& [k, v] : h.counts) {
    json row;
    auto open = k.find('(');
    if (open != std::string::npos && k.back() == ')') {
      row["type"] = k.substr(0, open);
      row["params"] = k.substr(open + 1, k.size() - open - 2);
    } else {
      row["type"] = k;
      row["params"] = "";
    }
    row["count"] = v;
    auto it = h.example_t.find(k);
    row["example_t"] = it == h.example_t.end() ? "" : it->second;
    rows.push_back(row);
  }
  json j;
  j["total"] = h.total;
  j["not_icis"] = h.not_icis;
  j["rows"] = rows;
  return j;
}

std::string coords_str(const std::vector<Coord>& basis, int nvars, int m) {
  std::string s;
  for (auto& c : basis) {
    if (!s.empty()) s += ", ";
    s += coord_str(c, nvars, m);
  }
  return s;
}

}  // namespace icis
