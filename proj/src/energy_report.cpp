#include "qcg/energy_report.hpp"
#include "qcg/errors.hpp"

#include <algorithm>

namespace qcg {

double EnergyReport::term(const std::string &key) const {
  auto it = std::find_if(terms.begin(), terms.end(),
                         [&](const auto &t) { return t.first == key; });
  if (it == terms.end())
    throw Error("EnergyReport '" + name + "': no term named '" + key + "'");
  return it->second;
}

double EnergyReport::total() const {
  double s = 0;
  for (const auto &[k, v] : terms)
    s += v;
  return s;
}

bool EnergyReport::all_checks_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const auto &c) { return c.second; });
}

nlohmann::json EnergyReport::to_json() const {
  nlohmann::json j;
  j["name"] = name;
  j["terms"] = nlohmann::json::object();
  for (const auto &[k, v] : terms)
    j["terms"][k] = v;
  j["checks"] = nlohmann::json::object();
  for (const auto &[k, v] : checks)
    j["checks"][k] = v;
  j["provenance"] = provenance;
  return j;
}

} // namespace qcg
