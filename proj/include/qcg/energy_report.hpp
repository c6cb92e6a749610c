#pragma once

#include <json.hpp>

#include <string>
#include <utility>
#include <vector>

namespace qcg {

// Named additive energy breakdown plus the checks and provenance of the run
// that produced it. Every experiment returns one of these.
struct EnergyReport {
  std::string name;
  std::vector<std::pair<std::string, double>> terms;
  std::vector<std::pair<std::string, bool>> checks;
  nlohmann::json provenance = nlohmann::json::object();

  EnergyReport &add(std::string term, double value) {
    terms.emplace_back(std::move(term), value);
    return *this;
  }
  EnergyReport &check(std::string what, bool ok) {
    checks.emplace_back(std::move(what), ok);
    return *this;
  }

  double term(const std::string &key) const;
  double total() const;
  bool all_checks_pass() const;
  nlohmann::json to_json() const;
};

} // namespace qcg
