#pragma once

// Plumbing shared by the qcg command-line subcommands.

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qcg::cli {

inline constexpr std::uint64_t kDefaultSeed = 20240607;

using Json = nlohmann::ordered_json;

// Maps to exit status 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::uint64_t seed = kDefaultSeed;
  std::optional<std::string> format; // csv | json
  std::optional<std::string> out;
  std::optional<std::uint64_t> samples;
  std::optional<std::size_t> grid_n;
  std::map<std::string, double> tol;
  Json params = Json::object();
};

// Reads a --config file; rejects unknown keys and ill-typed values.
RunConfig read_config_file(const std::string &path);
// Parses "name=value".
std::pair<std::string, double> parse_tol(const std::string &s);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;
  void add(std::vector<Json> row);
};

struct Result {
  Json summary = Json::object();
  Table table;
  bool pass = true;
};

class Context {
public:
  Context(const RunConfig &cfg, const std::map<std::string, double> &tol_defaults,
          const std::vector<std::string> &param_keys);

  std::uint64_t seed() const { return cfg_.seed; }
  double tol(const std::string &name) const;
  std::uint64_t samples(std::uint64_t def) const;
  std::size_t grid_n(std::size_t def) const;
  bool has_grid_n() const { return cfg_.grid_n.has_value(); }

  double param(const std::string &key, double def) const;
  std::vector<double> param_list(const std::string &key, std::vector<double> def) const;
  std::string param_str(const std::string &key, const std::string &def) const;

  const std::map<std::string, double> &tolerances() const { return tol_; }

private:
  const Json *find(const std::string &key) const;

  const RunConfig &cfg_;
  std::map<std::string, double> tol_;
};

struct Command {
  std::string name;
  std::string help;
  std::string default_format = "json";
  std::optional<std::string> default_out;
  std::map<std::string, double> tolerances;
  std::vector<std::string> params;
  std::function<Result(const Context &)> run;
};

const std::vector<Command> &commands();

// %.17g; non-finite values print as null (JSON) or as nan/inf (CSV).
std::string format_number(double v);
std::string dump_json(const Json &j, int indent = 2);
std::string to_csv(const Table &t);

// Full JSON document for a run.
Json result_document(const Command &c, const Context &ctx, const Result &r);

} // namespace qcg::cli
