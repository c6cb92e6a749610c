#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace qcg::cli {

namespace {

const std::vector<std::string> kConfigKeys{"seed", "format", "out", "samples", "grid_n", "tol", "params"};

double as_double(const Json &v, const std::string &what) {
  if (!v.is_number())
    throw UsageError(what + ": expected a number");
  return v.get<double>();
}

std::uint64_t as_count(const Json &v, const std::string &what) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
    throw UsageError(what + ": expected a nonnegative integer");
  return v.get<std::uint64_t>();
}

std::string csv_cell(const Json &v) {
  if (v.is_null())
    return "";
  if (v.is_boolean())
    return v.get<bool>() ? "true" : "false";
  if (v.is_number_unsigned())
    return std::to_string(v.get<std::uint64_t>());
  if (v.is_number_integer())
    return std::to_string(v.get<std::int64_t>());
  if (v.is_number_float()) {
    const double x = v.get<double>();
    if (std::isnan(x))
      return "nan";
    if (std::isinf(x))
      return x > 0 ? "inf" : "-inf";
    return format_number(x);
  }
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos)
      return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"')
        q += '"';
      q += c;
    }
    return q + "\"";
  }
  return dump_json(v, -1);
}

void dump(const Json &j, int indent, int depth, std::string &out) {
  const bool pretty = indent >= 0;
  auto newline = [&](int d) {
    if (pretty) {
      out += '\n';
      out.append(std::size_t(indent * d), ' ');
    }
  };
  switch (j.type()) {
  case Json::value_t::object: {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += '{';
    bool first = true;
    for (const auto &[k, v] : j.items()) {
      if (!first)
        out += ',';
      first = false;
      newline(depth + 1);
      out += Json(k).dump();
      out += pretty ? ": " : ":";
      dump(v, indent, depth + 1, out);
    }
    newline(depth);
    out += '}';
    return;
  }
  case Json::value_t::array: {
    if (j.empty()) {
      out += "[]";
      return;
    }
    // arrays of scalars stay on one line
    bool flat = true;
    for (const auto &v : j)
      flat = flat && !v.is_structured();
    out += '[';
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i)
        out += flat && pretty ? ", " : ",";
      if (!flat)
        newline(depth + 1);
      dump(j[i], indent, depth + 1, out);
    }
    if (!flat)
      newline(depth);
    out += ']';
    return;
  }
  case Json::value_t::number_float: {
    const double x = j.get<double>();
    out += std::isfinite(x) ? format_number(x) : "null";
    return;
  }
  default:
    out += j.dump();
  }
}

} // namespace

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string dump_json(const Json &j, int indent) {
  std::string out;
  dump(j, indent, 0, out);
  return out;
}

void Table::add(std::vector<Json> row) {
  if (row.size() != columns.size())
    throw std::logic_error("table row width mismatch");
  rows.push_back(std::move(row));
}

std::string to_csv(const Table &t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    out += (i ? "," : "") + t.columns[i];
  out += '\n';
  for (const auto &row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out += (i ? "," : "") + csv_cell(row[i]);
    out += '\n';
  }
  return out;
}

std::pair<std::string, double> parse_tol(const std::string &s) {
  const auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0)
    throw UsageError("--tol expects name=value, got '" + s + "'");
  const std::string name = s.substr(0, eq), val = s.substr(eq + 1);
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(val, &used);
  } catch (const std::exception &) {
    used = 0;
  }
  if (used == 0 || used != val.size() || !(v > 0))
    throw UsageError("--tol " + name + ": expected a positive number, got '" + val + "'");
  return {name, v};
}

RunConfig read_config_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw UsageError("cannot open config file " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const std::exception &e) {
    throw UsageError("config file " + path + ": " + e.what());
  }
  if (!j.is_object())
    throw UsageError("config file must hold a JSON object");
  RunConfig c;
  for (const auto &[k, v] : j.items()) {
    if (std::find(kConfigKeys.begin(), kConfigKeys.end(), k) == kConfigKeys.end())
      throw UsageError("unknown config key '" + k + "'");
    if (k == "seed")
      c.seed = as_count(v, "seed");
    else if (k == "samples")
      c.samples = as_count(v, "samples");
    else if (k == "grid_n")
      c.grid_n = as_count(v, "grid_n");
    else if (k == "format" || k == "out") {
      if (!v.is_string())
        throw UsageError(k + ": expected a string");
      (k == "format" ? c.format : c.out) = v.get<std::string>();
    } else if (k == "tol") {
      if (!v.is_object())
        throw UsageError("tol: expected an object of name: value");
      for (const auto &[name, x] : v.items()) {
        const double t = as_double(x, "tol." + name);
        if (!(t > 0))
          throw UsageError("tol." + name + ": expected a positive number");
        c.tol[name] = t;
      }
    } else {
      if (!v.is_object())
        throw UsageError("params: expected an object");
      c.params = v;
    }
  }
  return c;
}

Context::Context(const RunConfig &cfg, const std::map<std::string, double> &tol_defaults,
                 const std::vector<std::string> &param_keys)
    : cfg_(cfg), tol_(tol_defaults) {
  for (const auto &[name, v] : cfg.tol) {
    if (!tol_.count(name))
      throw UsageError("unknown tolerance '" + name + "'");
    tol_[name] = v;
  }
  for (const auto &[k, v] : cfg.params.items())
    if (std::find(param_keys.begin(), param_keys.end(), k) == param_keys.end())
      throw UsageError("unknown parameter '" + k + "'");
}

double Context::tol(const std::string &name) const {
  const auto it = tol_.find(name);
  if (it == tol_.end())
    throw std::logic_error("tolerance not declared: " + name);
  return it->second;
}

std::uint64_t Context::samples(std::uint64_t def) const {
  const auto n = cfg_.samples.value_or(def);
  if (n == 0)
    throw UsageError("--samples must be positive");
  return n;
}

std::size_t Context::grid_n(std::size_t def) const {
  const auto n = cfg_.grid_n.value_or(def);
  if (n < 2)
    throw UsageError("--grid-n must be at least 2");
  return n;
}

const Json *Context::find(const std::string &key) const {
  const auto it = cfg_.params.find(key);
  return it == cfg_.params.end() ? nullptr : &*it;
}

double Context::param(const std::string &key, double def) const {
  const Json *v = find(key);
  return v ? as_double(*v, "params." + key) : def;
}

std::vector<double> Context::param_list(const std::string &key, std::vector<double> def) const {
  const Json *v = find(key);
  if (!v)
    return def;
  if (!v->is_array() || v->empty())
    throw UsageError("params." + key + ": expected a nonempty array of numbers");
  std::vector<double> out;
  for (const auto &x : *v)
    out.push_back(as_double(x, "params." + key));
  return out;
}

std::string Context::param_str(const std::string &key, const std::string &def) const {
  const Json *v = find(key);
  if (!v)
    return def;
  if (!v->is_string())
    throw UsageError("params." + key + ": expected a string");
  return v->get<std::string>();
}

Json result_document(const Command &c, const Context &ctx, const Result &r) {
  Json doc = Json::object();
  doc["command"] = c.name;
  doc["seed"] = ctx.seed();
  doc["pass"] = r.pass;
  Json tol = Json::object();
  for (const auto &[k, v] : ctx.tolerances())
    tol[k] = v;
  doc["tolerances"] = tol;
  doc["summary"] = r.summary;
  if (!r.table.columns.empty()) {
    Json rows = Json::array();
    for (const auto &row : r.table.rows) {
      Json o = Json::object();
      for (std::size_t i = 0; i < row.size(); ++i)
        o[r.table.columns[i]] = row[i];
      rows.push_back(o);
    }
    doc["rows"] = rows;
  }
  return doc;
}

} // namespace qcg::cli
