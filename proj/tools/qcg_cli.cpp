// qcg: one subcommand per experiment. Exit status 0 when every invariant
// holds, 1 on an invariant violation or failed computation, 2 on usage errors.

#include "cli.hpp"

#include "qcg/errors.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>

using namespace qcg::cli;

namespace {

void write_text(const std::string &path, const std::string &text) {
  if (path.empty() || path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f)
    throw UsageError("cannot write " + path);
  f << text;
}

std::string sidecar_path(const std::string &out) {
  const std::string ext = ".csv";
  if (out.size() > ext.size() && out.compare(out.size() - ext.size(), ext.size(), ext) == 0)
    return out.substr(0, out.size() - ext.size()) + ".json";
  return out + ".json";
}

// Scalar summary entries as a one-row table.
Table summary_table(const Json &summary) {
  Table t;
  std::vector<Json> row;
  for (const auto &[k, v] : summary.items())
    if (!v.is_structured()) {
      t.columns.push_back(k);
      row.push_back(v);
    }
  t.add(std::move(row));
  return t;
}

int emit(const Command &cmd, const Context &ctx, const Result &res, const std::string &format,
         const std::string &out) {
  Json doc = result_document(cmd, ctx, res);
  if (format == "json") {
    write_text(out, dump_json(doc) + "\n");
  } else {
    const std::string csv = to_csv(res.table.columns.empty() ? summary_table(res.summary) : res.table);
    doc.erase("rows");
    if (out.empty() || out == "-") {
      write_text(out, "# " + dump_json(doc, -1) + "\n" + csv);
    } else {
      write_text(out, csv);
      write_text(sidecar_path(out), dump_json(doc) + "\n");
    }
  }
  return res.pass ? 0 : 1;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"qcg: stability-of-matter numerical experiments"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, format, out;
  std::optional<std::uint64_t> seed, samples;
  std::optional<std::size_t> grid_n;
  std::vector<std::string> tols;
  app.add_option("--seed", seed, "master seed (default " + std::to_string(kDefaultSeed) + ")");
  app.add_option("--out", out, "output path; '-' for stdout");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--samples", samples, "sample / trial count");
  app.add_option("--grid-n", grid_n, "grid size");
  app.add_option("--tol", tols, "tolerance override name=value (repeatable)");

  const Command *chosen = nullptr;
  for (const auto &c : commands()) {
    auto *sub = app.add_subcommand(c.name, c.help);
    sub->callback([&chosen, &c] { chosen = &c; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : read_config_file(config_path);
    if (seed)
      cfg.seed = *seed;
    if (samples)
      cfg.samples = *samples;
    if (grid_n)
      cfg.grid_n = *grid_n;
    if (!format.empty())
      cfg.format = format;
    if (!out.empty())
      cfg.out = out;
    for (const auto &t : tols) {
      const auto [name, v] = parse_tol(t);
      cfg.tol[name] = v;
    }
    if (cfg.format && *cfg.format != "csv" && *cfg.format != "json")
      throw UsageError("format must be csv or json");

    const Command &cmd = *chosen;
    const Context ctx(cfg, cmd.tolerances, cmd.params);
    const Result res = cmd.run(ctx);
    const int rc = emit(cmd, ctx, res, cfg.format.value_or(cmd.default_format),
                        cfg.out.value_or(cmd.default_out.value_or("")));
    if (rc)
      std::fprintf(stderr, "qcg %s: invariant violation\n", cmd.name.c_str());
    return rc;
  } catch (const UsageError &e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const qcg::Error &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
