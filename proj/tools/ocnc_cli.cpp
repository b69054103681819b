// Command-line front end: one subcommand per pipeline stage.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ocnc/ocnc.hpp"

namespace fs = std::filesystem;
using namespace ocnc;
using namespace ocnc::harness;

namespace {

struct GlobalOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
};

ExperimentConfig resolve_config(const GlobalOptions& g) {
  auto config = g.config_path.empty() ? parse_config(nlohmann::json::object()) : load_config(g.config_path);
  if (g.seed) config.seed = *g.seed;
  if (!g.out.empty()) config.output = g.out;
  return config;
}

void cmd_ingest(const ExperimentConfig& c) {
  const auto table = load_ads(c);
  auto out = open_output(c.output, "ads.csv");
  ads::write_ads(out, table.ads);
  std::size_t dated = 0, funded = 0;
  for (const auto& ad : table.ads) {
    dated += ads::days_online(ad).has_value();
    funded += ad.spend > 0.0;
  }
  std::cout << table.ads.size() << " ads (" << dated << " with both dates, " << funded << " with spend > 0)\n";
}

void cmd_synth(ExperimentConfig c, const std::optional<std::uint64_t>& seed, std::optional<std::size_t> rows) {
  if (seed) c.synthetic.seed = *seed;
  if (rows) c.synthetic.rows = *rows;
  const auto data = stage("synth", [&] { return generate_synthetic(c.synthetic); });
  {
    auto out = open_output(c.output, "ads.csv");
    ads::write_ads(out, data.ads);
  }
  {
    auto out = open_output(c.output, "interest_map.csv");
    write_interest_map(out, InterestMap(data.interest_map.begin(), data.interest_map.end()));
  }
  nlohmann::json truth = {{"features", {"spend", "days_online"}},
                          {"weights", c.synthetic.weights},
                          {"noise_sd", data.noise_sd},
                          {"signal_range", signal_range(data.signal)},
                          {"rows", c.synthetic.rows},
                          {"seed", c.synthetic.seed}};
  for (auto n : kAllNodes) truth["features"].push_back(name_of(n));
  auto out = open_output(c.output, "weights.json");
  out << truth.dump(2) << '\n';
  std::cout << data.ads.size() << " synthetic ads, noise sd " << text::format_double(data.noise_sd) << '\n';
}

void cmd_map(const ExperimentConfig& c) {
  const auto m = load_and_map(c);
  {
    auto out = open_output(c.output, "counts.csv");
    std::vector<std::string> header = {"id"};
    for (auto n : m.nodes) header.emplace_back(name_of(n));
    header.emplace_back("skipped");
    text::write_csv_row(out, header);
    for (std::size_t i = 0; i < m.ads.size(); ++i) {
      std::vector<std::string> row = {m.ads[i].id};
      for (auto v : m.counts[i].counts) row.push_back(std::to_string(v));
      std::string skipped;
      for (const auto& s : m.counts[i].skipped) skipped += (skipped.empty() ? "" : ";") + s;
      row.push_back(skipped);
      text::write_csv_row(out, row);
    }
  }
  auto out = open_output(c.output, "corpus_titles.csv");
  text::write_csv_row(out, {"node", "title"});
  for (const auto& [node, title] : m.corpus_titles) text::write_csv_row(out, {std::string(name_of(node)), title});
  std::cout << m.ads.size() << " ads mapped onto " << m.nodes.size() << " nodes\n";
}

void cmd_train(const ExperimentConfig& c) {
  const auto set = run_training(c);
  write_models(set, c.output);
  std::cout << set.models.size() << " models trained on " << set.train_rows << " rows\n";
}

void cmd_evaluate(const ExperimentConfig& c) {
  const auto r = run_pipeline(c);
  write_pipeline_outputs(r, c.output);
  for (const auto& ev : r.evaluations)
    std::cout << regress::name_of(ev.kind) << " case " << ads::case_tag(ev.feature_case)
              << " pearson " << text::format_double(ev.pearson) << '\n';
}

void cmd_optimize(const ExperimentConfig& c) {
  const auto rows = run_optimize(c);
  write_optimize_outputs(rows, c.nodes, c.output);
  std::cout << rows.size() << " solver runs\n";
}

void cmd_sweep(const ExperimentConfig& c, bool quiet) {
  const auto r = run_sweep(c, [&](std::size_t done, std::size_t total) {
    if (!quiet) std::cerr << "\riteration " << done << '/' << total << std::flush;
  });
  if (!quiet) std::cerr << '\n';
  write_sweep_outputs(r, c.output);
  std::cout << r.curves.size() << " curves over k = " << r.budget_min << ".." << r.budget_max << '\n';
}

void cmd_influence(const ExperimentConfig& c) {
  const auto report = run_influence(c);
  write_influence_outputs(report, c.output);
  std::cout << "top decile: " << report.decile_size << " of " << report.eligible << " ads with spend > 0\n";
  for (const auto& [node, mean] : report.ranked())
    std::cout << "  " << name_of(node) << ' ' << text::format_double(mean) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Click prediction from conceptual nodes and budgeted node-combination optimization"};
  app.require_subcommand(1);
  GlobalOptions g;
  app.add_option("--config", g.config_path, "JSON experiment config")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "master seed (for synth: the generator seed)");
  app.add_option("--out", g.out, "output directory");
  app.fallthrough();

  auto* ingest = app.add_subcommand("ingest", "parse the input and write it back as canonical ads.csv");
  auto* synth = app.add_subcommand("synth", "generate a synthetic ads.csv with its interest map and weights");
  std::optional<std::size_t> rows;
  synth->add_option("--rows", rows, "number of ads");
  auto* map = app.add_subcommand("map", "classify interests and write per-ad node counts");
  auto* train = app.add_subcommand("train", "fit the configured models on the training split");
  auto* evaluate = app.add_subcommand("evaluate", "train, predict the held-out split and report Pearson r");
  auto* optimize = app.add_subcommand("optimize", "run every solver once per budget on full-data models");
  auto* sweep = app.add_subcommand("sweep", "average solver results over retrained models per budget");
  bool quiet = false;
  sweep->add_flag("--quiet", quiet, "no progress output");
  auto* influence = app.add_subcommand("influence", "mean node allocation of the top clicks-per-ruble decile");

  CLI11_PARSE(app, argc, argv);

  try {
    const auto config = resolve_config(g);
    if (*ingest) cmd_ingest(config);
    if (*synth) cmd_synth(config, g.seed, rows);
    if (*map) cmd_map(config);
    if (*train) cmd_train(config);
    if (*evaluate) cmd_evaluate(config);
    if (*optimize) cmd_optimize(config);
    if (*sweep) cmd_sweep(config, quiet);
    if (*influence) cmd_influence(config);
  } catch (const ocnc::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
