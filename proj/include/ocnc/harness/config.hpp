#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ocnc/ads/features.hpp"
#include "ocnc/core/concept_node.hpp"
#include "ocnc/core/error.hpp"
#include "ocnc/harness/synthetic.hpp"
#include "ocnc/regress/model.hpp"
#include "ocnc/solve/solvers.hpp"

#ifndef OCNC_DEFAULT_ARTICLE_DIR
#define OCNC_DEFAULT_ARTICLE_DIR "data/articles"
#endif

namespace ocnc::harness {

struct CorpusConfig {
  enum class Source { fixtures, http };
  Source source = Source::fixtures;
  std::filesystem::path path = OCNC_DEFAULT_ARTICLE_DIR;
  std::size_t depth = 1;
  std::map<ConceptNode, std::string> roots = {
      {ConceptNode::celebrity, "Celebrity"},   {ConceptNode::identity, "Identity"},
      {ConceptNode::news, "News"},             {ConceptNode::organization, "Organization"},
      {ConceptNode::politics, "Politics"},     {ConceptNode::religion, "Religion"},
  };
  nlohmann::json http;  // HttpSourceConfig fields when source == http
};

/// Everything one CLI invocation needs. Relative paths are resolved against the
/// directory of the config file.
struct ExperimentConfig {
  std::optional<std::filesystem::path> input;         // ads CSV; absent: generate synthetic data
  std::optional<std::filesystem::path> interest_map;  // CSV interest,node
  CorpusConfig corpus;
  ads::FeatureCase feature_case = ads::FeatureCase::A;
  std::vector<regress::ModelKind> models = {regress::kAllModelKinds.begin(), regress::kAllModelKinds.end()};
  regress::ModelConfig hyperparameters;
  std::vector<solve::SolverKind> solvers = {solve::kAllSolvers.begin(), solve::kAllSolvers.end()};
  std::uint64_t budget_min = 0;
  std::uint64_t budget_max = 20;
  std::size_t iterations = 100;
  std::uint64_t seed = 42;
  std::filesystem::path output = "out";
  double train_fraction = 0.95;
  solve::SolverOptions solver_options;
  std::vector<ConceptNode> nodes = all_nodes();
  SyntheticSpec synthetic;
  std::optional<std::vector<double>> context;  // frozen spend/days for Case B/C objectives
  std::size_t workers = 1;

  void validate() const {
    if (budget_min > budget_max) throw InvalidArgument("budget range is empty");
    if (iterations < 1) throw InvalidArgument("iterations must be >= 1");
    if (models.empty()) throw InvalidArgument("no models configured");
    if (solvers.empty()) throw InvalidArgument("no solvers configured");
    if (nodes.empty()) throw InvalidArgument("no nodes configured");
    if (workers < 1) throw InvalidArgument("workers must be >= 1");
    if (context && context->size() != ads::context_width(feature_case))
      throw InvalidArgument("context needs " + std::to_string(ads::context_width(feature_case)) +
                            " values for case " + std::string(1, ads::case_tag(feature_case)));
    solver_options.genetic.validate();
    synthetic.validate();
  }
};

inline ExperimentConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {}) {
  ExperimentConfig c;
  const auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() || base_dir.empty() ? path : base_dir / path;
  };
  try {
    if (!j.is_object()) throw FormatError("config must be a JSON object");
    if (j.contains("input") && !j["input"].is_null()) c.input = resolve(j["input"].get<std::string>());
    if (j.contains("interest_map") && !j["interest_map"].is_null())
      c.interest_map = resolve(j["interest_map"].get<std::string>());
    if (j.contains("corpus")) {
      const auto& cj = j["corpus"];
      const auto src = cj.value("source", std::string("fixtures"));
      if (src == "fixtures")
        c.corpus.source = CorpusConfig::Source::fixtures;
      else if (src == "http")
        c.corpus.source = CorpusConfig::Source::http;
      else
        throw FormatError("corpus.source must be 'fixtures' or 'http'");
      if (cj.contains("path")) c.corpus.path = resolve(cj["path"].get<std::string>());
      c.corpus.depth = cj.value("depth", c.corpus.depth);
      if (cj.contains("roots")) {
        c.corpus.roots.clear();
        for (const auto& [node, title] : cj["roots"].items())
          c.corpus.roots[parse_node(node)] = title.get<std::string>();
      }
      if (cj.contains("http")) c.corpus.http = cj["http"];
    }
    if (j.contains("case")) c.feature_case = ads::parse_case(j["case"].get<std::string>());
    if (j.contains("models")) {
      c.models.clear();
      for (const auto& m : j["models"]) c.models.push_back(regress::parse_model_kind(m.get<std::string>()));
    }
    if (j.contains("hyperparameters")) {
      const auto& h = j["hyperparameters"];
      if (h.contains("dtr")) regress::from_json(h["dtr"], c.hyperparameters.dtr);
      if (h.contains("rfr")) regress::from_json(h["rfr"], c.hyperparameters.rfr);
      if (h.contains("abr")) regress::from_json(h["abr"], c.hyperparameters.abr);
      if (h.contains("mlp")) regress::from_json(h["mlp"], c.hyperparameters.mlp);
    }
    if (j.contains("solvers")) {
      c.solvers.clear();
      for (const auto& s : j["solvers"]) c.solvers.push_back(solve::parse_solver(s.get<std::string>()));
    }
    if (j.contains("budget")) {
      c.budget_min = j["budget"].value("min", c.budget_min);
      c.budget_max = j["budget"].value("max", c.budget_max);
    }
    c.iterations = j.value("iterations", c.iterations);
    c.seed = j.value("seed", c.seed);
    if (j.contains("output")) c.output = resolve(j["output"].get<std::string>());
    c.train_fraction = j.value("train_fraction", c.train_fraction);
    c.solver_options.brute_cap = j.value("brute_cap", c.solver_options.brute_cap);
    if (j.contains("genetic")) {
      const auto& g = j["genetic"];
      auto& p = c.solver_options.genetic;
      p.population = g.value("population", p.population);
      p.generations = g.value("generations", p.generations);
      p.crossover_probability = g.value("crossover_probability", p.crossover_probability);
      if (g.contains("mutation_probability") && !g["mutation_probability"].is_null())
        p.mutation_probability = g["mutation_probability"].get<double>();
      p.tournament_size = g.value("tournament_size", p.tournament_size);
      p.elite_count = g.value("elite_count", p.elite_count);
    }
    if (j.contains("nodes")) {
      c.nodes.clear();
      for (const auto& n : j["nodes"]) c.nodes.push_back(parse_node(n.get<std::string>()));
      std::sort(c.nodes.begin(), c.nodes.end());
      if (std::adjacent_find(c.nodes.begin(), c.nodes.end()) != c.nodes.end())
        throw FormatError("duplicate node in 'nodes'");
    }
    if (j.contains("synthetic")) from_json(j["synthetic"], c.synthetic);
    if (j.contains("context") && !j["context"].is_null()) c.context = j["context"].get<std::vector<double>>();
    c.workers = j.value("workers", c.workers);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad config: ") + e.what());
  }
  c.validate();
  return c;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("config file " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return parse_config(j, path.parent_path());
}

}  // namespace ocnc::harness
