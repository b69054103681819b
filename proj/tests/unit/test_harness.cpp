#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ocnc/ocnc.hpp"

namespace fs = std::filesystem;
using namespace ocnc;
using namespace ocnc::harness;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("ocnc_harness_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Small enough for unit tests: one shallow forest, a short GA.
json small_config() {
  return json{{"synthetic", {{"rows", 200}, {"seed", 5}}},
              {"models", {"dtr", "rfr"}},
              {"hyperparameters", {{"rfr", {{"n_trees", 5}}}}},
              {"solvers", {"brute", "greedy", "genetic", "random"}},
              {"genetic", {{"generations", 20}}},
              {"budget", {{"min", 0}, {"max", 3}}},
              {"iterations", 3}};
}

}  // namespace

TEST(Config, Defaults) {
  const auto c = parse_config(json::object());
  EXPECT_FALSE(c.input);
  EXPECT_EQ(c.feature_case, ads::FeatureCase::A);
  EXPECT_EQ(c.models.size(), 4u);
  EXPECT_EQ(c.solvers.size(), 4u);
  EXPECT_EQ(c.budget_min, 0u);
  EXPECT_EQ(c.budget_max, 20u);
  EXPECT_EQ(c.iterations, 100u);
  EXPECT_EQ(c.train_fraction, 0.95);
  EXPECT_EQ(c.nodes.size(), kNodeCount);
  EXPECT_EQ(c.corpus.roots.size(), kNodeCount);
}

TEST(Config, ParsesAndResolvesRelativePaths) {
  const auto c = parse_config(json{{"input", "ads.csv"},
                                   {"case", "C"},
                                   {"models", {"MLP"}},
                                   {"solvers", {"greedy"}},
                                   {"nodes", {"religion", "news"}},
                                   {"context", {500, 10}},
                                   {"genetic", {{"mutation_probability", 0.25}}},
                                   {"output", "/abs/out"}},
                              "/cfg");
  EXPECT_EQ(*c.input, fs::path("/cfg/ads.csv"));
  EXPECT_EQ(c.output, fs::path("/abs/out"));
  EXPECT_EQ(c.feature_case, ads::FeatureCase::C);
  EXPECT_EQ(c.models, std::vector<regress::ModelKind>{regress::ModelKind::mlp});
  EXPECT_EQ(c.nodes, (std::vector<ConceptNode>{ConceptNode::news, ConceptNode::religion}));
  EXPECT_EQ(*c.solver_options.genetic.mutation_probability, 0.25);
}

TEST(Config, Rejections) {
  EXPECT_THROW(parse_config(json{{"budget", {{"min", 5}, {"max", 2}}}}), InvalidArgument);
  EXPECT_THROW(parse_config(json{{"models", json::array()}}), InvalidArgument);
  EXPECT_THROW(parse_config(json{{"models", {"svm"}}}), FormatError);
  EXPECT_THROW(parse_config(json{{"nodes", {"news", "news"}}}), FormatError);
  EXPECT_THROW(parse_config(json{{"case", "B"}, {"context", {1, 2}}}), InvalidArgument);
  EXPECT_THROW(parse_config(json{{"iterations", "many"}}), FormatError);
  EXPECT_THROW(parse_config(json::array()), FormatError);
  EXPECT_THROW(load_config("/nonexistent/config.json"), NotFoundError);
}

TEST(Synthetic, ShapeAndDeterminism) {
  SyntheticSpec spec;
  spec.rows = 300;
  const auto a = generate_synthetic(spec);
  const auto b = generate_synthetic(spec);
  ASSERT_EQ(a.ads.size(), 300u);
  std::ostringstream sa, sb;
  ads::write_ads(sa, a.ads);
  ads::write_ads(sb, b.ads);
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_DOUBLE_EQ(a.noise_sd, 0.1 * signal_range(a.signal));
  for (std::size_t i = 0; i < a.ads.size(); ++i) {
    EXPECT_GE(a.ads[i].clicks, 0);
    EXPECT_TRUE(a.ads[i].spend == 0.0 || (a.ads[i].spend >= 500.0 && a.ads[i].spend <= 1000.0));
    for (auto v : a.counts[i]) EXPECT_LE(v, 3u);
  }
  spec.seed = 2;
  std::ostringstream sc;
  ads::write_ads(sc, generate_synthetic(spec).ads);
  EXPECT_NE(sa.str(), sc.str());
}

TEST(Synthetic, MappedCountsRecoverGroundTruth) {
  ExperimentConfig c;
  c.synthetic.rows = 100;
  const auto m = load_and_map(c);
  const auto truth = generate_synthetic(c.synthetic);
  ASSERT_EQ(m.ads.size(), truth.ads.size());
  for (std::size_t i = 0; i < m.ads.size(); ++i) EXPECT_EQ(m.counts[i].counts, truth.counts[i]);
}

TEST(Synthetic, ClassifierAloneRecoversGroundTruth) {
  // No map: every synthetic phrase has to be classified from the bundled corpus.
  SyntheticSpec spec;
  spec.rows = 50;
  const auto truth = generate_synthetic(spec);
  const auto dir = scratch("classify");
  {
    std::ofstream out(dir / "ads.csv", std::ios::binary);
    ads::write_ads(out, truth.ads);
  }
  ExperimentConfig c;
  c.input = dir / "ads.csv";
  const auto m = load_and_map(c);
  for (std::size_t i = 0; i < m.ads.size(); ++i) EXPECT_EQ(m.counts[i].counts, truth.counts[i]) << i;
}

TEST(Pipeline, ConstantTargetsReportUndefinedCorrelation) {
  ExperimentConfig c;
  c.synthetic.rows = 100;
  c.synthetic.weights.assign(2 + kNodeCount, 0.0);
  c.synthetic.noise_sd = 0.0;
  c.models = {regress::ModelKind::dtr};
  try {
    run_pipeline(c);
    FAIL() << "expected a StageError";
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "evaluate");
    ASSERT_TRUE(e.cause());
    EXPECT_THROW(std::rethrow_exception(e.cause()), UndefinedCorrelationError);
  }
}

TEST(Pipeline, MissingInputIsIngestError) {
  ExperimentConfig c;
  c.input = "/nonexistent/ads.csv";
  try {
    run_pipeline(c);
    FAIL();
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "ingest");
    EXPECT_THROW(std::rethrow_exception(e.cause()), NotFoundError);
  }
}

TEST(Pipeline, TreeRecoversSyntheticSignal) {
  ExperimentConfig c;
  c.feature_case = ads::FeatureCase::C;
  c.models = {regress::ModelKind::dtr};
  const auto r = run_pipeline(c);
  EXPECT_EQ(r.train_rows, 1900u);
  EXPECT_EQ(r.test_rows, 100u);
  EXPECT_GE(r.evaluations.at(0).pearson, 0.9);
}

TEST(Pipeline, OutputsWritten) {
  auto c = parse_config(small_config());
  c.output = scratch("pipeline");
  const auto r = run_pipeline(c);
  write_pipeline_outputs(r, c.output);
  const auto report = slurp(c.output / "report.csv");
  EXPECT_EQ(report.rfind("model,case,pearson\n", 0), 0u);
  EXPECT_NE(report.find("DTR,A,"), std::string::npos);
  EXPECT_TRUE(fs::exists(c.output / "scatter_DTR.svg"));
  EXPECT_TRUE(fs::exists(c.output / "scatter_RFR.svg"));
}

TEST(Context, LowerMedianPerColumn) {
  ExperimentConfig c;
  c.feature_case = ads::FeatureCase::C;
  regress::Dataset d(ads::FeatureCase::C, 3);
  d.add(std::vector<double>{4, 1, 0}, 0);
  d.add(std::vector<double>{1, 3, 0}, 0);
  d.add(std::vector<double>{3, 2, 0}, 0);
  d.add(std::vector<double>{2, 4, 0}, 0);
  EXPECT_EQ(objective_context(c, d), (std::vector<double>{2, 2}));
  c.context = std::vector<double>{7, 8};
  EXPECT_EQ(objective_context(c, d), (std::vector<double>{7, 8}));
  c.context.reset();
  regress::Dataset a(ads::FeatureCase::A, 1);
  a.add(std::vector<double>{1}, 0);
  EXPECT_TRUE(objective_context(c, a).empty());
}

TEST(Sweep, BruteDominatesAndIsMonotone) {
  const auto c = parse_config(small_config());
  const auto r = run_sweep(c);
  ASSERT_EQ(r.curves.size(), 8u);
  for (std::size_t m = 0; m < 2; ++m) {
    const auto& brute = r.curves[m * 4];
    ASSERT_EQ(brute.solver, solve::SolverKind::brute);
    for (std::size_t k = 0; k < 4; ++k) {
      if (k > 0) {
        EXPECT_GE(*brute.mean_value[k], *brute.mean_value[k - 1]);
      }
      for (std::size_t s = 1; s < 4; ++s) EXPECT_GE(*brute.mean_value[k] + 1e-9, *r.curves[m * 4 + s].mean_value[k]);
    }
  }
}

TEST(Sweep, WorkerCountDoesNotChangeResults) {
  auto c = parse_config(small_config());
  const auto one = run_sweep(c);
  c.workers = 3;
  const auto three = run_sweep(c);
  ASSERT_EQ(one.curves.size(), three.curves.size());
  for (std::size_t i = 0; i < one.curves.size(); ++i) EXPECT_EQ(one.curves[i].mean_value, three.curves[i].mean_value);
}

TEST(Sweep, CapExceededCellsAreEmpty) {
  auto j = small_config();
  j["brute_cap"] = 30;  // C(2 + 6, 6) = 28 fits, C(3 + 6, 6) = 84 does not
  j["solvers"] = {"brute"};
  j["models"] = {"dtr"};
  const auto r = run_sweep(parse_config(j));
  EXPECT_TRUE(r.curves[0].mean_value[2].has_value());
  EXPECT_FALSE(r.curves[0].mean_value[3].has_value());
  const auto dir = scratch("sweep_cap");
  write_sweep_outputs(r, dir);
  const auto csv = slurp(dir / "curves.csv");
  EXPECT_EQ(csv.rfind("model,solver,k,mean_value\n", 0), 0u);
  EXPECT_NE(csv.find("DTR,brute,3,\n"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "curves_DTR.svg"));
}

TEST(Influence, DominantNodeRanksFirst) {
  ExperimentConfig c;
  c.synthetic.rows = 500;
  c.synthetic.weights = {0, 0, 0, 0, 0, 0, 40, 0};
  const auto report = run_influence(c);
  EXPECT_EQ(report.ranked().front().first, ConceptNode::politics);
  EXPECT_EQ(report.decile_size, (report.eligible + 9) / 10);
  const auto dir = scratch("influence");
  write_influence_outputs(report, dir);
  EXPECT_EQ(slurp(dir / "influence.csv").rfind("node,mean_allocation\npolitics,", 0), 0u);
}

TEST(Influence, NoFundedAdsIsAnError) {
  ExperimentConfig c;
  c.synthetic.rows = 20;
  c.synthetic.zero_spend_fraction = 1.0;
  try {
    run_influence(c);
    FAIL();
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "influence");
    EXPECT_THROW(std::rethrow_exception(e.cause()), EmptyReportError);
  }
}

TEST(Chart, DeterministicAndWellFormed) {
  const std::vector<Series> s = {{"a & b", {{0, 1}, {1, 2}, {2, 1.5}}}, {"c", {{0, 0}, {2, 3}}}};
  const ChartSpec spec{"t <1>", "x", "y", ChartStyle::lines, true};
  std::ostringstream a, b;
  write_svg_chart(a, spec, s);
  write_svg_chart(b, spec, s);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().rfind("<svg", 0), 0u);
  EXPECT_NE(a.str().find("a &amp; b"), std::string::npos);
  EXPECT_NE(a.str().find("t &lt;1&gt;"), std::string::npos);
  EXPECT_EQ(a.str().find("nan"), std::string::npos);
}

TEST(Chart, DegenerateRangesStayFinite) {
  std::ostringstream out;
  write_svg_chart(out, {"flat", "x", "y", ChartStyle::markers, false}, {{"only", {{1, 1}}}});
  EXPECT_EQ(out.str().find("nan"), std::string::npos);
  EXPECT_EQ(out.str().find("inf"), std::string::npos);
}

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + OCNC_CLI_PATH + "\" " + args + " > /dev/null 2>&1";
  return std::system(cmd.c_str());
}

}  // namespace

TEST(Cli, RepeatedRunsAreByteIdentical) {
  const auto dir = scratch("cli");
  {
    auto j = small_config();
    j["iterations"] = 2;
    std::ofstream(dir / "config.json") << j.dump(2);
  }
  const std::vector<std::string> commands = {"synth", "ingest", "map", "train", "evaluate", "optimize", "sweep --quiet",
                                             "influence"};
  for (const char* run : {"a", "b"})
    for (const auto& cmd : commands)
      ASSERT_EQ(run_cli("--config " + (dir / "config.json").string() + " --out " + (dir / run).string() + " " + cmd), 0)
          << cmd;
  std::size_t compared = 0;
  for (const auto& entry : fs::recursive_directory_iterator(dir / "a")) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), dir / "a");
    EXPECT_EQ(slurp(entry.path()), slurp(dir / "b" / rel)) << rel;
    ++compared;
  }
  EXPECT_GE(compared, 15u);
}

TEST(Cli, ErrorsExitNonZero) {
  EXPECT_NE(run_cli(""), 0);
  EXPECT_NE(run_cli("frobnicate"), 0);
  EXPECT_NE(run_cli("--config /nonexistent.json evaluate"), 0);
  const auto dir = scratch("cli_err");
  std::ofstream(dir / "bad.json") << R"({"budget": {"min": 4, "max": 1}})";
  EXPECT_NE(run_cli("--config " + (dir / "bad.json").string() + " sweep"), 0);
}

TEST(Samples, ConfigsParse) {
  const auto dir = fs::path(OCNC_TEST_FIXTURES) / ".." / ".." / "samples";
  std::size_t parsed = 0;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".json") {
      EXPECT_NO_THROW(load_config(e.path())) << e.path();
      ++parsed;
    }
  EXPECT_GE(parsed, 3u);
}
