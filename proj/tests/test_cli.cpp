#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "softsense/app/commands.hpp"
#include "softsense/app/config.hpp"
#include "softsense/app/experiment.hpp"
#include "softsense/checkpoint.hpp"
#include "softsense/errors.hpp"

using namespace softsense;
using namespace softsense::app;
namespace fs = std::filesystem;

namespace {

const char* kSmallConfig = R"([synthetic]
n_samples = 400
n_features = 8
latent_rank = 3
imbalance_ratios = 2, 4
observation_rates = 0.8

[model]
hidden_dims = 6, 4

[train]
batch_size = 64
max_epochs = 5
mlp_hidden = 6

[experiment]
models = LR, SQAE+LR
imbalance = weighted_class, none
seeds = 1, 2

[headmode]
epochs = 6
reference_epoch = 3
)";

class Workdir : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    root_ = fs::temp_directory_path() / (std::string("softsense_cli_") + info->name());
    fs::remove_all(root_);
    fs::create_directories(root_);
    write("small.ini", kSmallConfig);
  }
  void TearDown() override { fs::remove_all(root_); }

  fs::path path(const std::string& name) const { return root_ / name; }

  void write(const std::string& name, const std::string& body) const {
    std::ofstream(root_ / name) << body;
  }

  static std::string read(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  RunConfig small(const std::string& out) const {
    RunConfig c = parse_config(kSmallConfig);
    c.output_dir = path(out);
    return c;
  }

  struct Result {
    int code;
    std::string err;
    std::string out;
  };

  // Runs the CLI inside the work directory.
  Result cli(const std::string& args) const {
    const std::string cmd = "cd '" + root_.string() + "' && '" SOFTSENSE_CLI_PATH "' " + args +
                            " > stdout.txt 2> stderr.txt";
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, read(path("stderr.txt")),
            read(path("stdout.txt"))};
  }

  fs::path root_;
};

std::size_t count_lines(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

}  // namespace

TEST(Config, DefaultsEchoRoundTrip) {
  const RunConfig defaults;
  const std::string echo = echo_config(defaults);
  EXPECT_EQ(echo_config(parse_config(echo)), echo);
  EXPECT_NE(echo.find("learning_rate = 0.001"), std::string::npos);
  EXPECT_NE(echo.find("batch_size = 512"), std::string::npos);
  EXPECT_NE(echo.find("early_stop_min_delta = 1e-05"), std::string::npos);
  EXPECT_EQ(echo.find("[output]"), std::string::npos);
}

TEST(Config, ValuesAreParsed) {
  const RunConfig c = parse_config(std::string(kSmallConfig) +
                                   "\n[metrics]\nbeta_policy = fixed\nfixed_beta = 2.5\n"
                                   "; a comment\n[output]\ndir = elsewhere\n");
  EXPECT_EQ(c.data.synthetic.n_samples, 400u);
  EXPECT_EQ(c.data.synthetic.imbalance_ratios, (std::vector<double>{2.0, 4.0}));
  EXPECT_EQ(c.model.hidden_dims, (std::vector<std::size_t>{6, 4}));
  EXPECT_EQ(c.experiment.models.size(), 2u);
  EXPECT_EQ(c.experiment.imbalance.back(), ImbalanceMethod::none);
  EXPECT_EQ(c.metrics.beta_policy, BetaPolicy::Kind::fixed);
  EXPECT_EQ(c.metrics.fixed_beta, 2.5);
  EXPECT_EQ(c.output_dir, "elsewhere");
  EXPECT_EQ(echo_config(parse_config(echo_config(c))), echo_config(c));
}

TEST(Config, UnknownKeysAndBadValuesAreErrors) {
  EXPECT_THROW(parse_config("[train]\nlearning_rat = 0.1\n"), ConfigError);
  EXPECT_THROW(parse_config("[trian]\nseed = 1\n"), ConfigError);
  EXPECT_THROW(parse_config("seed = 1\n"), ConfigError);
  EXPECT_THROW(parse_config("[train]\nbatch_size = many\n"), ConfigError);
  EXPECT_THROW(parse_config("[train]\nbatch_size = -3\n"), ConfigError);
  EXPECT_THROW(parse_config("[train]\nbatch_size = 0\n"), ConfigError);
  EXPECT_THROW(parse_config("[model]\nkind = XGB\n"), ConfigError);
  EXPECT_THROW(parse_config("[model]\nhidden_dims =\n"), ConfigError);
  EXPECT_THROW(parse_config("[train]\nseed = 1\nseed = 2\n"), ConfigError);
  EXPECT_THROW(parse_config("[data]\nsource = csv\n"), ConfigError);
  try {
    parse_config("[train]\nnaive_lambda = x\n");
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("naive_lambda"), std::string::npos);
  }
}

TEST_F(Workdir, TrainIsByteReproducibleAndEvaluateMatches) {
  const Console quiet;
  cmd_train(small("a"), quiet);
  cmd_train(small("b"), quiet);
  for (const char* f : {"checkpoint.json", "history.csv", "metrics.csv", "config.ini"}) {
    EXPECT_EQ(read(path("a") / f), read(path("b") / f)) << f;
  }
  EvaluateOptions opts{path("a") / "checkpoint.json", std::nullopt, true};
  cmd_evaluate(small("a/eval"), opts, quiet);
  EXPECT_EQ(read(path("a") / "metrics.csv"), read(path("a/eval") / "metrics.csv"));
  EXPECT_EQ(read(path("a") / "metrics.txt"), read(path("a/eval") / "metrics.txt"));

  // the echoed config alone reproduces the run
  RunConfig again = load_config(path("a") / "config.ini");
  again.output_dir = path("c");
  cmd_train(again, quiet);
  EXPECT_EQ(read(path("a") / "checkpoint.json"), read(path("c") / "checkpoint.json"));

  const std::string history = read(path("a") / "history.csv");
  EXPECT_EQ(history.substr(0, history.find('\n')), "stage,epoch,updates,J,J_x,J_y,sigma1_sq,sigma2_sq");
  EXPECT_EQ(count_lines(history), 1u + 3u * 5u);
}

TEST_F(Workdir, ZeroEpochsKeepsInitialModel) {
  RunConfig c = small("z");
  c.train.max_epochs = 0;
  cmd_train(c, {});
  EXPECT_EQ(count_lines(read(path("z") / "history.csv")), 1u);
  const Checkpoint ckpt = load_checkpoint(path("z") / "checkpoint.json");
  EXPECT_EQ(ckpt.model.layers.size(), 2u);
  for (double b : ckpt.model.classifier.output.bias) EXPECT_EQ(b, 0.0);
}

TEST_F(Workdir, ExternalCsvWithMissingHeadAndWrongWidth) {
  cmd_train(small("m"), {});
  cmd_generate(small("gen"), {});
  const fs::path csv = path("gen") / "synthetic.csv";
  EXPECT_EQ(csv_header(csv).size(), 10u);

  // drop the Y2 column: the head is reported undefined, not omitted
  std::ifstream in(csv);
  std::ostringstream dropped;
  for (std::string line; std::getline(in, line);) {
    dropped << line.substr(0, line.rfind(',')) << "\n";
  }
  write("no_y2.csv", dropped.str());
  EvaluateOptions opts{path("m") / "checkpoint.json", path("no_y2.csv"), true};
  cmd_evaluate(small("m/e"), opts, {});
  const std::string metrics = read(path("m/e") / "metrics.csv");
  EXPECT_NE(metrics.find("\nY1,"), std::string::npos);
  EXPECT_NE(metrics.find("\nY2,0,0,0,0,0,undefined,undefined,undefined"), std::string::npos);
  const std::string text = read(path("m/e") / "metrics.txt");
  EXPECT_LT(text.find("Y1"), text.find("Y2"));

  cmd_predict(small("m/p"), opts, {});
  EXPECT_EQ(count_lines(read(path("m/p") / "predictions.csv")), 401u);

  write("narrow.csv", "x1,x2,Y1,Y2\n1,2,0,1\n");
  opts.data = path("narrow.csv");
  try {
    cmd_evaluate(small("m/n"), opts, {});
    FAIL() << "expected a shape error";
  } catch (const ShapeError& e) {
    EXPECT_NE(std::string(e.what()).find("expects 8"), std::string::npos);
  }
}

TEST_F(Workdir, DegenerateGridMatchesSingleTrain) {
  RunConfig c = small("grid");
  c.experiment.models = {ModelKind::parse("LR")};
  c.experiment.imbalance = {ImbalanceMethod::weighted_class};
  c.experiment.seeds = {7};
  cmd_experiment(c, {});
  RunConfig t = small("single");
  t.model.kind = ModelKind::parse("LR");
  t.train.seed = 7;
  cmd_train(t, {});

  const std::string runs = read(path("grid") / "runs.csv");
  const std::string metrics = read(path("single") / "metrics.csv");
  std::istringstream m(metrics);
  std::string line;
  std::getline(m, line);
  while (std::getline(m, line)) {
    EXPECT_NE(runs.find("LR WC,LR,weighted_class,,7," + line + "\n"), std::string::npos) << line;
  }
}

TEST_F(Workdir, GridRowCountsAndParallelAgreement) {
  RunConfig serial = small("serial");
  cmd_experiment(serial, {});
  RunConfig parallel = small("parallel");
  parallel.experiment.jobs = 3;
  cmd_experiment(parallel, {});
  // cells: LR x 2 imbalance + SQAE+LR x 2 imbalance x 2 combiners = 6
  const std::string runs = read(path("serial") / "runs.csv");
  EXPECT_EQ(count_lines(runs), 1u + 6u * 2u * 2u);
  for (const char* f : {"runs.csv", "cells.csv", "report.txt"}) {
    EXPECT_EQ(read(path("serial") / f), read(path("parallel") / f)) << f;
  }
  const std::string report = read(path("serial") / "report.txt");
  EXPECT_NE(report.find("WC: weighted class, WL: weighted loss, VWL: variance weighted loss"),
            std::string::npos);
  EXPECT_NE(report.find("WEIGHTED CLASS"), std::string::npos);
  EXPECT_NE(report.find("SQAE"), std::string::npos);
  EXPECT_EQ(count_lines(read(path("serial") / "failures.csv")), 1u);
}

TEST_F(Workdir, HeadmodeSeriesHaveOneRowPerEpoch) {
  cmd_headmode_compare(small("hm"), {});
  const std::string csv = read(path("hm") / "headmode_history.csv");
  std::size_t multi = 0, cat = 0;
  std::istringstream in(csv);
  for (std::string line; std::getline(in, line);) {
    multi += line.rfind("multihead,", 0) == 0;
    cat += line.rfind("categorical,", 0) == 0;
  }
  EXPECT_EQ(multi, 6u);
  EXPECT_GE(cat, 1u);
  EXPECT_NE(read(path("hm") / "headmode.txt").find("reference loss"), std::string::npos);
}

TEST_F(Workdir, ParamsTable) {
  const Result four = cli("params --input-dim 632 --hidden 400,200,100,50 --head-units 16");
  EXPECT_EQ(four.code, 0);
  EXPECT_NE(four.out.find("Total 730562"), std::string::npos);
  EXPECT_NE(four.out.find("1.79%"), std::string::npos);
  EXPECT_NE(four.out.find("633 * 400 = 253200"), std::string::npos);
  const Result tiny = cli("params --input-dim 2 --hidden 2 --head-units 2");
  EXPECT_NE(tiny.out.find("Total 24"), std::string::npos);
  const Result bad = cli("params --input-dim 2 --hidden 2 --head-units 3");
  EXPECT_EQ(bad.code, 1);
}

TEST_F(Workdir, ExitCodesAndErrorLine) {
  const Result usage = cli("--bogus train");
  EXPECT_EQ(usage.code, 1);
  EXPECT_EQ(count_lines(usage.err), 1u);
  EXPECT_EQ(usage.err.rfind("softsense: error=usage_error", 0), 0u);

  write("typo.ini", "[train]\nlearnig_rate = 0.1\n");
  const Result config = cli("--config typo.ini train");
  EXPECT_EQ(config.code, 1);
  EXPECT_EQ(config.err.rfind("softsense: error=config_error message=\"", 0), 0u);
  EXPECT_EQ(count_lines(config.err), 1u);

  write("csv.ini", "[data]\nsource = csv\ntrain_csv = absent.csv\nlabel_columns = Y1\n");
  const Result data = cli("--config csv.ini --quiet train");
  EXPECT_EQ(data.code, 2);
  EXPECT_EQ(data.err.rfind("softsense: error=data_error", 0), 0u);

  std::string diverging = kSmallConfig;
  diverging.replace(diverging.find("batch_size = 64"), 15, "batch_size = 64\nlearning_rate = 1e300");
  write("diverge.ini", diverging);
  const Result numeric = cli("--config diverge.ini --quiet train");
  EXPECT_EQ(numeric.code, 3);
  EXPECT_EQ(numeric.err.rfind("softsense: error=numeric_divergence epoch=", 0), 0u);
  EXPECT_NE(numeric.err.find(" batch="), std::string::npos);
}

TEST_F(Workdir, CliWritesOnlyInsideOutputDir) {
  const Result r = cli("--config small.ini --seed 3 --out run --quiet train");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::set<std::string> top;
  for (const auto& entry : fs::directory_iterator(root_)) {
    top.insert(entry.path().filename().string());
  }
  EXPECT_EQ(top, (std::set<std::string>{"small.ini", "run", "stdout.txt", "stderr.txt"}));
  EXPECT_NE(read(path("run") / "config.ini").find("seed = 3"), std::string::npos);
  const Result eval = cli("--out run/eval evaluate --checkpoint run/checkpoint.json");
  ASSERT_EQ(eval.code, 0) << eval.err;
  EXPECT_EQ(read(path("run") / "metrics.csv"), read(path("run/eval") / "metrics.csv"));
}

TEST_F(Workdir, GenerateMatchesLibrary) {
  const Result r = cli("--config small.ini --out data --quiet generate");
  ASSERT_EQ(r.code, 0) << r.err;
  const Dataset loaded = load_csv(path("data") / "synthetic.csv", {{}, {"Y1", "Y2"}});
  RunConfig c = small("unused");
  Rng rng(c.data.synthetic.seed);
  const Dataset direct = generate_synthetic(c.data.synthetic, rng);
  EXPECT_EQ(loaded.features, direct.features);
  EXPECT_EQ(loaded.labels, direct.labels);
}
