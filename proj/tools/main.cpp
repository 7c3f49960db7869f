#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "softsense/app/commands.hpp"
#include "softsense/errors.hpp"

namespace {

using namespace softsense;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::config:
    case ErrorKind::internal:
      return 1;
    case ErrorKind::data:
    case ErrorKind::shape:
    case ErrorKind::insufficient_data:
      return 2;
    case ErrorKind::numeric:
      return 3;
  }
  return 1;
}

std::string one_line(std::string text) {
  for (char& c : text) {
    if (c == '\n' || c == '\r') c = ' ';
    if (c == '"') c = '\'';
  }
  return text;
}

// error=<kind> [epoch=<n> batch=<n>] message="<text>"
void report_error(const char* kind, const std::string& message,
                  const NumericError* numeric = nullptr) {
  std::cerr << "softsense: error=" << kind;
  if (numeric && numeric->located()) {
    std::cerr << " epoch=" << numeric->epoch() << " batch=" << numeric->batch();
  }
  std::cerr << " message=\"" << one_line(message) << "\"\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Multi-head quality-driven autoencoder soft-sensing toolkit"};
  cli.require_subcommand(1);
  cli.fallthrough();

  app::GlobalOptions global;
  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  cli.add_option("--config", config_path, "INI run configuration")->check(CLI::ExistingFile);
  auto* seed_opt = cli.add_option("--seed", seed, "Override the run seed");
  cli.add_option("--out", out_dir, "Output directory");
  cli.add_flag("--quiet", global.quiet, "Only print errors");

  auto* train = cli.add_subcommand("train", "Train a model and evaluate it on the test split");

  app::EvaluateOptions eval_opts;
  std::string checkpoint, data_csv;
  auto* evaluate = cli.add_subcommand("evaluate", "Per-head metrics of a checkpoint");
  auto* predict = cli.add_subcommand("predict", "Per-head probabilities of a checkpoint");
  for (auto* sub : {evaluate, predict}) {
    sub->add_option("--checkpoint", checkpoint, "checkpoint.json from train")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--data", data_csv, "CSV to score instead of the configured test split");
  }

  auto* experiment = cli.add_subcommand("experiment", "Run the model comparison grid");
  auto* headmode =
      cli.add_subcommand("headmode-compare", "Multi-head vs. categorical single-head convergence");

  app::ParamsOptions params_opts;
  std::size_t input_dim = 0, head_units = 0;
  std::vector<std::size_t> hidden;
  auto* params = cli.add_subcommand("params", "Parameter count table of a stacked model");
  auto* input_opt = params->add_option("--input-dim", input_dim, "Input feature count");
  auto* heads_opt = params->add_option("--head-units", head_units, "Output units (two per head)");
  auto* hidden_opt =
      params->add_option("--hidden", hidden, "Hidden widths, e.g. 400,200,100,50")->delimiter(',');

  auto* generate = cli.add_subcommand("generate", "Write the synthetic dataset to CSV");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return cli.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return cli.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error("usage_error", e.what());
    return 1;
  }

  if (!config_path.empty()) global.config = config_path;
  if (*seed_opt) global.seed = seed;
  if (!out_dir.empty()) global.out = out_dir;

  try {
    const app::RunConfig config = app::resolve_config(global);
    const app::Console console{global.quiet ? nullptr : &std::cout};
    if (*train) {
      app::cmd_train(config, console);
    } else if (*evaluate || *predict) {
      eval_opts.checkpoint = checkpoint;
      if (!data_csv.empty()) eval_opts.data = data_csv;
      eval_opts.config_from_checkpoint = !global.config;
      if (*evaluate) app::cmd_evaluate(config, eval_opts, console);
      else app::cmd_predict(config, eval_opts, console);
    } else if (*experiment) {
      app::cmd_experiment(config, console);
    } else if (*headmode) {
      app::cmd_headmode_compare(config, console);
    } else if (*params) {
      if (*input_opt) params_opts.input_dim = input_dim;
      if (*heads_opt) params_opts.head_units = head_units;
      if (*hidden_opt) params_opts.hidden_dims = hidden;
      app::cmd_params(config, params_opts, std::cout);
    } else if (*generate) {
      app::cmd_generate(config, console);
    }
  } catch (const NumericError& e) {
    report_error(error_kind_name(e.kind()), e.what(), &e);
    return exit_code(e.kind());
  } catch (const Error& e) {
    report_error(error_kind_name(e.kind()), e.what());
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    report_error("internal_error", e.what());
    return 1;
  }
  return 0;
}
