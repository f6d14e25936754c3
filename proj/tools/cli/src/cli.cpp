/* Copyright 2026 The trackcast Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "trackcast/cli/cli.hpp"

#include <cstdlib>
#include <ostream>

#include <CLI11.hpp>

#include "trackcast/cli/commands.hpp"
#include "trackcast/errors.hpp"

namespace trackcast::cli {

namespace {

fs::path output_root() {
  const char* env = std::getenv(kOutputRootEnv);
  return (env && *env) ? fs::path(env) : fs::path("trackcast-out");
}

void add_overrides(CLI::App& cmd, Overrides& o, bool with_loss) {
  cmd.add_option("--seed", o.seed, "Seed for weight initialisation and shuffling");
  cmd.add_option("--pad-mode", o.pad_mode, "Temporal padding of both encoders")
      ->check(CLI::IsMember({"causal", "symmetric"}));
  if (with_loss) {
    cmd.add_option("--loss", o.loss, "Training loss")->check(CLI::IsMember({"mse", "smooth-l1"}));
    cmd.add_option("--epochs", o.epochs, "Total epochs (overrides the config)");
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"trackcast: vehicle trajectory prediction"};
  app.require_subcommand(1);
  app.set_version_flag("--version", TRACKCAST_VERSION);

  IngestOptions ingest;
  std::string out_dir;
  auto* c_ingest = app.add_subcommand("ingest", "Window NGSIM-style track tables into sample archives");
  c_ingest->add_option("inputs", ingest.inputs, "Track tables (comma or tab separated)")
      ->required()
      ->check(CLI::ExistingFile);
  c_ingest->add_option("--data", ingest.inputs, "Track table (alternative to positional inputs)")
      ->check(CLI::ExistingFile);
  c_ingest->add_option("--out", out_dir, "Output directory");
  c_ingest->add_option("--stride", ingest.stride, "Source frames between window start candidates")
      ->check(CLI::PositiveNumber);
  c_ingest->add_option("--format", ingest.format, "Archive format")
      ->check(CLI::IsMember({"text", "binary"}));
  c_ingest->add_option("--seed", ingest.seed, "Partition seed");

  TrainOptions train;
  auto* c_train = app.add_subcommand("train", "Train a model on ingested archives");
  c_train->add_option("--data", train.data, "Ingest output directory")->required();
  c_train->add_option("--config", train.config, "Run configuration JSON")->check(CLI::ExistingFile);
  c_train->add_option("--out", out_dir, "Output directory");
  c_train->add_option("--resume", train.resume, "Resume from a resume.ckpt")
      ->check(CLI::ExistingFile);
  add_overrides(*c_train, train.overrides, true);

  EvalOptions eval;
  auto* c_eval = app.add_subcommand("eval", "Horizon RMSE and ADE of a checkpoint");
  c_eval->add_option("--checkpoint", eval.checkpoint)->required()->check(CLI::ExistingFile);
  c_eval->add_option("--data", eval.data, "Ingest output directory or archive")->required();
  c_eval->add_option("--split", eval.split)->check(CLI::IsMember({"train", "val", "test"}));
  c_eval->add_option("--config", eval.config, "Refuse to run unless this config matches")
      ->check(CLI::ExistingFile);
  c_eval->add_option("--out", out_dir, "Output directory");

  PredictOptions predict;
  auto* c_predict = app.add_subcommand("predict", "Plot-ready trace for one sample");
  c_predict->add_option("--checkpoint", predict.checkpoint)->required()->check(CLI::ExistingFile);
  c_predict->add_option("--data", predict.data, "Ingest output directory or archive")->required();
  c_predict->add_option("--split", predict.split)->check(CLI::IsMember({"train", "val", "test"}));
  c_predict->add_option("--sample", predict.sample, "Sample index within the split");
  c_predict->add_option("--config", predict.config, "Refuse to run unless this config matches")
      ->check(CLI::ExistingFile);
  c_predict->add_option("--out", out_dir, "Output directory");

  ComplexityOptions complexity;
  auto* c_complexity = app.add_subcommand("complexity", "Parameter and MAC counts per layer");
  c_complexity->add_option("--config", complexity.config)->check(CLI::ExistingFile);
  c_complexity->add_option("--neighbors", complexity.neighbors, "Neighbours encoded per sample");
  c_complexity->add_option("--out", out_dir, "Output directory");
  add_overrides(*c_complexity, complexity.overrides, false);

  SynthOptions synth;
  auto* c_synth = app.add_subcommand("synth", "Write a synthetic constant-velocity track table");
  c_synth->add_option("--vehicles", synth.vehicles)->check(CLI::PositiveNumber);
  c_synth->add_option("--frames", synth.frames)->check(CLI::PositiveNumber);
  c_synth->add_option("--seed", synth.seed);
  c_synth->add_option("--out", out_dir, "Output directory");

  std::string config_out;
  auto* c_init = app.add_subcommand("init-config", "Print or write the default run configuration");
  c_init->add_option("--out", config_out, "File to write (stdout when omitted)");

  std::vector<std::string> argv_store{"trackcast"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  auto out_or = [&](const char* command) {
    return out_dir.empty() ? output_root() / command : fs::path(out_dir);
  };
  try {
    if (c_ingest->parsed()) {
      ingest.out = out_or("ingest");
      return cmd_ingest(ingest, out, err);
    }
    if (c_train->parsed()) {
      train.out = out_or("train");
      return cmd_train(train, out, err);
    }
    if (c_eval->parsed()) {
      eval.out = out_dir;
      return cmd_eval(eval, out);
    }
    if (c_predict->parsed()) {
      predict.out = out_or("predict");
      return cmd_predict(predict, out);
    }
    if (c_complexity->parsed()) {
      complexity.out = out_dir;
      return cmd_complexity(complexity, out);
    }
    if (c_synth->parsed()) {
      synth.out = out_or("synth");
      return cmd_synth(synth, out);
    }
    if (c_init->parsed()) return cmd_init_config(config_out, out);
  } catch (const ConfigMismatchError& e) {
    err << "error: " << e.what() << "\n";
    return kExitMismatch;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitInput;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace trackcast::cli
