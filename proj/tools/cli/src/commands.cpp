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

#include "trackcast/cli/commands.hpp"

#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "trackcast/cli/manifest.hpp"
#include "trackcast/errors.hpp"
#include "trackcast/ingest/archive.hpp"
#include "trackcast/ingest/split.hpp"
#include "trackcast/ingest/synthetic.hpp"
#include "trackcast/ingest/track.hpp"
#include "trackcast/ingest/window.hpp"
#include "trackcast/model/complexity.hpp"
#include "trackcast/model/trajectory_model.hpp"
#include "trackcast/num/checkpoint.hpp"
#include "trackcast/train/metrics.hpp"

namespace trackcast::cli {

using nlohmann::json;

namespace {

constexpr const char* kModelConfigMeta = "run.config";
constexpr const char* kSplits[] = {"train", "val", "test"};

// Shortest text that reads back to the same double.
std::string exact_str(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string num_str(double v, int digits = 9) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  if (!out) throw InputError("cannot write " + path.string());
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError("cannot create " + dir.string() + ": " + ec.message());
}

// `data` is an archive file or a directory holding <split>.samples / <split>.jsonl.
fs::path split_path(const fs::path& data, const std::string& split) {
  if (fs::is_regular_file(data)) return data;
  for (auto format : {ingest::ArchiveFormat::kBinary, ingest::ArchiveFormat::kText}) {
    fs::path p = data / (split + ingest::archive_extension(format));
    if (fs::is_regular_file(p)) return p;
  }
  throw InputError("no '" + split + "' archive in " + data.string());
}

std::optional<fs::path> find_split(const fs::path& data, const std::string& split) {
  try {
    return split_path(data, split);
  } catch (const InputError&) {
    return std::nullopt;
  }
}

std::uint64_t combine(std::uint64_t acc, std::uint64_t v) {
  const std::string bytes(reinterpret_cast<const char*>(&v), sizeof v);
  return ingest::fnv1a64(bytes, acc);
}

// Model rebuilt from the configuration stored in a checkpoint. A --config
// whose model section hashes differently is refused.
model::TrajectoryModel model_from_checkpoint(const num::Checkpoint& ck, const fs::path& config) {
  const std::string* stored = ck.meta(kModelConfigMeta);
  if (!stored) throw InputError("checkpoint carries no model configuration");
  RunConfig rc;
  try {
    rc = run_config_from_json(json::parse(*stored));
  } catch (const json::parse_error& e) {
    throw InputError(std::string("checkpoint configuration: ") + e.what());
  }
  if (!config.empty()) {
    const RunConfig requested = load_run_config(config);
    if (model::config_hash(requested.model) != ck.config_hash) {
      throw ConfigMismatchError("config " + model::hash_string(model::config_hash(requested.model)) +
                                " does not match checkpoint " + model::hash_string(ck.config_hash));
    }
  }
  model::TrajectoryModel m(rc.model, rc.train.seed);
  m.load(ck);
  return m;
}

num::Checkpoint tagged(num::Checkpoint ck, const RunConfig& rc) {
  ck.set_meta(kModelConfigMeta, to_json(rc).dump());
  return ck;
}

std::string history_csv(const std::vector<train::EpochRecord>& history) {
  std::string s = "epoch,train_loss,val_loss,lr,improved\n";
  for (const auto& e : history) {
    s += std::to_string(e.epoch) + ',' + exact_str(e.train_loss) + ',' + exact_str(e.val_loss) +
         ',' + exact_str(e.lr) + ',' + (e.improved ? "1" : "0") + '\n';
  }
  return s;
}

}  // namespace

json to_json(const RunConfig& config) {
  return {{"model", model::to_json(config.model)}, {"train", train::to_json(config.train)}};
}

RunConfig run_config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("run config: expected an object");
  for (const auto& [key, value] : j.items()) {
    if (key != "model" && key != "train") {
      throw ConfigError("run config: unknown key '" + key + "'");
    }
  }
  RunConfig rc;
  if (j.contains("model")) rc.model = model::model_config_from_json(j.at("model"));
  if (j.contains("train")) rc.train = train::train_config_from_json(j.at("train"));
  return rc;
}

RunConfig load_run_config(const fs::path& path) {
  if (path.empty()) return {};
  return run_config_from_json(read_json(path));
}

void apply(const Overrides& o, RunConfig& rc) {
  if (o.seed) rc.train.seed = *o.seed;
  if (o.pad_mode) {
    const num::PadMode mode = num::pad_mode_from_string(*o.pad_mode);
    rc.model.neighbor_atcn.pad_mode = mode;
    rc.model.ego_atcn.pad_mode = mode;
  }
  if (o.loss) rc.train.loss = train::loss_kind_from_string(*o.loss);
  if (o.epochs) rc.train.epochs = *o.epochs;
  rc.model.validate();
  rc.train.validate();
}

int cmd_ingest(const IngestOptions& opt, std::ostream& out, std::ostream& err) {
  RunManifest manifest = start_manifest("ingest");
  manifest.seed = opt.seed;
  const ingest::ArchiveFormat format = ingest::archive_format_from_string(opt.format);
  ingest::WindowConfig window;
  window.stride = opt.stride;
  if (opt.inputs.empty()) throw UsageError("ingest: no input files");

  // Everything is parsed before the first write, so a fatal input error
  // leaves no partial output behind.
  std::vector<ingest::TrajectorySample> samples;
  std::string stats = "dataset,file,rows,accepted,malformed,duplicates,candidates,skipped,samples,"
                      "neighbors,outside,collisions\n";
  std::uint64_t fingerprint = ingest::fnv1a64("");
  for (std::size_t d = 0; d < opt.inputs.size(); ++d) {
    const fs::path& path = opt.inputs[d];
    ingest::ParsedTracks tracks = ingest::parse_tracks_file(path);
    for (const std::string& w : tracks.warnings) err << path.string() << ": " << w << '\n';
    auto windows = ingest::window_samples(tracks.points, window, static_cast<std::uint32_t>(d));
    const auto& p = tracks.stats;
    const auto& w = windows.stats;
    stats += std::to_string(d) + ',' + path.filename().string();
    for (std::size_t v : {p.rows, p.accepted, p.malformed, p.duplicates, w.candidates, w.skipped,
                          w.samples, w.neighbors, w.outside, w.collisions}) {
      stats += ',' + std::to_string(v);
    }
    stats += '\n';
    out << path.string() << ": " << p.accepted << "/" << p.rows << " rows, " << p.malformed
        << " malformed, " << p.duplicates << " duplicate; " << w.samples << " samples ("
        << w.skipped << " skipped, " << w.collisions << " cell collisions, " << w.outside
        << " neighbours outside grid)\n";
    samples.insert(samples.end(), std::make_move_iterator(windows.samples.begin()),
                   std::make_move_iterator(windows.samples.end()));
    fingerprint = combine(fingerprint, ingest::file_fingerprint(path));
    manifest.inputs.push_back(path.string());
  }

  const ingest::Partitions parts = ingest::split_dataset(samples, {}, opt.seed);
  ensure_dir(opt.out);
  const std::vector<ingest::TrajectorySample>* sets[] = {&parts.train, &parts.val, &parts.test};
  for (std::size_t i = 0; i < 3; ++i) {
    const std::string name = std::string(kSplits[i]) + ingest::archive_extension(format);
    ingest::save_archive(opt.out / name, *sets[i], format);
    manifest.outputs.push_back(name);
    out << kSplits[i] << ": " << sets[i]->size() << " samples\n";
  }
  write_file(opt.out / "ingest_stats.csv", stats);
  manifest.outputs.push_back("ingest_stats.csv");
  manifest.dataset_fingerprint = fingerprint;
  write_manifest(opt.out, manifest);
  return 0;
}

int cmd_train(const TrainOptions& opt, std::ostream& out, std::ostream& err) {
  RunManifest manifest = start_manifest("train");
  RunConfig rc;
  num::Checkpoint resume;
  if (!opt.resume.empty()) {
    resume = num::load_checkpoint(opt.resume);
    const std::string* stored = resume.meta(kModelConfigMeta);
    if (!stored) throw InputError(opt.resume.string() + ": not a training checkpoint");
    rc = opt.config.empty() ? run_config_from_json(json::parse(*stored))
                            : load_run_config(opt.config);
    manifest.inputs.push_back(opt.resume.string());
  } else {
    rc = load_run_config(opt.config);
  }
  apply(opt.overrides, rc);
  const std::uint64_t hash = model::config_hash(rc.model);

  const fs::path train_path = split_path(opt.data, "train");
  const auto train_set = ingest::load_archive(train_path);
  std::vector<ingest::TrajectorySample> val_set;
  std::uint64_t fingerprint = ingest::file_fingerprint(train_path);
  manifest.inputs.push_back(train_path.string());
  if (auto val_path = find_split(opt.data, "val"); val_path && *val_path != train_path) {
    val_set = ingest::load_archive(*val_path);
    fingerprint = combine(fingerprint, ingest::file_fingerprint(*val_path));
    manifest.inputs.push_back(val_path->string());
  }
  if (train_set.empty()) throw InputError("training archive is empty");

  model::TrajectoryModel model(rc.model, rc.train.seed);
  train::TrainState state;
  if (!opt.resume.empty()) {
    if (resume.config_hash != hash) {
      throw ConfigMismatchError("resume checkpoint " + model::hash_string(resume.config_hash) +
                                " does not match config " + model::hash_string(hash));
    }
    state = train::restore_resume_checkpoint(model, resume);
    const fs::path best = opt.resume.parent_path() / "model.ckpt";
    if (fs::is_regular_file(best)) {
      num::Checkpoint ck = num::load_checkpoint(best);
      if (ck.config_hash == hash) state.best = std::move(ck);
    }
    out << "resuming after epoch " << state.epochs_done << "\n";
  }

  ensure_dir(opt.out);
  write_file(opt.out / "run_config.json", to_json(rc).dump(2) + "\n");
  train::TrainHooks hooks;
  hooks.on_epoch = [&](const train::EpochRecord& e, const train::TrainState& st,
                       model::TrajectoryModel& m) {
    out << "epoch " << e.epoch << "/" << rc.train.epochs << "  train " << num_str(e.train_loss, 6)
        << "  val " << num_str(e.val_loss, 6) << "  lr " << num_str(e.lr, 3)
        << (e.improved ? "  *" : "") << "\n";
    num::save_checkpoint(opt.out / "resume.ckpt", tagged(train::resume_checkpoint(m, st), rc));
  };
  const train::TrainResult result = train::train(model, train_set, val_set, rc.train, state, hooks);

  write_file(opt.out / "history.csv", history_csv(result.state.history));
  manifest.outputs = {"run_config.json", "history.csv"};
  if (fs::exists(opt.out / "resume.ckpt")) manifest.outputs.push_back("resume.ckpt");
  if (result.state.best) {
    num::save_checkpoint(opt.out / "model.ckpt", tagged(*result.state.best, rc));
    manifest.outputs.push_back("model.ckpt");
  }
  manifest.config_hash = hash;
  manifest.dataset_fingerprint = fingerprint;
  manifest.seed = rc.train.seed;
  write_manifest(opt.out, manifest);

  if (result.status == train::TrainStatus::kDiverged) {
    err << "training diverged in epoch " << result.state.epochs_done + 1 << ": " << result.message
        << "\n";
    if (!result.state.history.empty()) {
      const auto& last = result.state.history.back();
      err << "last completed epoch " << last.epoch << ": train " << num_str(last.train_loss)
          << ", val " << num_str(last.val_loss) << ", lr " << num_str(last.lr) << "\n";
    }
    return 3;
  }
  out << "best val loss " << num_str(result.state.plateau.best, 6) << "; wrote "
      << (opt.out / "model.ckpt").string() << "\n";
  return 0;
}

int cmd_eval(const EvalOptions& opt, std::ostream& out) {
  RunManifest manifest = start_manifest("eval");
  const num::Checkpoint ck = num::load_checkpoint(opt.checkpoint);
  model::TrajectoryModel model = model_from_checkpoint(ck, opt.config);
  const fs::path data = split_path(opt.data, opt.split);
  const auto samples = ingest::load_archive(data);
  if (samples.empty()) throw InputError(data.string() + ": no samples");

  const train::EvalReport report = train::evaluate(model, samples);
  const train::EvalReport baseline = train::evaluate_constant_position(samples);
  std::string csv = "horizon,steps,rmse_m,constant_position_rmse_m\n";
  out << "samples: " << report.samples << "\n";
  out << "horizon   rmse (m)   constant position (m)\n";
  for (std::size_t h = 0; h < train::kHorizonSteps.size(); ++h) {
    const std::string label = std::to_string(h + 1) + "s";
    csv += label + ',' + std::to_string(train::kHorizonSteps[h]) + ',' +
           num_str(report.rmse[h]) + ',' + num_str(baseline.rmse[h]) + '\n';
    char line[96];
    std::snprintf(line, sizeof line, "%-7s %10.4f %14.4f\n", label.c_str(), report.rmse[h],
                  baseline.rmse[h]);
    out << line;
  }
  csv += "ADE,," + num_str(report.ade) + ',' + num_str(baseline.ade) + '\n';
  char line[96];
  std::snprintf(line, sizeof line, "%-7s %10.4f %14.4f\n", "ADE", report.ade, baseline.ade);
  out << line;

  if (!opt.out.empty()) {
    ensure_dir(opt.out);
    write_file(opt.out / "eval.csv", csv);
    manifest.inputs = {opt.checkpoint.string(), data.string()};
    manifest.outputs = {"eval.csv"};
    manifest.config_hash = ck.config_hash;
    manifest.dataset_fingerprint = ingest::file_fingerprint(data);
    write_manifest(opt.out, manifest);
  }
  return 0;
}

int cmd_predict(const PredictOptions& opt, std::ostream& out) {
  RunManifest manifest = start_manifest("predict");
  const num::Checkpoint ck = num::load_checkpoint(opt.checkpoint);
  model::TrajectoryModel model = model_from_checkpoint(ck, opt.config);
  const fs::path data = split_path(opt.data, opt.split);
  const auto samples = ingest::load_archive(data);
  if (opt.sample >= samples.size()) {
    throw InputError("sample " + std::to_string(opt.sample) + " out of range (" +
                     std::to_string(samples.size()) + " samples)");
  }
  const ingest::TrajectorySample& s = samples[opt.sample];
  const auto prediction = model.predict(s);

  // Steps count from t0: history runs up to 0, truth and prediction from 1.
  std::string csv = "role,step,x,y\n";
  const auto hist = static_cast<long>(s.ego_history.size());
  auto emit = [&](const char* role, long step, const ingest::Position& p) {
    csv += std::string(role) + ',' + std::to_string(step) + ',' + exact_str(p[0]) + ',' +
           exact_str(p[1]) + '\n';
  };
  for (long k = 0; k < hist; ++k) emit("history", k - hist + 1, s.ego_history[k]);
  for (std::size_t k = 0; k < s.future.size(); ++k) emit("truth", long(k) + 1, s.future[k]);
  for (std::size_t k = 0; k < prediction.size(); ++k) emit("prediction", long(k) + 1, prediction[k]);

  ensure_dir(opt.out);
  write_file(opt.out / "trace.csv", csv);
  manifest.inputs = {opt.checkpoint.string(), data.string()};
  manifest.outputs = {"trace.csv"};
  manifest.config_hash = ck.config_hash;
  manifest.dataset_fingerprint = ingest::file_fingerprint(data);
  write_manifest(opt.out, manifest);
  out << "vehicle " << s.meta.vehicle_id << " t0 frame " << s.meta.t0_frame << ": "
      << s.ego_history.size() + s.future.size() + prediction.size() << " records -> "
      << (opt.out / "trace.csv").string() << "\n";
  return 0;
}

int cmd_complexity(const ComplexityOptions& opt, std::ostream& out) {
  RunManifest manifest = start_manifest("complexity");
  RunConfig rc = load_run_config(opt.config);
  apply(opt.overrides, rc);
  const model::ComplexityReport r = model::count_complexity(rc.model, {opt.neighbors});

  std::string layers = "layer,params,running_stats,macs\n";
  for (const auto& l : r.layers) {
    layers += l.name + ',' + std::to_string(l.params) + ',' + std::to_string(l.running_stats) + ',' +
              std::to_string(l.macs) + '\n';
  }
  layers += "total," + std::to_string(r.total_params) + ',' + std::to_string(r.total_running_stats) +
            ',' + std::to_string(r.total_macs) + '\n';

  const double param_dev = model::percent_deviation(r.total_params, model::kReferenceParams);
  const double mac_dev = model::percent_deviation(r.total_macs, model::kReferenceMacs);
  std::string totals = "quantity,value,reference,deviation_pct\n";
  totals += "params," + std::to_string(r.total_params) + ',' +
            std::to_string(model::kReferenceParams) + ',' + num_str(param_dev, 4) + '\n';
  totals += "macs," + std::to_string(r.total_macs) + ',' + std::to_string(model::kReferenceMacs) +
            ',' + num_str(mac_dev, 4) + '\n';
  totals += "running_stats," + std::to_string(r.total_running_stats) + ",,\n";

  char line[160];
  out << "layer                               params    stats         macs\n";
  for (const auto& l : r.layers) {
    std::snprintf(line, sizeof line, "%-32s %9" PRIu64 " %8" PRIu64 " %12" PRIu64 "\n",
                  l.name.c_str(), l.params, l.running_stats, l.macs);
    out << line;
  }
  std::snprintf(line, sizeof line,
                "total params %" PRIu64 " (reference %" PRIu64 ", %+.2f%%), running stats %" PRIu64
                "\ntotal MACs   %" PRIu64 " (reference %" PRIu64 ", %+.2f%%), %zu neighbour(s)\n",
                r.total_params, model::kReferenceParams, param_dev, r.total_running_stats,
                r.total_macs, model::kReferenceMacs, mac_dev, opt.neighbors);
  out << line;
  for (const auto* enc : {&rc.model.neighbor_atcn, &rc.model.ego_atcn}) {
    const char* name = enc == &rc.model.neighbor_atcn ? "neighbour" : "ego";
    for (const auto& s : model::separable_savings(*enc, rc.model.history_steps)) {
      std::snprintf(line, sizeof line, "%s block %zu: separable %" PRIu64 " MACs vs standard %" PRIu64
                    " (%.2fx)\n", name, s.block, s.separable_macs, s.standard_macs, s.ratio());
      out << line;
    }
  }

  if (!opt.out.empty()) {
    ensure_dir(opt.out);
    write_file(opt.out / "complexity.csv", layers);
    write_file(opt.out / "complexity_totals.csv", totals);
    manifest.config_hash = model::config_hash(rc.model);
    if (!opt.config.empty()) manifest.inputs = {opt.config.string()};
    manifest.outputs = {"complexity.csv", "complexity_totals.csv"};
    write_manifest(opt.out, manifest);
  }
  return 0;
}

int cmd_synth(const SynthOptions& opt, std::ostream& out) {
  RunManifest manifest = start_manifest("synth");
  manifest.seed = opt.seed;
  ingest::SyntheticHighway scene;
  scene.vehicles = opt.vehicles;
  scene.frames = opt.frames;
  scene.seed = opt.seed;
  const auto points = ingest::generate_highway(scene);
  ensure_dir(opt.out);
  std::ostringstream csv;
  ingest::write_tracks_csv(csv, points);
  write_file(opt.out / "tracks.csv", csv.str());
  manifest.outputs = {"tracks.csv"};
  write_manifest(opt.out, manifest);
  out << points.size() << " track points -> " << (opt.out / "tracks.csv").string() << "\n";
  return 0;
}

int cmd_init_config(const fs::path& out_path, std::ostream& out) {
  const std::string text = to_json(RunConfig{}).dump(2) + "\n";
  if (out_path.empty()) {
    out << text;
  } else {
    if (out_path.has_parent_path()) ensure_dir(out_path.parent_path());
    write_file(out_path, text);
  }
  return 0;
}

}  // namespace trackcast::cli
