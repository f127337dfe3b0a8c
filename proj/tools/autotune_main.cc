/******************************************************************************
 * Copyright 2026 The Autotune Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *****************************************************************************/

// Command-line front end wiring the pipeline together: suite generation,
// frame generation (synthetic expert + sampled queries), training,
// evaluation, model comparison, and the background-shift demo. Every
// command takes one --seed, fans it out through named sub-streams, and
// writes a manifest next to its outputs.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "autotune/common.h"
#include "autotune/evaluation.h"
#include "autotune/expert.h"
#include "autotune/frames.h"
#include "autotune/manifest.h"
#include "autotune/parallel.h"
#include "autotune/rng.h"
#include "autotune/sampler.h"
#include "autotune/shiftdemo.h"
#include "autotune/suite.h"
#include "autotune/training.h"
#include "autotune/valuenet.h"

namespace autotune {
namespace {

constexpr int kExitUsage = 1;
constexpr int kExitMalformedInput = 2;
constexpr int kExitContractViolation = 3;
constexpr int kExitNumericFailure = 4;

nlohmann::json LoadJsonFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("malformed JSON in " + path + ": " + e.what());
  }
  return j;
}

struct SuiteArgs {
  std::string config_path;
  std::string out;
  uint64_t seed = 0;
};

int CmdSuite(const SuiteArgs& args) {
  SuiteConfig config = args.config_path.empty()
                           ? SuiteConfig{{{"cruise", 2}, {"stop", 2}, {"follow", 2},
                                          {"yield", 2}, {"overtake", 2}, {"nudge", 2}}}
                           : SuiteConfigFromJson(LoadJsonFile(args.config_path));
  std::vector<Scenario> suite = GenerateScenarioSuite(config, args.seed);
  SaveSuite(suite, args.out);

  RunManifest manifest;
  manifest.command = "suite";
  manifest.tool_version = kToolVersion;
  manifest.seed = args.seed;
  manifest.config = ToJson(config);
  if (!args.config_path.empty()) manifest.AddInput(args.config_path);
  manifest.outputs = {args.out};
  manifest.Write(args.out);
  std::cout << "wrote " << suite.size() << " scenarios to " << args.out << "\n";
  return 0;
}

struct FramesArgs {
  std::string suite_path;
  std::string gt_path;
  std::string sampler_path;
  std::string out;
  uint64_t seed = 0;
  int holdout_every = 5;
  bool embed_features = false;
};

int CmdFrames(const FramesArgs& args) {
  std::vector<Scenario> suite = LoadSuite(args.suite_path);
  GroundTruthReward gt = args.gt_path.empty()
                             ? GroundTruthReward::Default()
                             : GroundTruthRewardFromJson(LoadJsonFile(args.gt_path));
  SamplerConfig sampler = args.sampler_path.empty()
                              ? SamplerConfig{}
                              : SamplerConfigFromJson(LoadJsonFile(args.sampler_path));
  sampler.seed = SubstreamSeed(args.seed, "sampler");
  DpResolution resolution;

  std::vector<FrameRecord> frames(suite.size());
  ParallelFor(static_cast<int>(suite.size()), [&](int i) {
    const Scenario& scenario = suite[static_cast<size_t>(i)];
    FrameRecord frame;
    frame.scenario_id = scenario.id;
    frame.split = (args.holdout_every > 0 && (i + 1) % args.holdout_every == 0)
                      ? "holdout"
                      : "train";
    frame.time_grid = scenario.time_grid;
    frame.expert = SyntheticExpert(scenario, gt, resolution, sampler.a_min, sampler.a_max);
    frame.samples = SampleTrajectories(scenario, sampler);
    if (args.embed_features) {
      OccupancyMap occupancy = ProjectObstacles(scenario);
      frame.expert_features = ExtractBlock(scenario, occupancy, frame.expert);
      std::vector<FeatureBlock> blocks;
      blocks.reserve(frame.samples.size());
      for (const auto& s : frame.samples) {
        blocks.push_back(ExtractBlock(scenario, occupancy, s));
      }
      frame.sample_features = std::move(blocks);
    }
    frames[static_cast<size_t>(i)] = std::move(frame);
  });
  WriteFrames(frames, args.out);

  RunManifest manifest;
  manifest.command = "frames";
  manifest.tool_version = kToolVersion;
  manifest.seed = args.seed;
  manifest.config = {{"gt", ToJson(gt)},
                     {"sampler", ToJson(sampler)},
                     {"holdout_every", args.holdout_every},
                     {"embed_features", args.embed_features}};
  manifest.AddInput(args.suite_path);
  if (!args.gt_path.empty()) manifest.AddInput(args.gt_path);
  if (!args.sampler_path.empty()) manifest.AddInput(args.sampler_path);
  manifest.outputs = {args.out};
  manifest.Write(args.out);
  std::cout << "wrote " << frames.size() << " frames to " << args.out << "\n";
  return 0;
}

struct TrainArgs {
  std::string frames_path;
  std::string suite_path;
  std::string config_path;
  std::string method = "rcirl";
  std::string out_model;
  uint64_t seed = 0;
};

int CmdTrain(const TrainArgs& args) {
  if (args.method != "rcirl" && args.method != "gan") {
    throw ContractError("unknown training method: " + args.method);
  }
  std::vector<Scenario> suite = LoadSuite(args.suite_path);
  if (suite.empty()) throw ContractError("suite is empty");
  TrainConfig config = args.config_path.empty()
                           ? TrainConfig{}
                           : TrainConfigFromJson(LoadJsonFile(args.config_path));
  config.seed = args.seed;
  NormTable norm = NormTable::Default();

  IngestReport ingest;
  std::vector<Frame> frames =
      IngestFrames(args.frames_path, suite, norm, &ingest, "train");
  std::cout << "ingest: kept " << ingest.kept << ", dropped " << ingest.dropped << "\n";

  TrainReport report;
  ValueModel model =
      args.method == "rcirl"
          ? TrainRcIrl(frames, config, suite.front().time_grid, norm, &report)
          : TrainGanBaseline(frames, config, suite.front().time_grid, norm, &report);
  SaveModel(model, args.out_model);
  std::string report_path = args.out_model + ".train_report.csv";
  WriteTrainReportCsv(report, report_path);

  RunManifest manifest;
  manifest.command = "train";
  manifest.tool_version = kToolVersion;
  manifest.seed = args.seed;
  manifest.config = {{"method", args.method},
                     {"train", ToJson(config)},
                     {"ingest", {{"kept", ingest.kept}, {"dropped", ingest.dropped}}}};
  manifest.AddInput(args.frames_path);
  manifest.AddInput(args.suite_path);
  if (!args.config_path.empty()) manifest.AddInput(args.config_path);
  manifest.outputs = {args.out_model, report_path};
  manifest.Write(args.out_model);
  if (!report.epochs.empty()) {
    std::cout << "final loss " << report.epochs.back().mean_loss
              << ", expert top-decile " << report.epochs.back().expert_top_decile_rate
              << "\n";
  }
  return 0;
}

struct EvalArgs {
  std::string model_path;
  std::string suite_path;
  std::string frames_path;
  std::string sampler_path;
  std::string out;
  uint64_t seed = 0;
};

MetricReport EvaluateModel(const ValueModel& model, const std::vector<Scenario>& suite,
                           SamplerConfig sampler, const std::string& frames_path,
                           uint64_t seed) {
  sampler.seed = SubstreamSeed(seed, "sampler");
  MetricReport report = EvaluateSuite(suite, model, sampler);
  if (!frames_path.empty()) {
    IngestReport ingest;
    std::vector<Frame> holdout =
        IngestFrames(frames_path, suite, model.norm, &ingest, "holdout");
    if (holdout.empty()) throw ContractError("no holdout frames in " + frames_path);
    report.expert_rank = ExpertRank(model, holdout);
  }
  return report;
}

int CmdEval(const EvalArgs& args) {
  ValueModel model = LoadModel(args.model_path);
  std::vector<Scenario> suite = LoadSuite(args.suite_path);
  SamplerConfig sampler = args.sampler_path.empty()
                              ? SamplerConfig{}
                              : SamplerConfigFromJson(LoadJsonFile(args.sampler_path));
  MetricReport report =
      EvaluateModel(model, suite, sampler, args.frames_path, args.seed);
  std::string model_name = std::filesystem::path(args.model_path).stem().string();
  WriteReportJson(report, model_name, args.out + ".json");
  WriteReportCsv(report, args.out + ".csv");

  RunManifest manifest;
  manifest.command = "eval";
  manifest.tool_version = kToolVersion;
  manifest.seed = args.seed;
  manifest.config = {{"sampler", ToJson(sampler)}};
  manifest.AddInput(args.model_path);
  manifest.AddInput(args.suite_path);
  if (!args.frames_path.empty()) manifest.AddInput(args.frames_path);
  if (!args.sampler_path.empty()) manifest.AddInput(args.sampler_path);
  manifest.outputs = {args.out + ".json", args.out + ".csv"};
  manifest.Write(args.out + ".json");
  std::cout << "collision_free " << report.collision_free.rate << ", speed_under_limit "
            << report.speed_under_limit.rate << "\n";
  return 0;
}

struct CompareArgs {
  std::string model_a;
  std::string model_b;
  std::string suite_path;
  std::string frames_path;
  std::string sampler_path;
  std::string out;
  uint64_t seed = 0;
};

int CmdCompare(const CompareArgs& args) {
  ValueModel a = LoadModel(args.model_a);
  ValueModel b = LoadModel(args.model_b);
  std::vector<Scenario> suite = LoadSuite(args.suite_path);
  SamplerConfig sampler = args.sampler_path.empty()
                              ? SamplerConfig{}
                              : SamplerConfigFromJson(LoadJsonFile(args.sampler_path));
  MetricReport report_a = EvaluateModel(a, suite, sampler, args.frames_path, args.seed);
  MetricReport report_b = EvaluateModel(b, suite, sampler, args.frames_path, args.seed);
  std::string name_a = std::filesystem::path(args.model_a).stem().string();
  std::string name_b = std::filesystem::path(args.model_b).stem().string();
  if (name_a == name_b) name_b += "_b";
  WriteComparisonCsv(report_a, name_a, report_b, name_b, args.out);

  RunManifest manifest;
  manifest.command = "compare";
  manifest.tool_version = kToolVersion;
  manifest.seed = args.seed;
  manifest.config = {{"sampler", ToJson(sampler)}};
  manifest.AddInput(args.model_a);
  manifest.AddInput(args.model_b);
  manifest.AddInput(args.suite_path);
  if (!args.frames_path.empty()) manifest.AddInput(args.frames_path);
  manifest.outputs = {args.out};
  manifest.Write(args.out);
  return 0;
}

struct ShiftArgs {
  std::string out_dir;
  uint64_t seed = 0;
};

int CmdShiftDemo(const ShiftArgs& args) {
  std::filesystem::create_directories(args.out_dir);
  ShiftReport report = MakeShiftReport(args.seed);
  std::string points = args.out_dir + "/points.csv";
  std::string directions = args.out_dir + "/directions.csv";
  std::string summary = args.out_dir + "/report.json";
  WritePointsCsv(report, points);
  WriteDirectionsCsv(report, directions);
  {
    std::ofstream out(summary, std::ios::binary);
    if (!out) throw ParseError("cannot open for writing: " + summary);
    out << ToJson(report).dump(1) << "\n";
  }

  RunManifest manifest;
  manifest.command = "shiftdemo";
  manifest.tool_version = kToolVersion;
  manifest.seed = args.seed;
  manifest.config = nlohmann::json::object();
  manifest.outputs = {points, directions, summary};
  manifest.Write(summary);
  std::cout << "pooled-vs-frame angles: " << report.angle_pooled_to_1_deg << " deg, "
            << report.angle_pooled_to_2_deg << " deg\n";
  return 0;
}

int Run(int argc, char** argv) {
  CLI::App app{"Reward-functional auto-tuning for station-time speed profiles"};
  app.require_subcommand(1);

  SuiteArgs suite_args;
  auto* suite_cmd = app.add_subcommand("suite", "Generate a scenario suite file");
  suite_cmd->add_option("--config", suite_args.config_path, "Suite config JSON");
  suite_cmd->add_option("--out", suite_args.out, "Output suite JSON")->required();
  suite_cmd->add_option("--seed", suite_args.seed, "Master seed");

  FramesArgs frames_args;
  auto* frames_cmd =
      app.add_subcommand("frames", "Build training frames: synthetic expert + queries");
  frames_cmd->add_option("--suite", frames_args.suite_path, "Scenario suite JSON")->required();
  frames_cmd->add_option("--gt", frames_args.gt_path, "Ground-truth reward JSON");
  frames_cmd->add_option("--sampler", frames_args.sampler_path, "Sampler config JSON");
  frames_cmd->add_option("--out", frames_args.out, "Output frames JSONL")->required();
  frames_cmd->add_option("--seed", frames_args.seed, "Master seed");
  frames_cmd->add_option("--holdout-every", frames_args.holdout_every,
                         "Every Nth frame goes to the holdout split (0 = none)");
  frames_cmd->add_flag("--embed-features", frames_args.embed_features,
                       "Embed raw feature blocks in the frame file");

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand("train", "Train a value model");
  train_cmd->add_option("--frames", train_args.frames_path, "Frames JSONL")->required();
  train_cmd->add_option("--suite", train_args.suite_path, "Scenario suite JSON")->required();
  train_cmd->add_option("--config", train_args.config_path, "Training config JSON");
  train_cmd->add_option("--method", train_args.method, "rcirl or gan")
      ->check(CLI::IsMember({"rcirl", "gan"}));
  train_cmd->add_option("--out", train_args.out_model, "Output model JSON")->required();
  train_cmd->add_option("--seed", train_args.seed, "Master seed");

  EvalArgs eval_args;
  auto* eval_cmd = app.add_subcommand("eval", "Metric report for a model on a suite");
  eval_cmd->add_option("--model", eval_args.model_path, "Model JSON")->required();
  eval_cmd->add_option("--suite", eval_args.suite_path, "Scenario suite JSON")->required();
  eval_cmd->add_option("--frames", eval_args.frames_path,
                       "Frames JSONL for holdout expert-rank statistics");
  eval_cmd->add_option("--sampler", eval_args.sampler_path, "Sampler config JSON");
  eval_cmd->add_option("--out", eval_args.out, "Report basename (.json/.csv appended)")
      ->required();
  eval_cmd->add_option("--seed", eval_args.seed, "Master seed");

  CompareArgs compare_args;
  auto* compare_cmd = app.add_subcommand("compare", "Two-model comparison table");
  compare_cmd->add_option("--model-a", compare_args.model_a, "First model")->required();
  compare_cmd->add_option("--model-b", compare_args.model_b, "Second model")->required();
  compare_cmd->add_option("--suite", compare_args.suite_path, "Scenario suite JSON")->required();
  compare_cmd->add_option("--frames", compare_args.frames_path,
                          "Frames JSONL for holdout expert-rank statistics");
  compare_cmd->add_option("--sampler", compare_args.sampler_path, "Sampler config JSON");
  compare_cmd->add_option("--out", compare_args.out, "Output comparison CSV")->required();
  compare_cmd->add_option("--seed", compare_args.seed, "Master seed");

  ShiftArgs shift_args;
  auto* shift_cmd = app.add_subcommand("shiftdemo", "Background-shift margin demo CSVs");
  shift_cmd->add_option("--out", shift_args.out_dir, "Output directory")->required();
  shift_cmd->add_option("--seed", shift_args.seed, "Master seed");

  auto* version_cmd = app.add_subcommand("version", "Print tool and format versions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the message / help text
    return e.get_exit_code() == 0 ? 0 : kExitUsage;
  }

  if (suite_cmd->parsed()) return CmdSuite(suite_args);
  if (frames_cmd->parsed()) return CmdFrames(frames_args);
  if (train_cmd->parsed()) return CmdTrain(train_args);
  if (eval_cmd->parsed()) return CmdEval(eval_args);
  if (compare_cmd->parsed()) return CmdCompare(compare_args);
  if (shift_cmd->parsed()) return CmdShiftDemo(shift_args);
  if (version_cmd->parsed()) {
    std::cout << "autotune " << kToolVersion << "\n"
              << "model format " << kModelFormatVersion << "\n"
              << "frames format " << kFramesFormatVersion << "\n";
    return 0;
  }
  return kExitUsage;
}

}  // namespace
}  // namespace autotune

int main(int argc, char** argv) {
  try {
    return autotune::Run(argc, argv);
  } catch (const autotune::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return autotune::kExitNumericFailure;
  } catch (const autotune::ParseError& e) {
    std::cerr << "malformed input: " << e.what() << "\n";
    return autotune::kExitMalformedInput;
  } catch (const autotune::ContractError& e) {
    std::cerr << "contract violation: " << e.what() << "\n";
    return autotune::kExitContractViolation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return autotune::kExitContractViolation;
  }
}
