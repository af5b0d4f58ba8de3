// Copyright 2026 The uvcurate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: one subcommand per pipeline stage plus corpus
// synthesis and config inspection.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "uvcurate/config.hpp"
#include "uvcurate/error.hpp"
#include "uvcurate/pipeline.hpp"
#include "uvcurate/synth_corpus.hpp"

namespace {

namespace config = uvcurate::config;
namespace pipeline = uvcurate::pipeline;
namespace synth = uvcurate::synth;

struct GlobalOptions {
  std::string config_path;
  std::string manifest = "manifest.jsonl";
  std::optional<int> workers;
  std::optional<uint64_t> seed;
  bool strict_providers = false;
};

config::PipelineConfig Resolve(const GlobalOptions& g) {
  std::string path = g.config_path;
  if (path.empty()) {
    if (const char* env = std::getenv("UVCURATE_CONFIG"); env && *env) path = env;
  }
  config::PipelineConfig c = path.empty() ? config::PipelineConfig{} : config::LoadConfig(path);
  if (g.workers) c.workers = *g.workers;
  if (g.seed) c.seed = *g.seed;
  c.Validate();
  return c;
}

int Report(const pipeline::StageReport& r) {
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
  for (const auto& e : r.errors) std::cerr << "error: " << e << "\n";
  std::cout << r.Summary() << "\n";
  return r.ExitCode();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"uvcurate: video corpus curation pipeline"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--config", g.config_path, "TOML config file (default: $UVCURATE_CONFIG)");
  app.add_option("--manifest", g.manifest, "Manifest JSONL file")->capture_default_str();
  app.add_option("--workers", g.workers, "Worker threads (overrides the config)")
      ->check(CLI::Range(1, 1024));
  app.add_option("--seed", g.seed, "Seed (overrides the config)");
  app.add_flag("--strict-providers", g.strict_providers,
               "Treat provider failures as errors instead of deferring clips");

  std::string corpus;
  auto* ingest = app.add_subcommand("ingest", "Add the sources in a corpus directory");
  ingest->add_option("corpus", corpus, "Directory of .y4m files and PNM sequences")
      ->required();

  auto* run = app.add_subcommand("run", "Ingest a corpus and run split through caption");
  run->add_option("corpus", corpus, "Directory of .y4m files and PNM sequences")->required();

  auto* split = app.add_subcommand("split", "Detect cuts and create clips");
  auto* filter = app.add_subcommand("filter", "Run the statistical filters");
  auto* purify = app.add_subcommand("purify", "Score and gate clips with the model providers");
  auto* caption = app.add_subcommand("caption", "Caption clips and apply the final gate");

  std::string prompts_out = "prompts.jsonl";
  auto* sample = app.add_subcommand("sample", "Draw one training prompt per captioned clip");
  sample->add_option("--out", prompts_out, "Output JSONL")->capture_default_str();

  std::string stats_out = "stats";
  auto* stats = app.add_subcommand("stats", "Write corpus statistics");
  stats->add_option("--out", stats_out, "Output directory")->capture_default_str();

  std::string synth_out;
  synth::CorpusOptions corpus_options;
  bool no_transitions = false;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic corpus with ground truth");
  synth_cmd->add_option("--out", synth_out, "Output directory")->required();
  synth_cmd->add_option("--clips", corpus_options.clips)->capture_default_str()
      ->check(CLI::PositiveNumber);
  synth_cmd->add_option("--width", corpus_options.width)->capture_default_str();
  synth_cmd->add_option("--height", corpus_options.height)->capture_default_str();
  synth_cmd->add_option("--frames", corpus_options.frames)->capture_default_str();
  synth_cmd->add_option("--defective-multiple", corpus_options.defective_multiple)
      ->capture_default_str();
  synth_cmd->add_option("--clean-multiple", corpus_options.clean_multiple)
      ->capture_default_str();
  synth_cmd->add_flag("--no-transitions", no_transitions,
                      "Only pixel-defect and clean clips");

  auto* config_cmd = app.add_subcommand("config", "Inspect the effective configuration");
  config_cmd->require_subcommand(1);
  auto* dump = config_cmd->add_subcommand("dump", "Print the effective config as TOML");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and --version exit 0; every usage error is a plain failure.
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    const config::PipelineConfig cfg = Resolve(g);
    if (dump->parsed()) {
      std::cout << config::DumpConfig(cfg);
      return 0;
    }
    if (synth_cmd->parsed()) {
      corpus_options.transitions = !no_transitions;
      const synth::TruthParams params{cfg.filters, cfg.purify, cfg.split};
      const auto specs = synth::PlanCorpus(corpus_options, cfg.seed, params);
      const auto truth = synth::WriteCorpus(synth_out, specs, cfg.seed, params);
      std::cout << "synth: wrote " << truth.size() << " clips and truth.jsonl to " << synth_out
                << "\n";
      return 0;
    }

    pipeline::Pipeline p(cfg, g.manifest, {g.strict_providers});
    if (run->parsed()) {
      // Stops at the first error; deferrals carry through to the exit code.
      int code = Report(p.Ingest(corpus));
      for (auto stage : {&pipeline::Pipeline::Split, &pipeline::Pipeline::Filter,
                         &pipeline::Pipeline::Purify, &pipeline::Pipeline::Caption}) {
        if (code == 1) return 1;
        const int next = Report((p.*stage)());
        code = next == 1 ? 1 : std::max(code, next);
      }
      return code;
    }
    if (ingest->parsed()) return Report(p.Ingest(corpus));
    if (split->parsed()) return Report(p.Split());
    if (filter->parsed()) return Report(p.Filter());
    if (purify->parsed()) return Report(p.Purify());
    if (caption->parsed()) return Report(p.Caption());
    if (sample->parsed()) {
      const int code = Report(p.Sample(prompts_out));
      std::cout << "prompts written to " << prompts_out << "\n";
      return code;
    }
    if (stats->parsed()) {
      const pipeline::StageReport r = p.Stats(stats_out);
      std::cout << r.output;
      return r.ExitCode();
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
