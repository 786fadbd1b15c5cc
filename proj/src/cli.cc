// Copyright 2026 The cscl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cscl/cli.h"

#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <string_view>

#include "CLI11.hpp"
#include "cscl/error.h"
#include "cscl/io.h"

namespace cscl {

void to_json(nlohmann::json& j, const ExperimentConfig& c) {
  j = nlohmann::json{
      {"train", c.train},
      {"test", c.test},
      {"confusion", c.confusion},
      {"input", c.input},
      {"difficulty", c.difficulty},
      {"manifest", c.manifest},
      {"model", c.model},
      {"provider", c.provider},
      {"window", c.window},
      {"dim", c.dim},
      {"embeddings", c.embeddings},
      {"scorer", c.scorer},
      {"policy", c.policy},
      {"k", c.k},
      {"seeds", c.seeds},
      {"k_values", c.k_values},
      {"rate", c.rate},
      {"out_dir", c.out_dir},
      {"vocab", c.vocab},
      {"confusables", c.confusables},
      {"train_size", c.train_size},
      {"test_size", c.test_size},
  };
}

void from_json(const nlohmann::json& j, ExperimentConfig& c) {
  if (!j.is_object()) {
    throw Error(ErrorCode::kInvalidArgument, "config must be a JSON object");
  }
  const nlohmann::json known = c;
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "unknown config key '" + key + "'");
    }
  }
  auto get = [&j](const char* key, auto& field) {
    if (j.contains(key)) j.at(key).get_to(field);
  };
  get("train", c.train);
  get("test", c.test);
  get("confusion", c.confusion);
  get("input", c.input);
  get("difficulty", c.difficulty);
  get("manifest", c.manifest);
  get("model", c.model);
  get("provider", c.provider);
  get("window", c.window);
  get("dim", c.dim);
  get("embeddings", c.embeddings);
  get("scorer", c.scorer);
  get("policy", c.policy);
  get("k", c.k);
  get("seeds", c.seeds);
  get("k_values", c.k_values);
  get("rate", c.rate);
  get("out_dir", c.out_dir);
  get("vocab", c.vocab);
  get("confusables", c.confusables);
  get("train_size", c.train_size);
  get("test_size", c.test_size);
}

namespace {

namespace fs = std::filesystem;

[[noreturn]] void Usage(const std::string& message) {
  throw Error(ErrorCode::kInvalidArgument, message);
}

void Require(const std::string& value, std::string_view flag) {
  if (value.empty()) Usage(std::string(flag) + " is required");
}

Corpus LoadCorpus(const std::string& path) {
  return ParseCorpus(ReadFile(path), CorpusFormat::kIdSourceTarget,
                     fs::path(path).stem().string());
}

ConfusionSet LoadConfusion(const std::string& path) {
  Require(path, "--confusion");
  return ParseConfusionSet(ReadFile(path));
}

ProviderSpec ProviderFrom(const ExperimentConfig& c) {
  ProviderSpec spec;
  if (c.provider == "hashed") {
    spec.kind = ProviderSpec::Kind::kHashed;
  } else if (c.provider == "file") {
    spec.kind = ProviderSpec::Kind::kFile;
    Require(c.embeddings, "--embeddings");
  } else {
    Usage("unknown provider '" + c.provider + "'");
  }
  spec.window = c.window;
  spec.dim = c.dim;
  spec.embeddings_path = c.embeddings;
  return spec;
}

void CheckCommon(const ExperimentConfig& c) {
  if (c.k == 0) Usage("k must be >= 1");
  if (c.seeds.empty()) Usage("at least one seed is required");
  Require(c.out_dir, "--out-dir");
}

// Owns whatever a scoring pass needs so ScoringInputs can point into it.
struct Scorer {
  std::unique_ptr<EmbeddingProvider> provider;
  std::optional<ConfusionSet> confusion;
  ScoringInputs inputs;
};

Scorer MakeScorer(const ExperimentConfig& c) {
  Scorer s;
  s.inputs.policy = ParseScoringPolicy(c.scorer);
  if (s.inputs.policy == ScoringPolicy::kContextual) {
    s.provider = MakeProvider(ProviderFrom(c));
    s.inputs.provider = s.provider.get();
  } else {
    if (c.confusion.empty()) {
      throw Error(ErrorCode::kMissingProvider,
                  "char_similarity scoring needs --confusion");
    }
    s.confusion = LoadConfusion(c.confusion);
    s.inputs.confusion = &*s.confusion;
  }
  return s;
}

std::vector<DifficultyRecord> ScoreFromConfig(const ExperimentConfig& c,
                                              const Corpus& corpus) {
  const Scorer scorer = MakeScorer(c);
  return ScoreCorpus(corpus, scorer.inputs);
}

CurriculumManifest ArrangeFromConfig(const ExperimentConfig& c,
                                     const Corpus& corpus) {
  const ArrangementPolicy policy = ParseArrangementPolicy(c.policy);
  std::vector<DifficultyRecord> records;
  if (policy == ArrangementPolicy::kAnnealing ||
      policy == ArrangementPolicy::kSortedOnly) {
    records = c.difficulty.empty() ? ScoreFromConfig(c, corpus)
                                   : ReadDifficulty(ReadFile(c.difficulty));
  }
  return Arrange(policy, corpus, records, c.k, c.seeds.front());
}

void SaveConfig(const ExperimentConfig& c, std::string_view command) {
  const nlohmann::json j = c;
  WriteFile(fs::path(c.out_dir) / (std::string(command) + ".config.json"),
            j.dump(2) + "\n");
}

void CmdScore(const ExperimentConfig& c, std::ostream& out) {
  CheckCommon(c);
  Require(c.train, "--train");
  const Corpus corpus = LoadCorpus(c.train);
  const auto records = ScoreFromConfig(c, corpus);
  const fs::path path = fs::path(c.out_dir) / "difficulty.tsv";
  WriteFile(path, WriteDifficulty(records));
  SaveConfig(c, "score");
  out << "scored " << records.size() << " samples -> " << path.string() << "\n";
}

void CmdArrange(const ExperimentConfig& c, std::ostream& out) {
  CheckCommon(c);
  Require(c.train, "--train");
  const Corpus corpus = LoadCorpus(c.train);
  const auto manifest = ArrangeFromConfig(c, corpus);
  const fs::path path = fs::path(c.out_dir) / "manifest.jsonl";
  WriteFile(path, WriteManifest(manifest));
  SaveConfig(c, "arrange");
  out << manifest.stages.size() << " stage(s) -> " << path.string() << "\n";
}

void WriteEvaluation(const ExperimentConfig& c, const CorrectorModel& model,
                     const Corpus& test, std::ostream& out) {
  const auto predictions = PredictCorpus(model, test);
  const std::vector<EvalReport> reports = {
      Evaluate(predictions, test, EvalLevel::kDetection),
      Evaluate(predictions, test, EvalLevel::kCorrection),
  };
  Corpus predicted{test.name, {}};
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    predicted.samples.push_back(Sample::Make(predictions[i].sample_id,
                                             test.samples[i].source,
                                             predictions[i].predicted));
  }
  const std::string table = WriteReports(reports);
  WriteFile(fs::path(c.out_dir) / "report.tsv", table);
  WriteFile(fs::path(c.out_dir) / "predictions.tsv",
            SerializeCorpus(predicted));
  out << table;
}

void CmdTrain(const ExperimentConfig& c, std::ostream& out) {
  CheckCommon(c);
  Require(c.train, "--train");
  const Corpus train = LoadCorpus(c.train);
  const ConfusionSet confusion = LoadConfusion(c.confusion);
  std::optional<Corpus> test;
  if (!c.test.empty()) {
    test = LoadCorpus(c.test);
    if (test->samples.empty()) {
      throw Error(ErrorCode::kIdMismatch, "test corpus is empty");
    }
  }
  const CurriculumManifest manifest = c.manifest.empty()
                                          ? ArrangeFromConfig(c, train)
                                          : ReadManifest(ReadFile(c.manifest));
  const CorrectorModel model = Train(manifest, train, confusion);
  WriteFile(fs::path(c.out_dir) / "model.tsv", WriteModel(model));
  SaveConfig(c, "train");
  out << "trained on " << manifest.stages.size() << " stage(s), "
      << model.updates_seen() << " steps\n";
  if (test) WriteEvaluation(c, model, *test, out);
}

void CmdEvaluate(const ExperimentConfig& c, std::ostream& out) {
  Require(c.out_dir, "--out-dir");
  Require(c.model, "--model");
  Require(c.test, "--test");
  const Corpus test = LoadCorpus(c.test);
  const CorrectorModel model =
      ReadModel(ReadFile(c.model), LoadConfusion(c.confusion));
  WriteEvaluation(c, model, test, out);
  SaveConfig(c, "evaluate");
}

struct LoadedData {
  Corpus train, test;
  ConfusionSet confusion;
  std::unique_ptr<EmbeddingProvider> provider;

  ExperimentData view() const {
    return {&train, &test, &confusion, provider.get()};
  }
};

LoadedData LoadExperiment(const ExperimentConfig& c) {
  CheckCommon(c);
  Require(c.train, "--train");
  Require(c.test, "--test");
  LoadedData d;
  d.train = LoadCorpus(c.train);
  d.test = LoadCorpus(c.test);
  if (d.test.samples.empty()) {
    throw Error(ErrorCode::kIdMismatch, "test corpus is empty");
  }
  d.confusion = LoadConfusion(c.confusion);
  d.provider = MakeProvider(ProviderFrom(c));
  return d;
}

void CmdAblate(const ExperimentConfig& c, std::ostream& out) {
  const LoadedData d = LoadExperiment(c);
  const auto rows = RunAblation(d.view(), c.k, c.seeds);
  const std::string table = WriteAblationTable(rows);
  WriteFile(fs::path(c.out_dir) / "ablation.tsv", table);
  SaveConfig(c, "ablate");
  out << table;
}

void CmdSweepK(const ExperimentConfig& c, std::ostream& out) {
  std::set<std::size_t> seen;
  for (std::size_t k : c.k_values) {
    if (!seen.insert(k).second) {
      Usage("duplicate k value " + std::to_string(k));
    }
  }
  const LoadedData d = LoadExperiment(c);
  const auto rows = RunSweepK(d.view(), c.k_values, c.seeds);
  const std::string table = WriteSweepTable(rows, c.k_values);
  WriteFile(fs::path(c.out_dir) / "sweep_k.tsv", table);
  SaveConfig(c, "sweep-k");
  out << table;
}

void CmdInject(const ExperimentConfig& c, std::ostream& out) {
  CheckCommon(c);
  Require(c.input, "--input");
  const Corpus clean = LoadCorpus(c.input);
  const Corpus noisy =
      InjectErrors(clean, LoadConfusion(c.confusion), c.rate, c.seeds.front());
  std::size_t errors = 0;
  for (const Sample& s : noisy.samples) errors += s.error_positions.size();
  const fs::path path = fs::path(c.out_dir) / "corpus.tsv";
  WriteFile(path, SerializeCorpus(noisy));
  SaveConfig(c, "inject");
  out << "injected " << errors << " errors into " << noisy.samples.size()
      << " samples -> " << path.string() << "\n";
}

void CmdSynth(const ExperimentConfig& c, std::ostream& out) {
  CheckCommon(c);
  SynthOptions options;
  options.vocab_size = c.vocab;
  options.confusables_per_char = c.confusables;
  const std::uint64_t seed = c.seeds.front();
  const ConfusionSet confusion = SynthConfusionSet(options, seed);
  const Corpus train = InjectErrors(
      SynthCleanCorpus(options, seed, c.train_size, seed + 1, "train-"),
      confusion, c.rate, seed + 3);
  const Corpus test = InjectErrors(
      SynthCleanCorpus(options, seed, c.test_size, seed + 2, "test-"),
      confusion, c.rate, seed + 4);
  const fs::path dir(c.out_dir);
  WriteFile(dir / "confusion.tsv", SerializeConfusionSet(confusion));
  WriteFile(dir / "train.tsv", SerializeCorpus(train));
  WriteFile(dir / "test.tsv", SerializeCorpus(test));
  SaveConfig(c, "synth");
  out << "wrote " << train.samples.size() << " train / " << test.samples.size()
      << " test samples and " << confusion.num_pairs() << " confusion pairs to "
      << dir.string() << "\n";
}

// Finds --config before CLI11 runs so that flags can override it.
std::optional<std::string> FindConfigPath(int argc, const char* const* argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string_view arg = argv[i];
    if (arg == "--config" && i + 1 < argc) return std::string(argv[i + 1]);
    if (arg.starts_with("--config=")) return std::string(arg.substr(9));
  }
  return std::nullopt;
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  ExperimentConfig config;
  try {
    if (auto path = FindConfigPath(argc, argv)) {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(ReadFile(*path));
      } catch (const nlohmann::json::exception& e) {
        Usage("config '" + *path + "': " + e.what());
      }
      config = j.get<ExperimentConfig>();
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  CLI::App app{"Curriculum tooling for spell-checking training data"};
  app.require_subcommand(1);
  std::string config_path;

  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", config_path,
                    "JSON config file; flags override its values");
  };
  auto add_out = [&](CLI::App* sub) {
    sub->add_option("--out-dir", config.out_dir, "Output directory");
  };
  auto add_provider = [&](CLI::App* sub) {
    sub->add_option("--provider", config.provider,
                    "Embedding provider: hashed or file");
    sub->add_option("--window", config.window, "Hashed embedder window");
    sub->add_option("--dim", config.dim, "Hashed embedder dimension");
    sub->add_option("--embeddings", config.embeddings,
                    "Embedding file for --provider file");
  };
  auto add_scoring = [&](CLI::App* sub) {
    sub->add_option("--scorer", config.scorer,
                    "Difficulty policy: contextual or char_similarity");
    add_provider(sub);
  };
  auto add_arrangement = [&](CLI::App* sub) {
    sub->add_option("--policy", config.policy,
                    "annealing, sorted_only, random_stages or "
                    "shuffled_baseline");
    sub->add_option("--k", config.k, "Number of difficulty subsets");
    sub->add_option("--difficulty", config.difficulty,
                    "Precomputed difficulty TSV");
  };
  auto add_seeds = [&](CLI::App* sub) {
    sub->add_option("--seeds,--seed", config.seeds, "Seed list")
        ->delimiter(',');
  };

  auto* score = app.add_subcommand("score", "Score training samples");
  score->add_option("--train", config.train, "Training corpus TSV");
  score->add_option("--confusion", config.confusion, "Confusion set file");
  add_scoring(score);
  add_seeds(score);
  add_out(score);
  add_config(score);

  auto* arrange = app.add_subcommand("arrange", "Build a curriculum manifest");
  arrange->add_option("--train", config.train, "Training corpus TSV");
  arrange->add_option("--confusion", config.confusion, "Confusion set file");
  add_arrangement(arrange);
  add_scoring(arrange);
  add_seeds(arrange);
  add_out(arrange);
  add_config(arrange);

  auto* train = app.add_subcommand(
      "train", "Train the corrector; evaluates too when --test is given");
  train->add_option("--train", config.train, "Training corpus TSV");
  train->add_option("--test", config.test, "Test corpus TSV");
  train->add_option("--confusion", config.confusion, "Confusion set file");
  train->add_option("--manifest", config.manifest,
                    "Curriculum manifest; arranged on the fly if absent");
  add_arrangement(train);
  add_scoring(train);
  add_seeds(train);
  add_out(train);
  add_config(train);

  auto* evaluate = app.add_subcommand("evaluate", "Evaluate a saved model");
  evaluate->add_option("--model", config.model, "Model file");
  evaluate->add_option("--test", config.test, "Test corpus TSV");
  evaluate->add_option("--confusion", config.confusion, "Confusion set file");
  add_out(evaluate);
  add_config(evaluate);

  auto* ablate = app.add_subcommand("ablate", "Run the ablation modes");
  ablate->add_option("--train", config.train, "Training corpus TSV");
  ablate->add_option("--test", config.test, "Test corpus TSV");
  ablate->add_option("--confusion", config.confusion, "Confusion set file");
  ablate->add_option("--k", config.k, "Number of difficulty subsets");
  add_provider(ablate);
  add_seeds(ablate);
  add_out(ablate);
  add_config(ablate);

  auto* sweep = app.add_subcommand("sweep-k", "Contextual annealing per k");
  sweep->add_option("--train", config.train, "Training corpus TSV");
  sweep->add_option("--test", config.test, "Test corpus TSV");
  sweep->add_option("--confusion", config.confusion, "Confusion set file");
  sweep->add_option("--k-values", config.k_values, "k values to try")
      ->delimiter(',');
  add_provider(sweep);
  add_seeds(sweep);
  add_out(sweep);
  add_config(sweep);

  auto* inject = app.add_subcommand("inject", "Inject confusion errors");
  inject->add_option("--input", config.input, "Clean corpus TSV");
  inject->add_option("--confusion", config.confusion, "Confusion set file");
  inject->add_option("--rate", config.rate, "Per-character error rate");
  add_seeds(inject);
  add_out(inject);
  add_config(inject);

  auto* synth = app.add_subcommand(
      "synth", "Generate a synthetic confusion set and train/test corpora");
  synth->add_option("--vocab", config.vocab, "Vocabulary size");
  synth->add_option("--confusables", config.confusables,
                    "Confusion candidates per character");
  synth->add_option("--train-size", config.train_size, "Training sentences");
  synth->add_option("--test-size", config.test_size, "Test sentences");
  synth->add_option("--rate", config.rate, "Per-character error rate");
  add_seeds(synth);
  add_out(synth);
  add_config(synth);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (score->parsed()) CmdScore(config, out);
    if (arrange->parsed()) CmdArrange(config, out);
    if (train->parsed()) CmdTrain(config, out);
    if (evaluate->parsed()) CmdEvaluate(config, out);
    if (ablate->parsed()) CmdAblate(config, out);
    if (sweep->parsed()) CmdSweepK(config, out);
    if (inject->parsed()) CmdInject(config, out);
    if (synth->parsed()) CmdSynth(config, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return IsUsageError(e.code()) ? kExitUsage : kExitDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDataError;
  }
  return kExitOk;
}

}  // namespace cscl
