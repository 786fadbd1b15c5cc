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

// End-to-end runs: score, arrange, train one epoch per stage, evaluate. Also
// the ablation and k-sweep drivers, which repeat that loop over modes, k
// values and seeds.

#ifndef CSCL_EXPERIMENT_H_
#define CSCL_EXPERIMENT_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "cscl/corpus.h"
#include "cscl/curriculum.h"
#include "cscl/difficulty.h"
#include "cscl/embed.h"
#include "cscl/metrics.h"
#include "cscl/model.h"

namespace cscl {

struct ProviderSpec {
  enum class Kind { kHashed, kFile };
  Kind kind = Kind::kHashed;
  int window = HashedEmbedder::kDefaultWindow;
  std::size_t dim = HashedEmbedder::kDefaultDim;
  std::string embeddings_path;
};

// Loads the embedding file for Kind::kFile.
std::unique_ptr<EmbeddingProvider> MakeProvider(const ProviderSpec& spec);

// Builds a manifest for any policy. `records` are needed by the annealing
// and sorted_only policies; the others only use the corpus ids.
CurriculumManifest Arrange(ArrangementPolicy policy, const Corpus& corpus,
                           std::span<const DifficultyRecord> records,
                           std::size_t k, std::uint64_t seed);

struct RunResult {
  EvalReport detection;
  EvalReport correction;
};

RunResult TrainAndEvaluate(const CurriculumManifest& manifest,
                           const Corpus& train, const Corpus& test,
                           const ConfusionSet& confusion);

// Mean and sample standard deviation (0 for a single value).
struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;
};
MeanSd Summarize(std::span<const double> values);

struct SeriesRow {
  std::string label;
  std::vector<RunResult> runs;  // one per seed, in seed order

  MeanSd CorrectionF1() const;
  MeanSd DetectionF1() const;
};

struct ExperimentData {
  const Corpus* train = nullptr;
  const Corpus* test = nullptr;
  const ConfusionSet* confusion = nullptr;
  const EmbeddingProvider* provider = nullptr;
};

// Rows, baseline first: shuffled_baseline, sorted_only, random_stages,
// char_similarity_annealing, contextual_annealing. Each mode runs once per
// seed; (mode, seed) runs execute in parallel.
std::vector<SeriesRow> RunAblation(const ExperimentData& data, std::size_t k,
                                   std::span<const std::uint64_t> seeds);

// Contextual annealing at each k, one row per k labelled "k=<k>". Throws
// Error(kInvalidArgument) on duplicate or zero k values.
std::vector<SeriesRow> RunSweepK(const ExperimentData& data,
                                 std::span<const std::size_t> k_values,
                                 std::span<const std::uint64_t> seeds);

// mode, runs, detection F1 mean/sd, correction F1 mean/sd, and the
// correction F1 mean minus the first row's.
std::string WriteAblationTable(std::span<const SeriesRow> rows);
// k, runs, correction F1 mean/sd, detection F1 mean.
std::string WriteSweepTable(std::span<const SeriesRow> rows,
                            std::span<const std::size_t> k_values);

}  // namespace cscl

#endif  // CSCL_EXPERIMENT_H_
