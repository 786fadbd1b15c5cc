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

#include "cscl/experiment.h"

#include <cmath>
#include <cstdio>
#include <set>

#include "cscl/error.h"
#include "cscl/io.h"
#include "parallel.h"

namespace cscl {

std::unique_ptr<EmbeddingProvider> MakeProvider(const ProviderSpec& spec) {
  if (spec.kind == ProviderSpec::Kind::kHashed) {
    return std::make_unique<HashedEmbedder>(spec.window, spec.dim);
  }
  if (spec.embeddings_path.empty()) {
    throw Error(ErrorCode::kMissingProvider,
                "file provider needs an embeddings path");
  }
  return std::make_unique<PrecomputedEmbeddings>(
      LoadEmbeddings(ReadFile(spec.embeddings_path)));
}

namespace {

std::vector<std::string> Ids(const Corpus& corpus) {
  std::vector<std::string> ids;
  ids.reserve(corpus.samples.size());
  for (const Sample& s : corpus.samples) ids.push_back(s.id);
  return ids;
}

}  // namespace

CurriculumManifest Arrange(ArrangementPolicy policy, const Corpus& corpus,
                           std::span<const DifficultyRecord> records,
                           std::size_t k, std::uint64_t seed) {
  switch (policy) {
    case ArrangementPolicy::kAnnealing:
      return ArrangeAnnealing(records, k, seed, corpus.name);
    case ArrangementPolicy::kSortedOnly:
      return ArrangeSortedOnly(records, seed, corpus.name);
    case ArrangementPolicy::kRandomStages:
      return ArrangeRandomStages(Ids(corpus), k, seed, corpus.name);
    case ArrangementPolicy::kShuffledBaseline:
      return ArrangeShuffledBaseline(Ids(corpus), seed, corpus.name);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown arrangement policy");
}

RunResult TrainAndEvaluate(const CurriculumManifest& manifest,
                           const Corpus& train, const Corpus& test,
                           const ConfusionSet& confusion) {
  const CorrectorModel model = Train(manifest, train, confusion);
  // Callers may already run on the OpenMP team; keep this pass serial.
  const auto predictions = serial::PredictCorpus(model, test);
  return {serial::Evaluate(predictions, test, EvalLevel::kDetection),
          serial::Evaluate(predictions, test, EvalLevel::kCorrection)};
}

MeanSd Summarize(std::span<const double> values) {
  MeanSd out;
  if (values.empty()) return out;
  for (double v : values) out.mean += v;
  out.mean /= static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return out;
}

MeanSd SeriesRow::CorrectionF1() const {
  std::vector<double> f1;
  for (const auto& r : runs) f1.push_back(r.correction.f1);
  return Summarize(f1);
}

MeanSd SeriesRow::DetectionF1() const {
  std::vector<double> f1;
  for (const auto& r : runs) f1.push_back(r.detection.f1);
  return Summarize(f1);
}

namespace {

void CheckData(const ExperimentData& data,
               std::span<const std::uint64_t> seeds) {
  if (!data.train || !data.test || !data.confusion || !data.provider) {
    throw Error(ErrorCode::kMissingProvider,
                "experiment needs train, test, confusion set and provider");
  }
  if (seeds.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "at least one seed is required");
  }
}

struct Mode {
  std::string label;
  ArrangementPolicy policy;
  const std::vector<DifficultyRecord>* records;
  std::size_t k;
};

std::vector<SeriesRow> RunModes(const ExperimentData& data,
                                const std::vector<Mode>& modes,
                                std::span<const std::uint64_t> seeds) {
  std::vector<SeriesRow> rows(modes.size());
  for (std::size_t m = 0; m < modes.size(); ++m) {
    rows[m].label = modes[m].label;
    rows[m].runs.resize(seeds.size());
  }
  // Every (mode, seed) run trains sequentially on its own; runs are
  // independent, so they are spread over the team.
  internal::ParallelFor(modes.size() * seeds.size(), [&](std::size_t i) {
    const std::size_t m = i / seeds.size();
    const std::size_t s = i % seeds.size();
    const Mode& mode = modes[m];
    const auto manifest =
        Arrange(mode.policy, *data.train, *mode.records, mode.k, seeds[s]);
    rows[m].runs[s] =
        TrainAndEvaluate(manifest, *data.train, *data.test, *data.confusion);
  });
  return rows;
}

}  // namespace

std::vector<SeriesRow> RunAblation(const ExperimentData& data, std::size_t k,
                                   std::span<const std::uint64_t> seeds) {
  CheckData(data, seeds);
  const auto contextual = ScoreCorpus(
      *data.train, {ScoringPolicy::kContextual, data.provider, nullptr});
  const auto char_sim = ScoreCorpus(
      *data.train, {ScoringPolicy::kCharSimilarity, nullptr, data.confusion});
  const std::vector<Mode> modes = {
      {"shuffled_baseline", ArrangementPolicy::kShuffledBaseline, &contextual,
       1},
      {"sorted_only", ArrangementPolicy::kSortedOnly, &contextual, 1},
      {"random_stages", ArrangementPolicy::kRandomStages, &contextual, k},
      {"char_similarity_annealing", ArrangementPolicy::kAnnealing, &char_sim,
       k},
      {"contextual_annealing", ArrangementPolicy::kAnnealing, &contextual, k},
  };
  return RunModes(data, modes, seeds);
}

std::vector<SeriesRow> RunSweepK(const ExperimentData& data,
                                 std::span<const std::size_t> k_values,
                                 std::span<const std::uint64_t> seeds) {
  CheckData(data, seeds);
  if (k_values.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no k values to sweep");
  }
  std::set<std::size_t> seen;
  for (std::size_t k : k_values) {
    if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
    if (!seen.insert(k).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "duplicate k value " + std::to_string(k));
    }
  }
  const auto contextual = ScoreCorpus(
      *data.train, {ScoringPolicy::kContextual, data.provider, nullptr});
  std::vector<Mode> modes;
  for (std::size_t k : k_values) {
    modes.push_back({"k=" + std::to_string(k), ArrangementPolicy::kAnnealing,
                     &contextual, k});
  }
  return RunModes(data, modes, seeds);
}

namespace {

std::string Fixed4(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", value);
  return buf;
}

}  // namespace

std::string WriteAblationTable(std::span<const SeriesRow> rows) {
  std::string out =
      "mode\truns\tdetection_f1_mean\tdetection_f1_sd\tcorrection_f1_mean\t"
      "correction_f1_sd\tdelta_correction_f1\n";
  if (rows.empty()) return out;
  const double baseline = rows.front().CorrectionF1().mean;
  for (const auto& row : rows) {
    const MeanSd det = row.DetectionF1();
    const MeanSd cor = row.CorrectionF1();
    out += row.label + "\t" + std::to_string(row.runs.size()) + "\t" +
           Fixed4(det.mean) + "\t" + Fixed4(det.sd) + "\t" + Fixed4(cor.mean) +
           "\t" + Fixed4(cor.sd) + "\t" + FormatDelta(cor.mean - baseline) +
           "\n";
  }
  return out;
}

std::string WriteSweepTable(std::span<const SeriesRow> rows,
                            std::span<const std::size_t> k_values) {
  std::string out =
      "k\truns\tcorrection_f1_mean\tcorrection_f1_sd\tdetection_f1_mean\n";
  for (std::size_t i = 0; i < rows.size() && i < k_values.size(); ++i) {
    const MeanSd cor = rows[i].CorrectionF1();
    out += std::to_string(k_values[i]) + "\t" +
           std::to_string(rows[i].runs.size()) + "\t" + Fixed4(cor.mean) +
           "\t" + Fixed4(cor.sd) + "\t" + Fixed4(rows[i].DetectionF1().mean) +
           "\n";
  }
  return out;
}

}  // namespace cscl
