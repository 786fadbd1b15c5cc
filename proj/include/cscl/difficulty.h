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

// Sample difficulty scoring.
//
// The contextual score of a sample is the sum, over its error positions, of
// the cosine similarity between the contextual vector of the misspelled
// character and that of the correct character:
//
//   d = sum_{j in errors} cos(E(source)_j, E(target)_j)
//
// The character similarity score replaces each cosine with confusion-set
// membership of the (wrong, right) pair.

#ifndef CSCL_DIFFICULTY_H_
#define CSCL_DIFFICULTY_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cscl/corpus.h"
#include "cscl/embed.h"

namespace cscl {

enum class ScoringPolicy { kContextual, kCharSimilarity };

std::string_view ScoringPolicyName(ScoringPolicy policy);
ScoringPolicy ParseScoringPolicy(std::string_view name);

struct DifficultyRecord {
  std::string sample_id;
  double score = 0.0;
  ScoringPolicy policy = ScoringPolicy::kContextual;
  // Error positions where one side had a zero vector and contributed 0.
  std::size_t degenerate_positions = 0;

  bool operator==(const DifficultyRecord&) const = default;
};

// u.v / (|u| |v|), clamped to [-1, 1]. Throws Error(kShapeMismatch) on
// unequal sizes and Error(kZeroNormVector) when either norm is zero.
double Cosine(std::span<const double> u, std::span<const double> v);

// Throws Error(kShapeMismatch) unless both embeddings cover the sample and
// share a dimension. Zero vectors at an error position contribute 0.
DifficultyRecord ScoreContextual(const Sample& sample,
                                 const ContextualEmbedding& source,
                                 const ContextualEmbedding& target);

// Number of error positions whose (wrong, right) pair is in the confusion
// set in either direction.
DifficultyRecord ScoreCharSimilarity(const Sample& sample,
                                     const ConfusionSet& confusion);

// What a scoring pass needs. Contextual scoring requires `provider`, the
// character-similarity policy requires `confusion`; a missing one raises
// Error(kMissingProvider).
struct ScoringInputs {
  ScoringPolicy policy = ScoringPolicy::kContextual;
  const EmbeddingProvider* provider = nullptr;
  const ConfusionSet* confusion = nullptr;
};

// One record per sample in corpus order. Samples are scored in parallel.
// Logs one warning to stderr if any zero vectors were hit.
std::vector<DifficultyRecord> ScoreCorpus(const Corpus& corpus,
                                          const ScoringInputs& inputs);

namespace serial {
std::vector<DifficultyRecord> ScoreCorpus(const Corpus& corpus,
                                          const ScoringInputs& inputs);
}  // namespace serial

// "sample_id<TAB>score<TAB>policy" per record, score with 9 decimals.
std::string WriteDifficulty(std::span<const DifficultyRecord> records);
std::vector<DifficultyRecord> ReadDifficulty(std::string_view text);

}  // namespace cscl

#endif  // CSCL_DIFFICULTY_H_
