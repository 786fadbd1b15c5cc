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

// Training curricula: ordered stages of sample ids, each trained for one
// epoch.
//
// Annealing arrangement with k subsets over n scored samples:
//   1. Sort ascending by score, ties by sample id.
//   2. Cut the sorted list into k contiguous subsets S_1..S_k.
//   3. Cut every S_j the same way into k contiguous parts S_j1..S_jk.
//   4. Stage i (1 <= i <= k) is S_1i + S_2i + ... + S_ki, shuffled with
//      Rng(seed, i).
//   5. Stage k+1 is the whole sorted list shuffled with Rng(seed, k+1).
// Every cut is balanced: sizes differ by at most one and the first (m mod k)
// pieces get the extra element.

#ifndef CSCL_CURRICULUM_H_
#define CSCL_CURRICULUM_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cscl/difficulty.h"

namespace cscl {

enum class ArrangementPolicy {
  kAnnealing,
  kSortedOnly,
  kRandomStages,
  kShuffledBaseline,
};

std::string_view ArrangementPolicyName(ArrangementPolicy policy);
ArrangementPolicy ParseArrangementPolicy(std::string_view name);

using Stage = std::vector<std::string>;

struct CurriculumManifest {
  ArrangementPolicy policy = ArrangementPolicy::kAnnealing;
  // Number of subsets; 1 for the single-stage policies.
  std::size_t k = 1;
  std::uint64_t seed = 0;
  std::string corpus;
  // Number of distinct samples.
  std::size_t n = 0;
  std::vector<Stage> stages;

  bool operator==(const CurriculumManifest&) const = default;
};

// Sizes of a balanced cut of `total` items into `pieces` pieces.
std::vector<std::size_t> BalancedSizes(std::size_t total, std::size_t pieces);

// Records sorted ascending by score, ties by sample id.
std::vector<DifficultyRecord> SortByDifficulty(
    std::span<const DifficultyRecord> records);

// The annealing arrangement before any shuffling.
struct AnnealingLayout {
  // subsets[j] is S_{j+1}, in ascending difficulty.
  std::vector<Stage> subsets;
  // parts[j][i] is S_{j+1,i+1}.
  std::vector<std::vector<Stage>> parts;
  // k + 1 stages; the last is the full sorted list.
  std::vector<Stage> stages;
};

// Throws Error(kEmptyInput) for no records, Error(kKTooLarge) for k > n and
// Error(kInvalidArgument) for k == 0 or duplicate ids.
AnnealingLayout LayoutAnnealing(std::span<const DifficultyRecord> records,
                                std::size_t k);

CurriculumManifest ArrangeAnnealing(std::span<const DifficultyRecord> records,
                                    std::size_t k, std::uint64_t seed,
                                    std::string corpus = "");

// One stage in ascending difficulty, no shuffling.
CurriculumManifest ArrangeSortedOnly(std::span<const DifficultyRecord> records,
                                     std::uint64_t seed,
                                     std::string corpus = "");

// Ids shuffled with Rng(seed, 0) and cut into k balanced stages, followed by
// the full set shuffled with Rng(seed, k + 1).
CurriculumManifest ArrangeRandomStages(std::span<const std::string> ids,
                                       std::size_t k, std::uint64_t seed,
                                       std::string corpus = "");

// One stage holding every id, shuffled with Rng(seed, 0).
CurriculumManifest ArrangeShuffledBaseline(std::span<const std::string> ids,
                                           std::uint64_t seed,
                                           std::string corpus = "");

// JSON lines: a metadata object {policy, k, seed, corpus, n}, then one
// {stage, ids} object per stage in training order, stages numbered from 1.
std::string WriteManifest(const CurriculumManifest& manifest);
// Throws Error(kMalformedManifest) on schema violations, out-of-sequence
// stage numbers, a stage count that does not fit the policy or an id
// repeated within a stage.
CurriculumManifest ReadManifest(std::string_view text);

}  // namespace cscl

#endif  // CSCL_CURRICULUM_H_
