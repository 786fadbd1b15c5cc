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

#include "cscl/curriculum.h"

#include <algorithm>
#include <unordered_set>

#include "cscl/error.h"
#include "cscl/rng.h"
#include "cscl/text.h"
#include "json.hpp"

namespace cscl {

std::string_view ArrangementPolicyName(ArrangementPolicy policy) {
  switch (policy) {
    case ArrangementPolicy::kAnnealing:
      return "annealing";
    case ArrangementPolicy::kSortedOnly:
      return "sorted_only";
    case ArrangementPolicy::kRandomStages:
      return "random_stages";
    case ArrangementPolicy::kShuffledBaseline:
      return "shuffled_baseline";
  }
  return "unknown";
}

ArrangementPolicy ParseArrangementPolicy(std::string_view name) {
  for (auto policy :
       {ArrangementPolicy::kAnnealing, ArrangementPolicy::kSortedOnly,
        ArrangementPolicy::kRandomStages,
        ArrangementPolicy::kShuffledBaseline}) {
    if (ArrangementPolicyName(policy) == name) return policy;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown arrangement policy '" + std::string(name) + "'");
}

std::vector<std::size_t> BalancedSizes(std::size_t total, std::size_t pieces) {
  if (pieces == 0) {
    throw Error(ErrorCode::kInvalidArgument, "cannot cut into 0 pieces");
  }
  std::vector<std::size_t> sizes(pieces, total / pieces);
  for (std::size_t i = 0; i < total % pieces; ++i) ++sizes[i];
  return sizes;
}

namespace {

// Cuts `items` into balanced contiguous pieces.
std::vector<Stage> Cut(std::span<const std::string> items, std::size_t pieces) {
  std::vector<Stage> out;
  out.reserve(pieces);
  std::size_t begin = 0;
  for (std::size_t size : BalancedSizes(items.size(), pieces)) {
    out.emplace_back(items.begin() + begin, items.begin() + begin + size);
    begin += size;
  }
  return out;
}

void CheckArrangeable(std::size_t n, std::size_t k) {
  if (n == 0) throw Error(ErrorCode::kEmptyInput, "no samples to arrange");
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  if (k > n) {
    throw Error(ErrorCode::kKTooLarge, "k=" + std::to_string(k) +
                                           " exceeds sample count " +
                                           std::to_string(n));
  }
}

template <typename Range, typename Proj>
void CheckUniqueIds(const Range& range, Proj id_of) {
  std::unordered_set<std::string_view> seen;
  for (const auto& item : range) {
    if (!seen.insert(id_of(item)).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "duplicate sample id '" + std::string(id_of(item)) + "'");
    }
  }
}

void ShuffleStage(Stage& stage, std::uint64_t seed, std::uint64_t stream) {
  Rng rng(seed, stream);
  rng.Shuffle(std::span<std::string>(stage));
}

}  // namespace

std::vector<DifficultyRecord> SortByDifficulty(
    std::span<const DifficultyRecord> records) {
  std::vector<DifficultyRecord> sorted(records.begin(), records.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const DifficultyRecord& a, const DifficultyRecord& b) {
              if (a.score != b.score) return a.score < b.score;
              return a.sample_id < b.sample_id;
            });
  return sorted;
}

AnnealingLayout LayoutAnnealing(std::span<const DifficultyRecord> records,
                                std::size_t k) {
  CheckArrangeable(records.size(), k);
  CheckUniqueIds(records, [](const DifficultyRecord& r) -> std::string_view {
    return r.sample_id;
  });

  Stage sorted;
  sorted.reserve(records.size());
  for (const auto& r : SortByDifficulty(records)) sorted.push_back(r.sample_id);

  AnnealingLayout layout;
  layout.subsets = Cut(sorted, k);
  for (const Stage& subset : layout.subsets) {
    layout.parts.push_back(Cut(subset, k));
  }
  for (std::size_t i = 0; i < k; ++i) {
    Stage stage;
    for (const auto& subset_parts : layout.parts) {
      stage.insert(stage.end(), subset_parts[i].begin(), subset_parts[i].end());
    }
    layout.stages.push_back(std::move(stage));
  }
  layout.stages.push_back(std::move(sorted));
  return layout;
}

CurriculumManifest ArrangeAnnealing(std::span<const DifficultyRecord> records,
                                    std::size_t k, std::uint64_t seed,
                                    std::string corpus) {
  AnnealingLayout layout = LayoutAnnealing(records, k);
  CurriculumManifest manifest{
      ArrangementPolicy::kAnnealing, k, seed, std::move(corpus), records.size(),
      std::move(layout.stages)};
  for (std::size_t i = 0; i < manifest.stages.size(); ++i) {
    ShuffleStage(manifest.stages[i], seed, i + 1);
  }
  return manifest;
}

CurriculumManifest ArrangeSortedOnly(std::span<const DifficultyRecord> records,
                                     std::uint64_t seed, std::string corpus) {
  CheckArrangeable(records.size(), 1);
  CheckUniqueIds(records, [](const DifficultyRecord& r) -> std::string_view {
    return r.sample_id;
  });
  Stage stage;
  stage.reserve(records.size());
  for (const auto& r : SortByDifficulty(records)) stage.push_back(r.sample_id);
  return {ArrangementPolicy::kSortedOnly,
          1,
          seed,
          std::move(corpus),
          records.size(),
          {std::move(stage)}};
}

CurriculumManifest ArrangeRandomStages(std::span<const std::string> ids,
                                       std::size_t k, std::uint64_t seed,
                                       std::string corpus) {
  CheckArrangeable(ids.size(), k);
  CheckUniqueIds(ids,
                 [](const std::string& s) -> std::string_view { return s; });
  Stage shuffled(ids.begin(), ids.end());
  ShuffleStage(shuffled, seed, 0);
  CurriculumManifest manifest{ArrangementPolicy::kRandomStages,
                              k,
                              seed,
                              std::move(corpus),
                              ids.size(),
                              Cut(shuffled, k)};
  Stage full(ids.begin(), ids.end());
  ShuffleStage(full, seed, k + 1);
  manifest.stages.push_back(std::move(full));
  return manifest;
}

CurriculumManifest ArrangeShuffledBaseline(std::span<const std::string> ids,
                                           std::uint64_t seed,
                                           std::string corpus) {
  CheckArrangeable(ids.size(), 1);
  CheckUniqueIds(ids,
                 [](const std::string& s) -> std::string_view { return s; });
  Stage stage(ids.begin(), ids.end());
  ShuffleStage(stage, seed, 0);
  return {ArrangementPolicy::kShuffledBaseline,
          1,
          seed,
          std::move(corpus),
          ids.size(),
          {std::move(stage)}};
}

std::string WriteManifest(const CurriculumManifest& manifest) {
  nlohmann::json meta = {
      {"policy", ArrangementPolicyName(manifest.policy)},
      {"k", manifest.k},
      {"seed", manifest.seed},
      {"corpus", manifest.corpus},
      {"n", manifest.n},
  };
  std::string out = meta.dump() + "\n";
  for (std::size_t i = 0; i < manifest.stages.size(); ++i) {
    nlohmann::json line = {{"stage", i + 1}, {"ids", manifest.stages[i]}};
    out += line.dump() + "\n";
  }
  return out;
}

namespace {

[[noreturn]] void Malformed(const std::string& what) {
  throw Error(ErrorCode::kMalformedManifest, what);
}

std::size_t ExpectedStageCount(ArrangementPolicy policy, std::size_t k) {
  switch (policy) {
    case ArrangementPolicy::kAnnealing:
    case ArrangementPolicy::kRandomStages:
      return k + 1;
    case ArrangementPolicy::kSortedOnly:
    case ArrangementPolicy::kShuffledBaseline:
      return 1;
  }
  return 0;
}

}  // namespace

CurriculumManifest ReadManifest(std::string_view text) {
  std::vector<std::string_view> lines;
  for (std::string_view line : SplitLines(text)) {
    if (!line.empty()) lines.push_back(line);
  }
  if (lines.empty()) Malformed("empty manifest");

  CurriculumManifest manifest;
  try {
    const auto meta = nlohmann::json::parse(lines[0]);
    if (!meta.is_object()) Malformed("line 1: metadata must be an object");
    try {
      manifest.policy =
          ParseArrangementPolicy(meta.at("policy").get<std::string>());
    } catch (const Error&) {
      Malformed("line 1: unknown policy");
    }
    if (!meta.at("k").is_number_unsigned() ||
        !meta.at("seed").is_number_unsigned() ||
        !meta.at("n").is_number_unsigned()) {
      Malformed("line 1: k, seed and n must be non-negative integers");
    }
    manifest.k = meta.at("k").get<std::size_t>();
    manifest.seed = meta.at("seed").get<std::uint64_t>();
    manifest.corpus = meta.at("corpus").get<std::string>();
    manifest.n = meta.at("n").get<std::size_t>();
    if (manifest.k == 0) Malformed("line 1: k must be >= 1");

    for (std::size_t i = 1; i < lines.size(); ++i) {
      const std::string where = "stage line " + std::to_string(i);
      const auto line = nlohmann::json::parse(lines[i]);
      if (!line.is_object() || !line.contains("stage") ||
          !line.at("stage").is_number_unsigned()) {
        Malformed(where + ": missing stage index");
      }
      if (line.at("stage").get<std::size_t>() != i) {
        Malformed(where + ": expected stage " + std::to_string(i));
      }
      if (!line.contains("ids") || !line.at("ids").is_array()) {
        Malformed(where + ": missing ids");
      }
      Stage stage = line.at("ids").get<Stage>();
      std::unordered_set<std::string_view> seen;
      for (const auto& id : stage) {
        if (!seen.insert(id).second) {
          Malformed(where + ": duplicate id '" + id + "'");
        }
      }
      manifest.stages.push_back(std::move(stage));
    }
  } catch (const nlohmann::json::exception& e) {
    Malformed(e.what());
  }
  if (manifest.stages.size() !=
      ExpectedStageCount(manifest.policy, manifest.k)) {
    Malformed(std::to_string(manifest.stages.size()) + " stages for policy " +
              std::string(ArrangementPolicyName(manifest.policy)) +
              " with k=" + std::to_string(manifest.k));
  }
  return manifest;
}

}  // namespace cscl
