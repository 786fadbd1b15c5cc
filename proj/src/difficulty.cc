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

#include "cscl/difficulty.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <iostream>

#include "cscl/error.h"
#include "cscl/text.h"
#include "parallel.h"

namespace cscl {

std::string_view ScoringPolicyName(ScoringPolicy policy) {
  return policy == ScoringPolicy::kContextual ? "contextual"
                                              : "char_similarity";
}

ScoringPolicy ParseScoringPolicy(std::string_view name) {
  if (name == "contextual") return ScoringPolicy::kContextual;
  if (name == "char_similarity") return ScoringPolicy::kCharSimilarity;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown scoring policy '" + std::string(name) + "'");
}

double Cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw Error(ErrorCode::kShapeMismatch,
                "cosine of vectors with dims " + std::to_string(u.size()) +
                    " and " + std::to_string(v.size()));
  }
  double dot = 0.0, uu = 0.0, vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    uu += u[i] * u[i];
    vv += v[i] * v[i];
  }
  if (uu == 0.0 || vv == 0.0) {
    throw Error(ErrorCode::kZeroNormVector, "cosine with a zero vector");
  }
  return std::clamp(dot / (std::sqrt(uu) * std::sqrt(vv)), -1.0, 1.0);
}

DifficultyRecord ScoreContextual(const Sample& sample,
                                 const ContextualEmbedding& source,
                                 const ContextualEmbedding& target) {
  if (source.length() != sample.source.size() ||
      target.length() != sample.target.size() || source.dim() != target.dim()) {
    throw Error(ErrorCode::kShapeMismatch,
                "embeddings do not match sample " + sample.id);
  }
  DifficultyRecord record{sample.id, 0.0, ScoringPolicy::kContextual, 0};
  for (std::size_t j : sample.error_positions) {
    try {
      record.score += Cosine(source.at(j), target.at(j));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kZeroNormVector) throw;
      ++record.degenerate_positions;
    }
  }
  return record;
}

DifficultyRecord ScoreCharSimilarity(const Sample& sample,
                                     const ConfusionSet& confusion) {
  DifficultyRecord record{sample.id, 0.0, ScoringPolicy::kCharSimilarity, 0};
  for (std::size_t j : sample.error_positions) {
    const char32_t wrong = sample.source[j];
    const char32_t right = sample.target[j];
    if (confusion.Contains(wrong, right) || confusion.Contains(right, wrong)) {
      record.score += 1.0;
    }
  }
  return record;
}

namespace {

void CheckInputs(const ScoringInputs& inputs) {
  if (inputs.policy == ScoringPolicy::kContextual && !inputs.provider) {
    throw Error(ErrorCode::kMissingProvider,
                "contextual scoring needs an embedding provider");
  }
  if (inputs.policy == ScoringPolicy::kCharSimilarity && !inputs.confusion) {
    throw Error(ErrorCode::kMissingProvider,
                "char_similarity scoring needs a confusion set");
  }
}

DifficultyRecord ScoreOne(const Sample& sample, const ScoringInputs& inputs) {
  if (inputs.policy == ScoringPolicy::kCharSimilarity) {
    return ScoreCharSimilarity(sample, *inputs.confusion);
  }
  // Error-free samples score 0 whatever the encoder says.
  if (sample.error_positions.empty()) {
    return {sample.id, 0.0, ScoringPolicy::kContextual, 0};
  }
  return ScoreContextual(
      sample, inputs.provider->Embed(sample.id, Side::kSource, sample.source),
      inputs.provider->Embed(sample.id, Side::kTarget, sample.target));
}

void WarnDegenerate(std::span<const DifficultyRecord> records) {
  std::size_t positions = 0, samples = 0;
  for (const auto& r : records) {
    positions += r.degenerate_positions;
    samples += r.degenerate_positions > 0;
  }
  if (positions > 0) {
    std::cerr << "warning: " << positions << " error position(s) in " << samples
              << " sample(s) had a zero vector; scored as 0\n";
  }
}

}  // namespace

std::vector<DifficultyRecord> ScoreCorpus(const Corpus& corpus,
                                          const ScoringInputs& inputs) {
  CheckInputs(inputs);
  std::vector<DifficultyRecord> records(corpus.samples.size());
  internal::ParallelFor(records.size(), [&](std::size_t i) {
    records[i] = ScoreOne(corpus.samples[i], inputs);
  });
  WarnDegenerate(records);
  return records;
}

namespace serial {

std::vector<DifficultyRecord> ScoreCorpus(const Corpus& corpus,
                                          const ScoringInputs& inputs) {
  CheckInputs(inputs);
  std::vector<DifficultyRecord> records;
  records.reserve(corpus.samples.size());
  for (const Sample& s : corpus.samples) records.push_back(ScoreOne(s, inputs));
  WarnDegenerate(records);
  return records;
}

}  // namespace serial

std::string WriteDifficulty(std::span<const DifficultyRecord> records) {
  std::string out;
  char buf[64];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof(buf), "%.9f", r.score);
    out += r.sample_id;
    out += '\t';
    out += buf;
    out += '\t';
    out += ScoringPolicyName(r.policy);
    out += '\n';
  }
  return out;
}

std::vector<DifficultyRecord> ReadDifficulty(std::string_view text) {
  std::vector<DifficultyRecord> records;
  const auto lines = SplitLines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const std::string where = "line " + std::to_string(i + 1);
    const auto fields = Split(lines[i], '\t');
    if (fields.size() != 3 || fields[0].empty()) {
      throw Error(ErrorCode::kMalformedLine,
                  where + ": expected sample_id<TAB>score<TAB>policy");
    }
    DifficultyRecord r;
    r.sample_id = std::string(fields[0]);
    const auto [ptr, ec] = std::from_chars(
        fields[1].data(), fields[1].data() + fields[1].size(), r.score);
    if (ec != std::errc() || ptr != fields[1].data() + fields[1].size()) {
      throw Error(ErrorCode::kMalformedLine, where + ": bad score");
    }
    try {
      r.policy = ParseScoringPolicy(fields[2]);
    } catch (const Error&) {
      throw Error(ErrorCode::kMalformedLine, where + ": bad policy");
    }
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace cscl
