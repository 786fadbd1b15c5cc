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

// A small spelling corrector: at every position an averaged perceptron picks
// one of the observed character and its confusion candidates, scoring each
// candidate with features of the surrounding observed characters.

#ifndef CSCL_MODEL_H_
#define CSCL_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cscl/corpus.h"
#include "cscl/curriculum.h"

namespace cscl {

// Context placeholders outside the sentence. Both lie above U+10FFFF so they
// never collide with text.
inline constexpr char32_t kBos = 0x110000;
inline constexpr char32_t kEos = 0x110001;

enum class FeatureType : std::uint8_t { kC, kL, kR, kLL, kRR, kKeep };

// A candidate-conditioned feature packed into 64 bits.
class FeatureKey {
 public:
  constexpr FeatureKey() = default;
  static constexpr FeatureKey Make(FeatureType type, char32_t context,
                                   char32_t candidate) {
    return FeatureKey((std::uint64_t{static_cast<std::uint8_t>(type)} << 48) |
                      (std::uint64_t{context} << 24) | candidate);
  }
  static constexpr FeatureKey Keep() { return Make(FeatureType::kKeep, 0, 0); }

  constexpr FeatureType type() const {
    return static_cast<FeatureType>(bits_ >> 48);
  }
  constexpr char32_t context() const {
    return static_cast<char32_t>((bits_ >> 24) & 0xFFFFFF);
  }
  constexpr char32_t candidate() const {
    return static_cast<char32_t>(bits_ & 0xFFFFFF);
  }
  constexpr std::uint64_t bits() const { return bits_; }

  // "C:x", "L:a:x", "RR:</s>:x", "KEEP" and so on.
  std::string ToString() const;
  // Throws Error(kMalformedModel).
  static FeatureKey Parse(std::string_view text);

  constexpr auto operator<=>(const FeatureKey&) const = default;

 private:
  constexpr explicit FeatureKey(std::uint64_t bits) : bits_(bits) {}
  std::uint64_t bits_ = 0;
};

struct FeatureKeyHash {
  std::size_t operator()(FeatureKey key) const {
    return std::hash<std::uint64_t>{}(key.bits());
  }
};

using WeightMap = std::unordered_map<FeatureKey, double, FeatureKeyHash>;

// The observed character followed by its confusion candidates in code point
// order.
std::vector<char32_t> CandidateSet(std::u32string_view source, std::size_t j,
                                   const ConfusionSet& confusion);

// C, L, R, LL, RR keys for the candidate, plus KEEP when the candidate is the
// observed character.
std::vector<FeatureKey> Featurize(std::u32string_view source, std::size_t j,
                                  char32_t candidate);

struct Prediction {
  std::string sample_id;
  std::u32string predicted;
  Positions detected_positions;

  bool operator==(const Prediction&) const = default;
};

class CorrectorModel {
 public:
  static constexpr int kWindow = 2;
  static constexpr int kSchemaVersion = 1;

  CorrectorModel() = default;
  CorrectorModel(ConfusionSet confusion, WeightMap weights,
                 WeightMap averaged_weights, std::uint64_t updates_seen);

  const ConfusionSet& confusion() const { return confusion_; }
  const WeightMap& weights() const { return weights_; }
  const WeightMap& averaged_weights() const { return averaged_weights_; }
  std::uint64_t updates_seen() const { return updates_seen_; }
  int window() const { return kWindow; }

  // Sum of averaged weights of the candidate's features.
  double Score(std::u32string_view source, std::size_t j,
               char32_t candidate) const;

  // Highest-scoring candidate; ties go to the observed character, then to
  // the lowest code point.
  char32_t Decide(std::u32string_view source, std::size_t j) const;

 private:
  ConfusionSet confusion_;
  WeightMap weights_;
  WeightMap averaged_weights_;
  std::uint64_t updates_seen_ = 0;
};

// Online trainer. A step is one decision at a position that has at least two
// candidates and whose gold character is among them; averaged weights are
// the mean of the weight vector after every step.
class PerceptronTrainer {
 public:
  explicit PerceptronTrainer(ConfusionSet confusion);

  // Returns true when the prediction was wrong and weights changed.
  bool TrainPosition(std::u32string_view source, std::size_t j, char32_t gold);
  void TrainSample(const Sample& sample);

  double weight(FeatureKey key) const;
  double averaged_weight(FeatureKey key) const;
  std::uint64_t steps() const { return steps_; }

  CorrectorModel Finish() const;

 private:
  struct Entry {
    double weight = 0.0;
    // Sum of `weight` over steps 1..last_step.
    double total = 0.0;
    std::uint64_t last_step = 0;
  };

  double CurrentScore(std::u32string_view source, std::size_t j,
                      char32_t candidate) const;
  void Update(FeatureKey key, double delta);

  ConfusionSet confusion_;
  std::unordered_map<FeatureKey, Entry, FeatureKeyHash> entries_;
  std::uint64_t steps_ = 0;
};

// One epoch per stage, stages in manifest order, samples in stage order.
// Throws Error(kUnknownSampleId) if the manifest names a sample the corpus
// lacks.
CorrectorModel Train(const CurriculumManifest& manifest, const Corpus& corpus,
                     const ConfusionSet& confusion);

Prediction Predict(const CorrectorModel& model, const Sample& sample);

// Predictions in corpus order, samples in parallel.
std::vector<Prediction> PredictCorpus(const CorrectorModel& model,
                                      const Corpus& corpus);

namespace serial {
std::vector<Prediction> PredictCorpus(const CorrectorModel& model,
                                      const Corpus& corpus);
}  // namespace serial

// Header "#cscl-corrector<TAB>window=2<TAB>schema=1", then
// "feature_key<TAB>averaged_weight" for every non-zero averaged weight,
// sorted by key bytes. Weights use the shortest round-trip decimal form.
std::string WriteModel(const CorrectorModel& model);
// The confusion set is not stored in the file and must be supplied.
CorrectorModel ReadModel(std::string_view text, ConfusionSet confusion);

}  // namespace cscl

#endif  // CSCL_MODEL_H_
