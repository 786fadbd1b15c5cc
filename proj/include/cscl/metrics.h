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

// Sentence-level evaluation of spelling correction.
//
// Per sentence, with G the gold error positions and D the changed positions:
//   TP  G non-empty and D == G (correction level: also predicted == target)
//   FP  D non-empty and not TP
//   FN  G non-empty and not TP
//   TN  G and D both empty
// A sentence with both gold errors and a wrong change counts as FP and FN,
// so tp + fp + fn + tn == n_sentences + fp_and_fn.

#ifndef CSCL_METRICS_H_
#define CSCL_METRICS_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cscl/corpus.h"
#include "cscl/model.h"

namespace cscl {

enum class EvalLevel { kDetection, kCorrection };

std::string_view EvalLevelName(EvalLevel level);

struct EvalReport {
  EvalLevel level = EvalLevel::kDetection;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;
  std::size_t n_sentences = 0;
  // Sentences counted both as FP and as FN.
  std::size_t fp_and_fn = 0;

  bool operator==(const EvalReport&) const = default;
};

// Precision, recall, F1 and accuracy from counts; 0 wherever a denominator
// is 0.
void FillRates(EvalReport* report);

// Throws Error(kIdMismatch) unless prediction ids are a permutation of the
// gold ids, and for an empty gold corpus.
EvalReport Evaluate(std::span<const Prediction> predictions, const Corpus& gold,
                    EvalLevel level);

namespace serial {
EvalReport Evaluate(std::span<const Prediction> predictions, const Corpus& gold,
                    EvalLevel level);
}  // namespace serial

// Tab-separated, header line first, rates with 4 decimals.
std::string WriteReports(std::span<const EvalReport> reports);

// Signed difference with 4 decimals, "0.0000" when it rounds to zero.
std::string FormatDelta(double delta);

using LabeledReport = std::pair<std::string, EvalReport>;

// One row per label with a delta column holding the F1 difference to the
// first row.
std::string CompareRuns(std::span<const LabeledReport> reports);

}  // namespace cscl

#endif  // CSCL_METRICS_H_
