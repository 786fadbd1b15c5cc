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

#include "cscl/metrics.h"

#include <cmath>
#include <cstdio>
#include <unordered_map>

#include "cscl/error.h"
#include "parallel.h"

namespace cscl {

std::string_view EvalLevelName(EvalLevel level) {
  return level == EvalLevel::kDetection ? "detection" : "correction";
}

void FillRates(EvalReport* r) {
  auto ratio = [](std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  r->precision = ratio(r->tp, r->tp + r->fp);
  r->recall = ratio(r->tp, r->tp + r->fn);
  r->f1 = r->precision + r->recall == 0.0
              ? 0.0
              : 2.0 * r->precision * r->recall / (r->precision + r->recall);
  r->accuracy = ratio(r->tp + r->tn, r->n_sentences);
}

namespace {

struct SentenceOutcome {
  bool tp = false, fp = false, fn = false, tn = false;
};

SentenceOutcome Classify(const Prediction& p, const Sample& gold,
                         EvalLevel level) {
  const bool has_gold = !gold.error_positions.empty();
  const bool has_change = !p.detected_positions.empty();
  bool exact = has_gold && p.detected_positions == gold.error_positions;
  if (level == EvalLevel::kCorrection)
    exact = exact && p.predicted == gold.target;
  SentenceOutcome out;
  out.tp = exact;
  out.fp = has_change && !exact;
  out.fn = has_gold && !exact;
  out.tn = !has_gold && !has_change;
  return out;
}

// gold index for every prediction, in prediction order.
std::vector<const Sample*> Align(std::span<const Prediction> predictions,
                                 const Corpus& gold) {
  if (gold.samples.empty()) {
    throw Error(ErrorCode::kIdMismatch, "gold corpus is empty");
  }
  if (predictions.size() != gold.samples.size()) {
    throw Error(ErrorCode::kIdMismatch,
                std::to_string(predictions.size()) + " predictions for " +
                    std::to_string(gold.samples.size()) + " gold sentences");
  }
  std::unordered_map<std::string_view, const Sample*> by_id;
  for (const Sample& s : gold.samples) by_id.emplace(s.id, &s);
  std::vector<const Sample*> aligned;
  aligned.reserve(predictions.size());
  for (const Prediction& p : predictions) {
    auto it = by_id.find(p.sample_id);
    if (it == by_id.end() || it->second == nullptr) {
      throw Error(ErrorCode::kIdMismatch,
                  "prediction '" + p.sample_id + "' has no unmatched gold");
    }
    if (it->second->source.size() != p.predicted.size()) {
      throw Error(ErrorCode::kIdMismatch,
                  "prediction '" + p.sample_id + "' has the wrong length");
    }
    aligned.push_back(it->second);
    it->second = nullptr;
  }
  return aligned;
}

void Count(const SentenceOutcome& o, EvalReport* r) {
  r->tp += o.tp;
  r->fp += o.fp;
  r->fn += o.fn;
  r->tn += o.tn;
  r->fp_and_fn += o.fp && o.fn;
}

}  // namespace

EvalReport Evaluate(std::span<const Prediction> predictions, const Corpus& gold,
                    EvalLevel level) {
  const auto aligned = Align(predictions, gold);
  std::vector<SentenceOutcome> outcomes(aligned.size());
  internal::ParallelFor(aligned.size(), [&](std::size_t i) {
    outcomes[i] = Classify(predictions[i], *aligned[i], level);
  });
  EvalReport report;
  report.level = level;
  report.n_sentences = aligned.size();
  for (const auto& o : outcomes) Count(o, &report);
  FillRates(&report);
  return report;
}

namespace serial {

EvalReport Evaluate(std::span<const Prediction> predictions, const Corpus& gold,
                    EvalLevel level) {
  const auto aligned = Align(predictions, gold);
  EvalReport report;
  report.level = level;
  report.n_sentences = aligned.size();
  for (std::size_t i = 0; i < aligned.size(); ++i) {
    Count(Classify(predictions[i], *aligned[i], level), &report);
  }
  FillRates(&report);
  return report;
}

}  // namespace serial

namespace {

std::string Fixed4(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", value);
  return buf;
}

}  // namespace

std::string WriteReports(std::span<const EvalReport> reports) {
  std::string out =
      "level\taccuracy\tprecision\trecall\tf1\ttp\tfp\tfn\ttn\tn_sentences\n";
  for (const auto& r : reports) {
    out += std::string(EvalLevelName(r.level)) + "\t" + Fixed4(r.accuracy) +
           "\t" + Fixed4(r.precision) + "\t" + Fixed4(r.recall) + "\t" +
           Fixed4(r.f1) + "\t" + std::to_string(r.tp) + "\t" +
           std::to_string(r.fp) + "\t" + std::to_string(r.fn) + "\t" +
           std::to_string(r.tn) + "\t" + std::to_string(r.n_sentences) + "\n";
  }
  return out;
}

std::string FormatDelta(double delta) {
  if (std::fabs(delta) < 0.00005) return "0.0000";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%+.4f", delta);
  return buf;
}

std::string CompareRuns(std::span<const LabeledReport> reports) {
  std::string out = "label\tlevel\taccuracy\tprecision\trecall\tf1\tdelta_f1\n";
  if (reports.empty()) return out;
  const double baseline = reports.front().second.f1;
  for (const auto& [label, r] : reports) {
    out += label + "\t" + std::string(EvalLevelName(r.level)) + "\t" +
           Fixed4(r.accuracy) + "\t" + Fixed4(r.precision) + "\t" +
           Fixed4(r.recall) + "\t" + Fixed4(r.f1) + "\t" +
           FormatDelta(r.f1 - baseline) + "\n";
  }
  return out;
}

}  // namespace cscl
