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

#include "cscl/model.h"

#include <algorithm>
#include <charconv>
#include <utility>

#include "cscl/error.h"
#include "cscl/text.h"
#include "parallel.h"

namespace cscl {

namespace {

constexpr std::string_view kBosToken = "<s>";
constexpr std::string_view kEosToken = "</s>";
constexpr std::string_view kModelMagic = "#cscl-corrector";

std::string_view TypeName(FeatureType type) {
  switch (type) {
    case FeatureType::kC:
      return "C";
    case FeatureType::kL:
      return "L";
    case FeatureType::kR:
      return "R";
    case FeatureType::kLL:
      return "LL";
    case FeatureType::kRR:
      return "RR";
    case FeatureType::kKeep:
      return "KEEP";
  }
  return "?";
}

void AppendChar(char32_t c, std::string* out) {
  if (c == kBos) {
    out->append(kBosToken);
  } else if (c == kEos) {
    out->append(kEosToken);
  } else {
    utf8::Append(c, out);
  }
}

[[noreturn]] void BadKey(std::string_view text) {
  throw Error(ErrorCode::kMalformedModel,
              "bad feature key '" + std::string(text) + "'");
}

// Reads one character or sentinel token from the front of `rest`.
char32_t TakeChar(std::string_view* rest, std::string_view whole) {
  for (auto [token, value] :
       {std::pair{kBosToken, kBos}, std::pair{kEosToken, kEos}}) {
    if (rest->starts_with(token) &&
        (rest->size() == token.size() || (*rest)[token.size()] == ':')) {
      rest->remove_prefix(token.size());
      return value;
    }
  }
  if (rest->empty()) BadKey(whole);
  const auto lead = static_cast<unsigned char>((*rest)[0]);
  const std::size_t len = lead < 0x80   ? 1
                          : lead < 0xE0 ? 2
                          : lead < 0xF0 ? 3
                                        : 4;
  if (len > rest->size()) BadKey(whole);
  auto decoded = utf8::Decode(rest->substr(0, len));
  if (!decoded || decoded->size() != 1) BadKey(whole);
  rest->remove_prefix(len);
  return (*decoded)[0];
}

char32_t At(std::u32string_view s, std::ptrdiff_t j) {
  if (j < 0) return kBos;
  if (j >= static_cast<std::ptrdiff_t>(s.size())) return kEos;
  return s[static_cast<std::size_t>(j)];
}

}  // namespace

std::string FeatureKey::ToString() const {
  std::string out(TypeName(type()));
  if (type() == FeatureType::kKeep) return out;
  if (type() != FeatureType::kC) {
    out += ':';
    AppendChar(context(), &out);
  }
  out += ':';
  AppendChar(candidate(), &out);
  return out;
}

FeatureKey FeatureKey::Parse(std::string_view text) {
  if (text == "KEEP") return Keep();
  const std::size_t colon = text.find(':');
  if (colon == std::string_view::npos) BadKey(text);
  const std::string_view name = text.substr(0, colon);
  std::string_view rest = text.substr(colon + 1);
  for (auto type : {FeatureType::kC, FeatureType::kL, FeatureType::kR,
                    FeatureType::kLL, FeatureType::kRR}) {
    if (TypeName(type) != name) continue;
    char32_t context = 0;
    if (type != FeatureType::kC) {
      context = TakeChar(&rest, text);
      if (rest.empty() || rest[0] != ':') BadKey(text);
      rest.remove_prefix(1);
    }
    const char32_t candidate = TakeChar(&rest, text);
    if (!rest.empty()) BadKey(text);
    return Make(type, context, candidate);
  }
  BadKey(text);
}

std::vector<char32_t> CandidateSet(std::u32string_view source, std::size_t j,
                                   const ConfusionSet& confusion) {
  std::vector<char32_t> out{source[j]};
  const auto& others = confusion.Lookup(source[j]);
  out.insert(out.end(), others.begin(), others.end());
  return out;
}

std::vector<FeatureKey> Featurize(std::u32string_view source, std::size_t j,
                                  char32_t candidate) {
  const auto pos = static_cast<std::ptrdiff_t>(j);
  std::vector<FeatureKey> keys = {
      FeatureKey::Make(FeatureType::kC, 0, candidate),
      FeatureKey::Make(FeatureType::kL, At(source, pos - 1), candidate),
      FeatureKey::Make(FeatureType::kR, At(source, pos + 1), candidate),
      FeatureKey::Make(FeatureType::kLL, At(source, pos - 2), candidate),
      FeatureKey::Make(FeatureType::kRR, At(source, pos + 2), candidate),
  };
  if (candidate == source[j]) keys.push_back(FeatureKey::Keep());
  return keys;
}

CorrectorModel::CorrectorModel(ConfusionSet confusion, WeightMap weights,
                               WeightMap averaged_weights,
                               std::uint64_t updates_seen)
    : confusion_(std::move(confusion)),
      weights_(std::move(weights)),
      averaged_weights_(std::move(averaged_weights)),
      updates_seen_(updates_seen) {}

double CorrectorModel::Score(std::u32string_view source, std::size_t j,
                             char32_t candidate) const {
  double score = 0.0;
  for (FeatureKey key : Featurize(source, j, candidate)) {
    auto it = averaged_weights_.find(key);
    if (it != averaged_weights_.end()) score += it->second;
  }
  return score;
}

namespace {

// Candidates come observed-first then in code point order, so keeping the
// first strict maximum implements the tie rule.
template <typename ScoreFn>
char32_t Argmax(const std::vector<char32_t>& candidates, ScoreFn score) {
  char32_t best = candidates.front();
  double best_score = score(best);
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const double s = score(candidates[i]);
    if (s > best_score) {
      best = candidates[i];
      best_score = s;
    }
  }
  return best;
}

}  // namespace

char32_t CorrectorModel::Decide(std::u32string_view source,
                                std::size_t j) const {
  const auto candidates = CandidateSet(source, j, confusion_);
  if (candidates.size() == 1) return source[j];
  return Argmax(candidates, [&](char32_t c) { return Score(source, j, c); });
}

PerceptronTrainer::PerceptronTrainer(ConfusionSet confusion)
    : confusion_(std::move(confusion)) {}

double PerceptronTrainer::CurrentScore(std::u32string_view source,
                                       std::size_t j,
                                       char32_t candidate) const {
  double score = 0.0;
  for (FeatureKey key : Featurize(source, j, candidate)) {
    auto it = entries_.find(key);
    if (it != entries_.end()) score += it->second.weight;
  }
  return score;
}

void PerceptronTrainer::Update(FeatureKey key, double delta) {
  Entry& e = entries_[key];
  // Fold in the snapshots before this step, which still had the old weight.
  e.total += e.weight * static_cast<double>(steps_ - 1 - e.last_step);
  e.last_step = steps_ - 1;
  e.weight += delta;
}

bool PerceptronTrainer::TrainPosition(std::u32string_view source, std::size_t j,
                                      char32_t gold) {
  const auto candidates = CandidateSet(source, j, confusion_);
  if (candidates.size() < 2 || std::find(candidates.begin(), candidates.end(),
                                         gold) == candidates.end()) {
    return false;
  }
  ++steps_;
  const char32_t predicted = Argmax(
      candidates, [&](char32_t c) { return CurrentScore(source, j, c); });
  if (predicted == gold) return false;
  for (FeatureKey key : Featurize(source, j, gold)) Update(key, +1.0);
  for (FeatureKey key : Featurize(source, j, predicted)) Update(key, -1.0);
  return true;
}

void PerceptronTrainer::TrainSample(const Sample& sample) {
  for (std::size_t j = 0; j < sample.source.size(); ++j) {
    TrainPosition(sample.source, j, sample.target[j]);
  }
}

double PerceptronTrainer::weight(FeatureKey key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? 0.0 : it->second.weight;
}

double PerceptronTrainer::averaged_weight(FeatureKey key) const {
  if (steps_ == 0) return 0.0;
  auto it = entries_.find(key);
  if (it == entries_.end()) return 0.0;
  const Entry& e = it->second;
  const double total =
      e.total + e.weight * static_cast<double>(steps_ - e.last_step);
  return total / static_cast<double>(steps_);
}

CorrectorModel PerceptronTrainer::Finish() const {
  WeightMap weights, averaged;
  for (const auto& [key, entry] : entries_) {
    weights.emplace(key, entry.weight);
    averaged.emplace(key, averaged_weight(key));
  }
  return CorrectorModel(confusion_, std::move(weights), std::move(averaged),
                        steps_);
}

CorrectorModel Train(const CurriculumManifest& manifest, const Corpus& corpus,
                     const ConfusionSet& confusion) {
  std::unordered_map<std::string_view, const Sample*> by_id;
  by_id.reserve(corpus.samples.size());
  for (const Sample& s : corpus.samples) by_id.emplace(s.id, &s);
  // Resolve every id before training so a bad manifest fails fast.
  std::vector<std::vector<const Sample*>> stages;
  for (const Stage& stage : manifest.stages) {
    auto& resolved = stages.emplace_back();
    for (const std::string& id : stage) {
      auto it = by_id.find(id);
      if (it == by_id.end()) throw Error(ErrorCode::kUnknownSampleId, id);
      resolved.push_back(it->second);
    }
  }
  PerceptronTrainer trainer(confusion);
  for (const auto& stage : stages) {
    for (const Sample* s : stage) trainer.TrainSample(*s);
  }
  return trainer.Finish();
}

Prediction Predict(const CorrectorModel& model, const Sample& sample) {
  Prediction p{sample.id, sample.source, {}};
  for (std::size_t j = 0; j < sample.source.size(); ++j) {
    p.predicted[j] = model.Decide(sample.source, j);
    if (p.predicted[j] != sample.source[j]) p.detected_positions.push_back(j);
  }
  return p;
}

std::vector<Prediction> PredictCorpus(const CorrectorModel& model,
                                      const Corpus& corpus) {
  std::vector<Prediction> out(corpus.samples.size());
  internal::ParallelFor(out.size(), [&](std::size_t i) {
    out[i] = Predict(model, corpus.samples[i]);
  });
  return out;
}

namespace serial {

std::vector<Prediction> PredictCorpus(const CorrectorModel& model,
                                      const Corpus& corpus) {
  std::vector<Prediction> out;
  out.reserve(corpus.samples.size());
  for (const Sample& s : corpus.samples) out.push_back(Predict(model, s));
  return out;
}

}  // namespace serial

std::string WriteModel(const CorrectorModel& model) {
  std::vector<std::pair<std::string, double>> rows;
  for (const auto& [key, w] : model.averaged_weights()) {
    if (w != 0.0) rows.emplace_back(key.ToString(), w);
  }
  std::sort(rows.begin(), rows.end());
  std::string out =
      std::string(kModelMagic) +
      "\twindow=" + std::to_string(CorrectorModel::kWindow) +
      "\tschema=" + std::to_string(CorrectorModel::kSchemaVersion) + "\n";
  char buf[64];
  for (const auto& [key, w] : rows) {
    out += key;
    out += '\t';
    const auto result = std::to_chars(buf, buf + sizeof(buf), w);
    out.append(buf, result.ptr);
    out += '\n';
  }
  return out;
}

CorrectorModel ReadModel(std::string_view text, ConfusionSet confusion) {
  const auto lines = SplitLines(text);
  const std::string expected_header =
      std::string(kModelMagic) +
      "\twindow=" + std::to_string(CorrectorModel::kWindow) +
      "\tschema=" + std::to_string(CorrectorModel::kSchemaVersion);
  if (lines.empty() || lines[0] != expected_header) {
    throw Error(ErrorCode::kMalformedModel,
                "expected header '" + expected_header + "'");
  }
  WeightMap averaged;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto fields = Split(lines[i], '\t');
    if (fields.size() != 2) {
      throw Error(ErrorCode::kMalformedModel, "line " + std::to_string(i + 1) +
                                                  ": expected key<TAB>weight");
    }
    double w = 0.0;
    const auto [ptr, ec] = std::from_chars(
        fields[1].data(), fields[1].data() + fields[1].size(), w);
    if (ec != std::errc() || ptr != fields[1].data() + fields[1].size()) {
      throw Error(ErrorCode::kMalformedModel,
                  "line " + std::to_string(i + 1) + ": bad weight");
    }
    if (!averaged.emplace(FeatureKey::Parse(fields[0]), w).second) {
      throw Error(ErrorCode::kMalformedModel,
                  "line " + std::to_string(i + 1) + ": duplicate key");
    }
  }
  // Raw weights and the update count are not persisted.
  return CorrectorModel(std::move(confusion), {}, std::move(averaged), 0);
}

}  // namespace cscl
