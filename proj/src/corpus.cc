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

#include "cscl/corpus.h"

#include <span>
#include <unordered_set>

#include "cscl/error.h"
#include "cscl/rng.h"
#include "cscl/text.h"

namespace cscl {

Positions DeriveErrorPositions(std::u32string_view source,
                               std::u32string_view target) {
  if (source.size() != target.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "source has " + std::to_string(source.size()) +
                    " characters, target has " + std::to_string(target.size()));
  }
  Positions positions;
  for (std::size_t j = 0; j < source.size(); ++j) {
    if (source[j] != target[j]) positions.push_back(j);
  }
  return positions;
}

Sample Sample::Make(std::string id, std::u32string source,
                    std::u32string target) {
  Sample sample{std::move(id), std::move(source), std::move(target), {}};
  sample.error_positions = DeriveErrorPositions(sample.source, sample.target);
  return sample;
}

namespace {

std::string LineRef(std::size_t line_no) {
  return "line " + std::to_string(line_no);
}

std::u32string DecodeField(std::string_view field, std::size_t line_no) {
  auto decoded = utf8::Decode(field);
  if (!decoded) {
    throw Error(ErrorCode::kMalformedLine,
                LineRef(line_no) + ": invalid UTF-8");
  }
  return *std::move(decoded);
}

}  // namespace

Corpus ParseCorpus(std::string_view text, CorpusFormat format,
                   std::string name) {
  (void)format;  // only one format so far
  Corpus corpus;
  corpus.name = std::move(name);
  std::unordered_set<std::string> seen;
  const auto lines = SplitLines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (lines[i].empty()) continue;
    const auto fields = Split(lines[i], '\t');
    if (fields.size() != 3 || fields[0].empty()) {
      throw Error(ErrorCode::kMalformedLine,
                  LineRef(line_no) + ": expected id<TAB>source<TAB>target");
    }
    std::string id(fields[0]);
    if (!seen.insert(id).second) {
      throw Error(ErrorCode::kDuplicateId, id);
    }
    auto source = DecodeField(fields[1], line_no);
    auto target = DecodeField(fields[2], line_no);
    if (source.size() != target.size()) {
      throw Error(ErrorCode::kLengthMismatch,
                  LineRef(line_no) + ": sample " + id);
    }
    corpus.samples.push_back(
        Sample::Make(std::move(id), std::move(source), std::move(target)));
  }
  return corpus;
}

std::string SerializeCorpus(const Corpus& corpus) {
  std::string out;
  for (const Sample& s : corpus.samples) {
    out += s.id;
    out += '\t';
    out += utf8::Encode(s.source);
    out += '\t';
    out += utf8::Encode(s.target);
    out += '\n';
  }
  return out;
}

void ConfusionSet::Add(char32_t head, char32_t candidate) {
  if (head == candidate) return;
  entries_[head].insert(candidate);
}

const ConfusionSet::Candidates& ConfusionSet::Lookup(char32_t head) const {
  static const Candidates kEmpty;
  auto it = entries_.find(head);
  return it == entries_.end() ? kEmpty : it->second;
}

bool ConfusionSet::Contains(char32_t head, char32_t candidate) const {
  return Lookup(head).contains(candidate);
}

std::size_t ConfusionSet::num_pairs() const {
  std::size_t total = 0;
  for (const auto& [head, candidates] : entries_) total += candidates.size();
  return total;
}

ConfusionSet ParseConfusionSet(std::string_view text) {
  ConfusionSet confusion;
  const auto lines = SplitLines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (lines[i].empty()) continue;
    const auto fields = Split(lines[i], '\t');
    if (fields.size() != 2) {
      throw Error(ErrorCode::kMalformedLine,
                  LineRef(line_no) + ": expected head<TAB>candidates");
    }
    const auto head = DecodeField(fields[0], line_no);
    if (head.size() != 1) {
      throw Error(ErrorCode::kMalformedLine,
                  LineRef(line_no) + ": head must be a single character");
    }
    for (char32_t c : DecodeField(fields[1], line_no)) {
      confusion.Add(head[0], c);
    }
  }
  return confusion;
}

std::string SerializeConfusionSet(const ConfusionSet& confusion) {
  std::string out;
  for (const auto& [head, candidates] : confusion.entries()) {
    if (candidates.empty()) continue;
    utf8::Append(head, &out);
    out += '\t';
    for (char32_t c : candidates) utf8::Append(c, &out);
    out += '\n';
  }
  return out;
}

Corpus InjectErrors(const Corpus& clean, const ConfusionSet& confusion,
                    double rate, std::uint64_t seed) {
  if (!(rate >= 0.0 && rate <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "rate must be in [0, 1], got " + std::to_string(rate));
  }
  Rng rng(seed, 0);
  Corpus out;
  out.name = clean.name;
  out.samples.reserve(clean.samples.size());
  for (const Sample& s : clean.samples) {
    std::u32string source = s.target;
    for (char32_t& c : source) {
      const auto& candidates = confusion.Lookup(c);
      if (candidates.empty()) continue;
      if (rng.UniformDouble() >= rate) continue;
      auto it = candidates.begin();
      std::advance(it, rng.Uniform(candidates.size()));
      c = *it;
    }
    out.samples.push_back(Sample::Make(s.id, std::move(source), s.target));
  }
  return out;
}

std::u32string SynthVocabulary(const SynthOptions& options) {
  std::u32string vocab(options.vocab_size, U'\0');
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    vocab[i] = options.first_code_point + static_cast<char32_t>(i);
  }
  return vocab;
}

namespace {

// Draws `count` distinct indices from [0, n) excluding `skip` (pass n to
// exclude nothing), by a partial Fisher-Yates pass.
std::vector<std::size_t> DrawDistinct(std::size_t n, std::size_t count,
                                      std::size_t skip, Rng& rng) {
  std::vector<std::size_t> pool;
  pool.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i != skip) pool.push_back(i);
  }
  if (count > pool.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "cannot draw " + std::to_string(count) + " of " +
                    std::to_string(pool.size()) + " characters");
  }
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + rng.Uniform(pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  return pool;
}

}  // namespace

ConfusionSet SynthConfusionSet(const SynthOptions& options,
                               std::uint64_t seed) {
  const std::u32string vocab = SynthVocabulary(options);
  const std::size_t n = vocab.size();
  const std::size_t m = options.confusables_per_char;
  if (m >= n || (m % 2 == 1 && n % 2 == 1)) {
    throw Error(ErrorCode::kInvalidArgument,
                "cannot give each of " + std::to_string(n) +
                    " characters exactly " + std::to_string(m) +
                    " mutual confusables");
  }
  // Characters on a randomly ordered ring, each confusable with its m/2
  // nearest neighbours on either side (plus the opposite one for odd m).
  std::vector<std::size_t> ring(n);
  for (std::size_t i = 0; i < n; ++i) ring[i] = i;
  Rng rng(seed, 1);
  rng.Shuffle(std::span(ring));
  std::vector<std::size_t> offsets;
  for (std::size_t d = 1; d <= m / 2; ++d) {
    offsets.push_back(d);
    offsets.push_back(n - d);
  }
  if (m % 2 == 1) offsets.push_back(n / 2);
  ConfusionSet confusion;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t d : offsets) {
      confusion.Add(vocab[ring[i]], vocab[ring[(i + d) % n]]);
    }
  }
  return confusion;
}

Corpus SynthCleanCorpus(const SynthOptions& options, std::uint64_t chain_seed,
                        std::size_t num_sentences, std::uint64_t sentence_seed,
                        std::string_view id_prefix) {
  if (options.vocab_size == 0 || options.min_length == 0 ||
      options.min_length > options.max_length) {
    throw Error(ErrorCode::kInvalidArgument, "bad synthesis options");
  }
  const std::u32string vocab = SynthVocabulary(options);
  Rng chain_rng(chain_seed, 2);
  std::vector<std::vector<std::size_t>> successors(vocab.size());
  for (auto& next : successors) {
    next = DrawDistinct(vocab.size(), options.successors_per_char, vocab.size(),
                        chain_rng);
  }

  Rng rng(sentence_seed, 3);
  Corpus corpus;
  corpus.samples.reserve(num_sentences);
  const std::size_t span = options.max_length - options.min_length + 1;
  for (std::size_t n = 0; n < num_sentences; ++n) {
    const std::size_t length = options.min_length + rng.Uniform(span);
    std::u32string text;
    text.reserve(length);
    std::size_t state = rng.Uniform(vocab.size());
    text.push_back(vocab[state]);
    while (text.size() < length) {
      const auto& next = successors[state];
      state = next[rng.Uniform(next.size())];
      text.push_back(vocab[state]);
    }
    corpus.samples.push_back(
        Sample::Make(std::string(id_prefix) + std::to_string(n), text, text));
  }
  return corpus;
}

}  // namespace cscl
