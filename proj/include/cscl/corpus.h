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

// Parallel spell-checking corpora: parsing, serialization, confusion sets and
// synthetic error injection.
//
// Corpus TSV: one sample per line, "id<TAB>source<TAB>target", UTF-8, LF.
// The source is the sentence as written (possibly misspelled) and the target
// its correction. Errors are substitutions only, so both sides have the same
// number of characters.

#ifndef CSCL_CORPUS_H_
#define CSCL_CORPUS_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace cscl {

using Positions = std::vector<std::size_t>;

// Indices where the two sequences differ, ascending. Throws
// Error(kLengthMismatch) when the lengths differ.
Positions DeriveErrorPositions(std::u32string_view source,
                               std::u32string_view target);

struct Sample {
  std::string id;
  std::u32string source;
  std::u32string target;
  Positions error_positions;

  // Builds a sample and derives its error positions.
  static Sample Make(std::string id, std::u32string source,
                     std::u32string target);

  bool operator==(const Sample&) const = default;
};

struct Corpus {
  std::string name;
  std::vector<Sample> samples;

  bool operator==(const Corpus&) const = default;
};

enum class CorpusFormat { kIdSourceTarget };

// Empty lines are skipped. Line numbers in errors are 1-based.
Corpus ParseCorpus(std::string_view text,
                   CorpusFormat format = CorpusFormat::kIdSourceTarget,
                   std::string name = "");
std::string SerializeCorpus(const Corpus& corpus);

// Maps a head character to the characters it is commonly confused with.
class ConfusionSet {
 public:
  using Candidates = std::set<char32_t>;

  // Self-entries are dropped.
  void Add(char32_t head, char32_t candidate);

  // Empty set for characters without an entry.
  const Candidates& Lookup(char32_t head) const;

  bool Contains(char32_t head, char32_t candidate) const;

  std::size_t num_heads() const { return entries_.size(); }
  // Total number of (head, candidate) pairs.
  std::size_t num_pairs() const;

  const std::map<char32_t, Candidates>& entries() const { return entries_; }

  bool operator==(const ConfusionSet&) const = default;

 private:
  std::map<char32_t, Candidates> entries_;
};

// Lines are "head<TAB>c1c2c3...". Duplicate heads are merged.
ConfusionSet ParseConfusionSet(std::string_view text);
std::string SerializeConfusionSet(const ConfusionSet& confusion);

// Replaces each character of every target independently, with probability
// `rate`, by a uniformly chosen member of its confusion set. Characters with
// no confusion entry are never touched. The RNG is seeded with (seed, 0) and
// consumes one draw per eligible character plus one per replacement, in
// corpus order.
Corpus InjectErrors(const Corpus& clean, const ConfusionSet& confusion,
                    double rate, std::uint64_t seed);

// Synthetic data for desk-scale experiments.
struct SynthOptions {
  std::size_t vocab_size = 50;
  // Confusion candidates per head; vocab_size * this is the pair count.
  std::size_t confusables_per_char = 4;
  // Successors per character in the generating Markov chain.
  std::size_t successors_per_char = 3;
  std::size_t min_length = 8;
  std::size_t max_length = 16;
  char32_t first_code_point = 0x4E00;
};

// Vocabulary of consecutive code points starting at first_code_point.
std::u32string SynthVocabulary(const SynthOptions& options);

// A symmetric relation: every vocabulary character gets exactly
// confusables_per_char others, and b is a candidate of a whenever a is one of
// b's, so every injected error is correctable from the observed character.
// Throws Error(kInvalidArgument) when no such relation exists
// (confusables_per_char >= vocab_size, or both odd).
ConfusionSet SynthConfusionSet(const SynthOptions& options, std::uint64_t seed);

// Clean sentences (source == target) drawn from a sparse first-order Markov
// chain over the vocabulary, so characters are predictable from context.
// The chain is fixed by chain_seed; sentence_seed picks the sentences, so a
// train and a test split share one language when they share chain_seed.
// Sample ids are "<prefix><index>".
Corpus SynthCleanCorpus(const SynthOptions& options, std::uint64_t chain_seed,
                        std::size_t num_sentences, std::uint64_t sentence_seed,
                        std::string_view id_prefix);

}  // namespace cscl

#endif  // CSCL_CORPUS_H_
