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

// Per-position contextual vectors for character sequences.
//
// Two providers ship with the library: a feature-hashing embedder that needs
// no model, and a table loaded from an embedding file so that vectors from an
// external encoder can be plugged in.

#ifndef CSCL_EMBED_H_
#define CSCL_EMBED_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cscl/corpus.h"

namespace cscl {

enum class Side { kSource, kTarget };

std::string_view SideName(Side side);
// Throws Error(kMalformedLine) on anything but "source" / "target".
Side ParseSide(std::string_view name);

// Row-major [length x dim] matrix of per-position vectors.
class ContextualEmbedding {
 public:
  ContextualEmbedding() = default;
  ContextualEmbedding(std::string sample_id, Side side, std::size_t length,
                      std::size_t dim);

  const std::string& sample_id() const { return sample_id_; }
  Side side() const { return side_; }
  std::size_t dim() const { return dim_; }
  std::size_t length() const { return dim_ == 0 ? 0 : values_.size() / dim_; }

  std::span<const double> at(std::size_t position) const {
    return {values_.data() + position * dim_, dim_};
  }
  std::span<double> mutable_at(std::size_t position) {
    return {values_.data() + position * dim_, dim_};
  }

  bool operator==(const ContextualEmbedding&) const = default;

 private:
  std::string sample_id_;
  Side side_ = Side::kSource;
  std::size_t dim_ = 0;
  std::vector<double> values_;
};

struct EmbeddingKey {
  std::string sample_id;
  Side side;

  auto operator<=>(const EmbeddingKey&) const = default;
};

using EmbeddingMap = std::map<EmbeddingKey, ContextualEmbedding>;

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  virtual std::size_t dim() const = 0;
  virtual bool deterministic() const = 0;

  // Must be safe to call concurrently.
  virtual ContextualEmbedding Embed(std::string_view sample_id, Side side,
                                    std::u32string_view sequence) const = 0;
};

// 64-bit FNV-1a over the UTF-8 bytes of `c` followed by `offset` as one
// two's-complement byte.
std::uint64_t HashContextFeature(char32_t c, int offset);

// Feature-hashing embedding. The vector at position j is the sum over
// offsets o in [-window, window] (clipped to the sequence) of +-1 at index
// HashContextFeature(seq[j+o], o) % dim, negative when hash bit 63 is set.
// Requires 0 <= window <= 127 and dim >= 2.
ContextualEmbedding HashedEmbed(std::u32string_view sequence, int window,
                                std::size_t dim,
                                std::string_view sample_id = {},
                                Side side = Side::kSource);

class HashedEmbedder final : public EmbeddingProvider {
 public:
  static constexpr int kDefaultWindow = 2;
  static constexpr std::size_t kDefaultDim = 64;

  explicit HashedEmbedder(int window = kDefaultWindow,
                          std::size_t dim = kDefaultDim);

  int window() const { return window_; }
  std::size_t dim() const override { return dim_; }
  bool deterministic() const override { return true; }
  ContextualEmbedding Embed(std::string_view sample_id, Side side,
                            std::u32string_view sequence) const override;

 private:
  int window_;
  std::size_t dim_;
};

// Embedding file:
//   dim=<d>
//   sample_id<TAB>side<TAB>position<TAB>v1,v2,...,vd
// Positions of each (sample_id, side) must run 0..len-1 without gaps, in any
// line order.
struct EmbeddingTable {
  std::size_t dim = 0;
  EmbeddingMap embeddings;
};

EmbeddingTable LoadEmbeddings(std::string_view text);
// Floats use the shortest round-trip decimal form.
std::string WriteEmbeddings(const EmbeddingTable& table);

// Serves vectors from a loaded table. Throws Error(kMissingEmbedding) for
// unknown keys and Error(kShapeMismatch) when the stored length differs from
// the requested sequence.
class PrecomputedEmbeddings final : public EmbeddingProvider {
 public:
  explicit PrecomputedEmbeddings(EmbeddingTable table);

  std::size_t dim() const override { return table_.dim; }
  bool deterministic() const override { return true; }
  ContextualEmbedding Embed(std::string_view sample_id, Side side,
                            std::u32string_view sequence) const override;

 private:
  EmbeddingTable table_;
};

// Embeds both sides of every sample. Runs samples in parallel with OpenMP;
// the result does not depend on the thread count.
EmbeddingMap EmbedCorpus(const Corpus& corpus,
                         const EmbeddingProvider& provider);

namespace serial {
// Single-threaded reference for EmbedCorpus.
EmbeddingMap EmbedCorpus(const Corpus& corpus,
                         const EmbeddingProvider& provider);
}  // namespace serial

}  // namespace cscl

#endif  // CSCL_EMBED_H_
