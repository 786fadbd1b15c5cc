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

#include "cscl/embed.h"

#include <algorithm>
#include <charconv>
#include <map>
#include <utility>

#include "cscl/error.h"
#include "cscl/text.h"
#include "parallel.h"

namespace cscl {

std::string_view SideName(Side side) {
  return side == Side::kSource ? "source" : "target";
}

Side ParseSide(std::string_view name) {
  if (name == "source") return Side::kSource;
  if (name == "target") return Side::kTarget;
  throw Error(ErrorCode::kMalformedLine,
              "unknown side '" + std::string(name) + "'");
}

ContextualEmbedding::ContextualEmbedding(std::string sample_id, Side side,
                                         std::size_t length, std::size_t dim)
    : sample_id_(std::move(sample_id)),
      side_(side),
      dim_(dim),
      values_(length * dim, 0.0) {}

std::uint64_t HashContextFeature(char32_t c, int offset) {
  constexpr std::uint64_t kOffsetBasis = 0xCBF29CE484222325ULL;
  constexpr std::uint64_t kPrime = 0x100000001B3ULL;
  std::uint64_t hash = kOffsetBasis;
  auto mix = [&hash](unsigned char byte) {
    hash ^= byte;
    hash *= kPrime;
  };
  for (char byte : utf8::Encode(c)) mix(static_cast<unsigned char>(byte));
  mix(static_cast<unsigned char>(static_cast<std::int8_t>(offset)));
  return hash;
}

ContextualEmbedding HashedEmbed(std::u32string_view sequence, int window,
                                std::size_t dim, std::string_view sample_id,
                                Side side) {
  if (window < 0 || window > 127) {
    throw Error(ErrorCode::kInvalidArgument,
                "window must be in [0, 127], got " + std::to_string(window));
  }
  if (dim < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "dim must be at least 2, got " + std::to_string(dim));
  }
  ContextualEmbedding out(std::string(sample_id), side, sequence.size(), dim);
  const auto length = static_cast<std::int64_t>(sequence.size());
  for (std::int64_t j = 0; j < length; ++j) {
    auto vec = out.mutable_at(static_cast<std::size_t>(j));
    for (int o = -window; o <= window; ++o) {
      const std::int64_t at = j + o;
      if (at < 0 || at >= length) continue;
      const std::uint64_t h =
          HashContextFeature(sequence[static_cast<std::size_t>(at)], o);
      vec[h % dim] += (h >> 63) == 0 ? 1.0 : -1.0;
    }
  }
  return out;
}

HashedEmbedder::HashedEmbedder(int window, std::size_t dim)
    : window_(window), dim_(dim) {
  // Validate eagerly so a bad configuration fails before any embedding.
  HashedEmbed(std::u32string_view{}, window_, dim_);
}

ContextualEmbedding HashedEmbedder::Embed(std::string_view sample_id, Side side,
                                          std::u32string_view sequence) const {
  return HashedEmbed(sequence, window_, dim_, sample_id, side);
}

namespace {

std::string LineRef(std::size_t line_no) {
  return "line " + std::to_string(line_no);
}

double ParseDouble(std::string_view text, std::size_t line_no) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw Error(ErrorCode::kMalformedLine,
                LineRef(line_no) + ": bad number '" + std::string(text) + "'");
  }
  return value;
}

std::size_t ParseSize(std::string_view text, std::size_t line_no) {
  std::size_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw Error(ErrorCode::kMalformedLine,
                LineRef(line_no) + ": bad integer '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

EmbeddingTable LoadEmbeddings(std::string_view text) {
  const auto lines = SplitLines(text);
  if (lines.empty() || !lines[0].starts_with("dim=")) {
    throw Error(ErrorCode::kMalformedLine, "line 1: expected dim=<d> header");
  }
  EmbeddingTable table;
  table.dim = ParseSize(lines[0].substr(4), 1);
  if (table.dim == 0) {
    throw Error(ErrorCode::kMalformedLine, "line 1: dim must be positive");
  }

  std::map<EmbeddingKey, std::map<std::size_t, std::vector<double>>> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (lines[i].empty()) continue;
    const auto fields = Split(lines[i], '\t');
    if (fields.size() != 4 || fields[0].empty()) {
      throw Error(ErrorCode::kMalformedLine,
                  LineRef(line_no) +
                      ": expected sample_id<TAB>side<TAB>position<TAB>values");
    }
    EmbeddingKey key{std::string(fields[0]), ParseSide(fields[1])};
    const std::size_t position = ParseSize(fields[2], line_no);
    std::vector<double> values;
    for (std::string_view v : Split(fields[3], ',')) {
      values.push_back(ParseDouble(v, line_no));
    }
    if (values.size() != table.dim) {
      throw Error(ErrorCode::kDimMismatch,
                  LineRef(line_no) + ": " + std::to_string(values.size()) +
                      " values, header declares " + std::to_string(table.dim));
    }
    if (!rows[key].emplace(position, std::move(values)).second) {
      throw Error(ErrorCode::kMalformedLine, LineRef(line_no) +
                                                 ": duplicate position " +
                                                 std::to_string(position));
    }
  }

  for (auto& [key, by_position] : rows) {
    // Positions arrive sorted; the first one out of step is the gap.
    std::size_t expected = 0;
    for (const auto& [position, values] : by_position) {
      if (position != expected) break;
      ++expected;
    }
    if (expected != by_position.size()) {
      throw Error(ErrorCode::kMissingPosition,
                  key.sample_id + "/" + std::string(SideName(key.side)) +
                      " position " + std::to_string(expected));
    }
    ContextualEmbedding emb(key.sample_id, key.side, by_position.size(),
                            table.dim);
    for (const auto& [position, values] : by_position) {
      std::copy(values.begin(), values.end(), emb.mutable_at(position).begin());
    }
    table.embeddings.emplace(key, std::move(emb));
  }
  return table;
}

std::string WriteEmbeddings(const EmbeddingTable& table) {
  std::string out = "dim=" + std::to_string(table.dim) + "\n";
  char buf[64];
  for (const auto& [key, emb] : table.embeddings) {
    for (std::size_t j = 0; j < emb.length(); ++j) {
      out += key.sample_id;
      out += '\t';
      out += SideName(key.side);
      out += '\t';
      out += std::to_string(j);
      out += '\t';
      const auto vec = emb.at(j);
      for (std::size_t d = 0; d < vec.size(); ++d) {
        if (d > 0) out += ',';
        const auto result = std::to_chars(buf, buf + sizeof(buf), vec[d]);
        out.append(buf, result.ptr);
      }
      out += '\n';
    }
  }
  return out;
}

PrecomputedEmbeddings::PrecomputedEmbeddings(EmbeddingTable table)
    : table_(std::move(table)) {}

ContextualEmbedding PrecomputedEmbeddings::Embed(
    std::string_view sample_id, Side side, std::u32string_view sequence) const {
  auto it = table_.embeddings.find({std::string(sample_id), side});
  if (it == table_.embeddings.end()) {
    throw Error(ErrorCode::kMissingEmbedding,
                std::string(sample_id) + "/" + std::string(SideName(side)));
  }
  if (it->second.length() != sequence.size()) {
    throw Error(ErrorCode::kShapeMismatch,
                std::string(sample_id) + "/" + std::string(SideName(side)) +
                    ": " + std::to_string(it->second.length()) +
                    " vectors for " + std::to_string(sequence.size()) +
                    " characters");
  }
  return it->second;
}

EmbeddingMap EmbedCorpus(const Corpus& corpus,
                         const EmbeddingProvider& provider) {
  const std::size_t n = corpus.samples.size();
  std::vector<ContextualEmbedding> source(n), target(n);
  internal::ParallelFor(n, [&](std::size_t i) {
    const Sample& s = corpus.samples[i];
    source[i] = provider.Embed(s.id, Side::kSource, s.source);
    target[i] = provider.Embed(s.id, Side::kTarget, s.target);
  });
  EmbeddingMap out;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string& id = corpus.samples[i].id;
    out.emplace(EmbeddingKey{id, Side::kSource}, std::move(source[i]));
    out.emplace(EmbeddingKey{id, Side::kTarget}, std::move(target[i]));
  }
  return out;
}

namespace serial {

EmbeddingMap EmbedCorpus(const Corpus& corpus,
                         const EmbeddingProvider& provider) {
  EmbeddingMap out;
  for (const Sample& s : corpus.samples) {
    out.emplace(EmbeddingKey{s.id, Side::kSource},
                provider.Embed(s.id, Side::kSource, s.source));
    out.emplace(EmbeddingKey{s.id, Side::kTarget},
                provider.Embed(s.id, Side::kTarget, s.target));
  }
  return out;
}

}  // namespace serial

}  // namespace cscl
