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

#ifndef CSCL_CLI_H_
#define CSCL_CLI_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cscl/experiment.h"
#include "json.hpp"

namespace cscl {

// Everything a subcommand may read. Loaded from --config (JSON), then
// overridden by flags; each run writes the resolved copy to
// <out_dir>/<command>.config.json.
struct ExperimentConfig {
  std::string train;
  std::string test;
  std::string confusion;
  std::string input;       // inject: clean corpus
  std::string difficulty;  // arrange: precomputed scores
  std::string manifest;    // train: precomputed curriculum
  std::string model;       // evaluate: trained model
  std::string provider = "hashed";
  int window = HashedEmbedder::kDefaultWindow;
  std::size_t dim = HashedEmbedder::kDefaultDim;
  std::string embeddings;
  std::string scorer = "contextual";
  std::string policy = "annealing";
  std::size_t k = 4;
  std::vector<std::uint64_t> seeds = {1};
  std::vector<std::size_t> k_values = {1, 2, 4, 8};
  double rate = 0.1;
  std::string out_dir;
  // synth
  std::size_t vocab = 50;
  std::size_t confusables = 4;
  std::size_t train_size = 2000;
  std::size_t test_size = 500;
};

void to_json(nlohmann::json& j, const ExperimentConfig& c);
// Missing keys keep their current values; unknown keys are rejected.
void from_json(const nlohmann::json& j, ExperimentConfig& c);

inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;
inline constexpr int kExitUsage = 2;

// Runs the command line tool. Subcommands: score, arrange, train, evaluate,
// ablate, sweep-k, inject, synth.
int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err);

}  // namespace cscl

#endif  // CSCL_CLI_H_
