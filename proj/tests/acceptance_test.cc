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

// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cscl/cli.h"
#include "cscl/corpus.h"
#include "cscl/curriculum.h"
#include "cscl/difficulty.h"
#include "cscl/embed.h"
#include "cscl/experiment.h"
#include "cscl/io.h"
#include "cscl/metrics.h"
#include "cscl/rng.h"
#include "cscl/text.h"
#include "fixtures.h"

namespace cscl {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

int failures = 0;

void Report(bool ok, const std::string& name, const std::string& detail) {
  std::printf("%s  %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  failures += !ok;
}

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string Fmt(const char* format, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, value);
  return buf;
}

int Cli(std::vector<std::string> args) {
  args.insert(args.begin(), "cscl");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (code != kExitOk) std::fprintf(stderr, "%s", err.str().c_str());
  return code;
}

std::uint64_t Fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Random vectors per (sample, side), independent of the sentence text.
class RandomProvider final : public EmbeddingProvider {
 public:
  explicit RandomProvider(std::size_t dim) : dim_(dim) {}
  std::size_t dim() const override { return dim_; }
  bool deterministic() const override { return true; }
  ContextualEmbedding Embed(std::string_view id, Side side,
                            std::u32string_view seq) const override {
    Rng rng(std::hash<std::string_view>{}(id), side == Side::kSource ? 1 : 2);
    ContextualEmbedding e(std::string(id), side, seq.size(), dim_);
    for (std::size_t j = 0; j < seq.size(); ++j) {
      for (std::size_t d = 0; d < dim_; ++d) {
        e.mutable_at(j)[d] = rng.UniformDouble() * 2.0 - 1.0;
      }
    }
    return e;
  }

 private:
  std::size_t dim_;
};

void CheckContextualOracle() {
  const auto start = Clock::now();
  double worst = 0.0;
  std::size_t errors_total = 0;
  for (std::uint64_t trial = 0; trial < 200; ++trial) {
    Rng rng(trial, 100);
    const std::size_t dim = 2 + rng.Uniform(63);
    const std::size_t len = 5 + rng.Uniform(20);
    const std::size_t n_errors = rng.Uniform(6);
    std::u32string src(len, U'a');
    std::u32string tgt = src;
    std::vector<std::size_t> order(len);
    for (std::size_t i = 0; i < len; ++i) order[i] = i;
    rng.Shuffle(std::span(order));
    for (std::size_t e = 0; e < n_errors; ++e) tgt[order[e]] = U'b';
    const Sample s = Sample::Make("s" + std::to_string(trial), src, tgt);
    errors_total += s.error_positions.size();

    const RandomProvider provider(dim);
    const auto es = provider.Embed(s.id, Side::kSource, s.source);
    const auto et = provider.Embed(s.id, Side::kTarget, s.target);
    const double score = ScoreContextual(s, es, et).score;

    long double oracle = 0.0L;
    for (std::size_t j = 0; j < len; ++j) {
      if (src[j] == tgt[j]) continue;
      long double dot = 0.0L, na = 0.0L, nb = 0.0L;
      for (std::size_t d = 0; d < dim; ++d) {
        const long double a = es.at(j)[d], b = et.at(j)[d];
        dot += a * b;
        na += a * a;
        nb += b * b;
      }
      oracle += dot / (std::sqrt(na) * std::sqrt(nb));
    }
    worst = std::max(worst, std::fabs(score - static_cast<double>(oracle)));
  }
  const double secs = Seconds(start);
  Report(worst <= 1e-9 && secs < 1.0, "contextual score matches oracle",
         "200 samples, " + std::to_string(errors_total) +
             " error positions, max |diff| " + Fmt("%.3g", worst) + ", " +
             Fmt("%.3f", secs) + " s (limits 1e-9, 1 s)");
}

void CheckAnnealing() {
  const auto start = Clock::now();
  std::size_t partition_bad = 0, monotone_bad = 0, strat_bad = 0;
  std::size_t literal_cases = 0, exact_only_cases = 0;
  for (std::uint64_t trial = 0; trial < 500; ++trial) {
    Rng rng(trial, 200);
    const std::size_t n = 1 + rng.Uniform(200);
    const std::size_t k = 1 + rng.Uniform(std::min<std::size_t>(10, n));
    std::vector<double> scores(n);
    for (std::size_t i = 0; i < n; ++i) scores[i] = static_cast<double>(i);
    rng.Shuffle(std::span(scores));
    std::vector<DifficultyRecord> records(n);
    std::map<std::string, double> score_of;
    for (std::size_t i = 0; i < n; ++i) {
      records[i].sample_id = "id" + std::to_string(i);
      records[i].score = scores[i] / 7.0;
      score_of[records[i].sample_id] = records[i].score;
    }
    const AnnealingLayout layout = LayoutAnnealing(records, k);
    const CurriculumManifest m = ArrangeAnnealing(records, k, trial);

    // Stages 1..k partition the sample set; stage k+1 is the whole set.
    std::multiset<std::string> seen;
    for (std::size_t i = 0; i < k; ++i) {
      seen.insert(m.stages[i].begin(), m.stages[i].end());
    }
    std::set<std::string> all;
    for (const auto& [id, s] : score_of) all.insert(id);
    const std::set<std::string> last(m.stages[k].begin(), m.stages[k].end());
    partition_bad += m.stages.size() != k + 1 || seen.size() != n ||
                     std::set<std::string>(seen.begin(), seen.end()) != all ||
                     last != all || m.stages[k].size() != n;

    // Within each subset, part i is no easier than part i-1.
    for (const auto& parts : layout.parts) {
      for (std::size_t i = 1; i < parts.size(); ++i) {
        if (parts[i].empty() || parts[i - 1].empty()) continue;
        double lo = 1e300, hi = -1e300;
        for (const auto& id : parts[i]) lo = std::min(lo, score_of[id]);
        for (const auto& id : parts[i - 1]) hi = std::max(hi, score_of[id]);
        monotone_bad += lo < hi;
      }
    }

    // Stratification. Stage i draws part i of S_j, which is empty once
    // |S_j| <= i, so "stage i meets every S_j" holds exactly when all
    // subsets have at least k members (n >= k*k). Otherwise check the
    // strongest attainable form: stage i meets S_j iff |S_j| > i.
    bool feasible = true;
    for (const auto& sub : layout.subsets) feasible &= sub.size() >= k;
    feasible ? ++literal_cases : ++exact_only_cases;
    for (std::size_t i = 0; i < k; ++i) {
      const std::set<std::string> stage(m.stages[i].begin(), m.stages[i].end());
      for (const auto& sub : layout.subsets) {
        bool meets = false;
        for (const auto& id : sub) meets |= stage.contains(id);
        strat_bad += feasible ? !meets : meets != (sub.size() > i);
      }
    }
  }

  std::vector<DifficultyRecord> nine;
  for (char c = 'a'; c < 'a' + 9; ++c) {
    nine.push_back({std::string(1, c), static_cast<double>(c - 'a'),
                    ScoringPolicy::kContextual, 0});
  }
  const AnnealingLayout l9 = LayoutAnnealing(nine, 3);
  const bool nine_ok = l9.stages[0] == Stage{"a", "d", "g"} &&
                       l9.stages[1] == Stage{"b", "e", "h"} &&
                       l9.stages[2] == Stage{"c", "f", "i"};

  const double secs = Seconds(start);
  Report(partition_bad == 0 && monotone_bad == 0 && strat_bad == 0 && nine_ok &&
             secs < 5.0,
         "annealing arrangement invariants",
         "500 cases; partition violations " + std::to_string(partition_bad) +
             ", monotonicity violations " + std::to_string(monotone_bad) +
             ", stratification violations " + std::to_string(strat_bad) +
             " (every subset met in " + std::to_string(literal_cases) +
             " cases with n >= k*k; " + std::to_string(exact_only_cases) +
             " cases with a subset smaller than k checked as |S_j| > i); "
             "n=9,k=3 stages " +
             (nine_ok ? "{a,d,g},{b,e,h},{c,f,i}" : "WRONG") + "; " +
             Fmt("%.3f", secs) + " s (limit 5 s)");
}

struct SynthPaths {
  std::string train, test, confusion;
};

SynthPaths Synthesize(const std::string& dir) {
  if (Cli({"synth", "--vocab", "50", "--confusables", "4", "--train-size",
           "2000", "--test-size", "500", "--rate", "0.1", "--seed", "2026",
           "--out-dir", dir}) != kExitOk) {
    return {};
  }
  return {dir + "/train.tsv", dir + "/test.tsv", dir + "/confusion.tsv"};
}

void CheckDeterminism(const fs::path& root, const SynthPaths& data) {
  std::vector<std::string> names = {"difficulty.tsv", "manifest.jsonl",
                                    "model.tsv", "report.tsv",
                                    "predictions.tsv"};
  std::vector<std::uint64_t> hashes[2];
  for (int run = 0; run < 2; ++run) {
    const std::string out = (root / ("det" + std::to_string(run))).string();
    int code = Cli({"score", "--train", data.train, "--out-dir", out});
    code |= Cli({"arrange", "--train", data.train, "--difficulty",
                 out + "/difficulty.tsv", "--k", "4", "--seed", "11",
                 "--out-dir", out});
    code |= Cli({"train", "--train", data.train, "--confusion", data.confusion,
                 "--manifest", out + "/manifest.jsonl", "--out-dir", out});
    code |= Cli({"evaluate", "--model", out + "/model.tsv", "--test", data.test,
                 "--confusion", data.confusion, "--out-dir", out});
    if (code != kExitOk) {
      Report(false, "pipeline determinism", "a pipeline step failed");
      return;
    }
    for (const auto& name : names) {
      hashes[run].push_back(Fnv1a(ReadFile(out + "/" + name)));
    }
  }
  std::string detail;
  for (std::size_t i = 0; i < names.size(); ++i) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%s%s %016llx", i ? ", " : "",
                  names[i].c_str(),
                  static_cast<unsigned long long>(hashes[0][i]));
    detail += buf;
  }
  Report(hashes[0] == hashes[1], "pipeline determinism",
         "score/arrange/train/evaluate twice; " + detail);
}

Prediction Pred(const Sample& s, const std::u32string& predicted) {
  return {s.id, predicted, DeriveErrorPositions(s.source, predicted)};
}

void CheckMetrics() {
  const Corpus two = ParseCorpus("1\tabc\tabd\n2\txyz\txwz\n");
  const std::vector<Prediction> preds = {Pred(two.samples[0], U"abd"),
                                         Pred(two.samples[1], U"xyz")};
  const EvalReport r = Evaluate(preds, two, EvalLevel::kDetection);
  const std::string fixture = Fmt("P=%.4f", r.precision) +
                              Fmt(" R=%.4f", r.recall) + Fmt(" F1=%.4f", r.f1) +
                              Fmt(" Acc=%.4f", r.accuracy);
  const bool fixture_ok = fixture == "P=1.0000 R=0.5000 F1=0.6667 Acc=0.5000";

  const Corpus mixed =
      ParseCorpus("1\tabc\tabd\n2\txyz\txyz\n3\tpqr\tqqr\n4\tmn\tmn\n");
  std::vector<Prediction> perfect;
  for (const Sample& s : mixed.samples) perfect.push_back(Pred(s, s.target));
  bool perfect_ok = true;
  for (EvalLevel level : {EvalLevel::kDetection, EvalLevel::kCorrection}) {
    const EvalReport p = Evaluate(perfect, mixed, level);
    perfect_ok &= p.accuracy == 1.0 && p.precision == 1.0 && p.recall == 1.0 &&
                  p.f1 == 1.0;
  }

  std::size_t subset_bad = 0, sentences = 0;
  const std::u32string alphabet = U"abcd";
  for (std::uint64_t trial = 0; trial < 1000; ++trial) {
    Rng rng(trial, 300);
    Corpus gold;
    std::vector<Prediction> set;
    const std::size_t n = 1 + rng.Uniform(30);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t len = 1 + rng.Uniform(8);
      std::u32string src, tgt, out;
      for (std::size_t j = 0; j < len; ++j) {
        src += alphabet[rng.Uniform(4)];
        tgt += rng.Uniform(5) == 0 ? alphabet[rng.Uniform(4)] : src.back();
        out += rng.Uniform(5) == 0 ? alphabet[rng.Uniform(4)] : src.back();
      }
      if (rng.Uniform(3) == 0) out = tgt;
      gold.samples.push_back(Sample::Make(std::to_string(i), src, tgt));
      set.push_back(Pred(gold.samples.back(), out));
    }
    sentences += n;
    for (std::size_t i = 0; i < n; ++i) {
      const Corpus one{"", {gold.samples[i]}};
      const auto p = std::span(&set[i], 1);
      const bool cor = Evaluate(p, one, EvalLevel::kCorrection).tp == 1;
      const bool det = Evaluate(p, one, EvalLevel::kDetection).tp == 1;
      subset_bad += cor && !det;
    }
    subset_bad += Evaluate(set, gold, EvalLevel::kCorrection).tp >
                  Evaluate(set, gold, EvalLevel::kDetection).tp;
  }
  Report(fixture_ok && perfect_ok && subset_bad == 0, "metrics fixtures",
         "two-sentence detection " + fixture + "; perfect predictions " +
             (perfect_ok ? "all 1.0000" : "WRONG") +
             "; correction TP within detection TP over 1000 sets (" +
             std::to_string(sentences) + " sentences), violations " +
             std::to_string(subset_bad));
}

void CheckShuffleFairness() {
  const std::vector<std::string> ids = {"x", "y", "z"};
  std::map<Stage, std::size_t> counts;
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    ++counts[ArrangeShuffledBaseline(ids, seed).stages[0]];
  }
  double worst = 0.0;
  for (const auto& [perm, count] : counts) {
    worst = std::max(worst, std::fabs(count / 10000.0 - 1.0 / 6.0));
  }
  Report(counts.size() == 6 && worst <= 0.02, "shuffle fairness",
         std::to_string(counts.size()) +
             " permutations over 10000 seeds, max |freq - 1/6| " +
             Fmt("%.4f", worst) + " (limit 0.02)");
}

// Columns after the label; the final ablation column is a signed delta.
std::vector<std::vector<double>> ParseTable(const std::string& text,
                                            std::vector<std::string>* labels) {
  std::vector<std::vector<double>> rows;
  const auto lines = SplitLines(text);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto cells = Split(lines[i], '\t');
    labels->push_back(std::string(cells[0]));
    std::vector<double> row;
    for (std::size_t c = 1; c < cells.size(); ++c) {
      row.push_back(std::stod(std::string(cells[c])));
    }
    rows.push_back(row);
  }
  return rows;
}

// How often five errored synthetic sentences are fitted exactly, with the
// default arrangement and after many passes. Reported, not gated.
void ReportSyntheticOverfit(const Corpus& train,
                            const ConfusionSet& confusion) {
  std::vector<Sample> errored;
  for (const Sample& s : train.samples) {
    if (!s.error_positions.empty()) errored.push_back(s);
  }
  const HashedEmbedder provider;
  const std::size_t sets = std::min<std::size_t>(100, errored.size() / 5);
  std::size_t fit_default = 0, fit_many = 0;
  for (std::size_t t = 0; t < sets; ++t) {
    Corpus five{"five", {}};
    for (std::size_t i = 0; i < 5; ++i) {
      five.samples.push_back(errored[t * 5 + i]);
    }
    const auto records =
        ScoreCorpus(five, {ScoringPolicy::kContextual, &provider, nullptr});
    const auto annealing = ArrangeAnnealing(records, 4, 1);
    fit_default +=
        TrainAndEvaluate(annealing, five, five, confusion).correction.f1 == 1.0;
    std::vector<std::string> ids;
    for (const Sample& s : five.samples) ids.push_back(s.id);
    CurriculumManifest passes = ArrangeShuffledBaseline(ids, 1);
    passes.stages.resize(20, passes.stages.front());
    fit_many +=
        TrainAndEvaluate(passes, five, five, confusion).correction.f1 == 1.0;
  }
  std::printf(
      "INFO  synthetic five-sentence sets fitted exactly: %zu/%zu with "
      "annealing k=4, %zu/%zu after 20 passes (reported, not gated)\n",
      fit_default, sets, fit_many, sets);
}

void CheckEndToEnd(const fs::path& root, const SynthPaths& data) {
  const ConfusionSet confusion = ParseConfusionSet(ReadFile(data.confusion));
  const Corpus train = ParseCorpus(ReadFile(data.train));
  const Corpus test = ParseCorpus(ReadFile(data.test));
  std::size_t train_errors = 0;
  std::size_t train_chars = 0;
  for (const Sample& s : train.samples) {
    train_errors += s.error_positions.size();
    train_chars += s.source.size();
  }

  const std::string out = (root / "ablate").string();
  const auto start = Clock::now();
  const int code = Cli({"ablate", "--train", data.train, "--test", data.test,
                        "--confusion", data.confusion, "--seeds",
                        "1,2,3,4,5,6,7,8,9,10", "--out-dir", out});
  const double secs = Seconds(start);

  std::vector<std::string> labels;
  std::vector<std::vector<double>> rows;
  if (code == kExitOk) {
    rows = ParseTable(ReadFile(out + "/ablation.tsv"), &labels);
  }
  bool in_range = !rows.empty();
  for (const auto& row : rows) {
    // runs, det mean, det sd, cor mean, cor sd, delta
    in_range &= row.size() == 6 && row[0] == 10.0;
    for (std::size_t c = 1; c + 1 < row.size(); ++c) {
      in_range &= row[c] >= 0.0 && row[c] <= 1.0;
    }
  }
  const bool shape = rows.size() == 5 && !labels.empty() &&
                     labels.front() == "shuffled_baseline";

  // Overfit sanity: train on five sentences and test on the same five, with
  // the default arrangement run through every stage.
  const std::string tiny = (root / "tiny.tsv").string();
  const std::string tiny_confusion = (root / "tiny_confusion.tsv").string();
  WriteFile(tiny, testing::kTinyCorpus);
  WriteFile(tiny_confusion, testing::kTinyConfusion);
  const std::string tiny_out = (root / "tiny").string();
  double overfit_f1 = -1.0;
  if (Cli({"train", "--train", tiny, "--test", tiny, "--confusion",
           tiny_confusion, "--out-dir", tiny_out}) == kExitOk) {
    std::vector<std::string> levels;
    const auto report = ParseTable(ReadFile(tiny_out + "/report.tsv"), &levels);
    for (std::size_t i = 0; i < levels.size(); ++i) {
      if (levels[i] == "correction") overfit_f1 = report[i][3];
    }
  }

  std::string detail =
      std::to_string(train.samples.size()) + "/" +
      std::to_string(test.samples.size()) + " sentences, " +
      std::to_string(confusion.num_pairs()) + " confusion pairs, " +
      Fmt("%.3f", static_cast<double>(train_errors) / train_chars) +
      " train error rate; ablate x10 seeds " + Fmt("%.1f", secs) +
      " s (limit 60 s); " + std::to_string(rows.size()) +
      " modes, metrics in [0,1] " + (in_range ? "yes" : "NO") +
      "; overfit correction F1 " + Fmt("%.4f", overfit_f1) +
      " on the five-sentence fixture";
  Report(code == kExitOk && shape && in_range && secs < 60.0 &&
             overfit_f1 == 1.0 && confusion.num_pairs() == 200 &&
             train.samples.size() == 2000 && test.samples.size() == 500,
         "end-to-end desk experiment", detail);

  if (shape) {
    std::printf("INFO  correction F1 mean+-sd over 10 seeds:\n");
    for (std::size_t i = 0; i < rows.size(); ++i) {
      std::printf("INFO    %-26s %.4f +- %.4f  (delta %+.4f)\n",
                  labels[i].c_str(), rows[i][3], rows[i][4], rows[i][5]);
    }
    std::printf(
        "INFO  contextual_annealing vs shuffled_baseline: %+.4f "
        "(reported, not gated)\n",
        rows[4][3] - rows[0][3]);
  }
  ReportSyntheticOverfit(train, confusion);
}

void CheckSweep(const fs::path& root, const SynthPaths& data) {
  std::string tables[2];
  double secs = 0.0;
  bool ok = true;
  for (int run = 0; run < 2; ++run) {
    const std::string out = (root / ("sweep" + std::to_string(run))).string();
    const auto start = Clock::now();
    ok &= Cli({"sweep-k", "--train", data.train, "--test", data.test,
               "--confusion", data.confusion, "--k-values", "1,2,4,8",
               "--seeds", "1,2,3", "--out-dir", out}) == kExitOk;
    secs += Seconds(start);
    if (ok) tables[run] = ReadFile(out + "/sweep_k.tsv");
  }
  std::vector<std::string> ks;
  const auto rows =
      ok ? ParseTable(tables[0], &ks) : decltype(ParseTable("", &ks)){};
  const bool shape =
      ks == std::vector<std::string>{"1", "2", "4", "8"} && rows.size() == 4;
  std::string detail = "k in {1,2,4,8} x 3 seeds, run twice in " +
                       Fmt("%.1f", secs) + " s; rows " +
                       std::to_string(rows.size()) + ", identical " +
                       (tables[0] == tables[1] ? "yes" : "NO");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    detail += "; k=" + ks[i] + " F1 " + Fmt("%.4f", rows[i][1]);
  }
  Report(ok && shape && tables[0] == tables[1], "k sweep", detail);
}

int Main() {
  const fs::path root = fs::temp_directory_path() /
                        ("cscl_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  fs::create_directories(root);

  CheckContextualOracle();
  CheckAnnealing();
  CheckMetrics();
  CheckShuffleFairness();
  const SynthPaths data = Synthesize((root / "data").string());
  if (data.train.empty()) {
    Report(false, "synthetic data", "synth command failed");
  } else {
    CheckDeterminism(root, data);
    CheckEndToEnd(root, data);
    CheckSweep(root, data);
  }
  fs::remove_all(root);
  std::printf("%s: %d criteria failed\n", failures ? "FAILED" : "ALL PASSED",
              failures);
  return failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace cscl

int main() { return cscl::Main(); }
