// Copyright 2026 The dekit Authors.
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


#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "dekit/de_inserter.h"
#include "dekit/lexicon.h"
#include "dekit/segmenter.h"

namespace dekit {
namespace {

const Lexicon& Bundled() {
  static const Lexicon lexicon = Lexicon::Load(
      std::filesystem::path(DEKIT_TEST_DATA_DIR) / "lexicon.tsv");
  return lexicon;
}

std::vector<std::string> RandomSentences(std::size_t count, int words) {
  const auto& entries = Bundled().entries();
  std::mt19937 rng(1);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < count; ++i) {
    std::string s;
    for (int w = 0; w < words; ++w) s += entries[rng() % entries.size()].surface;
    out.push_back(std::move(s));
  }
  return out;
}

void BM_Segment(benchmark::State& state) {
  const auto sentences = RandomSentences(256, static_cast<int>(state.range(0)));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(Segment(sentences[i++ % sentences.size()], Bundled()));
  }
}
BENCHMARK(BM_Segment)->Arg(4)->Arg(16)->Arg(64);

void BM_AutoInsert(benchmark::State& state) {
  const auto sentences = RandomSentences(256, 8);
  const auto policy = InsertionPolicy::Default(Bundled().tagset());
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        AutoInsert(sentences[i++ % sentences.size()], Bundled(), policy));
  }
}
BENCHMARK(BM_AutoInsert);

}  // namespace
}  // namespace dekit
