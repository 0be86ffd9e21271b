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


#include <random>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "dekit/metrics.h"

namespace dekit {
namespace {

std::vector<std::string> RandomCorpus(std::size_t lines, std::uint32_t seed) {
  static const char* const kVocab[] = {"the", "a",  "student", "question",
                                       "of",  "in", "city",    "traffic",
                                       ",",   "."};
  std::mt19937 rng(seed);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < lines; ++i) {
    std::string s;
    const int n = 5 + static_cast<int>(rng() % 20);
    for (int w = 0; w < n; ++w) {
      if (w > 0) s += ' ';
      s += kVocab[rng() % 10];
    }
    out.push_back(std::move(s));
  }
  return out;
}

void BM_CorpusBleu(benchmark::State& state) {
  const auto hyps = RandomCorpus(static_cast<std::size_t>(state.range(0)), 1);
  const auto refs = RandomCorpus(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(CorpusBleu(hyps, refs));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CorpusBleu)->Arg(100)->Arg(1000);

void BM_CorpusChrf(benchmark::State& state) {
  const auto hyps = RandomCorpus(static_cast<std::size_t>(state.range(0)), 1);
  const auto refs = RandomCorpus(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(CorpusChrf(hyps, refs));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CorpusChrf)->Arg(100)->Arg(1000);

}  // namespace
}  // namespace dekit

BENCHMARK_MAIN();
