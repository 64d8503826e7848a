// Copyright 2026 The EventNet Retrieval Authors.
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

// Seeded synthetic fixtures with planted structure, used by the test suites,
// the fixture generator tool and the Python smoke tests.

#ifndef EVENTNET_SYNTHETIC_HPP_
#define EVENTNET_SYNTHETIC_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "eventnet/discovery.hpp"
#include "eventnet/evaluation.hpp"
#include "eventnet/ontology.hpp"
#include "eventnet/rng.hpp"
#include "eventnet/scoring.hpp"

namespace eventnet::synthetic {

struct Benchmark {
  OntologyTree tree;
  ScoreMatrix corpus;
  std::vector<EvalQuery> queries;
};

// Ambiguous-query retrieval benchmark.
//
// 20 planted events in 10 top-level categories (two per category), each with
// 10 concepts and 75 videos whose scores on those concepts are raised by
// `signal`. Queries 0-9 share an ambiguous word with a decoy event placed in
// another category; each decoy owns 10 concepts carrying that word and 50
// videos of its own. Queries 10-19 carry no ambiguity. Every query's
// restriction is its planted event's top-level category. Scores are N(0, 1)
// noise plus the planted offsets; 2,000 videos in total.
Benchmark ambiguity_benchmark(std::uint64_t seed = kDefaultSeed,
                              double signal = 2.0);

// Concept-count benchmark: each of 10 queries matches a planted event whose
// three most query-similar concepts are the only ones raised by `signal` on
// the query's 50 relevant videos; 1,000 videos in total.
Benchmark concept_count_benchmark(std::uint64_t seed = kDefaultSeed,
                                  double signal = 1.0);

struct DiscoveryFixture {
  CrawlManifest manifest;
  std::vector<Vocabulary> vocabularies;
};

// Tag manifest with a skewed word distribution and vocabularies holding a mix
// of frequent and rare words.
DiscoveryFixture discovery_fixture(std::size_t videos = 500,
                                   std::uint64_t seed = kDefaultSeed);

struct RandomTreeOptions {
  std::size_t categories = 12;
  std::size_t events = 15;
  std::size_t max_concepts_per_event = 6;
};

// Random valid tree; names are drawn from a small word pool so phrase
// similarities overlap and tie.
OntologyTree random_tree(Rng& rng, const RandomTreeOptions& options = {});

// Short phrase over the same word pool as random_tree.
std::string random_phrase(Rng& rng, std::size_t max_words = 3);

}  // namespace eventnet::synthetic

#endif  // EVENTNET_SYNTHETIC_HPP_
