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

#include "eventnet/synthetic.hpp"

#include <cstdio>
#include <map>

namespace eventnet::synthetic {

namespace {

std::string two_digits(std::size_t n) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%02zu", n);
  return buffer;
}

std::string three_digits(std::size_t n) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%03zu", n);
  return buffer;
}

OntologyNode category(std::string id, std::string name,
                      std::optional<std::string> parent) {
  return {std::move(id), std::move(name), NodeKind::kCategory,
          std::move(parent)};
}

OntologyNode event(std::string id, std::string name, std::string parent) {
  return {std::move(id), std::move(name), NodeKind::kEvent, std::move(parent)};
}

OntologyNode concept_node(std::string id, std::string name,
                          std::string parent) {
  return {std::move(id), std::move(name), NodeKind::kConcept,
          std::move(parent)};
}

// Adds one row per planted video: N(0, 1) everywhere plus `signal` on the
// columns of `boosted`.
void add_videos(ScoreMatrix& corpus, Rng& rng, const std::string& prefix,
                std::size_t count, const std::vector<std::string>& boosted,
                double signal, std::vector<std::string>* ids) {
  std::vector<std::size_t> columns;
  for (const auto& c : boosted) columns.push_back(*corpus.concept_index(c));
  for (std::size_t m = 0; m < count; ++m) {
    std::vector<double> scores(corpus.concepts().size());
    for (double& s : scores) s = rng.normal();
    for (std::size_t c : columns) scores[c] += signal;
    std::string id = prefix + three_digits(m);
    if (ids) ids->push_back(id);
    corpus.add_row(std::move(id), std::move(scores));
  }
}

const char* const kWordPool[] = {
    "dog",  "wedding", "shower", "fish",  "cook",   "make",
    "take", "cake",    "run",    "boat",  "plane",  "land",
    "clean", "repair", "bike",   "parade", "garden", "paint",
};

}  // namespace

Benchmark ambiguity_benchmark(std::uint64_t seed, double signal) {
  constexpr std::size_t kPlanted = 20;
  constexpr std::size_t kDecoys = 10;
  constexpr std::size_t kConceptsPerEvent = 10;

  std::vector<OntologyNode> nodes;
  nodes.push_back(category("root", "all events", std::nullopt));
  for (std::size_t k = 0; k < 10; ++k) {
    nodes.push_back(category("top" + two_digits(k), "domain" + two_digits(k),
                             "root"));
  }
  for (std::size_t i = 0; i < kPlanted; ++i) {
    const std::string ii = two_digits(i);
    const std::string kk = two_digits(i / 2);
    std::string name = "key" + ii + " gather" + ii;
    if (i >= kDecoys) name += " pair" + kk;
    nodes.push_back(event("ev.t" + ii, name, "top" + kk));
    for (std::size_t j = 0; j < kConceptsPerEvent; ++j) {
      const std::string jj = std::to_string(j);
      nodes.push_back(concept_node(
          "c.t" + ii + "." + jj,
          "key" + ii + " thing" + ii + "n" + jj + " piece" + ii + "n" + jj,
          "ev.t" + ii));
    }
  }
  for (std::size_t i = 0; i < kDecoys; ++i) {
    const std::string ii = two_digits(i);
    nodes.push_back(
        event("ev.x" + ii, "take amb" + ii, "top" + two_digits(5 + i / 2)));
    for (std::size_t j = 0; j < kConceptsPerEvent; ++j) {
      const std::string jj = std::to_string(j);
      nodes.push_back(concept_node("c.x" + ii + "." + jj,
                                   "amb" + ii + " part" + ii + "n" + jj,
                                   "ev.x" + ii));
    }
  }
  OntologyTree tree = OntologyTree::build(std::move(nodes));
  ScoreMatrix corpus(tree.ids_of_kind(NodeKind::kConcept));
  Rng rng(seed);
  std::vector<EvalQuery> queries;
  for (std::size_t i = 0; i < kPlanted; ++i) {
    const std::string ii = two_digits(i);
    const std::string kk = two_digits(i / 2);
    EvalQuery q;
    q.id = "q" + ii;
    q.text = i < kDecoys ? "key" + ii + " amb" + ii : "key" + ii + " pair" + kk;
    q.restrict_categories = IdSet{"top" + kk};
    std::vector<std::string> relevant;
    add_videos(corpus, rng, "v.t" + ii + ".", 75,
               tree.concepts_of_event("ev.t" + ii), signal, &relevant);
    q.relevant.insert(relevant.begin(), relevant.end());
    queries.push_back(std::move(q));
  }
  for (std::size_t i = 0; i < kDecoys; ++i) {
    const std::string ii = two_digits(i);
    add_videos(corpus, rng, "v.x" + ii + ".", 50,
               tree.concepts_of_event("ev.x" + ii), signal, nullptr);
  }
  return {std::move(tree), std::move(corpus), std::move(queries)};
}

Benchmark concept_count_benchmark(std::uint64_t seed, double signal) {
  constexpr std::size_t kQueries = 10;
  constexpr std::size_t kFillers = 5;
  constexpr std::size_t kConceptsPerEvent = 10;
  constexpr std::size_t kSignalConcepts = 3;

  std::vector<OntologyNode> nodes;
  nodes.push_back(category("root", "all events", std::nullopt));
  for (std::size_t k = 0; k < kFillers; ++k) {
    const std::string kk = two_digits(k);
    nodes.push_back(category("top" + kk, "domain" + kk, "root"));
    nodes.push_back(
        event("ev.f" + kk, "filler" + kk + " activity" + kk, "top" + kk));
    for (std::size_t j = 0; j < kConceptsPerEvent; ++j) {
      const std::string jj = std::to_string(j);
      nodes.push_back(concept_node("c.f" + kk + "." + jj,
                                   "misc" + kk + "n" + jj, "ev.f" + kk));
    }
  }
  for (std::size_t q = 0; q < kQueries; ++q) {
    const std::string qq = two_digits(q);
    nodes.push_back(event("ev.t" + qq, "key" + qq + " scene" + qq,
                          "top" + two_digits(q / 2)));
    for (std::size_t j = 0; j < kConceptsPerEvent; ++j) {
      const std::string jj = std::to_string(j);
      // Two-token names outrank the three-token ones for the query.
      const std::string name =
          j < kSignalConcepts
              ? "key" + qq + " sig" + qq + "n" + jj
              : "key" + qq + " other" + qq + "n" + jj + " extra" + qq + "n" +
                    jj;
      nodes.push_back(concept_node("c.t" + qq + "." + jj, name, "ev.t" + qq));
    }
  }
  OntologyTree tree = OntologyTree::build(std::move(nodes));
  ScoreMatrix corpus(tree.ids_of_kind(NodeKind::kConcept));
  Rng rng(seed);
  std::vector<EvalQuery> queries;
  for (std::size_t q = 0; q < kQueries; ++q) {
    const std::string qq = two_digits(q);
    std::vector<std::string> boosted;
    for (std::size_t j = 0; j < kSignalConcepts; ++j) {
      boosted.push_back("c.t" + qq + "." + std::to_string(j));
    }
    std::vector<std::string> relevant;
    add_videos(corpus, rng, "v.t" + qq + ".", 50, boosted, signal, &relevant);
    queries.push_back({"q" + qq, "key" + qq + " moment" + qq, std::nullopt,
                       IdSet(relevant.begin(), relevant.end())});
  }
  add_videos(corpus, rng, "v.bg.", 500, {}, 0.0, nullptr);
  return {std::move(tree), std::move(corpus), std::move(queries)};
}

DiscoveryFixture discovery_fixture(std::size_t videos, std::uint64_t seed) {
  Rng rng(seed);
  constexpr std::size_t kFrequent = 15;
  constexpr std::size_t kRare = 200;
  std::vector<std::pair<std::string, std::vector<std::string>>> raw;
  for (std::size_t v = 0; v < videos; ++v) {
    std::vector<std::string> tags;
    for (std::size_t k = 0; k < kFrequent; ++k) {
      const double p = 0.55 - 0.03 * static_cast<double>(k);
      if (rng.uniform01() < p) {
        // Mixed case and punctuation exercise tag normalization.
        tags.push_back(k % 4 == 0 ? "FW" + two_digits(k) + "!"
                                  : "fw" + two_digits(k));
      }
    }
    for (std::size_t r = 0; r < kRare; ++r) {
      if (rng.uniform01() < 0.02) tags.push_back("rw" + three_digits(r));
    }
    if (rng.uniform01() < 0.1) tags.push_back("the fw01 and rw007");
    raw.emplace_back("vid" + three_digits(v), std::move(tags));
  }
  DiscoveryFixture fixture;
  fixture.manifest = make_manifest("ev.fixture", raw);
  fixture.vocabularies.push_back(make_vocabulary(
      "object", {"fw00", "fw02", "fw04", "fw11", "rw001", "rw007", "rw013",
                 "rw020", "rw150", "garden hose"}));
  fixture.vocabularies.push_back(make_vocabulary(
      "scene", {"fw01", "fw06", "fw02", "rw050", "rw055", "rw060"}));
  fixture.vocabularies.push_back(
      make_vocabulary("action", {"fw03", "fw13", "rw100", "rw199"}));
  return fixture;
}

std::string random_phrase(Rng& rng, std::size_t max_words) {
  const std::size_t pool = std::size(kWordPool);
  const std::size_t words = 1 + rng.uniform_index(max_words);
  std::string out;
  for (std::size_t w = 0; w < words; ++w) {
    if (!out.empty()) out += rng.uniform_index(4) == 0 ? " a " : " ";
    out += kWordPool[rng.uniform_index(pool)];
  }
  return out;
}

OntologyTree random_tree(Rng& rng, const RandomTreeOptions& options) {
  std::vector<OntologyNode> nodes;
  nodes.push_back(category("k00", "root", std::nullopt));
  const std::size_t categories = std::max<std::size_t>(options.categories, 1);
  for (std::size_t c = 1; c < categories; ++c) {
    const std::size_t parent = rng.uniform_index(c);
    nodes.push_back(category("k" + two_digits(c), random_phrase(rng, 2),
                             "k" + two_digits(parent)));
  }
  for (std::size_t e = 0; e < options.events; ++e) {
    const std::string id = "e" + two_digits(e);
    nodes.push_back(event(id, random_phrase(rng, 3),
                          "k" + two_digits(rng.uniform_index(categories))));
    const std::size_t concepts =
        rng.uniform_index(options.max_concepts_per_event + 1);
    for (std::size_t j = 0; j < concepts; ++j) {
      nodes.push_back(concept_node(id + ".c" + std::to_string(j),
                                   random_phrase(rng, 2), id));
    }
  }
  return OntologyTree::build(std::move(nodes));
}

}  // namespace eventnet::synthetic
