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

#include <algorithm>
#include <map>

#include "doctest.h"
#include "eventnet/error.hpp"
#include "eventnet/matching.hpp"
#include "eventnet/serialize.hpp"
#include "eventnet/similarity.hpp"
#include "eventnet/synthetic.hpp"
#include "helpers.hpp"

using namespace eventnet;
using eventnet::testing::tree_from;

namespace {

std::vector<std::string> ids(const std::vector<ScoredId>& items) {
  std::vector<std::string> out;
  for (const auto& i : items) out.push_back(i.id);
  return out;
}

class ScaledBackend final : public SimilarityBackend {
 public:
  ScaledBackend(const SimilarityBackend& inner, double factor)
      : inner_(inner), factor_(factor) {}
  std::string name() const override { return "scaled"; }
  double similarity(std::string_view a, std::string_view b) const override {
    return factor_ * inner_.similarity(a, b);
  }

 private:
  const SimilarityBackend& inner_;
  double factor_;
};

// Brute force: score every candidate, order by an explicit comparator, try
// every pool prefix and keep the first that satisfies the expansion rule.
MatchResult oracle_match(const OntologyTree& tree, const MatchQuery& q,
                         const SimilarityBackend& backend) {
  std::vector<std::string> pool;
  for (const auto& n : tree.nodes()) {
    if (n.kind != NodeKind::kEvent) continue;
    if (q.restrict_categories) {
      bool inside = false;
      for (const auto& a : tree.ancestors(n.id)) {
        if (q.restrict_categories->count(a)) inside = true;
      }
      if (!inside) continue;
    }
    pool.push_back(n.id);
  }
  auto ranked_before = [](const ScoredId& a, const ScoredId& b) {
    return a.score != b.score ? a.score > b.score : a.id < b.id;
  };
  std::vector<ScoredId> events;
  for (const auto& e : pool) {
    events.push_back({e, backend.similarity(q.text, tree.node(e).name)});
  }
  std::sort(events.begin(), events.end(), ranked_before);
  std::size_t take = events.size();
  for (std::size_t k = std::min(q.event_count, events.size());
       k <= events.size(); ++k) {
    std::size_t concepts = 0;
    for (std::size_t i = 0; i < k; ++i) {
      concepts += tree.concepts_of_event(events[i].id).size();
    }
    if (concepts >= q.concept_count || k == events.size()) {
      take = k;
      break;
    }
  }
  MatchResult out;
  out.matched_events.assign(events.begin(), events.begin() + take);
  std::vector<ScoredId> concepts;
  for (const auto& e : out.matched_events) {
    for (const auto& c : tree.concepts_of_event(e.id)) {
      concepts.push_back({c, backend.similarity(q.text, tree.node(c).name)});
    }
  }
  std::sort(concepts.begin(), concepts.end(), ranked_before);
  out.shortage = concepts.size() < q.concept_count;
  if (concepts.size() > q.concept_count) concepts.resize(q.concept_count);
  out.matched_concepts = concepts;
  out.restricted = q.restrict_categories.has_value();
  return out;
}

}  // namespace

TEST_CASE("exact event name ranks first with score 1") {
  const OntologyTree tree = eventnet::testing::sample_tree();
  const OverlapBackend backend = OverlapBackend::from_ontology(tree);
  for (const auto& id : tree.ids_of_kind(NodeKind::kEvent)) {
    MatchQuery q;
    q.text = tree.node(id).name;
    const auto events = match_events(tree, q, backend);
    REQUIRE(events.size() == 2);
    CHECK(events[0].score == 1.0);
    // Another event may also score 1 only if it tokenizes identically.
    if (events[0].id != id) {
      CHECK(tokenize(tree.node(events[0].id).name) == tokenize(q.text));
    }
  }
}

TEST_CASE("wedding shower with and without structure") {
  const OntologyTree tree = eventnet::testing::sample_tree();
  const OverlapBackend backend = OverlapBackend::from_ontology(tree);
  MatchQuery q;
  q.text = "wedding shower";
  const auto plain = ids(match_events(tree, q, backend));
  CHECK(std::find(plain.begin(), plain.end(), "ev.take_a_shower") !=
        plain.end());
  q.restrict_categories = IdSet{"cat.family_life"};
  const auto restricted = ids(match_events(tree, q, backend));
  CHECK(restricted ==
        std::vector<std::string>{"ev.wedding_ceremony", "ev.make_a_wedding_veil"});
}

TEST_CASE("landing a fish without structure") {
  const OntologyTree tree = eventnet::testing::sample_tree();
  const OverlapBackend backend = OverlapBackend::from_ontology(tree);
  MatchQuery q;
  q.text = "landing a fish";
  CHECK(ids(match_events(tree, q, backend)) ==
        std::vector<std::string>{"ev.landing_a_plane", "ev.cook_fish"});
}

TEST_CASE("concept selection") {
  const OntologyTree tree = tree_from(
      R"({"id":"r","name":"root","kind":"category","parent":null}
{"id":"e1","name":"groom a dog","kind":"event","parent":"r"}
{"id":"e1.a","name":"dog brush","kind":"concept","parent":"e1"}
{"id":"e1.b","name":"dog","kind":"concept","parent":"e1"}
{"id":"e1.c","name":"table","kind":"concept","parent":"e1"}
{"id":"e2","name":"bake a cake","kind":"event","parent":"r"}
{"id":"e2.a","name":"oven","kind":"concept","parent":"e2"}
)");
  const OverlapBackend backend = OverlapBackend::from_ontology(tree);
  SUBCASE("one event with exactly the requested concepts") {
    const MatchResult r =
        match_concepts(tree, {"groom a dog", std::nullopt, 1, 3}, backend);
    CHECK(ids(r.matched_events) == std::vector<std::string>{"e1"});
    CHECK(ids(r.matched_concepts) ==
          std::vector<std::string>{"e1.b", "e1.a", "e1.c"});
    CHECK_FALSE(r.shortage);
  }
  SUBCASE("exhausted pool reports a shortage") {
    const MatchResult r =
        match_concepts(tree, {"groom a dog", std::nullopt, 1, 15}, backend);
    CHECK(r.matched_events.size() == 2);
    CHECK(r.matched_concepts.size() == 4);
    CHECK(r.shortage);
  }
  SUBCASE("pool expands until enough concepts") {
    const MatchResult r =
        match_concepts(tree, {"groom a dog", std::nullopt, 1, 4}, backend);
    CHECK(ids(r.matched_events) == std::vector<std::string>{"e1", "e2"});
    CHECK_FALSE(r.shortage);
  }
}

TEST_CASE("shortage with nine concepts") {
  std::string doc =
      R"({"id":"r","name":"root","kind":"category","parent":null})" "\n";
  for (int e = 0; e < 3; ++e) {
    const std::string id = "e" + std::to_string(e);
    doc += R"({"id":")" + id + R"(","name":"event )" + id +
           R"(","kind":"event","parent":"r"})" "\n";
    for (int c = 0; c < 3; ++c) {
      doc += R"({"id":")" + id + "." + std::to_string(c) +
             R"(","name":"thing","kind":"concept","parent":")" + id + "\"}\n";
    }
  }
  const OntologyTree tree = tree_from(doc);
  const OverlapBackend backend = OverlapBackend::from_ontology(tree);
  const MatchResult r = match_concepts(tree, {"event e0"}, backend);
  CHECK(r.matched_concepts.size() == 9);
  CHECK(r.shortage);
}

TEST_CASE("restriction errors and flags") {
  const OntologyTree tree = eventnet::testing::sample_tree();
  const OverlapBackend backend = OverlapBackend::from_ontology(tree);
  try {
    match_concepts(tree, {"wedding", IdSet{"cat.travel"}}, backend);
    FAIL("expected an empty pool");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kEmptyPool);
    CHECK(e.detail() == "empty-pool");
  }
  CHECK_THROWS_AS(match_concepts(tree, {"wedding", IdSet{}}, backend), Error);
  CHECK_THROWS_AS(match_concepts(tree, {"wedding", IdSet{"nope"}}, backend),
                  Error);
  const MatchResult deep =
      match_concepts(tree, {"wedding", IdSet{"cat.weddings"}}, backend);
  CHECK(deep.non_top_level_restrictions ==
        std::vector<std::string>{"cat.weddings"});
  CHECK(deep.restricted);
  CHECK(ids(deep.matched_events) ==
        std::vector<std::string>{"ev.wedding_ceremony"});
}

TEST_CASE("sample ontology matches the brute-force oracle") {
  const OntologyTree tree = eventnet::testing::sample_tree();
  const OverlapBackend backend = OverlapBackend::from_ontology(tree);
  const std::vector<std::string> queries{
      "wedding shower", "landing a fish", "grooming an animal",
      "making a sandwich", "parade", "working on a sewing project",
      "winning a race without a vehicle", "fish", "dog show"};
  const std::vector<std::optional<IdSet>> restrictions{
      std::nullopt, IdSet{"cat.family_life"},
      IdSet{"cat.sports_and_fitness", "cat.hobbies_and_crafts"},
      IdSet{"eventnet"}};
  for (const auto& text : queries) {
    for (const auto& restrict : restrictions) {
      for (std::size_t events : {1, 2, 3}) {
        for (std::size_t concepts : {1, 5, 9, 15, 60}) {
          const MatchQuery q{text, restrict, events, concepts};
          const MatchResult expected = oracle_match(tree, q, backend);
          const MatchResult actual = match_concepts(tree, q, backend);
          CHECK(actual.matched_events == expected.matched_events);
          CHECK(actual.matched_concepts == expected.matched_concepts);
          CHECK(actual.shortage == expected.shortage);
        }
      }
    }
  }
}

TEST_CASE("matching properties on random trees") {
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const OntologyTree tree = synthetic::random_tree(rng);
    const OverlapBackend backend = OverlapBackend::from_ontology(tree);
    const std::string text = synthetic::random_phrase(rng);
    MatchQuery q{text, std::nullopt, 1 + rng.uniform_index(3),
                 1 + rng.uniform_index(20)};
    const MatchResult base = match_concepts(tree, q, backend);

    // Scores non-increasing, ties by id.
    for (const auto* list : {&base.matched_events, &base.matched_concepts}) {
      for (std::size_t i = 1; i < list->size(); ++i) {
        const auto& a = (*list)[i - 1];
        const auto& b = (*list)[i];
        CHECK((a.score > b.score || (a.score == b.score && a.id < b.id)));
      }
    }
    // Every concept's event is in the consumed pool.
    for (const auto& c : base.matched_concepts) {
      const auto& e = tree.event_of_concept(c.id);
      CHECK(std::any_of(base.matched_events.begin(), base.matched_events.end(),
                        [&](const ScoredId& s) { return s.id == e; }));
    }
    // Scaling the backend keeps every ordering.
    const ScaledBackend scaled(backend, 0.37);
    const MatchResult s = match_concepts(tree, q, scaled);
    CHECK(ids(s.matched_events) == ids(base.matched_events));
    CHECK(ids(s.matched_concepts) == ids(base.matched_concepts));
    // Growing concept_count keeps the relative order of earlier concepts.
    MatchQuery wider = q;
    wider.concept_count = q.concept_count + 1 + rng.uniform_index(10);
    const auto grown = ids(match_concepts(tree, wider, backend).matched_concepts);
    std::vector<std::string> common;
    for (const auto& id : ids(base.matched_concepts)) {
      if (std::find(grown.begin(), grown.end(), id) != grown.end()) {
        common.push_back(id);
      }
    }
    std::vector<std::string> grown_common;
    for (const auto& id : grown) {
      if (std::find(common.begin(), common.end(), id) != common.end()) {
        grown_common.push_back(id);
      }
    }
    CHECK(common == grown_common);
  }
}

TEST_CASE("sort_ranked") {
  std::vector<ScoredId> items{{"b", 0.5}, {"a", 0.5}, {"c", 0.9}, {"d", 0.1}};
  sort_ranked(items);
  CHECK(ids(items) == std::vector<std::string>{"c", "a", "b", "d"});
}
