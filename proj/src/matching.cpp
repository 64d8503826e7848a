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

#include "eventnet/matching.hpp"

#include <algorithm>

#include "eventnet/error.hpp"

namespace eventnet {

namespace {

void check_query(const MatchQuery& query) {
  if (query.event_count < 1) {
    throw Error(ErrorCode::kInvalidArgument, "event_count must be >= 1",
                "event_count");
  }
  if (query.concept_count < 1) {
    throw Error(ErrorCode::kInvalidArgument, "concept_count must be >= 1",
                "concept_count");
  }
}

}  // namespace

void sort_ranked(std::vector<ScoredId>& items) {
  std::sort(items.begin(), items.end(),
            [](const ScoredId& a, const ScoredId& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.id < b.id;
            });
}

std::vector<ScoredId> rank_events(const OntologyTree& tree,
                                  const MatchQuery& query,
                                  const SimilarityBackend& backend) {
  check_query(query);
  std::vector<std::string> pool;
  if (query.restrict_categories) {
    const IdSet selected = events_under(tree, *query.restrict_categories);
    pool.assign(selected.begin(), selected.end());
    if (pool.empty()) {
      throw Error(ErrorCode::kEmptyPool,
                  "category restriction selects no events",
                  "empty-pool");
    }
  } else {
    pool = tree.ids_of_kind(NodeKind::kEvent);
    if (pool.empty()) {
      throw Error(ErrorCode::kEmptyPool, "ontology has no events",
                  "empty-pool");
    }
  }
  std::vector<ScoredId> ranked;
  ranked.reserve(pool.size());
  for (auto& id : pool) {
    const double score = backend.similarity(query.text, tree.node(id).name);
    ranked.push_back({std::move(id), score});
  }
  sort_ranked(ranked);
  return ranked;
}

std::vector<ScoredId> match_events(const OntologyTree& tree,
                                   const MatchQuery& query,
                                   const SimilarityBackend& backend) {
  auto ranked = rank_events(tree, query, backend);
  if (ranked.size() > query.event_count) ranked.resize(query.event_count);
  return ranked;
}

MatchResult match_concepts(const OntologyTree& tree, const MatchQuery& query,
                           const SimilarityBackend& backend) {
  MatchResult result;
  result.restricted = query.restrict_categories.has_value();
  if (query.restrict_categories) {
    const std::string& root_id = tree.root().id;
    for (const auto& id : *query.restrict_categories) {
      const OntologyNode* n = tree.find(id);
      if (n != nullptr && n->kind == NodeKind::kCategory &&
          n->parent != root_id) {
        result.non_top_level_restrictions.push_back(id);
      }
    }
  }

  const auto ranked = rank_events(tree, query, backend);
  std::vector<std::string> pooled;
  std::size_t taken = 0;
  while (taken < ranked.size() &&
         (taken < query.event_count || pooled.size() < query.concept_count)) {
    const auto concepts = tree.concepts_of_event(ranked[taken].id);
    pooled.insert(pooled.end(), concepts.begin(), concepts.end());
    result.matched_events.push_back(ranked[taken]);
    ++taken;
  }

  std::vector<ScoredId> concepts;
  concepts.reserve(pooled.size());
  for (auto& id : pooled) {
    const double score = backend.similarity(query.text, tree.node(id).name);
    concepts.push_back({std::move(id), score});
  }
  sort_ranked(concepts);
  if (concepts.size() > query.concept_count) {
    concepts.resize(query.concept_count);
  }
  result.shortage = concepts.size() < query.concept_count;
  result.matched_concepts = std::move(concepts);
  return result;
}

}  // namespace eventnet
