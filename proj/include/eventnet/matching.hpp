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

// Cascaded query matching: rank events by similarity to the query text, then
// rank the concepts of the best events.
//
// The event pool starts with the top `event_count` events and grows one
// event at a time (in rank order) until it holds at least `concept_count`
// concepts or the ranking is exhausted. The pooled concepts are then ranked
// globally by similarity to the query.

#ifndef EVENTNET_MATCHING_HPP_
#define EVENTNET_MATCHING_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "eventnet/ontology.hpp"
#include "eventnet/similarity.hpp"

namespace eventnet {

struct ScoredId {
  std::string id;
  double score = 0.0;

  friend bool operator==(const ScoredId&, const ScoredId&) = default;
};

// Score descending, id ascending.
void sort_ranked(std::vector<ScoredId>& items);

struct MatchQuery {
  std::string text;
  // Absent: match against every event. Present: only events below these
  // categories. An empty set is a restriction that selects nothing.
  std::optional<IdSet> restrict_categories;
  std::size_t event_count = 2;
  std::size_t concept_count = 15;
};

struct MatchResult {
  // The event pool actually consumed, in rank order.
  std::vector<ScoredId> matched_events;
  std::vector<ScoredId> matched_concepts;
  bool restricted = false;
  // Fewer than concept_count concepts exist in the whole candidate pool.
  bool shortage = false;
  // Restriction ids that are categories but not direct children of the root.
  std::vector<std::string> non_top_level_restrictions;

  friend bool operator==(const MatchResult&, const MatchResult&) = default;
};

// Full ranking of the candidate pool. Throws Error(kEmptyPool) when the
// restriction selects no events.
std::vector<ScoredId> rank_events(const OntologyTree& tree,
                                  const MatchQuery& query,
                                  const SimilarityBackend& backend);

// Top `event_count` of rank_events.
std::vector<ScoredId> match_events(const OntologyTree& tree,
                                   const MatchQuery& query,
                                   const SimilarityBackend& backend);

MatchResult match_concepts(const OntologyTree& tree, const MatchQuery& query,
                           const SimilarityBackend& backend);

}  // namespace eventnet

#endif  // EVENTNET_MATCHING_HPP_
