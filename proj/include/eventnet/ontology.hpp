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

// Category -> event -> concept tree.
//
// Layering rules enforced at build time:
//   * exactly one parentless node, the root, and it is a category;
//   * a category's parent is a category;
//   * an event's parent is a category;
//   * a concept's parent is an event.
// Consequently events have only concept children and concepts are leaves.
//
// Nodes are stored sorted by id; every traversal visits children in id order.

#ifndef EVENTNET_ONTOLOGY_HPP_
#define EVENTNET_ONTOLOGY_HPP_

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace eventnet {

enum class NodeKind { kCategory, kEvent, kConcept };

std::string_view to_string(NodeKind kind);
std::optional<NodeKind> parse_node_kind(std::string_view text);

struct OntologyNode {
  std::string id;
  std::string name;
  NodeKind kind = NodeKind::kCategory;
  std::optional<std::string> parent;

  friend bool operator==(const OntologyNode&, const OntologyNode&) = default;
};

struct ValidationOptions {
  // Deeper category/event nodes produce a warning, not an error.
  int max_depth = 8;
};

struct OntologyStats {
  std::size_t category_count = 0;
  std::size_t event_count = 0;
  std::size_t concept_count = 0;
  // Longest root-to-node path over all nodes (concepts included).
  int max_depth = 0;
  // Longest root-to-event path.
  int max_event_depth = 0;
  // Mean number of child categories over categories that have any.
  double avg_children_per_category = 0.0;
  // Keyed by top-level category id. Events attached directly to the root are
  // counted under the root id so that the values sum to event_count.
  std::map<std::string, std::size_t> events_per_top_category;
};

using IdSet = std::set<std::string>;

class OntologyTree {
 public:
  // Validates and indexes `nodes`. Throws Error(kValidation) naming the
  // offending node on duplicate/empty ids, missing parents, cycles, multiple
  // or non-category roots and layering violations.
  static OntologyTree build(std::vector<OntologyNode> nodes,
                            const ValidationOptions& options = {});

  std::size_t size() const { return nodes_.size(); }
  // Sorted by id.
  const std::vector<OntologyNode>& nodes() const { return nodes_; }
  const OntologyNode& root() const { return nodes_[root_]; }

  bool contains(std::string_view id) const;
  const OntologyNode* find(std::string_view id) const;
  // Throws Error(kNotFound).
  const OntologyNode& node(std::string_view id) const;
  int depth(std::string_view id) const;

  std::vector<std::string> children(std::string_view id) const;
  // Parent first, root last.
  std::vector<std::string> ancestors(std::string_view id) const;
  // Ids of all nodes with `name`, sorted. Names are not unique.
  std::vector<std::string> find_by_name(std::string_view name) const;

  // All ids of one kind in canonical (id) order.
  std::vector<std::string> ids_of_kind(NodeKind kind) const;
  std::vector<std::string> concepts_of_event(std::string_view event_id) const;
  // Throws unless `concept_id` names a concept.
  const std::string& event_of_concept(std::string_view concept_id) const;

  // Depth-limit warnings collected while building.
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  OntologyTree() = default;
  std::size_t index_of(std::string_view id) const;

  std::vector<OntologyNode> nodes_;
  std::unordered_map<std::string, std::size_t> index_;
  std::multimap<std::string, std::size_t> by_name_;
  std::vector<std::vector<std::size_t>> children_;
  std::vector<int> depth_;
  std::size_t root_ = 0;
  std::vector<std::string> warnings_;
};

// One JSON object per line: {"id","name","kind","parent"}; parent is null for
// the root. Blank lines and lines starting with '#' are skipped.
OntologyTree parse_ontology(std::istream& in,
                            const ValidationOptions& options = {});
OntologyTree load_ontology(const std::string& path,
                           const ValidationOptions& options = {});
// Canonical form: one line per node, id ascending, keys sorted.
std::string save_ontology(const OntologyTree& tree);

OntologyStats stats(const OntologyTree& tree);

// Every event in the subtrees of `categories`. Throws Error(kNotFound) for
// unknown ids and Error(kInvalidArgument) for non-category ids.
IdSet events_under(const OntologyTree& tree, const IdSet& categories);

// Events on other branches than `event_id`: everything except the event
// itself, events attached to its category or any ancestor category, and
// events anywhere below its category.
IdSet redundancy_candidates(const OntologyTree& tree,
                            std::string_view event_id);

// Concept id -> video ids, as read from a concept-videos manifest.
using ConceptVideos = std::map<std::string, std::vector<std::string>>;

// JSON lines {"concept": id, "videos": [...]}.
ConceptVideos parse_concept_videos(std::istream& in);
ConceptVideos load_concept_videos(const std::string& path);

}  // namespace eventnet

#endif  // EVENTNET_ONTOLOGY_HPP_
