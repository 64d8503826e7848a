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

#include "eventnet/ontology.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>

#include "eventnet/error.hpp"
#include "json.hpp"

namespace eventnet {

namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& id, const std::string& reason) {
  throw Error(ErrorCode::kValidation, "node '" + id + "': " + reason, id);
}

bool skippable(std::string_view line) {
  const auto first = line.find_first_not_of(" \t\r");
  return first == std::string_view::npos || line[first] == '#';
}

std::string required_string(const json& record, const char* key,
                            std::size_t line_no) {
  const auto it = record.find(key);
  if (it == record.end() || !it->is_string()) {
    throw Error(ErrorCode::kParse,
                "line " + std::to_string(line_no) + ": missing string field '" +
                    key + "'",
                "line " + std::to_string(line_no));
  }
  return it->get<std::string>();
}

}  // namespace

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::kCategory:
      return "category";
    case NodeKind::kEvent:
      return "event";
    case NodeKind::kConcept:
      return "concept";
  }
  return "category";
}

std::optional<NodeKind> parse_node_kind(std::string_view text) {
  if (text == "category") return NodeKind::kCategory;
  if (text == "event") return NodeKind::kEvent;
  if (text == "concept") return NodeKind::kConcept;
  return std::nullopt;
}

OntologyTree OntologyTree::build(std::vector<OntologyNode> nodes,
                                 const ValidationOptions& options) {
  OntologyTree tree;
  std::sort(nodes.begin(), nodes.end(),
            [](const OntologyNode& a, const OntologyNode& b) {
              return a.id < b.id;
            });
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].id.empty()) invalid("", "empty id");
    if (i > 0 && nodes[i].id == nodes[i - 1].id) {
      invalid(nodes[i].id, "duplicate id");
    }
  }
  if (nodes.empty()) {
    throw Error(ErrorCode::kValidation, "ontology has no nodes");
  }
  tree.nodes_ = std::move(nodes);
  const auto& all = tree.nodes_;
  for (std::size_t i = 0; i < all.size(); ++i) {
    tree.index_.emplace(all[i].id, i);
    tree.by_name_.emplace(all[i].name, i);
  }

  std::optional<std::size_t> root;
  tree.children_.assign(all.size(), {});
  for (std::size_t i = 0; i < all.size(); ++i) {
    const OntologyNode& node = all[i];
    if (!node.parent) {
      if (root) invalid(node.id, "second root (first root is '" +
                                     all[*root].id + "')");
      if (node.kind != NodeKind::kCategory) {
        invalid(node.id, "root must be a category");
      }
      root = i;
      continue;
    }
    const auto parent_it = tree.index_.find(*node.parent);
    if (parent_it == tree.index_.end()) {
      invalid(node.id, "missing parent '" + *node.parent + "'");
    }
    const NodeKind parent_kind = all[parent_it->second].kind;
    const NodeKind expected = node.kind == NodeKind::kConcept
                                  ? NodeKind::kEvent
                                  : NodeKind::kCategory;
    if (parent_kind != expected) {
      invalid(node.id, std::string(to_string(node.kind)) + " under " +
                           std::string(to_string(parent_kind)) + " '" +
                           *node.parent + "' (expected " +
                           std::string(to_string(expected)) + " parent)");
    }
    tree.children_[parent_it->second].push_back(i);
  }
  if (!root) throw Error(ErrorCode::kValidation, "ontology has no root");
  tree.root_ = *root;

  // Every parent exists and there is one root, so any node the walk from the
  // root misses sits on a cycle.
  tree.depth_.assign(all.size(), -1);
  std::deque<std::size_t> queue{tree.root_};
  tree.depth_[tree.root_] = 0;
  while (!queue.empty()) {
    const std::size_t current = queue.front();
    queue.pop_front();
    for (std::size_t child : tree.children_[current]) {
      tree.depth_[child] = tree.depth_[current] + 1;
      queue.push_back(child);
    }
  }
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (tree.depth_[i] < 0) invalid(all[i].id, "cycle in parent chain");
    if (all[i].kind != NodeKind::kConcept &&
        tree.depth_[i] > options.max_depth) {
      tree.warnings_.push_back("node '" + all[i].id + "' at depth " +
                               std::to_string(tree.depth_[i]) +
                               " exceeds limit " +
                               std::to_string(options.max_depth));
    }
  }
  return tree;
}

std::size_t OntologyTree::index_of(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  if (it == index_.end()) {
    throw Error(ErrorCode::kNotFound, "unknown node '" + std::string(id) + "'",
                std::string(id));
  }
  return it->second;
}

bool OntologyTree::contains(std::string_view id) const {
  return index_.count(std::string(id)) > 0;
}

const OntologyNode* OntologyTree::find(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &nodes_[it->second];
}

const OntologyNode& OntologyTree::node(std::string_view id) const {
  return nodes_[index_of(id)];
}

int OntologyTree::depth(std::string_view id) const {
  return depth_[index_of(id)];
}

std::vector<std::string> OntologyTree::children(std::string_view id) const {
  std::vector<std::string> out;
  for (std::size_t child : children_[index_of(id)]) {
    out.push_back(nodes_[child].id);
  }
  return out;
}

std::vector<std::string> OntologyTree::ancestors(std::string_view id) const {
  std::vector<std::string> out;
  const OntologyNode* current = &node(id);
  while (current->parent) {
    out.push_back(*current->parent);
    current = &node(*current->parent);
  }
  return out;
}

std::vector<std::string> OntologyTree::find_by_name(
    std::string_view name) const {
  std::vector<std::string> out;
  const auto [first, last] = by_name_.equal_range(std::string(name));
  for (auto it = first; it != last; ++it) out.push_back(nodes_[it->second].id);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> OntologyTree::ids_of_kind(NodeKind kind) const {
  std::vector<std::string> out;
  for (const auto& n : nodes_) {
    if (n.kind == kind) out.push_back(n.id);
  }
  return out;
}

std::vector<std::string> OntologyTree::concepts_of_event(
    std::string_view event_id) const {
  const std::size_t index = index_of(event_id);
  if (nodes_[index].kind != NodeKind::kEvent) {
    throw Error(ErrorCode::kInvalidArgument,
                "'" + std::string(event_id) + "' is not an event",
                std::string(event_id));
  }
  std::vector<std::string> out;
  for (std::size_t child : children_[index]) out.push_back(nodes_[child].id);
  return out;
}

const std::string& OntologyTree::event_of_concept(
    std::string_view concept_id) const {
  const OntologyNode& n = node(concept_id);
  if (n.kind != NodeKind::kConcept) {
    throw Error(ErrorCode::kInvalidArgument,
                "'" + n.id + "' is not a concept", n.id);
  }
  return *n.parent;
}

OntologyTree parse_ontology(std::istream& in,
                            const ValidationOptions& options) {
  std::vector<OntologyNode> nodes;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::kParse,
                  "line " + std::to_string(line_no) + ": " + e.what(),
                  "line " + std::to_string(line_no));
    }
    if (!record.is_object()) {
      throw Error(ErrorCode::kParse,
                  "line " + std::to_string(line_no) + ": expected an object",
                  "line " + std::to_string(line_no));
    }
    OntologyNode node;
    node.id = required_string(record, "id", line_no);
    node.name = required_string(record, "name", line_no);
    const std::string kind = required_string(record, "kind", line_no);
    const auto parsed_kind = parse_node_kind(kind);
    if (!parsed_kind) {
      throw Error(ErrorCode::kParse,
                  "line " + std::to_string(line_no) + ": unknown kind '" +
                      kind + "'",
                  node.id);
    }
    node.kind = *parsed_kind;
    const auto parent = record.find("parent");
    if (parent != record.end() && !parent->is_null()) {
      if (!parent->is_string()) {
        throw Error(ErrorCode::kParse,
                    "line " + std::to_string(line_no) +
                        ": parent must be a string or null",
                    node.id);
      }
      node.parent = parent->get<std::string>();
    }
    nodes.push_back(std::move(node));
  }
  return OntologyTree::build(std::move(nodes), options);
}

OntologyTree load_ontology(const std::string& path,
                           const ValidationOptions& options) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open ontology '" + path + "'", path);
  }
  return parse_ontology(in, options);
}

std::string save_ontology(const OntologyTree& tree) {
  std::string out;
  for (const auto& n : tree.nodes()) {
    json record = {{"id", n.id},
                   {"name", n.name},
                   {"kind", std::string(to_string(n.kind))},
                   {"parent", n.parent ? json(*n.parent) : json(nullptr)}};
    out += record.dump();
    out += '\n';
  }
  return out;
}

OntologyStats stats(const OntologyTree& tree) {
  OntologyStats s;
  std::size_t branching_nodes = 0;
  std::size_t child_categories = 0;
  const std::string& root_id = tree.root().id;
  for (const auto& n : tree.nodes()) {
    const int d = tree.depth(n.id);
    s.max_depth = std::max(s.max_depth, d);
    switch (n.kind) {
      case NodeKind::kCategory: {
        ++s.category_count;
        std::size_t sub = 0;
        for (const auto& child : tree.children(n.id)) {
          if (tree.node(child).kind == NodeKind::kCategory) ++sub;
        }
        if (sub > 0) {
          ++branching_nodes;
          child_categories += sub;
        }
        break;
      }
      case NodeKind::kEvent: {
        ++s.event_count;
        s.max_event_depth = std::max(s.max_event_depth, d);
        const auto path = tree.ancestors(n.id);
        // path.back() is the root; the top-level category precedes it.
        const std::string& top =
            path.size() >= 2 ? path[path.size() - 2] : root_id;
        ++s.events_per_top_category[top];
        break;
      }
      case NodeKind::kConcept:
        ++s.concept_count;
        break;
    }
  }
  if (branching_nodes > 0) {
    s.avg_children_per_category = static_cast<double>(child_categories) /
                                  static_cast<double>(branching_nodes);
  }
  return s;
}

IdSet events_under(const OntologyTree& tree, const IdSet& categories) {
  IdSet out;
  for (const auto& id : categories) {
    const OntologyNode& start = tree.node(id);
    if (start.kind != NodeKind::kCategory) {
      throw Error(ErrorCode::kInvalidArgument,
                  "'" + id + "' is not a category", id);
    }
    std::vector<std::string> stack{id};
    while (!stack.empty()) {
      const std::string current = std::move(stack.back());
      stack.pop_back();
      for (auto& child : tree.children(current)) {
        const NodeKind kind = tree.node(child).kind;
        if (kind == NodeKind::kEvent) {
          out.insert(child);
        } else if (kind == NodeKind::kCategory) {
          stack.push_back(std::move(child));
        }
      }
    }
  }
  return out;
}

IdSet redundancy_candidates(const OntologyTree& tree,
                            std::string_view event_id) {
  const OntologyNode& query = tree.node(event_id);
  if (query.kind != NodeKind::kEvent) {
    throw Error(ErrorCode::kInvalidArgument,
                "'" + query.id + "' is not an event", query.id);
  }
  const std::string& home = *query.parent;
  IdSet excluded = events_under(tree, {home});
  for (const auto& ancestor : tree.ancestors(home)) {
    for (const auto& child : tree.children(ancestor)) {
      if (tree.node(child).kind == NodeKind::kEvent) excluded.insert(child);
    }
  }
  IdSet out;
  for (auto& id : tree.ids_of_kind(NodeKind::kEvent)) {
    if (id != query.id && !excluded.count(id)) out.insert(std::move(id));
  }
  return out;
}

ConceptVideos parse_concept_videos(std::istream& in) {
  ConceptVideos out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    try {
      const json record = json::parse(line);
      auto& videos = out[record.at("concept").get<std::string>()];
      for (const auto& v : record.at("videos")) {
        videos.push_back(v.get<std::string>());
      }
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kParse,
                  "concept-videos line " + std::to_string(line_no) + ": " +
                      e.what(),
                  "line " + std::to_string(line_no));
    }
  }
  return out;
}

ConceptVideos load_concept_videos(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open concept-videos '" + path + "'",
                path);
  }
  return parse_concept_videos(in);
}

}  // namespace eventnet
