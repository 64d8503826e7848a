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

#include "eventnet/serialize.hpp"

namespace eventnet {

namespace {

Json config_json(const EvalConfig& config) {
  return {{"event_count", config.event_count},
          {"concept_count", config.concept_count},
          {"use_restriction", config.use_restriction},
          {"similarity_weighted", config.scoring.similarity_weighted},
          {"calibrate", config.scoring.calibrate}};
}

[[noreturn]] void bad_request(const std::string& field,
                              const std::string& what) {
  throw Error(ErrorCode::kInvalidArgument,
              "field '" + field + "' " + what, field);
}

std::size_t positive_count(const Json& request, const char* key,
                           std::size_t fallback) {
  const auto it = request.find(key);
  if (it == request.end()) return fallback;
  if (!it->is_number_integer() || it->get<long long>() < 1) {
    bad_request(key, "must be a positive integer");
  }
  return it->get<std::size_t>();
}

}  // namespace

std::string canonical(const Json& document) { return document.dump(); }

Json to_json(const OntologyStats& stats) {
  Json per_top = Json::object();
  for (const auto& [id, count] : stats.events_per_top_category) {
    per_top[id] = count;
  }
  return {{"category_count", stats.category_count},
          {"event_count", stats.event_count},
          {"concept_count", stats.concept_count},
          {"max_depth", stats.max_depth},
          {"max_event_depth", stats.max_event_depth},
          {"avg_children_per_category", stats.avg_children_per_category},
          {"events_per_top_category", per_top}};
}

Json to_json(const OntologyNode& node) {
  return {{"id", node.id},
          {"name", node.name},
          {"kind", std::string(to_string(node.kind))},
          {"parent", node.parent ? Json(*node.parent) : Json(nullptr)}};
}

Json to_json(const std::vector<ScoredId>& ranking) {
  Json out = Json::array();
  for (const auto& item : ranking) {
    out.push_back({{"id", item.id}, {"score", item.score}});
  }
  return out;
}

Json to_json(const MatchResult& result) {
  return {{"matched_events", to_json(result.matched_events)},
          {"matched_concepts", to_json(result.matched_concepts)},
          {"restricted", result.restricted},
          {"shortage", result.shortage},
          {"non_top_level_restrictions", result.non_top_level_restrictions}};
}

Json to_json(const std::vector<RecountItem>& items) {
  Json out = Json::array();
  for (const auto& item : items) {
    out.push_back({{"concept_id", item.concept_id},
                   {"concept_name", item.concept_name},
                   {"event_id", item.event_id},
                   {"event_name", item.event_name},
                   {"score", item.score}});
  }
  return out;
}

Json to_json(const DiscoveredConcept& concept_record) {
  return {{"name", concept_record.name},
          {"event_id", concept_record.event_id},
          {"supporting_videos", concept_record.supporting_videos},
          {"source_vocabulary", concept_record.source_vocabulary}};
}

Json to_json(const EvalReport& report) {
  Json per_query = Json::object();
  for (const auto& [id, ap] : report.per_query_ap) per_query[id] = ap;
  return {{"config", config_json(report.config)},
          {"per_query_ap", per_query},
          {"map", report.map}};
}

Json to_json(const ComparisonReport& report) {
  return {{"without_structure", to_json(report.unrestricted)},
          {"with_structure", to_json(report.restricted)}};
}

Json to_json(const std::vector<SweepPoint>& sweep) {
  Json out = Json::array();
  for (const auto& p : sweep) {
    out.push_back({{"concept_count", p.concept_count}, {"map", p.map}});
  }
  return out;
}

Json to_json(const Error& error) {
  return {{"code", std::string(to_string(error.code()))},
          {"message", error.what()},
          {"detail", error.detail()}};
}

Json subtree_json(const OntologyTree& tree, const std::string& root_id,
                  int depth) {
  Json out = to_json(tree.node(root_id));
  const auto children = tree.children(root_id);
  out["child_count"] = children.size();
  if (depth > 0) {
    Json list = Json::array();
    for (const auto& child : children) {
      list.push_back(subtree_json(tree, child, depth - 1));
    }
    out["children"] = std::move(list);
  }
  return out;
}

MatchQuery match_query_from_json(const Json& request) {
  if (!request.is_object()) bad_request("body", "must be a JSON object");
  MatchQuery query;
  const auto text = request.find("query");
  if (text == request.end() || !text->is_string()) {
    bad_request("query", "must be a string");
  }
  query.text = text->get<std::string>();
  const auto restrict = request.find("restrict");
  if (restrict != request.end() && !restrict->is_null()) {
    if (!restrict->is_array()) bad_request("restrict", "must be an array");
    IdSet ids;
    for (const auto& id : *restrict) {
      if (!id.is_string()) bad_request("restrict", "must hold strings");
      ids.insert(id.get<std::string>());
    }
    query.restrict_categories = std::move(ids);
  }
  query.event_count = positive_count(request, "events", query.event_count);
  query.concept_count =
      positive_count(request, "concepts", query.concept_count);
  return query;
}

}  // namespace eventnet
