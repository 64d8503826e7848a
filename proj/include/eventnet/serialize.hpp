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

// Canonical JSON documents shared by the CLI (--format record) and the HTTP
// service. Objects have sorted keys and compact separators, so equal values
// serialize to equal bytes.

#ifndef EVENTNET_SERIALIZE_HPP_
#define EVENTNET_SERIALIZE_HPP_

#include <string>
#include <vector>

#include "eventnet/discovery.hpp"
#include "eventnet/error.hpp"
#include "eventnet/evaluation.hpp"
#include "eventnet/matching.hpp"
#include "eventnet/ontology.hpp"
#include "eventnet/scoring.hpp"
#include "json.hpp"

namespace eventnet {

using Json = nlohmann::json;

std::string canonical(const Json& document);

Json to_json(const OntologyStats& stats);
Json to_json(const OntologyNode& node);
Json to_json(const MatchResult& result);
Json to_json(const std::vector<ScoredId>& ranking);
Json to_json(const std::vector<RecountItem>& items);
Json to_json(const DiscoveredConcept& concept_record);
Json to_json(const EvalReport& report);
Json to_json(const ComparisonReport& report);
Json to_json(const std::vector<SweepPoint>& sweep);
Json to_json(const Error& error);

// Node plus its children down to `depth` levels (0 = node only).
Json subtree_json(const OntologyTree& tree, const std::string& root_id,
                  int depth);

// {"query": text, "restrict": [ids] | absent, "events": n, "concepts": k}.
// Throws Error(kInvalidArgument) on missing or mistyped fields.
MatchQuery match_query_from_json(const Json& request);

}  // namespace eventnet

#endif  // EVENTNET_SERIALIZE_HPP_
