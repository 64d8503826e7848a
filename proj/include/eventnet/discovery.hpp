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

// Event-specific concept mining from crawled video tags.
//
// Pipeline per event: take the n most frequent tag words (document frequency,
// one count per video), keep videos tagged with at least `min_overlap` of
// them, and turn every surviving tag word that appears in a visual vocabulary
// into a concept of that event.

#ifndef EVENTNET_DISCOVERY_HPP_
#define EVENTNET_DISCOVERY_HPP_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "eventnet/ontology.hpp"

namespace eventnet {

struct CrawlEntry {
  std::string video_id;
  // Lowercased word tokens; multi-word tags are split into words on load.
  std::vector<std::string> tags;

  friend bool operator==(const CrawlEntry&, const CrawlEntry&) = default;
};

struct CrawlManifest {
  std::string event_id;
  std::vector<CrawlEntry> entries;

  friend bool operator==(const CrawlManifest&, const CrawlManifest&) = default;
};

struct Vocabulary {
  std::string name;
  std::set<std::string> terms;

  bool contains(const std::string& word) const { return terms.count(word) > 0; }
};

struct DiscoveredConcept {
  std::string name;
  std::string event_id;
  std::vector<std::string> supporting_videos;
  std::string source_vocabulary;

  friend bool operator==(const DiscoveredConcept&,
                         const DiscoveredConcept&) = default;
};

// Builds a manifest, tokenizing every raw tag. Throws on duplicate video ids.
CrawlManifest make_manifest(
    std::string event_id,
    const std::vector<std::pair<std::string, std::vector<std::string>>>& raw);

// JSON lines. An optional {"event_id": ...} record names the event; every
// other record is {"video_id": ..., "tags": [...]}. `event_id` overrides the
// header when given.
CrawlManifest parse_manifest(std::istream& in,
                             std::optional<std::string> event_id = {});
CrawlManifest load_manifest(const std::string& path,
                            std::optional<std::string> event_id = {});

// Header "name=<vocabulary name>", then one term per line. Terms are stored
// in tokenized form joined by single spaces.
Vocabulary parse_vocabulary(std::istream& in);
Vocabulary load_vocabulary(const std::string& path);
Vocabulary make_vocabulary(std::string name,
                           const std::vector<std::string>& terms);

std::vector<std::pair<std::string, std::size_t>> frequent_words(
    const CrawlManifest& manifest, std::size_t n = 10);

CrawlManifest filter_videos(const CrawlManifest& manifest,
                            const std::set<std::string>& frequent,
                            std::size_t min_overlap = 3);

std::vector<DiscoveredConcept> discover_concepts(
    const CrawlManifest& manifest, const std::vector<Vocabulary>& vocabularies,
    std::size_t n = 10, std::size_t min_overlap = 3);

// Ontology records for attaching discovered concepts under their event; ids
// are "<event_id>.<name with spaces replaced by '_'>".
std::vector<OntologyNode> to_ontology_nodes(
    const std::vector<DiscoveredConcept>& concepts);

}  // namespace eventnet

#endif  // EVENTNET_DISCOVERY_HPP_
