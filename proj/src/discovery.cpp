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

#include "eventnet/discovery.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <unordered_set>

#include "eventnet/error.hpp"
#include "eventnet/similarity.hpp"
#include "json.hpp"

namespace eventnet {

namespace {

using nlohmann::json;

std::set<std::string> distinct(const std::vector<std::string>& words) {
  return {words.begin(), words.end()};
}

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

}  // namespace

CrawlManifest make_manifest(
    std::string event_id,
    const std::vector<std::pair<std::string, std::vector<std::string>>>& raw) {
  CrawlManifest manifest;
  manifest.event_id = std::move(event_id);
  std::unordered_set<std::string> seen;
  for (const auto& [video_id, tags] : raw) {
    if (!seen.insert(video_id).second) {
      throw Error(ErrorCode::kValidation,
                  "duplicate video id '" + video_id + "' in manifest",
                  video_id);
    }
    CrawlEntry entry{video_id, {}};
    for (const auto& tag : tags) {
      for (auto& word : tokenize(tag)) entry.tags.push_back(std::move(word));
    }
    manifest.entries.push_back(std::move(entry));
  }
  return manifest;
}

CrawlManifest parse_manifest(std::istream& in,
                             std::optional<std::string> event_id) {
  std::string header_event;
  std::vector<std::pair<std::string, std::vector<std::string>>> raw;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json record = json::parse(line);
      if (record.contains("event_id")) {
        header_event = record.at("event_id").get<std::string>();
        continue;
      }
      raw.emplace_back(record.at("video_id").get<std::string>(),
                       record.at("tags").get<std::vector<std::string>>());
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kParse,
                  "manifest line " + std::to_string(line_no) + ": " + e.what(),
                  "line " + std::to_string(line_no));
    }
  }
  return make_manifest(event_id ? *event_id : header_event, raw);
}

CrawlManifest load_manifest(const std::string& path,
                            std::optional<std::string> event_id) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open manifest '" + path + "'", path);
  }
  return parse_manifest(in, std::move(event_id));
}

Vocabulary make_vocabulary(std::string name,
                           const std::vector<std::string>& terms) {
  Vocabulary vocabulary{std::move(name), {}};
  for (const auto& term : terms) {
    auto tokens = tokenize(term);
    if (!tokens.empty()) vocabulary.terms.insert(join_tokens(tokens));
  }
  if (vocabulary.terms.empty()) {
    throw Error(ErrorCode::kValidation,
                "vocabulary '" + vocabulary.name + "' is empty",
                vocabulary.name);
  }
  return vocabulary;
}

Vocabulary parse_vocabulary(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("name=", 0) != 0) {
    throw Error(ErrorCode::kParse,
                "vocabulary must start with a 'name=<name>' header");
  }
  std::string name = line.substr(5);
  while (!name.empty() && (name.back() == '\r' || name.back() == ' ')) {
    name.pop_back();
  }
  std::vector<std::string> terms;
  while (std::getline(in, line)) terms.push_back(line);
  return make_vocabulary(std::move(name), terms);
}

Vocabulary load_vocabulary(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open vocabulary '" + path + "'", path);
  }
  return parse_vocabulary(in);
}

std::vector<std::pair<std::string, std::size_t>> frequent_words(
    const CrawlManifest& manifest, std::size_t n) {
  if (n < 1) {
    throw Error(ErrorCode::kInvalidArgument, "n must be >= 1", "n");
  }
  if (manifest.entries.empty()) {
    throw Error(ErrorCode::kInsufficientData, "manifest has no videos",
                manifest.event_id);
  }
  std::map<std::string, std::size_t> document_frequency;
  for (const auto& entry : manifest.entries) {
    for (const auto& word : distinct(entry.tags)) ++document_frequency[word];
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(
      document_frequency.begin(), document_frequency.end());
  // std::map iteration is alphabetical; a stable sort keeps it for ties.
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) {
                     return a.second > b.second;
                   });
  if (ranked.size() > n) ranked.resize(n);
  return ranked;
}

CrawlManifest filter_videos(const CrawlManifest& manifest,
                            const std::set<std::string>& frequent,
                            std::size_t min_overlap) {
  if (min_overlap < 1) {
    throw Error(ErrorCode::kInvalidArgument, "min_overlap must be >= 1",
                "min_overlap");
  }
  CrawlManifest out{manifest.event_id, {}};
  for (const auto& entry : manifest.entries) {
    std::size_t overlap = 0;
    for (const auto& word : distinct(entry.tags)) {
      overlap += frequent.count(word);
    }
    if (overlap >= min_overlap) out.entries.push_back(entry);
  }
  return out;
}

std::vector<DiscoveredConcept> discover_concepts(
    const CrawlManifest& manifest, const std::vector<Vocabulary>& vocabularies,
    std::size_t n, std::size_t min_overlap) {
  if (vocabularies.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "at least one vocabulary is required", "vocabularies");
  }
  std::set<std::string> frequent;
  for (const auto& [word, count] : frequent_words(manifest, n)) {
    frequent.insert(word);
  }
  const CrawlManifest kept = filter_videos(manifest, frequent, min_overlap);

  std::map<std::string, DiscoveredConcept> found;
  for (const auto& entry : kept.entries) {
    for (const auto& word : distinct(entry.tags)) {
      const auto vocabulary =
          std::find_if(vocabularies.begin(), vocabularies.end(),
                       [&](const Vocabulary& v) { return v.contains(word); });
      if (vocabulary == vocabularies.end()) continue;
      auto [it, inserted] = found.try_emplace(word);
      if (inserted) {
        it->second.name = word;
        it->second.event_id = manifest.event_id;
        it->second.source_vocabulary = vocabulary->name;
      }
      it->second.supporting_videos.push_back(entry.video_id);
    }
  }
  std::vector<DiscoveredConcept> out;
  out.reserve(found.size());
  for (auto& [word, concept_record] : found) {
    std::sort(concept_record.supporting_videos.begin(),
              concept_record.supporting_videos.end());
    out.push_back(std::move(concept_record));
  }
  return out;
}

std::vector<OntologyNode> to_ontology_nodes(
    const std::vector<DiscoveredConcept>& concepts) {
  std::vector<OntologyNode> nodes;
  for (const auto& c : concepts) {
    std::string suffix = c.name;
    std::replace(suffix.begin(), suffix.end(), ' ', '_');
    nodes.push_back(
        {c.event_id + "." + suffix, c.name, NodeKind::kConcept, c.event_id});
  }
  return nodes;
}

}  // namespace eventnet
