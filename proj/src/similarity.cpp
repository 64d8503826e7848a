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

#include "eventnet/similarity.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_set>

#include "eventnet/error.hpp"
#include "eventnet/ontology.hpp"

namespace eventnet {

namespace {

// Version en-1. Changing this list changes every similarity score; bump
// kStopwordListVersion with it.
const char* const kStopwords[] = {
    "a",    "an",   "and",  "are",  "as",   "at",   "be",    "by",
    "for",  "from", "has",  "have", "how",  "in",   "into",  "is",
    "it",   "its",  "of",   "on",   "or",   "that", "the",   "their",
    "this", "to",   "was",  "were", "will", "with", "your",  "you",
};

bool is_token_byte(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
         (c >= 'A' && c <= 'Z') || c >= 0x80;
}

const std::unordered_set<std::string>& stopword_set() {
  static const std::unordered_set<std::string> set(std::begin(kStopwords),
                                                   std::end(kStopwords));
  return set;
}

double clamp_unit(double value) { return std::clamp(value, 0.0, 1.0); }

}  // namespace

const std::vector<std::string>& stopwords() {
  static const std::vector<std::string> list(std::begin(kStopwords),
                                             std::end(kStopwords));
  return list;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty() && !stopword_set().count(current)) {
      tokens.push_back(current);
    }
    current.clear();
  };
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (is_token_byte(c)) {
      current.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c + 32) : ch);
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

IdfTable::IdfTable(std::span<const std::string> documents)
    : documents_(documents.size()) {
  for (const auto& doc : documents) {
    auto tokens = tokenize(doc);
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    for (auto& t : tokens) ++document_frequency_[std::move(t)];
  }
}

double IdfTable::weight(const std::string& token) const {
  const auto it = document_frequency_.find(token);
  const double df = it == document_frequency_.end() ? 0.0 : it->second;
  return std::log((1.0 + documents_) / (1.0 + df)) + 1.0;
}

OverlapBackend OverlapBackend::from_ontology(const OntologyTree& tree) {
  std::vector<std::string> names;
  names.reserve(tree.size());
  for (const auto& n : tree.nodes()) names.push_back(n.name);
  return OverlapBackend(IdfTable(names));
}

double OverlapBackend::similarity(std::string_view a,
                                  std::string_view b) const {
  const auto ta = tokenize(a);
  const auto tb = tokenize(b);
  if (ta.empty() || tb.empty()) return 0.0;
  if (ta == tb) return 1.0;

  auto weigh = [this](const std::vector<std::string>& tokens) {
    std::map<std::string, double> counts;
    for (const auto& t : tokens) counts[t] += 1.0;
    for (auto& [token, value] : counts) value *= idf_.weight(token);
    return counts;
  };
  const auto wa = weigh(ta);
  const auto wb = weigh(tb);
  double dot = 0.0;
  double norm_a = 0.0;
  double norm_b = 0.0;
  for (const auto& [token, value] : wa) {
    norm_a += value * value;
    const auto hit = wb.find(token);
    if (hit != wb.end()) dot += value * hit->second;
  }
  for (const auto& [token, value] : wb) norm_b += value * value;
  return clamp_unit(dot / std::sqrt(norm_a * norm_b));
}

EmbeddingTable::EmbeddingTable(
    std::size_t dimension,
    std::unordered_map<std::string, std::vector<double>> vectors)
    : dimension_(dimension), vectors_(std::move(vectors)) {
  for (const auto& [word, v] : vectors_) {
    if (v.size() != dimension_) {
      throw Error(ErrorCode::kInvalidArgument,
                  "embedding for '" + word + "' has wrong dimension", word);
    }
  }
}

const std::vector<double>* EmbeddingTable::find(
    const std::string& word) const {
  const auto it = vectors_.find(word);
  return it == vectors_.end() ? nullptr : &it->second;
}

EmbeddingTable parse_embeddings(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("D=", 0) != 0) {
    throw Error(ErrorCode::kParse, "embedding table must start with 'D=<int>'");
  }
  std::size_t dimension = 0;
  const char* begin = line.data() + 2;
  const char* end = line.data() + line.size();
  while (end > begin && (end[-1] == '\r' || end[-1] == ' ')) --end;
  const auto [ptr, ec] = std::from_chars(begin, end, dimension);
  if (ec != std::errc() || ptr != end || dimension == 0) {
    throw Error(ErrorCode::kParse, "bad embedding header '" + line + "'");
  }
  std::unordered_map<std::string, std::vector<double>> vectors;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string word;
    if (!(fields >> word)) continue;
    std::vector<double> values;
    double v = 0.0;
    while (fields >> v) values.push_back(v);
    if (values.size() != dimension) {
      throw Error(ErrorCode::kParse,
                  "embedding line " + std::to_string(line_no) + " has " +
                      std::to_string(values.size()) + " values, expected " +
                      std::to_string(dimension),
                  word);
    }
    vectors[word] = std::move(values);
  }
  return EmbeddingTable(dimension, std::move(vectors));
}

EmbeddingTable load_embeddings(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open embeddings '" + path + "'", path);
  }
  return parse_embeddings(in);
}

std::vector<double> EmbeddingBackend::pooled(
    const std::vector<std::string>& tokens) const {
  std::vector<double> sum(table_.dimension(), 0.0);
  for (const auto& t : tokens) {
    if (const auto* v = table_.find(t)) {
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += (*v)[i];
    }
  }
  for (double& x : sum) x /= static_cast<double>(tokens.size());
  return sum;
}

double EmbeddingBackend::similarity(std::string_view a,
                                    std::string_view b) const {
  const auto ta = tokenize(a);
  const auto tb = tokenize(b);
  if (ta.empty() || tb.empty()) return 0.0;
  if (ta == tb) return 1.0;
  const auto va = pooled(ta);
  const auto vb = pooled(tb);
  double dot = 0.0;
  double norm_a = 0.0;
  double norm_b = 0.0;
  for (std::size_t i = 0; i < va.size(); ++i) {
    dot += va[i] * vb[i];
    norm_a += va[i] * va[i];
    norm_b += vb[i] * vb[i];
  }
  // No known word on one side: nothing to compare.
  if (norm_a == 0.0 || norm_b == 0.0) return 0.0;
  const double cosine = dot / std::sqrt(norm_a * norm_b);
  return clamp_unit((1.0 + cosine) / 2.0);
}

std::shared_ptr<const SimilarityBackend> make_backend(
    const BackendConfig& config, const OntologyTree& tree) {
  std::string name = config.name;
  if (name.empty()) name = config.embedding_path ? "embedding" : "overlap";
  if (name == "overlap") {
    return std::make_shared<OverlapBackend>(
        OverlapBackend::from_ontology(tree));
  }
  if (name == "embedding") {
    if (!config.embedding_path) {
      throw Error(ErrorCode::kConfig,
                  "embedding backend needs an embedding table path");
    }
    return std::make_shared<EmbeddingBackend>(
        load_embeddings(*config.embedding_path));
  }
  throw Error(ErrorCode::kConfig, "unknown similarity backend '" + name + "'",
              name);
}

double phrase_similarity(std::string_view a, std::string_view b,
                         const SimilarityBackend* backend) {
  if (backend == nullptr) {
    throw Error(ErrorCode::kConfig, "similarity backend not configured");
  }
  return backend->similarity(a, b);
}

}  // namespace eventnet
