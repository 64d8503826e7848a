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

// Short-phrase semantic similarity with swappable backends.
//
// Two backends ship with the engine:
//   * OverlapBackend: IDF-weighted token-overlap cosine. IDF is computed over
//     every node name of the loaded ontology, smoothed as
//     ln((1 + N) / (1 + df)) + 1 so unseen words still carry weight.
//   * EmbeddingBackend: cosine of mean-pooled word vectors mapped to [0, 1]
//     by (1 + cos) / 2. Words missing from the table contribute zeros.
// Both return exactly 1 for phrases with identical token sequences.

#ifndef EVENTNET_SIMILARITY_HPP_
#define EVENTNET_SIMILARITY_HPP_

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace eventnet {

class OntologyTree;

inline constexpr std::string_view kStopwordListVersion = "en-1";

const std::vector<std::string>& stopwords();

// Splits on non-alphanumeric ASCII, lowercases, drops stopwords. Bytes >= 0x80
// are kept inside tokens so UTF-8 words survive intact.
std::vector<std::string> tokenize(std::string_view text);

class SimilarityBackend {
 public:
  virtual ~SimilarityBackend() = default;
  virtual std::string name() const = 0;
  // Symmetric, in [0, 1] for the built-in backends.
  virtual double similarity(std::string_view a, std::string_view b) const = 0;
};

class IdfTable {
 public:
  IdfTable() = default;
  // One document per name.
  explicit IdfTable(std::span<const std::string> documents);

  double weight(const std::string& token) const;
  std::size_t document_count() const { return documents_; }

 private:
  std::size_t documents_ = 0;
  std::unordered_map<std::string, std::size_t> document_frequency_;
};

class OverlapBackend final : public SimilarityBackend {
 public:
  explicit OverlapBackend(IdfTable idf) : idf_(std::move(idf)) {}
  // IDF over every node name of `tree`.
  static OverlapBackend from_ontology(const OntologyTree& tree);

  std::string name() const override { return "overlap"; }
  double similarity(std::string_view a, std::string_view b) const override;
  const IdfTable& idf() const { return idf_; }

 private:
  IdfTable idf_;
};

class EmbeddingTable {
 public:
  EmbeddingTable(std::size_t dimension,
                 std::unordered_map<std::string, std::vector<double>> vectors);

  std::size_t dimension() const { return dimension_; }
  // nullptr for unknown words.
  const std::vector<double>* find(const std::string& word) const;

 private:
  std::size_t dimension_;
  std::unordered_map<std::string, std::vector<double>> vectors_;
};

// Header line "D=<int>", then "word v1 ... vD" per line.
EmbeddingTable parse_embeddings(std::istream& in);
EmbeddingTable load_embeddings(const std::string& path);

class EmbeddingBackend final : public SimilarityBackend {
 public:
  explicit EmbeddingBackend(EmbeddingTable table) : table_(std::move(table)) {}

  std::string name() const override { return "embedding"; }
  double similarity(std::string_view a, std::string_view b) const override;

 private:
  std::vector<double> pooled(const std::vector<std::string>& tokens) const;
  EmbeddingTable table_;
};

struct BackendConfig {
  // "overlap", "embedding", or empty for the default choice: embedding when a
  // table path is given, overlap otherwise.
  std::string name;
  std::optional<std::string> embedding_path;
};

std::shared_ptr<const SimilarityBackend> make_backend(
    const BackendConfig& config, const OntologyTree& tree);

// Throws Error(kConfig) when `backend` is null.
double phrase_similarity(std::string_view a, std::string_view b,
                         const SimilarityBackend* backend);

}  // namespace eventnet

#endif  // EVENTNET_SIMILARITY_HPP_
