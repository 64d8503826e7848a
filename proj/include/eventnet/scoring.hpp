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

// Concept-score video representation, zero-shot retrieval and recounting.

#ifndef EVENTNET_SCORING_HPP_
#define EVENTNET_SCORING_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "eventnet/matching.hpp"
#include "eventnet/models.hpp"
#include "eventnet/ontology.hpp"

namespace eventnet {

struct ScoreVector {
  std::string video_id;
  std::vector<double> scores;

  friend bool operator==(const ScoreVector&, const ScoreVector&) = default;
};

// Videos x concepts. Column order is the header order; after
// align_to_ontology it is the ontology's canonical concept order.
class ScoreMatrix {
 public:
  ScoreMatrix() = default;
  explicit ScoreMatrix(std::vector<std::string> concept_ids);

  // Throws on wrong length, non-finite scores or a duplicate video id.
  void add_row(std::string video_id, std::vector<double> scores);

  const std::vector<std::string>& concepts() const { return concepts_; }
  std::size_t video_count() const { return videos_.size(); }
  const std::string& video(std::size_t row) const { return videos_[row]; }
  std::span<const double> row(std::size_t row) const;
  ScoreVector vector_of(std::size_t row) const;

  std::optional<std::size_t> concept_index(const std::string& id) const;
  std::optional<std::size_t> video_index(const std::string& id) const;

  friend bool operator==(const ScoreMatrix& a, const ScoreMatrix& b) {
    return a.concepts_ == b.concepts_ && a.videos_ == b.videos_ &&
           a.values_ == b.values_;
  }

 private:
  std::vector<std::string> concepts_;
  std::unordered_map<std::string, std::size_t> concept_index_;
  std::vector<std::string> videos_;
  std::unordered_map<std::string, std::size_t> video_index_;
  std::vector<double> values_;
};

// Reorders columns into the ontology's concept order. Throws
// Error(kValidation) naming the first header id that is not an ontology
// concept, or the first ontology concept the header lacks.
ScoreMatrix align_to_ontology(const ScoreMatrix& matrix,
                              const OntologyTree& tree);

// Text variant:
//   eventnet-scores 1
//   concepts<TAB>c1<TAB>c2...
//   <video><TAB>s1<TAB>s2...
//   crc32<TAB><8 hex digits over every preceding byte>
std::string save_score_matrix_text(const ScoreMatrix& matrix);
// Binary variant: "ENSM", u32 version, u32 concepts, u64 videos,
// length-prefixed strings, little-endian IEEE doubles, trailing u32 crc32.
std::string save_score_matrix_binary(const ScoreMatrix& matrix);
// Detects the variant; throws Error(kParse) on a checksum mismatch.
ScoreMatrix parse_score_matrix(const std::string& bytes);
ScoreMatrix load_score_matrix(const std::string& path);

struct ScoringOptions {
  // Weight each concept by its match similarity instead of a plain mean.
  bool similarity_weighted = false;
  // Pass scores through a logistic sigmoid before averaging.
  bool calibrate = false;
};

// Per-dimension mean of frame score vectors.
std::vector<double> aggregate_frames(
    const std::vector<std::vector<double>>& frame_scores);

// Scores every frame with every concept model (in the ontology's concept
// order) and averages over frames.
ScoreVector video_representation(const std::string& video_id,
                                 const std::vector<FeatureVector>& frames,
                                 const std::vector<LinearModel>& models,
                                 const OntologyTree& tree);

double zero_shot_score(std::span<const double> scores,
                       const std::vector<std::string>& header,
                       const std::vector<ScoredId>& selected,
                       const ScoringOptions& options = {});

std::vector<ScoredId> retrieve(const ScoreMatrix& corpus,
                               const MatchResult& match,
                               const ScoringOptions& options = {});

struct RecountItem {
  std::string concept_id;
  std::string concept_name;
  std::string event_id;
  std::string event_name;
  double score = 0.0;

  friend bool operator==(const RecountItem&, const RecountItem&) = default;
};

std::vector<RecountItem> recount(std::span<const double> scores,
                                 const std::vector<std::string>& header,
                                 const OntologyTree& tree,
                                 std::size_t top_n = 5);

// Event relevance as the mean score of each event's own concepts; events
// with no concept in `header` are left out.
std::vector<ScoredId> events_by_concept_mean(
    std::span<const double> scores, const std::vector<std::string>& header,
    const OntologyTree& tree);

// Event relevance from a trained softmax head: class probabilities averaged
// over frames, keyed by each class model's target id.
std::vector<ScoredId> events_by_softmax(const SoftmaxHead& head,
                                        const std::vector<FeatureVector>& frames);

// Recounting restricted to the concepts of the `top_events` best events.
// `event_scores` defaults to events_by_concept_mean.
std::vector<RecountItem> recount_two_step(
    std::span<const double> scores, const std::vector<std::string>& header,
    const OntologyTree& tree, std::size_t top_events, std::size_t top_n,
    const std::vector<ScoredId>* event_scores = nullptr);

}  // namespace eventnet

#endif  // EVENTNET_SCORING_HPP_
