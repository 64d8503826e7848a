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

// Retrieval and classification metrics plus the comparison reports built on
// them.
//
// AP is the non-interpolated variant: the mean, over relevant items, of the
// precision at each relevant item's rank. Relevant items missing from the
// ranking contribute precision 0.

#ifndef EVENTNET_EVALUATION_HPP_
#define EVENTNET_EVALUATION_HPP_

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "eventnet/matching.hpp"
#include "eventnet/ontology.hpp"
#include "eventnet/scoring.hpp"
#include "eventnet/similarity.hpp"

namespace eventnet {

double average_precision(std::span<const std::string> ranking,
                         const IdSet& relevant);
double average_precision(const std::vector<ScoredId>& ranking,
                         const IdSet& relevant);

double mean_ap(std::span<const double> aps);

// Expected AP of a uniformly random permutation of `total` items of which
// `relevant` are relevant: (H_N + (R-1)/(N-1) * (N - H_N)) / N.
double expected_random_ap(std::size_t total, std::size_t relevant);

// Fraction of rows whose label is among the k highest scores; ties go to the
// lower label index.
double top_k_accuracy(const std::vector<std::vector<double>>& predictions,
                      std::span<const std::size_t> labels, std::size_t k);

struct EvalQuery {
  std::string id;
  std::string text;
  std::optional<IdSet> restrict_categories;
  IdSet relevant;
};

// JSON lines {"id", "text", "restrict": [...] (optional), "relevant": [...]}.
std::vector<EvalQuery> parse_queries(std::istream& in);
std::vector<EvalQuery> load_queries(const std::string& path);

struct EvalConfig {
  std::size_t event_count = 2;
  std::size_t concept_count = 15;
  // Apply each query's category restriction when it has one.
  bool use_restriction = true;
  ScoringOptions scoring;
};

struct EvalReport {
  EvalConfig config;
  std::map<std::string, double> per_query_ap;
  double map = 0.0;
};

EvalReport evaluate_queries(const OntologyTree& tree,
                            const std::vector<EvalQuery>& queries,
                            const ScoreMatrix& corpus,
                            const SimilarityBackend& backend,
                            const EvalConfig& config = {});

struct ComparisonReport {
  EvalReport unrestricted;
  EvalReport restricted;
};

// The same pipeline twice: once ignoring restrictions, once honoring them.
ComparisonReport compare_matching(const OntologyTree& tree,
                                  const std::vector<EvalQuery>& queries,
                                  const ScoreMatrix& corpus,
                                  const SimilarityBackend& backend,
                                  const EvalConfig& config = {});

struct SweepPoint {
  std::size_t concept_count = 0;
  double map = 0.0;
};

// `counts` must be >= 1 and strictly ascending.
std::vector<SweepPoint> concept_count_sweep(
    const OntologyTree& tree, const std::vector<EvalQuery>& queries,
    const ScoreMatrix& corpus, const SimilarityBackend& backend,
    std::span<const std::size_t> counts, const EvalConfig& config = {});

struct ClassificationReport {
  double top1 = 0.0;
  double top5 = 0.0;
  // Keyed by the top-level category of each video's true event.
  std::map<std::string, std::pair<double, double>> per_top_category;
};

// `predictions[v]` scores the events of `event_ids` (same order);
// `truth[v]` is the true event id of video v.
ClassificationReport classification_report(
    const OntologyTree& tree, const std::vector<std::string>& event_ids,
    const std::vector<std::vector<double>>& predictions,
    const std::vector<std::string>& truth);

std::string format_report_table(const EvalReport& report);
std::string format_comparison_table(const ComparisonReport& report);
// Tab-separated "concept_count<TAB>map" with a header row.
std::string format_sweep_tsv(const std::vector<SweepPoint>& sweep);

}  // namespace eventnet

#endif  // EVENTNET_EVALUATION_HPP_
