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

#include "eventnet/evaluation.hpp"

#include <cstdio>
#include <fstream>
#include <unordered_set>

#include "eventnet/error.hpp"
#include "json.hpp"

namespace eventnet {

namespace {

std::string fixed4(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.4f", value);
  return buffer;
}

std::string pad(std::string text, std::size_t width) {
  if (text.size() < width) text.append(width - text.size(), ' ');
  return text;
}

std::string top_category_of(const OntologyTree& tree,
                            const std::string& event_id) {
  const auto path = tree.ancestors(event_id);
  return path.size() >= 2 ? path[path.size() - 2] : tree.root().id;
}

}  // namespace

double average_precision(std::span<const std::string> ranking,
                         const IdSet& relevant) {
  if (relevant.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "relevant set is empty",
                "relevant");
  }
  std::unordered_set<std::string> seen;
  double precision_sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t rank = 0; rank < ranking.size(); ++rank) {
    const std::string& id = ranking[rank];
    if (!relevant.count(id) || !seen.insert(id).second) continue;
    ++hits;
    precision_sum +=
        static_cast<double>(hits) / static_cast<double>(rank + 1);
  }
  return precision_sum / static_cast<double>(relevant.size());
}

double average_precision(const std::vector<ScoredId>& ranking,
                         const IdSet& relevant) {
  std::vector<std::string> ids;
  ids.reserve(ranking.size());
  for (const auto& item : ranking) ids.push_back(item.id);
  return average_precision(ids, relevant);
}

double mean_ap(std::span<const double> aps) {
  if (aps.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no APs to average", "aps");
  }
  double sum = 0.0;
  for (double ap : aps) sum += ap;
  return sum / static_cast<double>(aps.size());
}

double expected_random_ap(std::size_t total, std::size_t relevant) {
  if (relevant == 0 || relevant > total) {
    throw Error(ErrorCode::kInvalidArgument,
                "need 1 <= relevant <= total", "relevant");
  }
  const double n = static_cast<double>(total);
  if (total == 1) return 1.0;
  double harmonic = 0.0;
  for (std::size_t r = 1; r <= total; ++r) harmonic += 1.0 / static_cast<double>(r);
  const double r = static_cast<double>(relevant);
  return (harmonic + (r - 1.0) / (n - 1.0) * (n - harmonic)) / n;
}

double top_k_accuracy(const std::vector<std::vector<double>>& predictions,
                      std::span<const std::size_t> labels, std::size_t k) {
  if (k < 1) {
    throw Error(ErrorCode::kInvalidArgument, "k must be >= 1", "k");
  }
  if (predictions.empty() || predictions.size() != labels.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "need one label per prediction row", "labels");
  }
  std::size_t correct = 0;
  for (std::size_t v = 0; v < predictions.size(); ++v) {
    const auto& row = predictions[v];
    const std::size_t label = labels[v];
    if (label >= row.size()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "label " + std::to_string(label) + " out of range",
                  "labels");
    }
    // Rank of the true label under (score desc, index asc).
    std::size_t ahead = 0;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (row[c] > row[label] || (row[c] == row[label] && c < label)) ++ahead;
    }
    if (ahead < k) ++correct;
  }
  return static_cast<double>(correct) /
         static_cast<double>(predictions.size());
}

std::vector<EvalQuery> parse_queries(std::istream& in) {
  using nlohmann::json;
  std::vector<EvalQuery> queries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json record = json::parse(line);
      EvalQuery q;
      q.id = record.at("id").get<std::string>();
      q.text = record.at("text").get<std::string>();
      if (record.contains("restrict") && !record.at("restrict").is_null()) {
        q.restrict_categories =
            record.at("restrict").get<std::set<std::string>>();
      }
      q.relevant = record.at("relevant").get<std::set<std::string>>();
      queries.push_back(std::move(q));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kParse,
                  "queries line " + std::to_string(line_no) + ": " + e.what(),
                  "line " + std::to_string(line_no));
    }
  }
  return queries;
}

std::vector<EvalQuery> load_queries(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open queries '" + path + "'", path);
  }
  return parse_queries(in);
}

EvalReport evaluate_queries(const OntologyTree& tree,
                            const std::vector<EvalQuery>& queries,
                            const ScoreMatrix& corpus,
                            const SimilarityBackend& backend,
                            const EvalConfig& config) {
  EvalReport report;
  report.config = config;
  std::vector<double> aps;
  for (const auto& q : queries) {
    MatchQuery match_query;
    match_query.text = q.text;
    if (config.use_restriction) {
      match_query.restrict_categories = q.restrict_categories;
    }
    match_query.event_count = config.event_count;
    match_query.concept_count = config.concept_count;
    const MatchResult match = match_concepts(tree, match_query, backend);
    const auto ranking = retrieve(corpus, match, config.scoring);
    const double ap = average_precision(ranking, q.relevant);
    if (!report.per_query_ap.emplace(q.id, ap).second) {
      throw Error(ErrorCode::kValidation, "duplicate query id '" + q.id + "'",
                  q.id);
    }
    aps.push_back(ap);
  }
  report.map = mean_ap(aps);
  return report;
}

ComparisonReport compare_matching(const OntologyTree& tree,
                                  const std::vector<EvalQuery>& queries,
                                  const ScoreMatrix& corpus,
                                  const SimilarityBackend& backend,
                                  const EvalConfig& config) {
  EvalConfig without = config;
  without.use_restriction = false;
  EvalConfig with = config;
  with.use_restriction = true;
  return {evaluate_queries(tree, queries, corpus, backend, without),
          evaluate_queries(tree, queries, corpus, backend, with)};
}

std::vector<SweepPoint> concept_count_sweep(
    const OntologyTree& tree, const std::vector<EvalQuery>& queries,
    const ScoreMatrix& corpus, const SimilarityBackend& backend,
    std::span<const std::size_t> counts, const EvalConfig& config) {
  if (counts.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no concept counts given",
                "counts");
  }
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] < 1) {
      throw Error(ErrorCode::kInvalidArgument, "concept counts must be >= 1",
                  "counts");
    }
    if (i > 0 && counts[i] <= counts[i - 1]) {
      throw Error(ErrorCode::kInvalidArgument,
                  "concept counts must be strictly ascending (duplicate or "
                  "out-of-order " +
                      std::to_string(counts[i]) + ")",
                  "counts");
    }
  }
  std::vector<SweepPoint> sweep;
  for (std::size_t count : counts) {
    EvalConfig point = config;
    point.concept_count = count;
    sweep.push_back(
        {count, evaluate_queries(tree, queries, corpus, backend, point).map});
  }
  return sweep;
}

ClassificationReport classification_report(
    const OntologyTree& tree, const std::vector<std::string>& event_ids,
    const std::vector<std::vector<double>>& predictions,
    const std::vector<std::string>& truth) {
  if (predictions.size() != truth.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "need one true label per prediction row", "truth");
  }
  std::map<std::string, std::size_t> label_of;
  for (std::size_t i = 0; i < event_ids.size(); ++i) {
    label_of.emplace(event_ids[i], i);
  }
  std::vector<std::size_t> labels;
  std::map<std::string, std::vector<std::size_t>> rows_by_category;
  for (std::size_t v = 0; v < truth.size(); ++v) {
    const auto it = label_of.find(truth[v]);
    if (it == label_of.end()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "label '" + truth[v] + "' is not a predicted event",
                  truth[v]);
    }
    labels.push_back(it->second);
    rows_by_category[top_category_of(tree, truth[v])].push_back(v);
  }
  ClassificationReport report;
  report.top1 = top_k_accuracy(predictions, labels, 1);
  report.top5 = top_k_accuracy(predictions, labels, 5);
  for (const auto& [category, rows] : rows_by_category) {
    std::vector<std::vector<double>> subset;
    std::vector<std::size_t> subset_labels;
    for (std::size_t v : rows) {
      subset.push_back(predictions[v]);
      subset_labels.push_back(labels[v]);
    }
    report.per_top_category[category] = {
        top_k_accuracy(subset, subset_labels, 1),
        top_k_accuracy(subset, subset_labels, 5)};
  }
  return report;
}

std::string format_report_table(const EvalReport& report) {
  std::string out = pad("query", 24) + "AP\n";
  for (const auto& [query, ap] : report.per_query_ap) {
    out += pad(query, 24) + fixed4(ap) + "\n";
  }
  out += pad("mAP", 24) + fixed4(report.map) + "\n";
  return out;
}

std::string format_comparison_table(const ComparisonReport& report) {
  std::string out = pad("matching", 40) + "mAP\n";
  out += pad("without leveraging ontology structure", 40) +
         fixed4(report.unrestricted.map) + "\n";
  out += pad("with leveraging ontology structure", 40) +
         fixed4(report.restricted.map) + "\n";
  return out;
}

std::string format_sweep_tsv(const std::vector<SweepPoint>& sweep) {
  std::string out = "concept_count\tmap\n";
  for (const auto& p : sweep) {
    out += std::to_string(p.concept_count) + "\t" + format_double(p.map) + "\n";
  }
  return out;
}

}  // namespace eventnet
