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

// Linear learning over precomputed frame features: the softmax event head
// with its multinomial logistic loss, hinge-loss concept classifiers,
// negative sampling for them, and stratified dataset splits.

#ifndef EVENTNET_MODELS_HPP_
#define EVENTNET_MODELS_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "eventnet/ontology.hpp"
#include "eventnet/rng.hpp"

namespace eventnet {

using FeatureVector = std::vector<double>;

// v / ||v||_2; the zero vector passes through. Throws on non-finite input.
FeatureVector l2_normalize(std::span<const double> v);

// Max-shifted softmax. Needs at least two finite logits.
std::vector<double> softmax(std::span<const double> logits);

// -(1/N) sum_n log p[n][labels[n]], computed through log-sum-exp.
double multinomial_loss(const std::vector<std::vector<double>>& logits,
                        std::span<const std::size_t> labels);
// d loss / d logits = (p - onehot) / N.
std::vector<std::vector<double>> multinomial_loss_gradient(
    const std::vector<std::vector<double>>& logits,
    std::span<const std::size_t> labels);

struct LinearModel {
  std::string target;
  std::vector<double> weights;
  double bias = 0.0;

  friend bool operator==(const LinearModel&, const LinearModel&) = default;
};

double predict(const LinearModel& model, std::span<const double> v);

struct HingeOptions {
  double lambda = 1e-4;
  int iterations = 500;
  // Step at iteration t (1-based) is step / t.
  double step = 0.1;
};

// lambda * ||w||^2 + mean hinge, labels +1 for positives and -1 for negatives.
double hinge_objective(const LinearModel& model,
                       const std::vector<FeatureVector>& positives,
                       const std::vector<FeatureVector>& negatives,
                       double lambda);

// Full-batch subgradient descent from w = 0, b = 0. A step that would raise
// the objective is halved (up to 30 times) and skipped if it still does, so
// the recorded objective never increases. `objective_trace`, when given,
// receives the objective before the first and after every iteration.
LinearModel train_linear(const std::vector<FeatureVector>& positives,
                         const std::vector<FeatureVector>& negatives,
                         const HingeOptions& options = {},
                         std::string target = {},
                         std::vector<double>* objective_trace = nullptr);

// One LinearModel per class; logits are the per-class predictions.
struct SoftmaxHead {
  std::vector<LinearModel> classes;

  std::vector<double> logits(std::span<const double> v) const;
  std::vector<double> probabilities(std::span<const double> v) const;
};

struct SoftmaxOptions {
  double lambda = 1e-4;
  int iterations = 300;
  double step = 1.0;
};

// Minimizes multinomial loss + lambda * ||W||^2 by full-batch gradient
// descent with the same non-increasing step guard as train_linear.
SoftmaxHead train_softmax_head(const std::vector<FeatureVector>& samples,
                               std::span<const std::size_t> labels,
                               const std::vector<std::string>& class_ids,
                               const SoftmaxOptions& options = {});

// Videos from concepts of other events, |positives| of them, drawn without
// replacement. Any video that also appears under a concept of the same event
// is excluded.
std::vector<std::string> sample_negatives(const OntologyTree& tree,
                                          const std::string& concept_id,
                                          const ConceptVideos& corpus,
                                          std::uint64_t seed);

struct SplitRatios {
  double train = 0.7;
  double validation = 0.1;
  double test = 0.2;
};

struct EventSplit {
  std::vector<std::string> train;
  std::vector<std::string> validation;
  std::vector<std::string> test;
};

struct DatasetSplit {
  std::map<std::string, EventSplit> per_event;

  std::set<std::string> train() const;
  std::set<std::string> validation() const;
  std::set<std::string> test() const;
};

// Stratified per event: validation = floor(n * r_val), test =
// floor(n * r_test), train gets the remainder. Each event is shuffled with a
// sub-seed derived from `seed` and the event id.
DatasetSplit split_dataset(
    const std::map<std::string, std::vector<std::string>>& videos_per_event,
    const SplitRatios& ratios = {}, std::uint64_t seed = kDefaultSeed,
    std::size_t min_videos = 3);

// Text model file, one block per model:
//   model <target>
//   dim <D>
//   weights <w1> ... <wD>
//   bias <b>
// Numbers use shortest round-trip formatting, so save/load is exact.
std::string save_models(const std::vector<LinearModel>& models);
std::vector<LinearModel> parse_models(std::istream& in);
std::vector<LinearModel> load_models(const std::string& path);

// Text feature file: per video a header line "<video_id> <frame_count> <D>"
// followed by frame_count lines of D numbers.
using FrameTable = std::map<std::string, std::vector<FeatureVector>>;
FrameTable parse_features(std::istream& in);
FrameTable load_features(const std::string& path);
std::string save_features(const FrameTable& frames);

// Shortest round-trip decimal form of `value`.
std::string format_double(double value);

}  // namespace eventnet

#endif  // EVENTNET_MODELS_HPP_
