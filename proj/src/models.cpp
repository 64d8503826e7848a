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

#include "eventnet/models.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "eventnet/error.hpp"

namespace eventnet {

namespace {

constexpr int kMaxHalvings = 30;

void require_finite(std::span<const double> values, const char* what) {
  for (double x : values) {
    if (!std::isfinite(x)) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string(what) + " has a non-finite entry", what);
    }
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

double squared_norm(std::span<const double> v) { return dot(v, v); }

// -log softmax(x)[label], evaluated entirely in max-shifted coordinates.
double negative_log_probability(std::span<const double> x, std::size_t label) {
  const double peak = *std::max_element(x.begin(), x.end());
  double sum = 0.0;
  for (double v : x) sum += std::exp(v - peak);
  return std::log(sum) - (x[label] - peak);
}

void check_batch(const std::vector<std::vector<double>>& logits,
                 std::span<const std::size_t> labels) {
  if (logits.empty() || logits.size() != labels.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "batch needs one label per logit row and at least one row",
                "labels");
  }
  const std::size_t classes = logits.front().size();
  if (classes < 2) {
    throw Error(ErrorCode::kInvalidArgument, "need at least two classes",
                "logits");
  }
  for (std::size_t n = 0; n < logits.size(); ++n) {
    if (logits[n].size() != classes) {
      throw Error(ErrorCode::kInvalidArgument, "ragged logit rows", "logits");
    }
    require_finite(logits[n], "logits");
    if (labels[n] >= classes) {
      throw Error(ErrorCode::kInvalidArgument,
                  "label " + std::to_string(labels[n]) + " out of range",
                  "labels");
    }
  }
}

std::size_t common_dimension(const std::vector<FeatureVector>& a,
                             const std::vector<FeatureVector>& b) {
  const std::size_t d = a.front().size();
  for (const auto* set : {&a, &b}) {
    for (const auto& v : *set) {
      if (v.size() != d) {
        throw Error(ErrorCode::kInvalidArgument, "feature dimension mismatch",
                    "features");
      }
    }
  }
  return d;
}

std::string read_token(std::istream& in, const char* what) {
  std::string token;
  if (!(in >> token)) {
    throw Error(ErrorCode::kParse, std::string("unexpected end of input, ") +
                                       "expected " + what);
  }
  return token;
}

double parse_double(const std::string& token) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw Error(ErrorCode::kParse, "bad number '" + token + "'", token);
  }
  return value;
}

std::size_t parse_size(const std::string& token) {
  std::size_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw Error(ErrorCode::kParse, "bad count '" + token + "'", token);
  }
  return value;
}

void expect_keyword(std::istream& in, const char* keyword) {
  const std::string token = read_token(in, keyword);
  if (token != keyword) {
    throw Error(ErrorCode::kParse,
                "expected '" + std::string(keyword) + "', got '" + token + "'",
                token);
  }
}

}  // namespace

std::string format_double(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

FeatureVector l2_normalize(std::span<const double> v) {
  require_finite(v, "feature vector");
  FeatureVector out(v.begin(), v.end());
  const double norm = std::sqrt(squared_norm(v));
  if (norm == 0.0) return out;
  for (double& x : out) x /= norm;
  return out;
}

std::vector<double> softmax(std::span<const double> logits) {
  if (logits.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "need at least two logits",
                "logits");
  }
  require_finite(logits, "logits");
  const double peak = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < logits.size(); ++k) {
    out[k] = std::exp(logits[k] - peak);
    sum += out[k];
  }
  for (double& p : out) p /= sum;
  return out;
}

double multinomial_loss(const std::vector<std::vector<double>>& logits,
                        std::span<const std::size_t> labels) {
  check_batch(logits, labels);
  // Running mean: identical per-sample terms give that term back exactly.
  double mean = 0.0;
  for (std::size_t n = 0; n < logits.size(); ++n) {
    const double term = negative_log_probability(logits[n], labels[n]);
    mean += (term - mean) / static_cast<double>(n + 1);
  }
  return mean;
}

std::vector<std::vector<double>> multinomial_loss_gradient(
    const std::vector<std::vector<double>>& logits,
    std::span<const std::size_t> labels) {
  check_batch(logits, labels);
  const double scale = 1.0 / static_cast<double>(logits.size());
  std::vector<std::vector<double>> grad;
  grad.reserve(logits.size());
  for (std::size_t n = 0; n < logits.size(); ++n) {
    auto row = softmax(logits[n]);
    row[labels[n]] -= 1.0;
    for (double& g : row) g *= scale;
    grad.push_back(std::move(row));
  }
  return grad;
}

double predict(const LinearModel& model, std::span<const double> v) {
  if (v.size() != model.weights.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "model '" + model.target + "' expects dimension " +
                    std::to_string(model.weights.size()) + ", got " +
                    std::to_string(v.size()),
                model.target);
  }
  return dot(model.weights, v) + model.bias;
}

double hinge_objective(const LinearModel& model,
                       const std::vector<FeatureVector>& positives,
                       const std::vector<FeatureVector>& negatives,
                       double lambda) {
  double hinge = 0.0;
  for (const auto& x : positives) {
    hinge += std::max(0.0, 1.0 - predict(model, x));
  }
  for (const auto& x : negatives) {
    hinge += std::max(0.0, 1.0 + predict(model, x));
  }
  const double n = static_cast<double>(positives.size() + negatives.size());
  return lambda * squared_norm(model.weights) + hinge / n;
}

LinearModel train_linear(const std::vector<FeatureVector>& positives,
                         const std::vector<FeatureVector>& negatives,
                         const HingeOptions& options, std::string target,
                         std::vector<double>* objective_trace) {
  if (positives.empty() || negatives.empty()) {
    throw Error(ErrorCode::kInsufficientData,
                "both classes need at least one sample", target);
  }
  const std::size_t dim = common_dimension(positives, negatives);
  for (const auto* set : {&positives, &negatives}) {
    for (const auto& v : *set) require_finite(v, "feature vector");
  }
  LinearModel model{std::move(target), std::vector<double>(dim, 0.0), 0.0};
  const double n = static_cast<double>(positives.size() + negatives.size());
  double objective =
      hinge_objective(model, positives, negatives, options.lambda);
  if (objective_trace) objective_trace->assign(1, objective);

  std::vector<double> grad_w(dim);
  for (int t = 1; t <= options.iterations; ++t) {
    for (std::size_t i = 0; i < dim; ++i) {
      grad_w[i] = 2.0 * options.lambda * model.weights[i];
    }
    double grad_b = 0.0;
    auto accumulate = [&](const std::vector<FeatureVector>& set, double y) {
      for (const auto& x : set) {
        if (y * predict(model, x) < 1.0) {
          for (std::size_t i = 0; i < dim; ++i) grad_w[i] -= y * x[i] / n;
          grad_b -= y / n;
        }
      }
    };
    accumulate(positives, 1.0);
    accumulate(negatives, -1.0);

    double step = options.step / static_cast<double>(t);
    for (int attempt = 0; attempt <= kMaxHalvings; ++attempt, step /= 2.0) {
      LinearModel candidate = model;
      for (std::size_t i = 0; i < dim; ++i) {
        candidate.weights[i] -= step * grad_w[i];
      }
      candidate.bias -= step * grad_b;
      const double value =
          hinge_objective(candidate, positives, negatives, options.lambda);
      if (value <= objective) {
        model = std::move(candidate);
        objective = value;
        break;
      }
    }
    if (objective_trace) objective_trace->push_back(objective);
  }
  return model;
}

std::vector<double> SoftmaxHead::logits(std::span<const double> v) const {
  std::vector<double> out;
  out.reserve(classes.size());
  for (const auto& model : classes) out.push_back(predict(model, v));
  return out;
}

std::vector<double> SoftmaxHead::probabilities(
    std::span<const double> v) const {
  return softmax(logits(v));
}

SoftmaxHead train_softmax_head(const std::vector<FeatureVector>& samples,
                               std::span<const std::size_t> labels,
                               const std::vector<std::string>& class_ids,
                               const SoftmaxOptions& options) {
  if (samples.empty() || samples.size() != labels.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "need one label per sample and at least one sample", "labels");
  }
  if (class_ids.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "need at least two classes",
                "classes");
  }
  const std::size_t dim = common_dimension(samples, samples);
  SoftmaxHead head;
  for (const auto& id : class_ids) {
    head.classes.push_back({id, std::vector<double>(dim, 0.0), 0.0});
  }
  auto objective_of = [&](const SoftmaxHead& h) {
    std::vector<std::vector<double>> logits;
    logits.reserve(samples.size());
    for (const auto& x : samples) logits.push_back(h.logits(x));
    double penalty = 0.0;
    for (const auto& m : h.classes) penalty += squared_norm(m.weights);
    return multinomial_loss(logits, labels) + options.lambda * penalty;
  };

  double objective = objective_of(head);
  for (int t = 1; t <= options.iterations; ++t) {
    std::vector<std::vector<double>> logits;
    logits.reserve(samples.size());
    for (const auto& x : samples) logits.push_back(head.logits(x));
    const auto grad = multinomial_loss_gradient(logits, labels);

    SoftmaxHead direction = head;
    for (std::size_t k = 0; k < head.classes.size(); ++k) {
      auto& g = direction.classes[k];
      for (std::size_t i = 0; i < dim; ++i) {
        g.weights[i] = 2.0 * options.lambda * head.classes[k].weights[i];
      }
      g.bias = 0.0;
      for (std::size_t n = 0; n < samples.size(); ++n) {
        for (std::size_t i = 0; i < dim; ++i) {
          g.weights[i] += grad[n][k] * samples[n][i];
        }
        g.bias += grad[n][k];
      }
    }

    double step = options.step;
    for (int attempt = 0; attempt <= kMaxHalvings; ++attempt, step /= 2.0) {
      SoftmaxHead candidate = head;
      for (std::size_t k = 0; k < head.classes.size(); ++k) {
        for (std::size_t i = 0; i < dim; ++i) {
          candidate.classes[k].weights[i] -=
              step * direction.classes[k].weights[i];
        }
        candidate.classes[k].bias -= step * direction.classes[k].bias;
      }
      const double value = objective_of(candidate);
      if (value <= objective) {
        head = std::move(candidate);
        objective = value;
        break;
      }
    }
  }
  return head;
}

std::vector<std::string> sample_negatives(const OntologyTree& tree,
                                          const std::string& concept_id,
                                          const ConceptVideos& corpus,
                                          std::uint64_t seed) {
  const std::string& home_event = tree.event_of_concept(concept_id);
  const auto positives_it = corpus.find(concept_id);
  const std::size_t wanted =
      positives_it == corpus.end() ? 0 : positives_it->second.size();

  std::unordered_set<std::string> same_event;
  std::set<std::string> other_event;
  for (const auto& [id, videos] : corpus) {
    const bool home = tree.event_of_concept(id) == home_event;
    for (const auto& v : videos) {
      if (home) {
        same_event.insert(v);
      } else {
        other_event.insert(v);
      }
    }
  }
  std::vector<std::string> pool;
  for (const auto& v : other_event) {
    if (!same_event.count(v)) pool.push_back(v);
  }
  if (pool.size() < wanted) {
    throw Error(ErrorCode::kInsufficientData,
                "concept '" + concept_id + "' needs " + std::to_string(wanted) +
                    " negatives but only " + std::to_string(pool.size()) +
                    " videos of other events exist",
                concept_id);
  }
  Rng rng(seed ^ stable_hash(concept_id));
  // Partial Fisher-Yates: the first `wanted` slots become the sample.
  for (std::size_t i = 0; i < wanted; ++i) {
    const std::size_t j = i + rng.uniform_index(pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(wanted);
  return pool;
}

std::set<std::string> DatasetSplit::train() const {
  std::set<std::string> out;
  for (const auto& [event, part] : per_event) {
    out.insert(part.train.begin(), part.train.end());
  }
  return out;
}

std::set<std::string> DatasetSplit::validation() const {
  std::set<std::string> out;
  for (const auto& [event, part] : per_event) {
    out.insert(part.validation.begin(), part.validation.end());
  }
  return out;
}

std::set<std::string> DatasetSplit::test() const {
  std::set<std::string> out;
  for (const auto& [event, part] : per_event) {
    out.insert(part.test.begin(), part.test.end());
  }
  return out;
}

DatasetSplit split_dataset(
    const std::map<std::string, std::vector<std::string>>& videos_per_event,
    const SplitRatios& ratios, std::uint64_t seed, std::size_t min_videos) {
  if (ratios.train < 0 || ratios.validation < 0 || ratios.test < 0 ||
      std::abs(ratios.train + ratios.validation + ratios.test - 1.0) > 1e-9) {
    throw Error(ErrorCode::kInvalidArgument,
                "split ratios must be non-negative and sum to 1", "ratios");
  }
  DatasetSplit split;
  std::unordered_set<std::string> seen;
  for (const auto& [event, videos] : videos_per_event) {
    if (videos.size() < min_videos) {
      throw Error(ErrorCode::kInsufficientData,
                  "event '" + event + "' has " + std::to_string(videos.size()) +
                      " videos, fewer than " + std::to_string(min_videos),
                  event);
    }
    for (const auto& v : videos) {
      if (!seen.insert(v).second) {
        throw Error(ErrorCode::kValidation,
                    "video '" + v + "' appears more than once", v);
      }
    }
    std::vector<std::string> order(videos.begin(), videos.end());
    std::sort(order.begin(), order.end());
    Rng rng(seed ^ stable_hash(event));
    rng.shuffle(order);

    const double n = static_cast<double>(order.size());
    // The epsilon absorbs representation error in ratios like 0.3.
    const auto n_val =
        static_cast<std::size_t>(std::floor(n * ratios.validation + 1e-9));
    const auto n_test =
        static_cast<std::size_t>(std::floor(n * ratios.test + 1e-9));
    const std::size_t n_train = order.size() - n_val - n_test;

    EventSplit part;
    part.train.assign(order.begin(), order.begin() + n_train);
    part.validation.assign(order.begin() + n_train,
                           order.begin() + n_train + n_val);
    part.test.assign(order.begin() + n_train + n_val, order.end());
    split.per_event.emplace(event, std::move(part));
  }
  return split;
}

std::string save_models(const std::vector<LinearModel>& models) {
  std::string out;
  for (const auto& m : models) {
    out += "model " + m.target + "\n";
    out += "dim " + std::to_string(m.weights.size()) + "\n";
    out += "weights";
    for (double w : m.weights) out += " " + format_double(w);
    out += "\nbias " + format_double(m.bias) + "\n";
  }
  return out;
}

std::vector<LinearModel> parse_models(std::istream& in) {
  std::vector<LinearModel> models;
  std::string keyword;
  while (in >> keyword) {
    if (keyword != "model") {
      throw Error(ErrorCode::kParse, "expected 'model', got '" + keyword + "'",
                  keyword);
    }
    LinearModel m;
    m.target = read_token(in, "model target");
    expect_keyword(in, "dim");
    const std::size_t dim = parse_size(read_token(in, "dimension"));
    expect_keyword(in, "weights");
    m.weights.reserve(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      m.weights.push_back(parse_double(read_token(in, "weight")));
    }
    expect_keyword(in, "bias");
    m.bias = parse_double(read_token(in, "bias"));
    require_finite(m.weights, "model weights");
    models.push_back(std::move(m));
  }
  return models;
}

std::vector<LinearModel> load_models(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open model file '" + path + "'", path);
  }
  return parse_models(in);
}

FrameTable parse_features(std::istream& in) {
  FrameTable table;
  std::string video;
  while (in >> video) {
    const std::size_t frames = parse_size(read_token(in, "frame count"));
    const std::size_t dim = parse_size(read_token(in, "dimension"));
    auto& rows = table[video];
    if (!rows.empty()) {
      throw Error(ErrorCode::kValidation,
                  "video '" + video + "' appears twice in feature file", video);
    }
    for (std::size_t f = 0; f < frames; ++f) {
      FeatureVector row;
      row.reserve(dim);
      for (std::size_t i = 0; i < dim; ++i) {
        row.push_back(parse_double(read_token(in, "feature value")));
      }
      require_finite(row, "feature vector");
      rows.push_back(std::move(row));
    }
  }
  return table;
}

FrameTable load_features(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open feature file '" + path + "'",
                path);
  }
  return parse_features(in);
}

std::string save_features(const FrameTable& frames) {
  std::string out;
  for (const auto& [video, rows] : frames) {
    const std::size_t dim = rows.empty() ? 0 : rows.front().size();
    out += video + " " + std::to_string(rows.size()) + " " +
           std::to_string(dim) + "\n";
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out += ' ';
        out += format_double(row[i]);
      }
      out += '\n';
    }
  }
  return out;
}

}  // namespace eventnet
