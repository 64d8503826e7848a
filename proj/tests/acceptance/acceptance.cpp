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

// Runs every primary acceptance criterion and prints one PASS/FAIL line per
// criterion. Exit status is the number of failed criteria (capped at 1).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "eventnet/discovery.hpp"
#include "eventnet/error.hpp"
#include "eventnet/evaluation.hpp"
#include "eventnet/matching.hpp"
#include "eventnet/models.hpp"
#include "eventnet/ontology.hpp"
#include "eventnet/rng.hpp"
#include "eventnet/scoring.hpp"
#include "eventnet/serialize.hpp"
#include "eventnet/service.hpp"
#include "eventnet/similarity.hpp"
#include "eventnet/synthetic.hpp"
#include "httplib.h"

using namespace eventnet;

namespace {

std::string data_path(const std::string& name) {
  return std::string(EVENTNET_DATA_DIR) + "/" + name;
}

// Collects the first few failure messages of one criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    ++total_;
    if (ok) return;
    ++failed_;
    if (messages_.size() < 5) messages_.push_back(what);
  }
  bool ok() const { return failed_ == 0; }
  std::string summary() const {
    std::string out = std::to_string(total_ - failed_) + "/" +
                      std::to_string(total_) + " checks";
    for (const auto& m : messages_) out += "; " + m;
    return out;
  }

 private:
  std::size_t total_ = 0;
  std::size_t failed_ = 0;
  std::vector<std::string> messages_;
};

std::string num(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.6g", v);
  return buffer;
}

// ---------------------------------------------------------------- metrics

double oracle_ap(const std::vector<std::string>& ranking,
                 const IdSet& relevant) {
  double sum = 0.0;
  for (std::size_t cut = 1; cut <= ranking.size(); ++cut) {
    if (!relevant.count(ranking[cut - 1])) continue;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < cut; ++i) hits += relevant.count(ranking[i]);
    sum += static_cast<double>(hits) / static_cast<double>(cut);
  }
  return sum / static_cast<double>(relevant.size());
}

double plain_mean(const std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double oracle_mean(const std::vector<double>& values) {
  long double sum = 0.0L;
  for (double v : values) sum += v;
  return static_cast<double>(sum / static_cast<long double>(values.size()));
}

// Position of `label` after sorting labels by score (desc), then index.
bool oracle_in_top_k(const std::vector<double>& scores, std::size_t label,
                     std::size_t k) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });
  const auto pos = std::find(order.begin(), order.end(), label) - order.begin();
  return static_cast<std::size_t>(pos) < k;
}

std::vector<std::string> item_ids(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("i" + std::to_string(i));
  return out;
}

void metric_oracles(Check& check) {
  // Exhaustive: every relevant subset and every ordering of up to 6 items.
  for (std::size_t n = 1; n <= 6; ++n) {
    for (std::size_t mask = 1; mask < (1u << n); ++mask) {
      auto ranking = item_ids(n);
      IdSet relevant;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask & (1u << i)) relevant.insert(ranking[i]);
      }
      std::vector<double> aps, oracle_aps;
      do {
        const double ap = average_precision(ranking, relevant);
        oracle_aps.push_back(oracle_ap(ranking, relevant));
        check.expect(ap == oracle_aps.back(),
                     "exhaustive AP n=" + std::to_string(n));
        aps.push_back(ap);
      } while (std::next_permutation(ranking.begin(), ranking.end()));
      check.expect(mean_ap(aps) == plain_mean(oracle_aps),
                   "exhaustive mAP n=" + std::to_string(n));
      check.expect(std::abs(expected_random_ap(n, relevant.size()) -
                            oracle_mean(aps)) <= 1e-12,
                   "expected random AP n=" + std::to_string(n));
    }
  }
  // Exhaustive top-k: every score vector over {0,1,2} (ties included).
  for (std::size_t c = 1; c <= 6; ++c) {
    std::size_t combos = 1;
    for (std::size_t i = 0; i < c; ++i) combos *= 3;
    for (std::size_t code = 0; code < combos; ++code) {
      std::vector<double> scores(c);
      for (std::size_t i = 0, x = code; i < c; ++i, x /= 3) {
        scores[i] = static_cast<double>(x % 3);
      }
      for (std::size_t label = 0; label < c; ++label) {
        for (std::size_t k = 1; k <= c; ++k) {
          const std::vector<std::size_t> labels{label};
          const double expected = oracle_in_top_k(scores, label, k) ? 1.0 : 0.0;
          check.expect(top_k_accuracy({scores}, labels, k) == expected,
                       "exhaustive top-k");
        }
      }
    }
  }
  // 1,000 random instances of up to 100 items.
  Rng rng(kDefaultSeed);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(100);
    auto ranking = item_ids(n);
    rng.shuffle(ranking);
    IdSet relevant;
    for (const auto& id : ranking) {
      if (rng.uniform01() < 0.3) relevant.insert(id);
    }
    if (rng.uniform_index(5) == 0) relevant.insert("absent");
    if (relevant.empty()) relevant.insert(ranking[rng.uniform_index(n)]);
    check.expect(std::abs(average_precision(ranking, relevant) -
                          oracle_ap(ranking, relevant)) <= 1e-12,
                 "random AP");

    std::vector<double> aps(n);
    for (double& a : aps) a = rng.uniform01();
    check.expect(std::abs(mean_ap(aps) - oracle_mean(aps)) <= 1e-12,
                 "random mAP");

    const std::size_t classes = 2 + rng.uniform_index(20);
    std::vector<std::vector<double>> preds(n, std::vector<double>(classes));
    std::vector<std::size_t> labels(n);
    for (std::size_t v = 0; v < n; ++v) {
      for (double& x : preds[v]) x = std::round(rng.uniform01() * 10.0);
      labels[v] = rng.uniform_index(classes);
    }
    const std::size_t k = 1 + rng.uniform_index(classes);
    std::size_t hits = 0;
    for (std::size_t v = 0; v < n; ++v) {
      hits += oracle_in_top_k(preds[v], labels[v], k);
    }
    check.expect(std::abs(top_k_accuracy(preds, labels, k) -
                          static_cast<double>(hits) / static_cast<double>(n)) <=
                     1e-12,
                 "random top-k");
  }
}

// ----------------------------------------------------------- softmax / loss

void softmax_suite(Check& check) {
  Rng rng(kDefaultSeed + 1);
  const double scales[] = {1.0, 10.0, 100.0, 1000.0};
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t c = 2 + rng.uniform_index(99);
    const double scale = scales[trial % 4];
    std::vector<double> x(c);
    for (double& v : x) v = (2.0 * rng.uniform01() - 1.0) * scale;
    const auto p = softmax(x);
    bool finite = true;
    for (double v : p) finite = finite && std::isfinite(v) && v >= 0.0;
    check.expect(finite, "non-finite softmax at scale " + num(scale));
    check.expect(std::abs(std::accumulate(p.begin(), p.end(), 0.0) - 1.0) <=
                     1e-9,
                 "softmax sum at scale " + num(scale));
    const double shift = (2.0 * rng.uniform01() - 1.0) * 100.0;
    std::vector<double> shifted(x);
    for (double& v : shifted) v += shift;
    const auto q = softmax(shifted);
    double worst = 0.0;
    for (std::size_t i = 0; i < c; ++i) worst = std::max(worst, std::abs(p[i] - q[i]));
    check.expect(worst <= 1e-12, "shift invariance off by " + num(worst));
  }
  for (std::size_t c = 2; c <= 500; ++c) {
    const double value = (2.0 * rng.uniform01() - 1.0) * 50.0;
    const std::vector<std::vector<double>> logits{std::vector<double>(c, value)};
    const std::vector<std::size_t> label{rng.uniform_index(c)};
    check.expect(multinomial_loss(logits, label) == std::log(static_cast<double>(c)),
                 "uniform loss for C=" + std::to_string(c));
  }
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(5);
    const std::size_t c = 2 + rng.uniform_index(10);
    std::vector<std::vector<double>> logits(n, std::vector<double>(c));
    std::vector<std::size_t> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (double& v : logits[i]) v = (2.0 * rng.uniform01() - 1.0) * 5.0;
      labels[i] = rng.uniform_index(c);
    }
    const auto grad = multinomial_loss_gradient(logits, labels);
    constexpr double h = 1e-6;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < c; ++j) {
        auto up = logits, down = logits;
        up[i][j] += h;
        down[i][j] -= h;
        const double numeric =
            (multinomial_loss(up, labels) - multinomial_loss(down, labels)) /
            (2.0 * h);
        check.expect(std::abs(numeric - grad[i][j]) <= 1e-5,
                     "gradient off by " + num(std::abs(numeric - grad[i][j])));
      }
    }
  }
}

// ----------------------------------------------------------------- matching

void matching_laws(Check& check) {
  Rng rng(kDefaultSeed + 2);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::uint64_t tree_seed = rng.next();
    Rng tree_rng(tree_seed);
    const OntologyTree tree = synthetic::random_tree(tree_rng);
    const OverlapBackend backend = OverlapBackend::from_ontology(tree);

    auto categories = tree.ids_of_kind(NodeKind::kCategory);
    rng.shuffle(categories);
    IdSet restriction(categories.begin(),
                      categories.begin() + 1 + rng.uniform_index(3));
    MatchQuery q{synthetic::random_phrase(rng), restriction,
                 1 + rng.uniform_index(3), 1 + rng.uniform_index(20)};
    const IdSet allowed = events_under(tree, restriction);

    std::string first, second;
    try {
      const MatchResult r = match_concepts(tree, q, backend);
      bool inside = true;
      for (const auto& e : r.matched_events) inside = inside && allowed.count(e.id);
      for (const auto& c : r.matched_concepts) {
        inside = inside && allowed.count(tree.event_of_concept(c.id));
      }
      for (const auto& e : rank_events(tree, q, backend)) {
        inside = inside && allowed.count(e.id);
      }
      check.expect(inside, "restricted result escapes events_under");
      first = canonical(to_json(r));
    } catch (const Error& e) {
      check.expect(e.code() == ErrorCode::kEmptyPool && allowed.empty(),
                   std::string("unexpected error: ") + e.what());
      first = canonical(to_json(e));
    }
    // Rebuild every input from scratch and compare bytes.
    Rng again(tree_seed);
    const OntologyTree tree2 = synthetic::random_tree(again);
    const OverlapBackend backend2 = OverlapBackend::from_ontology(tree2);
    try {
      second = canonical(to_json(match_concepts(tree2, q, backend2)));
    } catch (const Error& e) {
      second = canonical(to_json(e));
    }
    check.expect(first == second, "non-deterministic MatchResult");
  }
}

// ------------------------------------------------------------ sample table

void sample_table(Check& check) {
  const OntologyTree tree = load_ontology(data_path("sample.ont"));
  const auto backend = make_backend({}, tree);
  MatchQuery q;
  q.text = "wedding shower";
  const auto open = rank_events(tree, q, *backend);
  const bool in_top2 = open.size() >= 2 && (open[0].id == "ev.take_a_shower" ||
                                            open[1].id == "ev.take_a_shower");
  check.expect(in_top2, "unrestricted top 2 lacks take a shower");
  q.restrict_categories = IdSet{"cat.family_life"};
  const auto restricted = rank_events(tree, q, *backend);
  check.expect(std::none_of(restricted.begin(), restricted.end(),
                            [](const ScoredId& s) {
                              return s.id == "ev.take_a_shower";
                            }),
               "restricted pool still holds take a shower");
  check.expect(!restricted.empty() && restricted[0].id == "ev.wedding_ceremony",
               "restricted first is not wedding ceremony");
}

// --------------------------------------------------------- synthetic claims

double random_map(const synthetic::Benchmark& b) {
  std::vector<double> aps;
  for (const auto& q : b.queries) {
    aps.push_back(expected_random_ap(b.corpus.video_count(), q.relevant.size()));
  }
  return oracle_mean(aps);
}

std::string ambiguity(Check& check) {
  const auto b = synthetic::ambiguity_benchmark();
  check.expect(b.corpus.video_count() == 2000, "corpus is not 2,000 videos");
  check.expect(b.queries.size() == 20, "benchmark is not 20 queries");
  const OverlapBackend backend = OverlapBackend::from_ontology(b.tree);
  const auto report = compare_matching(b.tree, b.queries, b.corpus, backend);
  const double chance = random_map(b);
  check.expect(report.restricted.map >= report.unrestricted.map,
               "restricted below unrestricted");
  check.expect(report.unrestricted.map >= 5.0 * chance,
               "unrestricted below 5x random");
  return "unrestricted " + num(report.unrestricted.map) + ", restricted " +
         num(report.restricted.map) + ", random " + num(chance);
}

std::string concept_curve(Check& check) {
  const auto b = synthetic::concept_count_benchmark();
  const OverlapBackend backend = OverlapBackend::from_ontology(b.tree);
  const std::vector<std::size_t> counts{1, 3, 30};
  const auto sweep =
      concept_count_sweep(b.tree, b.queries, b.corpus, backend, counts);
  check.expect(sweep[1].map > sweep[0].map, "mAP@3 <= mAP@1");
  check.expect(sweep[1].map > sweep[2].map, "mAP@3 <= mAP@30");
  return "mAP@1 " + num(sweep[0].map) + ", @3 " + num(sweep[1].map) +
         ", @30 " + num(sweep[2].map);
}

// ---------------------------------------------------------------- discovery

std::set<std::string> unique_tags(const CrawlEntry& e) {
  return {e.tags.begin(), e.tags.end()};
}

std::vector<DiscoveredConcept> oracle_discover(
    const CrawlManifest& m, const std::vector<Vocabulary>& vocabs,
    std::size_t n, std::size_t min_overlap) {
  // Stage 1: document frequency, top n by count then word.
  std::map<std::string, std::size_t> df;
  for (const auto& e : m.entries) {
    for (const auto& w : unique_tags(e)) ++df[w];
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(df.begin(), df.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  std::set<std::string> frequent;
  for (std::size_t i = 0; i < std::min(n, ranked.size()); ++i) {
    frequent.insert(ranked[i].first);
  }
  // Stage 2: keep videos sharing enough frequent words.
  // Stage 3: words of kept videos found in a vocabulary, first match wins.
  std::map<std::string, std::vector<std::string>> support;
  for (const auto& e : m.entries) {
    std::size_t overlap = 0;
    const auto tags = unique_tags(e);
    for (const auto& w : tags) overlap += frequent.count(w);
    if (overlap < min_overlap) continue;
    for (const auto& w : tags) support[w].push_back(e.video_id);
  }
  std::vector<DiscoveredConcept> out;
  for (auto& [word, videos] : support) {
    for (const auto& v : vocabs) {
      if (!v.terms.count(word)) continue;
      std::sort(videos.begin(), videos.end());
      out.push_back({word, m.event_id, videos, v.name});
      break;
    }
  }
  return out;
}

void discovery(Check& check) {
  const auto fixture = synthetic::discovery_fixture(500, kDefaultSeed);
  check.expect(fixture.manifest.entries.size() == 500, "manifest size");
  const auto actual = discover_concepts(fixture.manifest, fixture.vocabularies);
  check.expect(!actual.empty(), "nothing discovered");
  check.expect(actual == oracle_discover(fixture.manifest,
                                         fixture.vocabularies, 10, 3),
               "500-video manifest differs from the oracle");

  // Frequent words: a, b, c (each in every video). "two" shares only a and b.
  using Raw = std::vector<std::pair<std::string, std::vector<std::string>>>;
  Raw raw;
  for (int i = 0; i < 6; ++i) {
    raw.push_back({"full" + std::to_string(i), {"wa", "wb", "wc", "kite"}});
  }
  raw.push_back({"two", {"wa", "wb", "plum"}});
  raw.push_back({"three", {"wa", "wb", "wc", "pear"}});
  const auto manifest = make_manifest("ev.boundary", raw);
  const auto vocab = make_vocabulary("object", {"kite", "plum", "pear"});
  const auto found = discover_concepts(manifest, {vocab}, 3, 3);
  std::set<std::string> names;
  for (const auto& c : found) names.insert(c.name);
  check.expect(!names.count("plum"), "2-word overlap video kept");
  check.expect(names.count("pear") == 1, "3-word overlap video dropped");
  check.expect(found == oracle_discover(manifest, {vocab}, 3, 3),
               "boundary case differs from the oracle");
}

// ------------------------------------------------------------------ trainer

void trainer(Check& check) {
  Rng rng(kDefaultSeed);
  std::vector<FeatureVector> positives, negatives;
  auto disc = [&](double cx, double cy) {
    while (true) {
      const double x = 2.0 * rng.uniform01() - 1.0;
      const double y = 2.0 * rng.uniform01() - 1.0;
      if (x * x + y * y <= 1.0) return FeatureVector{cx + 0.5 * x, cy + 0.5 * y};
    }
  };
  for (int i = 0; i < 100; ++i) {
    positives.push_back(disc(1.5, 1.0));
    negatives.push_back(disc(-1.5, -1.0));
  }
  const LinearModel model = train_linear(positives, negatives, {}, "blob");
  std::size_t correct = 0;
  for (const auto& p : positives) correct += predict(model, p) > 0.0;
  for (const auto& n : negatives) correct += predict(model, n) <= 0.0;
  check.expect(correct == 200, std::to_string(correct) + "/200 correct");
  const std::string first = save_models({model});
  const std::string second =
      save_models({train_linear(positives, negatives, {}, "blob")});
  check.expect(first == second, "model files differ between runs");

  // Ten events of three concepts; some videos are shared across events.
  std::vector<OntologyNode> nodes{
      {"root", "root", NodeKind::kCategory, std::nullopt}};
  ConceptVideos corpus;
  for (int e = 0; e < 10; ++e) {
    const std::string event = "e" + std::to_string(e);
    nodes.push_back({event, "event " + event, NodeKind::kEvent, "root"});
    for (int c = 0; c < 3; ++c) {
      const std::string id = event + ".c" + std::to_string(c);
      nodes.push_back({id, "concept " + id, NodeKind::kConcept, event});
      for (int v = 0; v < 6; ++v) {
        corpus[id].push_back(event + ".v" + std::to_string(rng.uniform_index(8)));
      }
      corpus[id].push_back("shared" + std::to_string(rng.uniform_index(5)));
      std::sort(corpus[id].begin(), corpus[id].end());
      corpus[id].erase(std::unique(corpus[id].begin(), corpus[id].end()),
                       corpus[id].end());
    }
  }
  const OntologyTree tree = OntologyTree::build(nodes);
  const auto concepts = tree.ids_of_kind(NodeKind::kConcept);
  for (int draw = 0; draw < 1000; ++draw) {
    const std::string& concept_id = concepts[rng.uniform_index(concepts.size())];
    const std::string& event = tree.event_of_concept(concept_id);
    std::set<std::string> same_event;
    for (const auto& [c, videos] : corpus) {
      if (tree.event_of_concept(c) == event) {
        same_event.insert(videos.begin(), videos.end());
      }
    }
    const auto picked = sample_negatives(tree, concept_id, corpus, rng.next());
    bool clean = !picked.empty();
    for (const auto& v : picked) clean = clean && !same_event.count(v);
    check.expect(clean, "negative from the same event for " + concept_id);
  }
}

// ------------------------------------------------------------------- splits

void splits(Check& check) {
  Rng rng(kDefaultSeed + 3);
  std::map<std::string, std::vector<std::string>> per_event;
  for (int e = 0; e < 100; ++e) {
    const std::size_t n = 3 + rng.uniform_index(498);
    auto& videos = per_event["e" + std::to_string(e)];
    for (std::size_t i = 0; i < n; ++i) {
      videos.push_back("e" + std::to_string(e) + "/v" + std::to_string(i));
    }
  }
  per_event["e.190"] = item_ids(190);
  const DatasetSplit split = split_dataset(per_event);
  std::set<std::string> all;
  for (const auto& [event, videos] : per_event) {
    const EventSplit& part = split.per_event.at(event);
    const std::size_t n = videos.size();
    check.expect(part.validation.size() == n / 10 && part.test.size() == n / 5 &&
                     part.train.size() == n - n / 10 - n / 5,
                 "counts for " + event + " of " + std::to_string(n));
    std::set<std::string> seen;
    for (const auto* list : {&part.train, &part.validation, &part.test}) {
      for (const auto& v : *list) {
        check.expect(seen.insert(v).second, "video in two splits: " + v);
      }
    }
    check.expect(seen == std::set<std::string>(videos.begin(), videos.end()),
                 "split of " + event + " is not exhaustive");
    all.insert(seen.begin(), seen.end());
  }
  const EventSplit& big = split.per_event.at("e.190");
  check.expect(big.train.size() == 133 && big.validation.size() == 19 &&
                   big.test.size() == 38,
               "190 videos not 133/19/38");
  const auto train = split.train(), validation = split.validation(),
             test = split.test();
  check.expect(train.size() + validation.size() + test.size() == all.size(),
               "global splits overlap");
}

// ------------------------------------------------------------------ service

Json library_node(const OntologyTree& tree, const std::string& id) {
  Json doc = to_json(tree.node(id));
  doc["children"] = tree.children(id);
  doc["depth"] = tree.depth(id);
  return doc;
}

std::string guarded(const std::function<Json()>& call) {
  try {
    return canonical(call());
  } catch (const Error& e) {
    return canonical(to_json(e));
  }
}

std::string service_equivalence(Check& check) {
  ServiceConfig config;
  config.ontology_path = data_path("sample.ont");
  config.corpora["sample"] = data_path("sample.scores");
  const auto state = std::make_shared<const EngineState>(load_engine(config));
  const OntologyTree& tree = state->tree;
  const SimilarityBackend& backend = *state->backend;
  const ScoreMatrix& corpus = state->corpora.at("sample");

  HttpServer server(state);
  const int port = server.start("127.0.0.1", 0);
  httplib::Client client("127.0.0.1", port);

  Rng rng(kDefaultSeed + 4);
  std::vector<std::string> all_ids;
  for (auto kind : {NodeKind::kCategory, NodeKind::kEvent, NodeKind::kConcept}) {
    for (const auto& id : tree.ids_of_kind(kind)) all_ids.push_back(id);
  }
  std::vector<std::string> words;
  for (const auto& id : all_ids) {
    std::istringstream name(tree.node(id).name);
    for (std::string w; name >> w;) words.push_back(w);
  }
  const auto categories = tree.ids_of_kind(NodeKind::kCategory);

  auto random_query = [&](Json& request) {
    std::string text;
    for (std::size_t w = 0, n = 1 + rng.uniform_index(4); w < n; ++w) {
      text += (w ? " " : "") + words[rng.uniform_index(words.size())];
    }
    request["query"] = text;
    MatchQuery q;
    q.text = text;
    if (rng.uniform_index(2)) {
      IdSet restrict;
      for (std::size_t i = 0, n = 1 + rng.uniform_index(3); i < n; ++i) {
        restrict.insert(categories[rng.uniform_index(categories.size())]);
      }
      request["restrict"] = restrict;
      q.restrict_categories = restrict;
    }
    if (rng.uniform_index(2)) {
      q.event_count = 1 + rng.uniform_index(4);
      request["events"] = q.event_count;
    }
    if (rng.uniform_index(2)) {
      q.concept_count = 1 + rng.uniform_index(30);
      request["concepts"] = q.concept_count;
    }
    return q;
  };

  std::size_t requests = 0;
  auto compare = [&](const char* endpoint, const httplib::Result& got,
                     const std::string& expected) {
    ++requests;
    check.expect(got && got->body == expected,
                 std::string(endpoint) + " response differs");
  };

  for (int i = 0; i < 200; ++i) {
    compare("/health", client.Get("/health"),
            canonical(Json{{"status", "ok"}, {"stats", to_json(stats(tree))}}));
    compare("/ontology/stats", client.Get("/ontology/stats"),
            canonical(to_json(stats(tree))));
    compare("/corpora", client.Get("/corpora"),
            canonical(Json::array({Json{{"name", "sample"},
                                        {"videos", corpus.video_count()},
                                        {"concepts", corpus.concepts().size()}}})));

    const std::string node_id = rng.uniform_index(10) == 0
                                    ? "missing.node" + std::to_string(i)
                                    : all_ids[rng.uniform_index(all_ids.size())];
    compare("/ontology/node", client.Get("/ontology/node/" + node_id),
            guarded([&] { return library_node(tree, node_id); }));

    const std::string root = categories[rng.uniform_index(categories.size())];
    const int depth = static_cast<int>(rng.uniform_index(5));
    compare("/ontology/tree",
            client.Get("/ontology/tree?root=" + root + "&depth=" +
                       std::to_string(depth)),
            guarded([&] { return subtree_json(tree, root, depth); }));

    Json match_request = Json::object();
    const MatchQuery mq = random_query(match_request);
    compare("/match",
            client.Post("/match", match_request.dump(), "application/json"),
            guarded([&] { return to_json(match_concepts(tree, mq, backend)); }));

    Json retrieve_request = Json::object();
    const MatchQuery rq = random_query(retrieve_request);
    retrieve_request["corpus"] = "sample";
    const std::size_t top = 1 + rng.uniform_index(80);
    retrieve_request["top"] = top;
    compare("/retrieve",
            client.Post("/retrieve", retrieve_request.dump(), "application/json"),
            guarded([&] {
              const MatchResult m = match_concepts(tree, rq, backend);
              auto ranking = retrieve(corpus, m);
              if (ranking.size() > top) ranking.resize(top);
              return Json{{"corpus", "sample"},
                          {"match", to_json(m)},
                          {"ranking", to_json(ranking)}};
            }));

    const std::string video = corpus.video(rng.uniform_index(corpus.video_count()));
    const std::size_t concepts = 1 + rng.uniform_index(10);
    Json recount_request{{"corpus", "sample"}, {"video", video},
                         {"top", concepts}};
    std::size_t top_events = 0;
    if (rng.uniform_index(2)) {
      top_events = 1 + rng.uniform_index(3);
      recount_request["top_events"] = top_events;
    }
    compare("/recount",
            client.Post("/recount", recount_request.dump(), "application/json"),
            guarded([&] {
              const auto row = corpus.row(*corpus.video_index(video));
              const auto items =
                  top_events ? recount_two_step(row, corpus.concepts(), tree,
                                                top_events, concepts)
                             : recount(row, corpus.concepts(), tree, concepts);
              return Json{{"corpus", "sample"},
                          {"video", video},
                          {"concepts", to_json(items)}};
            }));
  }
  server.stop();
  return std::to_string(requests) + " requests over 8 endpoints";
}

struct Criterion {
  const char* name;
  double time_limit_seconds;  // 0 = no limit
  std::function<std::string(Check&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"metric-oracles", 10.0,
       [](Check& c) { metric_oracles(c); return std::string(); }},
      {"softmax-loss", 0.0,
       [](Check& c) { softmax_suite(c); return std::string(); }},
      {"matching-determinism-subset", 0.0,
       [](Check& c) { matching_laws(c); return std::string(); }},
      {"sample-wedding-shower", 0.0,
       [](Check& c) { sample_table(c); return std::string(); }},
      {"ambiguity-benchmark", 60.0, ambiguity},
      {"concept-count-curve", 30.0, concept_curve},
      {"discovery-oracle", 0.0,
       [](Check& c) { discovery(c); return std::string(); }},
      {"linear-trainer", 0.0,
       [](Check& c) { trainer(c); return std::string(); }},
      {"split-correctness", 0.0,
       [](Check& c) { splits(c); return std::string(); }},
      {"service-equivalence", 0.0, service_equivalence},
  };
  int failed = 0;
  for (const auto& criterion : criteria) {
    Check check;
    std::string note;
    const auto start = std::chrono::steady_clock::now();
    try {
      note = criterion.run(check);
    } catch (const std::exception& e) {
      check.expect(false, std::string("threw: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start)
                               .count();
    if (criterion.time_limit_seconds > 0.0) {
      check.expect(seconds < criterion.time_limit_seconds,
                   "took " + num(seconds) + " s, limit " +
                       num(criterion.time_limit_seconds) + " s");
    }
    const bool ok = check.ok();
    failed += !ok;
    std::printf("%s %s (%s; %.2f s%s%s)\n", ok ? "PASS" : "FAIL", criterion.name,
                check.summary().c_str(), seconds, note.empty() ? "" : "; ",
                note.c_str());
  }
  std::printf("%d/%zu criteria passed\n",
              static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
