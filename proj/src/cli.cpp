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

#include "eventnet/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "eventnet/discovery.hpp"
#include "eventnet/error.hpp"
#include "eventnet/evaluation.hpp"
#include "eventnet/matching.hpp"
#include "eventnet/models.hpp"
#include "eventnet/ontology.hpp"
#include "eventnet/scoring.hpp"
#include "eventnet/serialize.hpp"
#include "eventnet/service.hpp"
#include "eventnet/similarity.hpp"

namespace eventnet {

namespace {

struct Options {
  std::string ontology;
  std::string corpus;
  std::string manifest;
  std::vector<std::string> vocabs;
  std::string query;
  std::vector<std::string> restrict;
  std::size_t events = 2;
  std::size_t concepts = 15;
  std::size_t top = 0;
  std::uint64_t seed = kDefaultSeed;
  std::string out;
  std::string format = "text";
  std::string backend;
  std::string embeddings;
  std::string mode;
  std::string queries;
  std::vector<std::size_t> counts;
  std::string features;
  std::string concept_videos;
  std::string models;
  std::string video;
  std::size_t top_events = 0;
  std::string event_id;
  std::size_t frequent = 10;
  std::size_t min_overlap = 3;
  bool binary = false;
  bool ignore_restrict = false;
  std::vector<std::string> corpora;
  std::string host = "127.0.0.1";
  int port = 8080;
};

std::string fixed(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.6f", value);
  return buffer;
}

bool record_format(const Options& o) { return o.format == "record"; }

BackendConfig backend_config(const Options& o) {
  BackendConfig config;
  config.name = o.backend;
  if (!o.embeddings.empty()) config.embedding_path = o.embeddings;
  return config;
}

MatchQuery match_query(const Options& o) {
  MatchQuery query;
  query.text = o.query;
  if (!o.restrict.empty()) {
    query.restrict_categories = IdSet(o.restrict.begin(), o.restrict.end());
  }
  query.event_count = o.events;
  query.concept_count = o.concepts;
  return query;
}

std::string name_of(const OntologyTree& tree, const std::string& id) {
  const OntologyNode* node = tree.find(id);
  return node ? node->name : std::string();
}

std::string stats_text(const OntologyStats& s) {
  std::ostringstream os;
  os << "categories\t" << s.category_count << "\n"
     << "events\t" << s.event_count << "\n"
     << "concepts\t" << s.concept_count << "\n"
     << "max_depth\t" << s.max_depth << "\n"
     << "max_event_depth\t" << s.max_event_depth << "\n"
     << "avg_children_per_category\t" << fixed(s.avg_children_per_category)
     << "\n"
     << "events_per_top_category\n";
  for (const auto& [id, count] : s.events_per_top_category) {
    os << "  " << id << "\t" << count << "\n";
  }
  return os.str();
}

std::string ranked_text(const OntologyTree& tree,
                        const std::vector<ScoredId>& items) {
  std::ostringstream os;
  std::size_t rank = 1;
  for (const auto& item : items) {
    os << "  " << rank++ << "\t" << fixed(item.score) << "\t" << item.id
       << "\t" << name_of(tree, item.id) << "\n";
  }
  return os.str();
}

std::string match_text(const OntologyTree& tree, const MatchResult& result) {
  std::ostringstream os;
  os << "events\n" << ranked_text(tree, result.matched_events);
  os << "concepts\n" << ranked_text(tree, result.matched_concepts);
  if (result.shortage) os << "note: fewer concepts than requested\n";
  for (const auto& id : result.non_top_level_restrictions) {
    os << "note: restriction '" << id << "' is not a top-level category\n";
  }
  return os.str();
}

std::string recount_text(const std::vector<RecountItem>& items) {
  std::ostringstream os;
  std::size_t rank = 1;
  for (const auto& item : items) {
    os << "  " << rank++ << "\t" << fixed(item.score) << "\t"
       << item.concept_name << "\t(" << item.event_name << ")\n";
  }
  return os.str();
}

ScoreMatrix load_corpus(const std::string& path, const OntologyTree& tree) {
  return align_to_ontology(load_score_matrix(path), tree);
}

void require(const std::string& value, const char* flag) {
  if (value.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("missing required flag ") + flag, flag);
  }
}

// Frames of every listed video, in list order; unknown videos are an error.
std::vector<FeatureVector> frames_of(const FrameTable& table,
                                     const std::vector<std::string>& videos) {
  std::vector<FeatureVector> out;
  for (const auto& v : videos) {
    const auto it = table.find(v);
    if (it == table.end()) {
      throw Error(ErrorCode::kNotFound, "no features for video '" + v + "'",
                  v);
    }
    out.insert(out.end(), it->second.begin(), it->second.end());
  }
  return out;
}

std::map<std::string, std::vector<std::string>> videos_per_event(
    const OntologyTree& tree, const ConceptVideos& concept_videos) {
  std::map<std::string, std::set<std::string>> grouped;
  for (const auto& [concept_id, videos] : concept_videos) {
    auto& bucket = grouped[tree.event_of_concept(concept_id)];
    bucket.insert(videos.begin(), videos.end());
  }
  std::map<std::string, std::vector<std::string>> out;
  for (auto& [event, videos] : grouped) {
    out.emplace(event, std::vector<std::string>(videos.begin(), videos.end()));
  }
  return out;
}

std::string cmd_validate(const Options& o, std::ostream& err, bool banner) {
  require(o.ontology, "--ontology");
  const OntologyTree tree = load_ontology(o.ontology);
  for (const auto& w : tree.warnings()) err << "warning: " << w << "\n";
  const OntologyStats s = stats(tree);
  if (record_format(o)) return canonical(to_json(s)) + "\n";
  return (banner ? "ok\t" + std::to_string(tree.size()) + " nodes\n"
                 : std::string()) +
         stats_text(s);
}

std::string cmd_discover(const Options& o) {
  require(o.manifest, "--manifest");
  if (o.vocabs.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "missing required flag --vocab",
                "--vocab");
  }
  const CrawlManifest manifest = load_manifest(
      o.manifest, o.event_id.empty() ? std::nullopt
                                     : std::optional<std::string>(o.event_id));
  std::vector<Vocabulary> vocabs;
  for (const auto& path : o.vocabs) vocabs.push_back(load_vocabulary(path));
  const auto concepts =
      discover_concepts(manifest, vocabs, o.frequent, o.min_overlap);
  if (record_format(o)) {
    Json list = Json::array();
    for (const auto& c : concepts) list.push_back(to_json(c));
    return canonical(list) + "\n";
  }
  std::ostringstream os;
  for (const auto& c : concepts) {
    os << c.name << "\t" << c.source_vocabulary << "\t"
       << c.supporting_videos.size() << "\n";
  }
  return os.str();
}

std::string cmd_match(const Options& o) {
  require(o.ontology, "--ontology");
  const OntologyTree tree = load_ontology(o.ontology);
  const auto backend = make_backend(backend_config(o), tree);
  const MatchResult result = match_concepts(tree, match_query(o), *backend);
  if (record_format(o)) return canonical(to_json(result)) + "\n";
  return match_text(tree, result);
}

std::string cmd_retrieve(const Options& o) {
  require(o.ontology, "--ontology");
  require(o.corpus, "--corpus");
  const OntologyTree tree = load_ontology(o.ontology);
  const ScoreMatrix corpus = load_corpus(o.corpus, tree);
  const auto backend = make_backend(backend_config(o), tree);
  const MatchResult match = match_concepts(tree, match_query(o), *backend);
  auto ranking = retrieve(corpus, match);
  if (o.top > 0 && ranking.size() > o.top) ranking.resize(o.top);
  if (record_format(o)) {
    return canonical({{"match", to_json(match)}, {"ranking", to_json(ranking)}}) +
           "\n";
  }
  std::ostringstream os;
  os << match_text(tree, match) << "videos\n";
  std::size_t rank = 1;
  for (const auto& item : ranking) {
    os << "  " << rank++ << "\t" << fixed(item.score) << "\t" << item.id
       << "\n";
  }
  return os.str();
}

std::string cmd_recount(const Options& o) {
  require(o.ontology, "--ontology");
  require(o.corpus, "--corpus");
  require(o.video, "--video");
  const OntologyTree tree = load_ontology(o.ontology);
  const ScoreMatrix corpus = load_corpus(o.corpus, tree);
  const auto row = corpus.video_index(o.video);
  if (!row) {
    throw Error(ErrorCode::kNotFound, "unknown video '" + o.video + "'",
                o.video);
  }
  const std::size_t top = o.top > 0 ? o.top : 5;
  const auto items =
      o.top_events > 0
          ? recount_two_step(corpus.row(*row), corpus.concepts(), tree,
                             o.top_events, top)
          : recount(corpus.row(*row), corpus.concepts(), tree, top);
  if (record_format(o)) return canonical(to_json(items)) + "\n";
  return recount_text(items);
}

std::string cmd_train(const Options& o) {
  require(o.ontology, "--ontology");
  require(o.concept_videos, "--concept-videos");
  const OntologyTree tree = load_ontology(o.ontology);
  const ConceptVideos concept_videos = load_concept_videos(o.concept_videos);
  if (o.mode == "split") {
    const DatasetSplit split =
        split_dataset(videos_per_event(tree, concept_videos), {}, o.seed);
    if (record_format(o)) {
      Json doc = Json::object();
      for (const auto& [event, s] : split.per_event) {
        doc[event] = {{"train", s.train},
                      {"validation", s.validation},
                      {"test", s.test}};
      }
      return canonical(doc) + "\n";
    }
    std::ostringstream os;
    os << "event\ttrain\tvalidation\ttest\n";
    for (const auto& [event, s] : split.per_event) {
      os << event << "\t" << s.train.size() << "\t" << s.validation.size()
         << "\t" << s.test.size() << "\n";
    }
    return os.str();
  }
  require(o.features, "--features");
  const FrameTable table = load_features(o.features);
  if (o.mode == "concepts") {
    std::vector<LinearModel> models;
    for (const auto& id : tree.ids_of_kind(NodeKind::kConcept)) {
      const auto it = concept_videos.find(id);
      if (it == concept_videos.end() || it->second.empty()) {
        throw Error(ErrorCode::kInsufficientData,
                    "no training videos for concept '" + id + "'", id);
      }
      const auto negatives = sample_negatives(tree, id, concept_videos, o.seed);
      models.push_back(train_linear(frames_of(table, it->second),
                                    frames_of(table, negatives), {}, id));
    }
    return save_models(models);
  }
  if (o.mode == "head") {
    const auto per_event = videos_per_event(tree, concept_videos);
    std::vector<std::string> class_ids;
    std::vector<FeatureVector> samples;
    std::vector<std::size_t> labels;
    for (const auto& [event, videos] : per_event) {
      const auto frames = frames_of(table, videos);
      for (const auto& f : frames) {
        samples.push_back(f);
        labels.push_back(class_ids.size());
      }
      class_ids.push_back(event);
    }
    return save_models(
        train_softmax_head(samples, labels, class_ids).classes);
  }
  throw Error(ErrorCode::kInvalidArgument,
              "--mode must be concepts, split or head", "--mode");
}

std::string cmd_represent(const Options& o) {
  require(o.ontology, "--ontology");
  require(o.features, "--features");
  require(o.models, "--models");
  const OntologyTree tree = load_ontology(o.ontology);
  const FrameTable table = load_features(o.features);
  const auto models = load_models(o.models);
  ScoreMatrix matrix(tree.ids_of_kind(NodeKind::kConcept));
  for (const auto& [video, frames] : table) {
    ScoreVector v = video_representation(video, frames, models, tree);
    matrix.add_row(std::move(v.video_id), std::move(v.scores));
  }
  return o.binary ? save_score_matrix_binary(matrix)
                  : save_score_matrix_text(matrix);
}

EvalConfig eval_config(const Options& o) {
  EvalConfig config;
  config.event_count = o.events;
  config.concept_count = o.concepts;
  config.use_restriction = !o.ignore_restrict;
  return config;
}

std::string cmd_eval(const Options& o) {
  require(o.ontology, "--ontology");
  require(o.corpus, "--corpus");
  require(o.queries, "--queries");
  const OntologyTree tree = load_ontology(o.ontology);
  const ScoreMatrix corpus = load_corpus(o.corpus, tree);
  const auto queries = load_queries(o.queries);
  const auto backend = make_backend(backend_config(o), tree);
  if (o.mode == "retrieve") {
    const EvalReport report =
        evaluate_queries(tree, queries, corpus, *backend, eval_config(o));
    if (record_format(o)) return canonical(to_json(report)) + "\n";
    return format_report_table(report);
  }
  if (o.mode == "compare-structure") {
    const ComparisonReport report =
        compare_matching(tree, queries, corpus, *backend, eval_config(o));
    if (record_format(o)) return canonical(to_json(report)) + "\n";
    return format_comparison_table(report);
  }
  throw Error(ErrorCode::kInvalidArgument,
              "--mode must be retrieve or compare-structure", "--mode");
}

std::string cmd_sweep(const Options& o) {
  require(o.ontology, "--ontology");
  require(o.corpus, "--corpus");
  require(o.queries, "--queries");
  const OntologyTree tree = load_ontology(o.ontology);
  const ScoreMatrix corpus = load_corpus(o.corpus, tree);
  const auto queries = load_queries(o.queries);
  const auto backend = make_backend(backend_config(o), tree);
  std::vector<std::size_t> counts = o.counts;
  if (counts.empty()) {
    for (std::size_t k = 1; k <= 30; ++k) counts.push_back(k);
  }
  const auto sweep = concept_count_sweep(tree, queries, corpus, *backend,
                                         counts, eval_config(o));
  if (record_format(o)) return canonical(to_json(sweep)) + "\n";
  return format_sweep_tsv(sweep);
}

int cmd_serve(const Options& o, std::ostream& err) {
  require(o.ontology, "--ontology");
  ServiceConfig config;
  config.ontology_path = o.ontology;
  for (const auto& spec : o.corpora) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "--corpus for serve takes name=path", spec);
    }
    config.corpora.emplace(spec.substr(0, eq), spec.substr(eq + 1));
  }
  config.backend = backend_config(o);
  config.host = o.host;
  config.port = o.port;
  auto state = std::make_shared<const EngineState>(load_engine(config));
  HttpServer server(state);
  const int port = server.start(config.host, config.port);
  err << "listening on " << config.host << ":" << port << std::endl;
  server.wait();
  return 0;
}

void emit(const Options& o, const std::string& payload, std::ostream& out) {
  if (o.out.empty()) {
    out << payload;
    return;
  }
  std::ofstream file(o.out, std::ios::binary);
  file << payload;
  if (!file) {
    throw Error(ErrorCode::kIo, "cannot write '" + o.out + "'", o.out);
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  Options o;
  CLI::App app{"EventNet ontology, concept matching and zero-shot retrieval",
               "eventnet"};
  app.require_subcommand(1);

  auto add_ontology = [&](CLI::App* c) {
    c->add_option("--ontology", o.ontology, "Ontology file (JSON lines)");
  };
  auto add_output = [&](CLI::App* c) {
    c->add_option("--out", o.out, "Write output to FILE instead of stdout");
    c->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"text", "record"}));
  };
  auto add_backend = [&](CLI::App* c) {
    c->add_option("--backend", o.backend, "Similarity backend")
        ->check(CLI::IsMember({"overlap", "embedding"}));
    c->add_option("--embeddings", o.embeddings, "Word-vector table");
  };
  auto add_match = [&](CLI::App* c) {
    c->add_option("--query", o.query, "Event query text")->required();
    c->add_option("--restrict", o.restrict, "Restrict to category id");
    c->add_option("--events", o.events, "Matched event count")
        ->check(CLI::PositiveNumber);
    c->add_option("--concepts", o.concepts, "Matched concept count")
        ->check(CLI::PositiveNumber);
  };
  auto add_seed = [&](CLI::App* c) {
    c->add_option("--seed", o.seed, "Random seed (default 20150606)");
  };

  auto* validate = app.add_subcommand("validate", "Validate an ontology");
  add_ontology(validate);
  add_output(validate);
  auto* stats_cmd = app.add_subcommand("stats", "Ontology statistics");
  add_ontology(stats_cmd);
  add_output(stats_cmd);

  auto* discover = app.add_subcommand("discover", "Mine concepts from tags");
  discover->add_option("--manifest", o.manifest, "Crawl manifest");
  discover->add_option("--vocab", o.vocabs, "Visual vocabulary file");
  discover->add_option("--event-id", o.event_id, "Event id override");
  discover->add_option("--frequent", o.frequent, "Frequent word count")
      ->check(CLI::PositiveNumber);
  discover->add_option("--min-overlap", o.min_overlap,
                       "Frequent words a video must carry");
  add_output(discover);

  auto* match = app.add_subcommand("match", "Match a query to concepts");
  add_ontology(match);
  add_match(match);
  add_backend(match);
  add_output(match);

  auto* retrieve_cmd = app.add_subcommand("retrieve", "Zero-shot retrieval");
  add_ontology(retrieve_cmd);
  retrieve_cmd->add_option("--corpus", o.corpus, "Score matrix file");
  add_match(retrieve_cmd);
  retrieve_cmd->add_option("--top", o.top, "Keep the N best videos");
  add_backend(retrieve_cmd);
  add_output(retrieve_cmd);

  auto* recount_cmd = app.add_subcommand("recount", "Recount one video");
  add_ontology(recount_cmd);
  recount_cmd->add_option("--corpus", o.corpus, "Score matrix file");
  recount_cmd->add_option("--video", o.video, "Video id");
  recount_cmd->add_option("--top", o.top, "Concepts to list (default 5)");
  recount_cmd->add_option("--top-events", o.top_events,
                          "Two-step recounting over the N best events");
  add_output(recount_cmd);

  auto* train = app.add_subcommand("train", "Train models or split data");
  add_ontology(train);
  train->add_option("--mode", o.mode, "concepts, split or head")->required();
  train->add_option("--features", o.features, "Frame feature file");
  train->add_option("--concept-videos", o.concept_videos,
                    "Concept to video lists");
  add_seed(train);
  add_output(train);

  auto* represent = app.add_subcommand(
      "represent", "Score frame features with concept models");
  add_ontology(represent);
  represent->add_option("--features", o.features, "Frame feature file");
  represent->add_option("--models", o.models, "Concept model file");
  represent->add_flag("--binary", o.binary, "Binary score matrix");
  add_output(represent);

  auto* eval = app.add_subcommand("eval", "Evaluate retrieval queries");
  add_ontology(eval);
  eval->add_option("--mode", o.mode, "retrieve or compare-structure")
      ->required();
  eval->add_option("--corpus", o.corpus, "Score matrix file");
  eval->add_option("--queries", o.queries, "Query file");
  eval->add_option("--events", o.events, "Matched event count")
      ->check(CLI::PositiveNumber);
  eval->add_option("--concepts", o.concepts, "Matched concept count")
      ->check(CLI::PositiveNumber);
  eval->add_flag("--ignore-restrict", o.ignore_restrict,
                 "Ignore query restrictions");
  add_backend(eval);
  add_output(eval);

  auto* sweep = app.add_subcommand("sweep", "mAP over concept counts");
  add_ontology(sweep);
  sweep->add_option("--corpus", o.corpus, "Score matrix file");
  sweep->add_option("--queries", o.queries, "Query file");
  sweep->add_option("--counts", o.counts, "Concept counts (default 1..30)")
      ->delimiter(',');
  sweep->add_option("--events", o.events, "Matched event count")
      ->check(CLI::PositiveNumber);
  sweep->add_flag("--ignore-restrict", o.ignore_restrict,
                  "Ignore query restrictions");
  add_backend(sweep);
  add_output(sweep);

  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  add_ontology(serve);
  serve->add_option("--corpus", o.corpora, "Corpus as name=path");
  serve->add_option("--host", o.host, "Listen address");
  serve->add_option("--port", o.port, "Listen port (0 = any free port)");
  add_backend(serve);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (serve->parsed()) return cmd_serve(o, err);
    std::string payload;
    if (validate->parsed()) {
      payload = cmd_validate(o, err, true);
    } else if (stats_cmd->parsed()) {
      payload = cmd_validate(o, err, false);
    } else if (discover->parsed()) {
      payload = cmd_discover(o);
    } else if (match->parsed()) {
      payload = cmd_match(o);
    } else if (retrieve_cmd->parsed()) {
      payload = cmd_retrieve(o);
    } else if (recount_cmd->parsed()) {
      payload = cmd_recount(o);
    } else if (train->parsed()) {
      payload = cmd_train(o);
    } else if (represent->parsed()) {
      payload = cmd_represent(o);
    } else if (eval->parsed()) {
      payload = cmd_eval(o);
    } else if (sweep->parsed()) {
      payload = cmd_sweep(o);
    }
    emit(o, payload, out);
    return 0;
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what();
    if (!e.detail().empty()) err << " [" << e.detail() << "]";
    err << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace eventnet
