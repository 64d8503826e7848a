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

#include "eventnet/scoring.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>

#include "eventnet/error.hpp"

namespace eventnet {

namespace {

constexpr std::string_view kTextMagic = "eventnet-scores 1";
constexpr std::string_view kBinaryMagic = "ENSM";
constexpr std::uint32_t kBinaryVersion = 1;

std::uint32_t crc32_of(std::string_view bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, reinterpret_cast<const Bytef*>(bytes.data()),
              static_cast<uInt>(bytes.size()));
  return static_cast<std::uint32_t>(crc);
}

std::string hex32(std::uint32_t value) {
  char buffer[9];
  std::snprintf(buffer, sizeof(buffer), "%08x", value);
  return buffer;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_score(std::string_view token) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw Error(ErrorCode::kParse, "bad score '" + std::string(token) + "'",
                std::string(token));
  }
  return value;
}

[[noreturn]] void parse_fail(const std::string& message) {
  throw Error(ErrorCode::kParse, "score matrix: " + message);
}

class ByteWriter {
 public:
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<char>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<char>(v >> (8 * i)));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void str(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    out_ += s;
  }
  void raw(std::string_view s) { out_ += s; }
  std::string& bytes() { return out_; }

 private:
  std::string out_;
};

class ByteReader {
 public:
  explicit ByteReader(std::string_view bytes) : bytes_(bytes) {}

  std::uint64_t uint(int width) {
    need(width);
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) {
      v |= static_cast<std::uint64_t>(
               static_cast<unsigned char>(bytes_[pos_ + i]))
           << (8 * i);
    }
    pos_ += width;
    return v;
  }
  double f64() { return std::bit_cast<double>(uint(8)); }
  std::string str() {
    const auto n = static_cast<std::size_t>(uint(4));
    need(n);
    std::string s(bytes_.substr(pos_, n));
    pos_ += n;
    return s;
  }
  std::size_t position() const { return pos_; }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > bytes_.size()) parse_fail("truncated binary data");
  }
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

ScoreMatrix parse_text(const std::string& bytes) {
  const auto crc_pos = bytes.rfind("\ncrc32\t");
  if (crc_pos == std::string::npos) parse_fail("missing crc32 trailer");
  const std::string_view body(bytes.data(), crc_pos + 1);
  std::string declared = bytes.substr(crc_pos + 7);
  while (!declared.empty() &&
         (declared.back() == '\n' || declared.back() == '\r')) {
    declared.pop_back();
  }
  if (declared != hex32(crc32_of(body))) {
    parse_fail("checksum mismatch (declared " + declared + ", computed " +
               hex32(crc32_of(body)) + ")");
  }

  std::vector<std::string_view> lines = split(body, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.size() < 2 || lines[0] != kTextMagic) parse_fail("bad header");
  const auto header = split(lines[1], '\t');
  if (header.empty() || header[0] != "concepts") {
    parse_fail("second line must list concepts");
  }
  ScoreMatrix matrix(
      std::vector<std::string>(std::next(header.begin()), header.end()));
  for (std::size_t i = 2; i < lines.size(); ++i) {
    const auto fields = split(lines[i], '\t');
    std::vector<double> scores;
    scores.reserve(fields.size() - 1);
    for (std::size_t f = 1; f < fields.size(); ++f) {
      scores.push_back(parse_score(fields[f]));
    }
    matrix.add_row(std::string(fields[0]), std::move(scores));
  }
  return matrix;
}

ScoreMatrix parse_binary(const std::string& bytes) {
  if (bytes.size() < kBinaryMagic.size() + 4) parse_fail("truncated");
  const std::string_view body(bytes.data(), bytes.size() - 4);
  ByteReader trailer(std::string_view(bytes).substr(bytes.size() - 4));
  const auto declared = static_cast<std::uint32_t>(trailer.uint(4));
  if (declared != crc32_of(body)) parse_fail("checksum mismatch");

  ByteReader in(body);
  in.uint(4);  // magic, already checked
  if (in.uint(4) != kBinaryVersion) parse_fail("unsupported version");
  const auto n_concepts = static_cast<std::size_t>(in.uint(4));
  const auto n_videos = static_cast<std::size_t>(in.uint(8));
  std::vector<std::string> concepts;
  for (std::size_t c = 0; c < n_concepts; ++c) concepts.push_back(in.str());
  ScoreMatrix matrix(std::move(concepts));
  for (std::size_t v = 0; v < n_videos; ++v) {
    std::string id = in.str();
    std::vector<double> scores(n_concepts);
    for (double& s : scores) s = in.f64();
    matrix.add_row(std::move(id), std::move(scores));
  }
  if (in.position() != body.size()) parse_fail("trailing bytes");
  return matrix;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

std::vector<RecountItem> rank_concepts(std::span<const double> scores,
                                       const std::vector<std::string>& header,
                                       const OntologyTree& tree,
                                       const IdSet* allowed_events,
                                       std::size_t top_n) {
  if (top_n < 1) {
    throw Error(ErrorCode::kInvalidArgument, "top_n must be >= 1", "top_n");
  }
  if (scores.size() != header.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "score vector length does not match header", "scores");
  }
  std::vector<ScoredId> ranked;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (allowed_events &&
        !allowed_events->count(tree.event_of_concept(header[c]))) {
      continue;
    }
    ranked.push_back({header[c], scores[c]});
  }
  sort_ranked(ranked);
  if (ranked.size() > top_n) ranked.resize(top_n);
  std::vector<RecountItem> out;
  out.reserve(ranked.size());
  for (const auto& item : ranked) {
    const OntologyNode& concept_node = tree.node(item.id);
    const OntologyNode& event = tree.node(*concept_node.parent);
    out.push_back(
        {concept_node.id, concept_node.name, event.id, event.name, item.score});
  }
  return out;
}

}  // namespace

ScoreMatrix::ScoreMatrix(std::vector<std::string> concept_ids)
    : concepts_(std::move(concept_ids)) {
  for (std::size_t c = 0; c < concepts_.size(); ++c) {
    if (!concept_index_.emplace(concepts_[c], c).second) {
      throw Error(ErrorCode::kValidation,
                  "duplicate concept '" + concepts_[c] + "' in header",
                  concepts_[c]);
    }
  }
}

void ScoreMatrix::add_row(std::string video_id, std::vector<double> scores) {
  if (scores.size() != concepts_.size()) {
    throw Error(ErrorCode::kValidation,
                "video '" + video_id + "' has " +
                    std::to_string(scores.size()) + " scores, expected " +
                    std::to_string(concepts_.size()),
                video_id);
  }
  for (double s : scores) {
    if (!std::isfinite(s)) {
      throw Error(ErrorCode::kValidation,
                  "video '" + video_id + "' has a non-finite score", video_id);
    }
  }
  if (!video_index_.emplace(video_id, videos_.size()).second) {
    throw Error(ErrorCode::kValidation, "duplicate video '" + video_id + "'",
                video_id);
  }
  videos_.push_back(std::move(video_id));
  values_.insert(values_.end(), scores.begin(), scores.end());
}

std::span<const double> ScoreMatrix::row(std::size_t row) const {
  return std::span<const double>(values_).subspan(row * concepts_.size(),
                                                  concepts_.size());
}

ScoreVector ScoreMatrix::vector_of(std::size_t r) const {
  const auto values = row(r);
  return {videos_[r], std::vector<double>(values.begin(), values.end())};
}

std::optional<std::size_t> ScoreMatrix::concept_index(
    const std::string& id) const {
  const auto it = concept_index_.find(id);
  if (it == concept_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> ScoreMatrix::video_index(
    const std::string& id) const {
  const auto it = video_index_.find(id);
  if (it == video_index_.end()) return std::nullopt;
  return it->second;
}

ScoreMatrix align_to_ontology(const ScoreMatrix& matrix,
                              const OntologyTree& tree) {
  for (const auto& id : matrix.concepts()) {
    const OntologyNode* n = tree.find(id);
    if (n == nullptr || n->kind != NodeKind::kConcept) {
      throw Error(ErrorCode::kValidation,
                  "score matrix header names unknown concept '" + id + "'", id);
    }
  }
  const auto order = tree.ids_of_kind(NodeKind::kConcept);
  std::vector<std::size_t> source;
  source.reserve(order.size());
  for (const auto& id : order) {
    const auto index = matrix.concept_index(id);
    if (!index) {
      throw Error(ErrorCode::kValidation,
                  "score matrix header lacks concept '" + id + "'", id);
    }
    source.push_back(*index);
  }
  ScoreMatrix aligned(order);
  for (std::size_t r = 0; r < matrix.video_count(); ++r) {
    const auto values = matrix.row(r);
    std::vector<double> scores;
    scores.reserve(source.size());
    for (std::size_t c : source) scores.push_back(values[c]);
    aligned.add_row(matrix.video(r), std::move(scores));
  }
  return aligned;
}

std::string save_score_matrix_text(const ScoreMatrix& matrix) {
  std::string out(kTextMagic);
  out += "\nconcepts";
  for (const auto& c : matrix.concepts()) out += "\t" + c;
  out += '\n';
  for (std::size_t r = 0; r < matrix.video_count(); ++r) {
    out += matrix.video(r);
    for (double s : matrix.row(r)) out += "\t" + format_double(s);
    out += '\n';
  }
  const std::uint32_t crc = crc32_of(out);
  out += "crc32\t" + hex32(crc) + "\n";
  return out;
}

std::string save_score_matrix_binary(const ScoreMatrix& matrix) {
  ByteWriter out;
  out.raw(kBinaryMagic);
  out.u32(kBinaryVersion);
  out.u32(static_cast<std::uint32_t>(matrix.concepts().size()));
  out.u64(matrix.video_count());
  for (const auto& c : matrix.concepts()) out.str(c);
  for (std::size_t r = 0; r < matrix.video_count(); ++r) {
    out.str(matrix.video(r));
    for (double s : matrix.row(r)) out.f64(s);
  }
  const std::uint32_t crc = crc32_of(out.bytes());
  out.u32(crc);
  return std::move(out.bytes());
}

ScoreMatrix parse_score_matrix(const std::string& bytes) {
  if (bytes.rfind(kBinaryMagic, 0) == 0) return parse_binary(bytes);
  if (bytes.rfind(kTextMagic, 0) == 0) return parse_text(bytes);
  parse_fail("unrecognized format");
}

ScoreMatrix load_score_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open score matrix '" + path + "'",
                path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_score_matrix(buffer.str());
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what(),
                e.detail().empty() ? path : e.detail());
  }
}

std::vector<double> aggregate_frames(
    const std::vector<std::vector<double>>& frame_scores) {
  if (frame_scores.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no frames to aggregate",
                "frames");
  }
  const std::size_t dim = frame_scores.front().size();
  std::vector<double> mean(dim, 0.0);
  for (const auto& frame : frame_scores) {
    if (frame.size() != dim) {
      throw Error(ErrorCode::kInvalidArgument,
                  "frame score vectors differ in length", "frames");
    }
    for (std::size_t i = 0; i < dim; ++i) mean[i] += frame[i];
  }
  const double n = static_cast<double>(frame_scores.size());
  for (double& m : mean) m /= n;
  return mean;
}

ScoreVector video_representation(const std::string& video_id,
                                 const std::vector<FeatureVector>& frames,
                                 const std::vector<LinearModel>& models,
                                 const OntologyTree& tree) {
  std::unordered_map<std::string, const LinearModel*> by_target;
  for (const auto& m : models) by_target.emplace(m.target, &m);
  std::vector<const LinearModel*> ordered;
  for (const auto& id : tree.ids_of_kind(NodeKind::kConcept)) {
    const auto it = by_target.find(id);
    if (it == by_target.end()) {
      throw Error(ErrorCode::kNotFound,
                  "no concept model for '" + id + "'", id);
    }
    ordered.push_back(it->second);
  }
  std::vector<std::vector<double>> frame_scores;
  frame_scores.reserve(frames.size());
  for (const auto& frame : frames) {
    std::vector<double> scores;
    scores.reserve(ordered.size());
    for (const auto* model : ordered) scores.push_back(predict(*model, frame));
    frame_scores.push_back(std::move(scores));
  }
  return {video_id, aggregate_frames(frame_scores)};
}

double zero_shot_score(std::span<const double> scores,
                       const std::vector<std::string>& header,
                       const std::vector<ScoredId>& selected,
                       const ScoringOptions& options) {
  if (selected.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no concepts selected",
                "concepts");
  }
  if (scores.size() != header.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "score vector length does not match header", "scores");
  }
  double total = 0.0;
  double weight_total = 0.0;
  for (const auto& concept_ref : selected) {
    const auto it = std::find(header.begin(), header.end(), concept_ref.id);
    if (it == header.end()) {
      throw Error(ErrorCode::kNotFound,
                  "concept '" + concept_ref.id + "' not in score header",
                  concept_ref.id);
    }
    double s = scores[static_cast<std::size_t>(it - header.begin())];
    if (options.calibrate) s = sigmoid(s);
    const double w = options.similarity_weighted ? concept_ref.score : 1.0;
    total += w * s;
    weight_total += w;
  }
  if (weight_total <= 0.0) {
    // All similarity weights vanished; fall back to the plain mean.
    return zero_shot_score(scores, header, selected,
                           {false, options.calibrate});
  }
  return total / weight_total;
}

std::vector<ScoredId> retrieve(const ScoreMatrix& corpus,
                               const MatchResult& match,
                               const ScoringOptions& options) {
  if (corpus.video_count() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "corpus is empty", "corpus");
  }
  if (match.matched_concepts.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no concepts selected",
                "concepts");
  }
  // Project the header onto the selected concepts once.
  std::vector<std::string> header;
  std::vector<std::size_t> columns;
  for (const auto& c : match.matched_concepts) {
    const auto index = corpus.concept_index(c.id);
    if (!index) {
      throw Error(ErrorCode::kNotFound,
                  "concept '" + c.id + "' not in corpus header", c.id);
    }
    header.push_back(c.id);
    columns.push_back(*index);
  }
  std::vector<ScoredId> ranking;
  ranking.reserve(corpus.video_count());
  std::vector<double> projected(columns.size());
  for (std::size_t r = 0; r < corpus.video_count(); ++r) {
    const auto row = corpus.row(r);
    for (std::size_t i = 0; i < columns.size(); ++i) {
      projected[i] = row[columns[i]];
    }
    ranking.push_back({corpus.video(r),
                       zero_shot_score(projected, header,
                                       match.matched_concepts, options)});
  }
  sort_ranked(ranking);
  return ranking;
}

std::vector<RecountItem> recount(std::span<const double> scores,
                                 const std::vector<std::string>& header,
                                 const OntologyTree& tree, std::size_t top_n) {
  return rank_concepts(scores, header, tree, nullptr, top_n);
}

std::vector<ScoredId> events_by_concept_mean(
    std::span<const double> scores, const std::vector<std::string>& header,
    const OntologyTree& tree) {
  std::map<std::string, std::pair<double, std::size_t>> sums;
  for (std::size_t c = 0; c < header.size(); ++c) {
    auto& [sum, count] = sums[tree.event_of_concept(header[c])];
    sum += scores[c];
    ++count;
  }
  std::vector<ScoredId> ranked;
  for (const auto& [event, acc] : sums) {
    ranked.push_back({event, acc.first / static_cast<double>(acc.second)});
  }
  sort_ranked(ranked);
  return ranked;
}

std::vector<ScoredId> events_by_softmax(
    const SoftmaxHead& head, const std::vector<FeatureVector>& frames) {
  std::vector<std::vector<double>> per_frame;
  per_frame.reserve(frames.size());
  for (const auto& f : frames) per_frame.push_back(head.probabilities(f));
  const auto mean = aggregate_frames(per_frame);
  std::vector<ScoredId> ranked;
  for (std::size_t k = 0; k < head.classes.size(); ++k) {
    ranked.push_back({head.classes[k].target, mean[k]});
  }
  sort_ranked(ranked);
  return ranked;
}

std::vector<RecountItem> recount_two_step(
    std::span<const double> scores, const std::vector<std::string>& header,
    const OntologyTree& tree, std::size_t top_events, std::size_t top_n,
    const std::vector<ScoredId>* event_scores) {
  if (top_events < 1) {
    throw Error(ErrorCode::kInvalidArgument, "top_events must be >= 1",
                "top_events");
  }
  std::vector<ScoredId> ranked =
      event_scores ? *event_scores
                   : events_by_concept_mean(scores, header, tree);
  sort_ranked(ranked);
  IdSet allowed;
  for (std::size_t i = 0; i < ranked.size() && i < top_events; ++i) {
    allowed.insert(ranked[i].id);
  }
  return rank_concepts(scores, header, tree, &allowed, top_n);
}

}  // namespace eventnet
