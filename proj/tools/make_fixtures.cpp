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

// Writes the synthetic benchmark fixtures as ordinary engine input files:
//   <dir>/ambiguity/{ontology.ont,corpus.scores,queries.jsonl}
//   <dir>/concept_count/{ontology.ont,corpus.scores,queries.jsonl}
//   <dir>/discovery/{manifest.jsonl,<vocabulary>.vocab}

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "eventnet/serialize.hpp"
#include "eventnet/synthetic.hpp"

namespace fs = std::filesystem;
using namespace eventnet;

namespace {

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
}

std::string queries_jsonl(const std::vector<EvalQuery>& queries) {
  std::string out;
  for (const auto& q : queries) {
    Json doc = {{"id", q.id}, {"text", q.text}, {"relevant", q.relevant}};
    if (q.restrict_categories) doc["restrict"] = *q.restrict_categories;
    out += canonical(doc) + "\n";
  }
  return out;
}

void write_benchmark(const fs::path& dir, const synthetic::Benchmark& b) {
  fs::create_directories(dir);
  write_file(dir / "ontology.ont", save_ontology(b.tree));
  write_file(dir / "corpus.scores", save_score_matrix_text(b.corpus));
  write_file(dir / "queries.jsonl", queries_jsonl(b.queries));
}

void write_discovery(const fs::path& dir,
                     const synthetic::DiscoveryFixture& f) {
  fs::create_directories(dir);
  std::string manifest = canonical(Json{{"event_id", f.manifest.event_id}}) +
                         "\n";
  for (const auto& e : f.manifest.entries) {
    manifest +=
        canonical(Json{{"video_id", e.video_id}, {"tags", e.tags}}) + "\n";
  }
  write_file(dir / "manifest.jsonl", manifest);
  for (const auto& v : f.vocabularies) {
    std::string text = "name=" + v.name + "\n";
    for (const auto& term : v.terms) text += term + "\n";
    write_file(dir / (v.name + ".vocab"), text);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate synthetic benchmark fixtures", "make_fixtures"};
  std::string dir = "fixtures";
  std::uint64_t seed = kDefaultSeed;
  app.add_option("--dir", dir, "Output directory");
  app.add_option("--seed", seed, "Random seed");
  CLI11_PARSE(app, argc, argv);
  try {
    const fs::path root(dir);
    write_benchmark(root / "ambiguity", synthetic::ambiguity_benchmark(seed));
    write_benchmark(root / "concept_count",
                    synthetic::concept_count_benchmark(seed));
    write_discovery(root / "discovery", synthetic::discovery_fixture(500, seed));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
