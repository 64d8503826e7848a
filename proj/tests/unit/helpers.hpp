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

#ifndef EVENTNET_TESTS_HELPERS_HPP_
#define EVENTNET_TESTS_HELPERS_HPP_

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "eventnet/ontology.hpp"

namespace eventnet::testing {

inline std::string data_path(const std::string& name) {
  return std::string(EVENTNET_DATA_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// A scratch file under the system temp directory, removed on destruction.
class TempFile {
 public:
  explicit TempFile(const std::string& name, const std::string& content = {})
      : path_(std::filesystem::temp_directory_path() /
              ("eventnet_test_" + name)) {
    std::ofstream(path_, std::ios::binary) << content;
  }
  ~TempFile() { std::filesystem::remove(path_); }
  std::string path() const { return path_.string(); }

 private:
  std::filesystem::path path_;
};

inline OntologyTree tree_from(const std::string& jsonl) {
  std::istringstream in(jsonl);
  return parse_ontology(in);
}

inline OntologyTree sample_tree() {
  return load_ontology(data_path("sample.ont"));
}

}  // namespace eventnet::testing

#endif  // EVENTNET_TESTS_HELPERS_HPP_
