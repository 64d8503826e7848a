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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "eventnet/discovery.hpp"
#include "eventnet/error.hpp"
#include "eventnet/evaluation.hpp"
#include "eventnet/models.hpp"
#include "eventnet/serialize.hpp"
#include "eventnet/service.hpp"

namespace py = pybind11;
using namespace eventnet;

namespace {

// JSON-in, JSON-out facade over Service; Python parses the strings.
class Engine {
 public:
  Engine(const std::string& ontology,
         const std::map<std::string, std::string>& corpora,
         const std::string& backend,
         const std::optional<std::string>& embeddings) {
    ServiceConfig config;
    config.ontology_path = ontology;
    config.corpora = corpora;
    config.backend = {backend, embeddings};
    service_ = std::make_unique<Service>(
        std::make_shared<const EngineState>(load_engine(config)));
  }

  std::pair<int, std::string> request(
      const std::string& method, const std::string& path,
      const std::map<std::string, std::string>& params,
      const std::string& body) const {
    HttpResponse r;
    {
      py::gil_scoped_release release;
      r = service_->handle(method, path, params, body);
    }
    return {r.status, r.body};
  }

 private:
  std::unique_ptr<Service> service_;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Native core of the eventnet package";

  py::register_exception<Error>(m, "Error", PyExc_ValueError);

  py::class_<Engine>(m, "Engine")
      .def(py::init<const std::string&, const std::map<std::string, std::string>&,
                    const std::string&, const std::optional<std::string>&>(),
           py::arg("ontology"), py::arg("corpora") = std::map<std::string, std::string>{},
           py::arg("backend") = "", py::arg("embeddings") = std::nullopt)
      .def("request", &Engine::request, py::arg("method"), py::arg("path"),
           py::arg("params") = std::map<std::string, std::string>{},
           py::arg("body") = "");

  m.def("average_precision",
        [](const std::vector<std::string>& ranking, const IdSet& relevant) {
          return average_precision(ranking, relevant);
        },
        py::arg("ranking"), py::arg("relevant"));
  m.def("mean_ap",
        [](const std::vector<double>& aps) { return mean_ap(aps); },
        py::arg("aps"));
  m.def("expected_random_ap", &expected_random_ap, py::arg("total"),
        py::arg("relevant"));
  m.def("top_k_accuracy",
        [](const std::vector<std::vector<double>>& predictions,
           const std::vector<std::size_t>& labels, std::size_t k) {
          return top_k_accuracy(predictions, labels, k);
        },
        py::arg("predictions"), py::arg("labels"), py::arg("k"));
  m.def("softmax",
        [](const std::vector<double>& logits) { return softmax(logits); },
        py::arg("logits"));
  m.def("multinomial_loss",
        [](const std::vector<std::vector<double>>& logits,
           const std::vector<std::size_t>& labels) {
          return multinomial_loss(logits, labels);
        },
        py::arg("logits"), py::arg("labels"));
  m.def("split_dataset",
        [](const std::map<std::string, std::vector<std::string>>& videos,
           std::uint64_t seed) {
          std::map<std::string, std::map<std::string, std::vector<std::string>>>
              out;
          for (const auto& [event, part] :
               split_dataset(videos, {}, seed).per_event) {
            out[event] = {{"train", part.train},
                          {"validation", part.validation},
                          {"test", part.test}};
          }
          return out;
        },
        py::arg("videos_per_event"), py::arg("seed") = kDefaultSeed);
  m.def("discover_json",
        [](const std::string& manifest, const std::vector<std::string>& vocabs,
           std::size_t frequent, std::size_t min_overlap) {
          std::vector<Vocabulary> loaded;
          for (const auto& path : vocabs) loaded.push_back(load_vocabulary(path));
          Json list = Json::array();
          for (const auto& c : discover_concepts(load_manifest(manifest), loaded,
                                                 frequent, min_overlap)) {
            list.push_back(to_json(c));
          }
          return canonical(list);
        },
        py::arg("manifest"), py::arg("vocabularies"), py::arg("frequent") = 10,
        py::arg("min_overlap") = 3);
}
