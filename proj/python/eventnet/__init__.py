# Copyright 2026 The EventNet Retrieval Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Event ontology matching, zero-shot retrieval and evaluation."""

import json

from ._core import (
    Error,
    average_precision,
    expected_random_ap,
    mean_ap,
    multinomial_loss,
    softmax,
    split_dataset,
    top_k_accuracy,
)
from . import _core

__all__ = [
    "Engine",
    "Error",
    "ServiceError",
    "average_precision",
    "discover",
    "expected_random_ap",
    "mean_ap",
    "multinomial_loss",
    "softmax",
    "split_dataset",
    "top_k_accuracy",
]


class ServiceError(Error):
    """A request the engine rejected; carries the service error document."""

    def __init__(self, status, document):
        super().__init__(document.get("message", ""))
        self.status = status
        self.code = document.get("code")
        self.detail = document.get("detail")


class Engine:
    """In-process equivalent of the HTTP service.

    Every method returns the parsed JSON document the matching HTTP route
    would return.
    """

    def __init__(self, ontology, corpora=None, backend="", embeddings=None):
        self._core = _core.Engine(ontology, dict(corpora or {}), backend,
                                  embeddings)

    def request(self, method, path, params=None, body=None):
        """Raw access: returns (status, body text)."""
        text = "" if body is None else json.dumps(body)
        return self._core.request(method, path, dict(params or {}), text)

    def _call(self, method, path, params=None, body=None):
        status, text = self.request(method, path, params, body)
        document = json.loads(text)
        if status != 200:
            raise ServiceError(status, document)
        return document

    def stats(self):
        return self._call("GET", "/ontology/stats")

    def node(self, node_id):
        return self._call("GET", "/ontology/node/" + node_id)

    def tree(self, root=None, depth=1):
        params = {"depth": str(depth)}
        if root is not None:
            params["root"] = root
        return self._call("GET", "/ontology/tree", params)

    def corpora(self):
        return self._call("GET", "/corpora")

    @staticmethod
    def _query(query, restrict, events, concepts):
        body = {"query": query}
        if restrict is not None:
            body["restrict"] = list(restrict)
        if events is not None:
            body["events"] = events
        if concepts is not None:
            body["concepts"] = concepts
        return body

    def match(self, query, restrict=None, events=None, concepts=None):
        return self._call("POST", "/match",
                          body=self._query(query, restrict, events, concepts))

    def retrieve(self, corpus, query, restrict=None, events=None,
                 concepts=None, top=None):
        body = self._query(query, restrict, events, concepts)
        body["corpus"] = corpus
        if top is not None:
            body["top"] = top
        return self._call("POST", "/retrieve", body=body)

    def recount(self, corpus, video, top=None, top_events=None):
        body = {"corpus": corpus, "video": video}
        if top is not None:
            body["top"] = top
        if top_events is not None:
            body["top_events"] = top_events
        return self._call("POST", "/recount", body=body)


def discover(manifest, vocabularies, frequent=10, min_overlap=3):
    """Mines event-specific concepts from a crawl manifest."""
    return json.loads(
        _core.discover_json(manifest, list(vocabularies), frequent,
                            min_overlap))
