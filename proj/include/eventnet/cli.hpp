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

// The eventnet command line. Subcommands:
//   validate, stats, discover, match, retrieve, recount, train, represent,
//   eval, sweep, serve
// Results go to stdout, or to --out when given. --format record emits the
// canonical JSON document the library serializers produce; text is meant
// for people. Exit status is 0 on success, 1 on usage errors and 2 on
// pipeline errors, with a diagnostic on stderr.

#ifndef EVENTNET_CLI_HPP_
#define EVENTNET_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace eventnet {

// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace eventnet

#endif  // EVENTNET_CLI_HPP_
