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

#ifndef EVENTNET_ERROR_HPP_
#define EVENTNET_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace eventnet {

enum class ErrorCode {
  kParse,
  kValidation,
  kNotFound,
  kInvalidArgument,
  kEmptyPool,
  kConfig,
  kIo,
  kInsufficientData,
};

// Machine-readable code, e.g. "empty-pool". Stable: used in service error
// documents and CLI diagnostics.
std::string_view to_string(ErrorCode code);

// All library failures are reported as Error. `detail` carries the offending
// identifier (node id, file path, flag name) when there is one.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string detail = {})
      : std::runtime_error(message), code_(code), detail_(std::move(detail)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace eventnet

#endif  // EVENTNET_ERROR_HPP_
