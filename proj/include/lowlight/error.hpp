/* Copyright 2026 The lowlight Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef LOWLIGHT_ERROR_HPP_
#define LOWLIGHT_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace lowlight {

enum class ErrorKind {
  kInvalidInput,
  kInvalidShape,
  kInvalidConfig,
  kIncompatibleWeights,
  kFormat,
  kParse,
  kValidation,
  kNoMapping,
  kUnsupportedFormat,
  kTruncated,
  kUsage,
  kIo,
};

std::string_view to_string(ErrorKind kind);

// Every failure the library reports is an Error carrying a kind, so callers
// (the CLI in particular) can map it to a stable exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace lowlight

#endif  // LOWLIGHT_ERROR_HPP_
