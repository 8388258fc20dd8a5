// Copyright 2026 The pgt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PGT_ERRORS_HPP_
#define PGT_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pgt {

enum class ErrorKind {
  kInvalidArgument,
  kSchema,
  kParse,
  kUnknownVariable,
  kDimension,
  kDomain,
  kDivisionByZero,
  kOutOfSpace,
  kInapplicable,
  kSizeGuard,
  kIo,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Syntax error in an expression; offset is a byte offset into the source.
class ParseError : public Error {
 public:
  ParseError(std::size_t offset, const std::string& msg)
      : Error(ErrorKind::kParse,
              "parse error at byte " + std::to_string(offset) + ": " + msg),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Schema violation while loading JSON; path is a JSON pointer to the key.
class SchemaError : public Error {
 public:
  SchemaError(const std::string& path, const std::string& msg)
      : Error(
            ErrorKind::kSchema,
            "schema error at " + (path.empty() ? "<root>" : path) + ": " + msg),
        path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace pgt

#endif  // PGT_ERRORS_HPP_
