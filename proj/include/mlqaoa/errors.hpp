// Copyright 2026 The mlqaoa Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mlqaoa {

/// Precondition on an argument violated (length mismatch, i == j, ...).
class ArgumentError : public std::invalid_argument {
 public:
    using std::invalid_argument::invalid_argument;
};

/// Input exceeds a hard size limit (statevector oracle, brute force).
class SizeError : public std::length_error {
 public:
    using std::length_error::length_error;
};

/// Malformed instance file. `line()` is 1-based; 0 when not line-specific.
class ParseError : public std::runtime_error {
 public:
    ParseError(const std::string& source, std::size_t line, const std::string& what)
            : std::runtime_error(source + (line ? ":" + std::to_string(line) : std::string()) +
                                 ": " + what),
              line_(line) {}

    std::size_t line() const noexcept { return line_; }

 private:
    std::size_t line_;
};

class UnsupportedFormatError : public std::runtime_error {
 public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
    using std::runtime_error::runtime_error;
};

/// An internal consistency check failed; indicates a bug rather than bad input.
class InvariantError : public std::logic_error {
 public:
    using std::logic_error::logic_error;
};

}  // namespace mlqaoa
