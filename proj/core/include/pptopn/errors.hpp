//
// Copyright 2026 The pptopn Authors
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
//

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pptopn {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file or unreadable path. Carries the offending line when
/// one is known (0 = whole file).
class ParseError : public Error {
public:
    ParseError(const std::string& path, std::size_t line, const std::string& what)
        : Error(path + (line ? ":" + std::to_string(line) : "") + ": " + what),
          path_(path),
          line_(line) {}

    const std::string& path() const noexcept { return path_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string path_;
    std::size_t line_;
};

/// Parameter outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Caller violated an operation's stated precondition.
class ContractError : public Error {
public:
    using Error::Error;
};

/// Similarity estimation requested for an item with no observations.
class EstimationError : public Error {
public:
    using Error::Error;
};

/// A protocol round exceeded its hop budget.
class TimeoutError : public Error {
public:
    TimeoutError(std::uint64_t round, std::uint32_t max_hops)
        : Error("round " + std::to_string(round) + " exceeded max_hops=" +
                std::to_string(max_hops)),
          round_(round) {}

    std::uint64_t round() const noexcept { return round_; }

private:
    std::uint64_t round_;
};

}  // namespace pptopn
