// Copyright 2026 The drimsim Authors.
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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace drim {

/// Root of every error the library raises.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Invalid geometry, analog parameters, cost model or run configuration.
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// Row or sub-array index outside the geometry, or a write to a constant row.
class AddressError : public Error {
  public:
    using Error::Error;
};

/// Multi-row activation that includes a wordline behind the regular decoder.
class DecoderViolation : public Error {
  public:
    using Error::Error;
};

/// Sense mode incompatible with the number of activated rows.
class ModeViolation : public Error {
  public:
    using Error::Error;
};

/// Both wordlines of one dual-contact cell raised at the same time.
class DccConflict : public Error {
  public:
    using Error::Error;
};

/// Command issued in the wrong sub-array phase (e.g. ACTIVATE while open).
class SequencingError : public Error {
  public:
    using Error::Error;
};

/// Operand count does not match what an operation expects.
class ArityError : public Error {
  public:
    using Error::Error;
};

/// Assembly text that does not conform to the grammar.
class ParseError : public Error {
  public:
    ParseError(std::size_t line, std::size_t column, const std::string& what)
        : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
          line_(line), column_(column), message_(what) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }
    const std::string& message() const { return message_; }

  private:
    std::size_t line_;
    std::size_t column_;
    std::string message_;
};

/// Failure while running a program; carries the offending instruction.
class ExecutionError : public Error {
  public:
    ExecutionError(std::size_t instruction, const std::string& what)
        : Error("instruction " + std::to_string(instruction) + ": " + what), instruction_(instruction) {}

    std::size_t instruction() const { return instruction_; }

  private:
    std::size_t instruction_;
};

}  // namespace drim
