/*
 Copyright 2026 The patternlab Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#pragma once

#include <stdexcept>
#include <string>

namespace patternlab {

struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Step-size underflow, nonfinite right-hand side, or exhausted step budget.
struct IntegrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A trajectory escaped before the time it was needed for.
struct BlowUpError : std::runtime_error {
    BlowUpError(const std::string& what, double time) : std::runtime_error(what), blow_up_time(time) {}
    double blow_up_time;
};

/// The operation does not apply to the given problem data.
struct InapplicableError : std::logic_error {
    using std::logic_error::logic_error;
};

struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, int line_, int column_)
        : std::runtime_error(std::to_string(line_) + ":" + std::to_string(column_) + ": " + msg),
          line(line_),
          column(column_) {}
    int line;
    int column;
};

struct EvalError : std::runtime_error {
    EvalError(const std::string& msg, int line_, int column_)
        : std::runtime_error(std::to_string(line_) + ":" + std::to_string(column_) + ": " + msg),
          line(line_),
          column(column_) {}
    int line;
    int column;
};

}  // namespace patternlab
