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

#include <string>
#include <vector>

namespace patternlab::cli {

enum ExitCode { kOk = 0, kError = 1, kVerdictFailed = 2 };

struct ExperimentSpec {
    std::string command;  ///< certify, solve, sweep, qr, reproduce-paper
    std::string problem;  ///< built-in name
    std::string config;   ///< config path; wins over `problem`
    std::string out = "out";
    std::string horizons;
    std::string pattern;
    std::string storage;
    std::string target = "all";
    unsigned long long seed = 0;
    bool seed_set = false;
    double tol = 0.0;  ///< 0 keeps the defaults
    int mesh = 0;
    int max_iters = 0;
};

/// Runs one command and writes its artifacts under spec.out.
int run(const ExperimentSpec& spec, const std::string& command_line = "");

/// Parses argv and calls run(); errors go to stderr.
int main(int argc, char** argv);

}  // namespace patternlab::cli
