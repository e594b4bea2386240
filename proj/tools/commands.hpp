// Copyright 2026 The ghzkit Authors
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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ghz::cli {

enum class Format { Text, Json, Jsonl, Csv };

struct RunConfig {
    std::uint64_t trials = 10000;
    double eta = 1.0;
    std::uint64_t seed = 0;
    Format format = Format::Text;
    /// Empty means standard output.
    std::string out;

    void validate() const;
};

Format parse_format(const std::string& name);

void cmd_game(const RunConfig& cfg, const std::string& strategy, const std::vector<std::string>& table,
              std::ostream& out);
void cmd_sweep(const RunConfig& cfg, const std::vector<double>& grid, std::ostream& out);
void cmd_prove(const RunConfig& cfg, const std::string& which, const std::vector<std::string>& signs,
               std::ostream& out);
void cmd_teleport(const RunConfig& cfg, std::ostream& out);
void cmd_elements(const RunConfig& cfg, const std::vector<std::string>& signs, std::ostream& out);
/// Returns the process exit code.
int cmd_play(std::uint64_t seed, bool require_tty, std::istream& in, std::ostream& out, std::ostream& err);

/// Full command-line dispatch. Exit codes: 0 success, 1 invalid input, 2 internal error.
int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace ghz::cli
