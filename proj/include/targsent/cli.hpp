// Copyright 2026 The targsent Authors.
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

// Command-line front end. Every artifact-producing subcommand writes a run
// manifest that `replay` can re-execute.

#ifndef TARGSENT_CLI_HPP_
#define TARGSENT_CLI_HPP_

#include <string>
#include <vector>

namespace targsent::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Environment variable naming the directory relative paths resolve against.
inline constexpr const char* kDataDirEnv = "TARGSENT_DATA_DIR";

// Arguments exclude the program name.
int run(const std::vector<std::string>& args);
int run(int argc, char** argv);

std::string version_string();

}  // namespace targsent::cli

#endif  // TARGSENT_CLI_HPP_
