// Copyright 2026 The paraemb Authors.
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
#ifndef PARAEMB_TOOLS_COMMANDS_H_
#define PARAEMB_TOOLS_COMMANDS_H_

#include <string>
#include <vector>

#include <CLI11.hpp>

namespace paraemb::cli {

// Registers every subcommand on app. Each runs from its CLI11 callback.
void AddCommands(CLI::App *app);

// Replaces "--config FILE" with the file's key=value entries, rendered as
// "--key=value" flags of the selected subcommand. Keys also given on the
// command line are dropped so that explicit flags win.
std::vector<std::string> ExpandConfig(const CLI::App &app,
                                      std::vector<std::string> args);

}  // namespace paraemb::cli

#endif  // PARAEMB_TOOLS_COMMANDS_H_
