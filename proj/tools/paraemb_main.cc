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
#include <algorithm>
#include <cstdio>
#include <exception>
#include <filesystem>

#include "commands.h"
#include "paraemb/error.h"

int main(int argc, char **argv) {
  CLI::App app{"Paraphrastic sentence embeddings trained on bitext."};
  app.name("paraemb");
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  paraemb::cli::AddCommands(&app);

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = paraemb::cli::ExpandConfig(app, std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError &e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::fprintf(stderr, "paraemb: error: %s (see --help)\n", e.what());
    return 1;
  } catch (const paraemb::Error &e) {
    std::fprintf(stderr, "paraemb: error: %s\n", e.what());
    return static_cast<int>(e.kind());
  } catch (const std::filesystem::filesystem_error &e) {
    std::fprintf(stderr, "paraemb: error: %s\n", e.what());
    return static_cast<int>(paraemb::ErrorKind::kData);
  }
  return 0;
}
