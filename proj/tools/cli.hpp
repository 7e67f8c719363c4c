// Copyright 2026 The ropnet Authors
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

#ifndef ROPNET_TOOLS_CLI_HPP_
#define ROPNET_TOOLS_CLI_HPP_

#include <iosfwd>

namespace ropnet::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitOther = 1,
  kExitConfig = 2,
  kExitData = 3,
  kExitDivergence = 4,
};

/// Entry point of the `ropnet` command, callable in-process.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ropnet::cli

#endif  // ROPNET_TOOLS_CLI_HPP_
