// Copyright 2026 The VQCL Authors.
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

#ifndef VQCL_CLI_H_
#define VQCL_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace vqcl {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntimeError = 1;
inline constexpr int kExitUsageError = 2;

// Runs the command line `args` (without the program name). Subcommands:
// synth, stats, train, eval, predict, explain, gradcheck. Returns the process
// exit code: 0 success, 1 runtime or data error, 2 usage error.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace vqcl

#endif  // VQCL_CLI_H_
