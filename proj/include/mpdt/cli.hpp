/*
 * Copyright 2026 The MPDT Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef MPDT_CLI_HPP_
#define MPDT_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace mpdt::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 1,
  kInseparable = 2,
  kTimeoutNoModel = 3,
};

// Runs the command line (without the program name). Results go to out,
// progress and diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mpdt::cli

#endif  // MPDT_CLI_HPP_
