// Copyright 2026 The BARcode Authors.
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

#ifndef BARCODE_CLI_H_
#define BARCODE_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace barcode {

// Exit codes of the barcode command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;  // bad input data, provider or store failure
inline constexpr int kExitUsage = 2;        // unknown flag, missing argument

// Runs the command line `args` (args[0] is the program name). Results go to
// `out`, logs and usage text to `err`.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace barcode

#endif  // BARCODE_CLI_H_
