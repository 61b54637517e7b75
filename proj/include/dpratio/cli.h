//
// Copyright 2026 The dpratio Authors
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
//

#ifndef DPRATIO_CLI_H_
#define DPRATIO_CLI_H_

namespace dpratio {

// Entry point for the dpratio command-line tool.
//
// Exit status contract: 0 on success (a propose-test-release FAIL is a valid
// outcome, not an error), 1 on domain or numerical errors, 2 on usage errors
// (bad flags, malformed config, empty grids).
//
// When --seed is omitted, the DPRATIO_SEED environment variable supplies the
// default; with neither, the seed is 0.
int run_cli(int argc, const char* const* argv);

}  // namespace dpratio

#endif  // DPRATIO_CLI_H_
