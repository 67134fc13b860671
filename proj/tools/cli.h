/*
 * Copyright 2026 The v2g Authors.
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

#ifndef V2G_TOOLS_CLI_H_
#define V2G_TOOLS_CLI_H_

#include <ostream>

namespace v2g {

// Runs one `v2g` invocation. Machine-readable results go to `out`, progress
// and diagnostics to `err`. Returns 0 on success, 1 on a usage error and 2
// when the inputs are rejected.
int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err);

}  // namespace v2g

#endif  // V2G_TOOLS_CLI_H_
