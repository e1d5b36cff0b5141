// Copyright 2026 The dpm Authors.
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

#ifndef DPM_CLI_HPP
#define DPM_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace dpm {

/// Runs `dpm <sample|moments|verify|characterize> [flags]`. args excludes
/// the program name. Returns 0 when every test passes, 1 when any fails and
/// 2 on usage or configuration errors (one line on err).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Same, from main's arguments.
int run(int argc, const char* const* argv);

/// git-describe-style version baked in at build time.
const char* version_string();

}  // namespace dpm

#endif  // DPM_CLI_HPP
