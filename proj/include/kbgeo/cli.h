// Copyright 2026 The kbgeo Authors
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

#ifndef KBGEO_CLI_H_
#define KBGEO_CLI_H_

#include <cstddef>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "kbgeo/report.h"
#include "kbgeo/semantics.h"

namespace kbgeo {

// Exit codes of the command-line tool.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUnknown = 2;
inline constexpr int kExitUsage = 3;

struct RunConfig {
  int n_max = 2;
  int depth = 2;
  std::size_t max_points = kDefaultMaxPoints;
  bool with_equality = true;
  ReportFormat format = ReportFormat::kText;
};

// Defaults, with max_points taken from KBGEO_MAX_POINTS when it is set to a
// positive integer.
RunConfig DefaultRunConfig();

// Parses "{(1,0),(1,1)}" (carrier labels, one coordinate per variable) into
// a point set of `space`. Braces are optional; "{}" is the empty set.
PointSet ParsePointSet(std::string_view text, const SpacePtr& space);

// argv without the program name. Output goes to `out`, diagnostics and
// usage text to `err`. Returns one of the exit codes above.
int RunCommand(const std::vector<std::string>& args, const RunConfig& config,
               std::ostream& out, std::ostream& err);

}  // namespace kbgeo

#endif  // KBGEO_CLI_H_
