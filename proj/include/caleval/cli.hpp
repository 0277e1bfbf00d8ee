// This file is part of the caleval toolkit.
//
// Copyright 2026 The caleval authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace caleval {

/// Runs the command-line tool on `args` (without the program name), writing
/// summaries to `out` and diagnostics to `err`.
///
/// Exit codes are stable API: 0 success, 2 usage error, 3 ingest error,
/// 4 metric precondition failure. File outputs are written atomically and
/// are byte-deterministic for identical inputs and flags; the synth
/// provenance sidecar carries the only timestamp. The env var CALIB_NO_COLOR
/// disables ANSI styling on summaries.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace caleval
