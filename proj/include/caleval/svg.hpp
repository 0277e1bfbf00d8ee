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

#include <string>

#include "caleval/confidence.hpp"

namespace caleval {

/// Renders a reliability diagram as a standalone SVG document: unit square
/// with gridlines, dashed identity diagonal, one accuracy bar per occupied
/// bin, and the accuracy-vs-confidence gap shaded on top of each bar. Empty
/// bins are left blank. Output is deterministic (fixed-precision
/// coordinates, no timestamps, no external references).
std::string reliability_svg(const CalibrationReport& report);

}  // namespace caleval
