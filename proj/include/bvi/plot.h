// Copyright 2026 The bvi Authors.
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

#ifndef BVI_PLOT_H_
#define BVI_PLOT_H_

#include <string>
#include <vector>

#include "bvi/solvers.h"

namespace bvi {

// Gap (log scale) against oracle calls (linear), one panel per batch size and
// one polyline per configuration (median across seeds). Output depends only on
// the records, byte for byte. Throws DomainError("no data") when there is
// nothing to draw.
std::string RenderGapPlotSvg(const std::vector<RunRecord>& records);

// Tick label for 10^exponent: "1", "1e-1", "1e2", ...
std::string DecadeLabel(int exponent);

}  // namespace bvi

#endif  // BVI_PLOT_H_
