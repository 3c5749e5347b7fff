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

// Trace CSV: one row per checkpoint,
//   method,matrix,n,b,seed,eta,gamma,oracle_calls,gap,elapsed_s
// Doubles are written in shortest round-trip form so that reading a file back
// reproduces every trace exactly.

#ifndef BVI_TRACE_CSV_H_
#define BVI_TRACE_CSV_H_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "bvi/solvers.h"

namespace bvi {

inline constexpr std::string_view kTraceCsvHeader =
    "method,matrix,n,b,seed,eta,gamma,oracle_calls,gap,elapsed_s";

// Shortest decimal string that parses back to the same double.
std::string FormatDouble(double value);

void WriteTraceCsv(std::ostream& out, const std::vector<RunRecord>& records);
void WriteTraceCsvFile(const std::filesystem::path& path,
                       const std::vector<RunRecord>& records);

// Consecutive rows with the same (method, matrix, n, b, seed, eta, gamma) form
// one record. Throws IoError naming `source` and the line number on a
// malformed row.
std::vector<RunRecord> ReadTraceCsv(std::istream& in, const std::string& source);
std::vector<RunRecord> ReadTraceCsvFile(const std::filesystem::path& path);

}  // namespace bvi

#endif  // BVI_TRACE_CSV_H_
