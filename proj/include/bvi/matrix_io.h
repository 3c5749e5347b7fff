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

// Dense matrix exchange format:
//
//   offset  size  content
//   0       4     magic "BVI1"
//   4       4     rows, u32 little-endian
//   8       4     cols, u32 little-endian
//   12      4     reserved, zero
//   16      8*r*c entries, f64 little-endian, row-major
//
// CSV import accepts one matrix row per line, comma separated.

#ifndef BVI_MATRIX_IO_H_
#define BVI_MATRIX_IO_H_

#include <cstdint>
#include <filesystem>
#include <string>

#include "Eigen/Core"

namespace bvi {

inline constexpr char kMatrixMagic[4] = {'B', 'V', 'I', '1'};
inline constexpr std::size_t kMatrixHeaderSize = 16;

std::string EncodeMatrix(const Eigen::MatrixXd& a);
// Throws IoError on a bad magic, truncated payload or trailing bytes.
Eigen::MatrixXd DecodeMatrix(const std::string& bytes);

void WriteMatrixFile(const std::filesystem::path& path, const Eigen::MatrixXd& a);
Eigen::MatrixXd ReadMatrixFile(const std::filesystem::path& path);
Eigen::MatrixXd ReadMatrixCsv(const std::filesystem::path& path);

// Binary or CSV, chosen by extension (".csv" means CSV).
Eigen::MatrixXd LoadMatrix(const std::filesystem::path& path);

// zlib CRC-32 of a byte string.
std::uint32_t Crc32(const std::string& bytes);

std::string ReadFileBytes(const std::filesystem::path& path);
void WriteFileBytes(const std::filesystem::path& path, const std::string& bytes);

}  // namespace bvi

#endif  // BVI_MATRIX_IO_H_
