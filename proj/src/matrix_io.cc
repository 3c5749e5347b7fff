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

#include "bvi/matrix_io.h"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "bvi/errors.h"
#include "zlib.h"

namespace bvi {
namespace {

void PutU32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(char((v >> (8 * i)) & 0xFF));
}

std::uint32_t GetU32(const std::string& in, std::size_t pos) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= std::uint32_t(static_cast<unsigned char>(in[pos + i])) << (8 * i);
  }
  return v;
}

void PutF64(std::string& out, double d) {
  const auto bits = std::bit_cast<std::uint64_t>(d);
  for (int i = 0; i < 8; ++i) out.push_back(char((bits >> (8 * i)) & 0xFF));
}

double GetF64(const std::string& in, std::size_t pos) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) {
    bits |= std::uint64_t(static_cast<unsigned char>(in[pos + i])) << (8 * i);
  }
  return std::bit_cast<double>(bits);
}

}  // namespace

std::string EncodeMatrix(const Eigen::MatrixXd& a) {
  std::string out(kMatrixMagic, 4);
  PutU32(out, std::uint32_t(a.rows()));
  PutU32(out, std::uint32_t(a.cols()));
  PutU32(out, 0);
  out.reserve(kMatrixHeaderSize + 8 * a.size());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) PutF64(out, a(i, j));
  }
  return out;
}

Eigen::MatrixXd DecodeMatrix(const std::string& bytes) {
  if (bytes.size() < kMatrixHeaderSize ||
      std::memcmp(bytes.data(), kMatrixMagic, 4) != 0) {
    throw IoError("not a BVI1 matrix (bad magic or short header)");
  }
  const std::uint64_t rows = GetU32(bytes, 4);
  const std::uint64_t cols = GetU32(bytes, 8);
  if (bytes.size() != kMatrixHeaderSize + 8 * rows * cols) {
    throw IoError("BVI1 payload size does not match " + std::to_string(rows) +
                  "x" + std::to_string(cols));
  }
  Eigen::MatrixXd a(rows, cols);
  std::size_t pos = kMatrixHeaderSize;
  for (std::uint64_t i = 0; i < rows; ++i) {
    for (std::uint64_t j = 0; j < cols; ++j, pos += 8) a(i, j) = GetF64(bytes, pos);
  }
  return a;
}

std::string ReadFileBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFileBytes(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(bytes.data(), std::streamsize(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

void WriteMatrixFile(const std::filesystem::path& path, const Eigen::MatrixXd& a) {
  WriteFileBytes(path, EncodeMatrix(a));
}

Eigen::MatrixXd ReadMatrixFile(const std::filesystem::path& path) {
  try {
    return DecodeMatrix(ReadFileBytes(path));
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

Eigen::MatrixXd ReadMatrixCsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t start = 0;
    while (start <= line.size()) {
      std::size_t end = line.find(',', start);
      if (end == std::string::npos) end = line.size();
      std::string cell = line.substr(start, end - start);
      const auto first = cell.find_first_not_of(" \t");
      const auto last = cell.find_last_not_of(" \t");
      cell = first == std::string::npos ? "" : cell.substr(first, last - first + 1);
      double v = 0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty()) {
        throw IoError(path.string() + ":" + std::to_string(line_no) +
                      ": cannot parse '" + cell + "'");
      }
      row.push_back(v);
      start = end + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw IoError(path.string() + ":" + std::to_string(line_no) +
                    ": ragged row");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IoError(path.string() + ": empty matrix");
  Eigen::MatrixXd a(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) a(i, j) = rows[i][j];
  }
  return a;
}

Eigen::MatrixXd LoadMatrix(const std::filesystem::path& path) {
  if (path.extension() == ".csv") return ReadMatrixCsv(path);
  return ReadMatrixFile(path);
}

std::uint32_t Crc32(const std::string& bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, reinterpret_cast<const Bytef*>(bytes.data()),
              uInt(bytes.size()));
  return std::uint32_t(crc);
}

}  // namespace bvi
