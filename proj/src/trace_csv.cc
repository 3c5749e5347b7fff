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

#include "bvi/trace_csv.h"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "bvi/errors.h"

namespace bvi {
namespace {

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t end = line.find(',', start);
    cells.push_back(line.substr(start, end - start));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return cells;
}

template <typename T>
T ParseNumber(const std::string& cell, const std::string& where) {
  T value{};
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty()) {
    throw IoError(where + ": cannot parse '" + cell + "'");
  }
  return value;
}

}  // namespace

std::string FormatDouble(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

void WriteTraceCsv(std::ostream& out, const std::vector<RunRecord>& records) {
  out << kTraceCsvHeader << '\n';
  for (const RunRecord& r : records) {
    const std::string prefix =
        r.method + ',' + r.matrix + ',' + std::to_string(r.n) + ',' +
        std::to_string(r.batch_size) + ',' + std::to_string(r.seed) + ',' +
        FormatDouble(r.eta) + ',' + FormatDouble(r.gamma) + ',';
    for (const TracePoint& p : r.trace) {
      out << prefix << p.oracle_calls << ',' << FormatDouble(p.gap) << ','
          << FormatDouble(p.elapsed_s) << '\n';
    }
  }
}

void WriteTraceCsvFile(const std::filesystem::path& path,
                       const std::vector<RunRecord>& records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  WriteTraceCsv(out, records);
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<RunRecord> ReadTraceCsv(std::istream& in, const std::string& source) {
  std::vector<RunRecord> records;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string where = source + ":" + std::to_string(line_no);
    if (!header_seen) {
      if (line != kTraceCsvHeader) throw IoError(where + ": missing trace header");
      header_seen = true;
      continue;
    }
    if (line.empty()) continue;
    const std::vector<std::string> cells = SplitCsv(line);
    if (cells.size() != 10) {
      throw IoError(where + ": expected 10 fields, got " +
                    std::to_string(cells.size()));
    }
    RunRecord key;
    key.method = cells[0];
    key.matrix = cells[1];
    key.n = ParseNumber<long long>(cells[2], where);
    key.batch_size = ParseNumber<int>(cells[3], where);
    key.seed = ParseNumber<unsigned long long>(cells[4], where);
    key.eta = ParseNumber<double>(cells[5], where);
    key.gamma = ParseNumber<double>(cells[6], where);
    TracePoint point;
    point.oracle_calls = ParseNumber<long long>(cells[7], where);
    point.gap = ParseNumber<double>(cells[8], where);
    point.elapsed_s = ParseNumber<double>(cells[9], where);

    const bool same = !records.empty() && records.back().method == key.method &&
                      records.back().matrix == key.matrix &&
                      records.back().n == key.n &&
                      records.back().batch_size == key.batch_size &&
                      records.back().seed == key.seed &&
                      records.back().eta == key.eta &&
                      records.back().gamma == key.gamma &&
                      records.back().trace.back().oracle_calls < point.oracle_calls;
    if (!same) records.push_back(std::move(key));
    records.back().trace.push_back(point);
  }
  if (!header_seen) throw IoError(source + ": empty file");
  return records;
}

std::vector<RunRecord> ReadTraceCsvFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return ReadTraceCsv(in, path.string());
}

}  // namespace bvi
