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

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "bvi/errors.h"
#include "bvi/harness.h"
#include "gtest/gtest.h"

namespace bvi {
namespace {

std::vector<RunRecord> SampleRecords() {
  const MatrixGame game(GeneratePolicemanBurglar(10, 3));
  MethodSpec mp;
  mp.method = Method::kMirrorProx;
  TraceOptions options;
  options.gap_every = 10;
  std::vector<RunRecord> out = {RunCell(game, MethodSpec{}, 1, 4, 500, options),
                                RunCell(game, MethodSpec{}, 2, 4, 500, options),
                                RunCell(game, mp, 1, 4, 500, options)};
  for (RunRecord& r : out) r.matrix = "pb";
  return out;
}

TEST(FormatDoubleTest, ShortestRoundTrip) {
  EXPECT_EQ(FormatDouble(0.1), "0.1");
  EXPECT_EQ(FormatDouble(1.0), "1");
  for (double v : {1.0 / 3, 2.0805520136816823e-06, 1e300, -0.0}) {
    EXPECT_EQ(std::stod(FormatDouble(v)), v);
  }
}

TEST(TraceCsvTest, RoundTripIsExact) {
  const std::vector<RunRecord> records = SampleRecords();
  std::stringstream buffer;
  WriteTraceCsv(buffer, records);
  const std::vector<RunRecord> back = ReadTraceCsv(buffer, "buffer");
  ASSERT_EQ(back.size(), records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    EXPECT_EQ(back[i].method, records[i].method);
    EXPECT_EQ(back[i].matrix, records[i].matrix);
    EXPECT_EQ(back[i].n, records[i].n);
    EXPECT_EQ(back[i].batch_size, records[i].batch_size);
    EXPECT_EQ(back[i].seed, records[i].seed);
    EXPECT_EQ(back[i].eta, records[i].eta);
    EXPECT_EQ(back[i].gamma, records[i].gamma);
    EXPECT_EQ(back[i].trace, records[i].trace);
  }
  std::stringstream again;
  WriteTraceCsv(again, back);
  std::stringstream first;
  WriteTraceCsv(first, records);
  EXPECT_EQ(again.str(), first.str());
}

TEST(TraceCsvTest, HeaderLine) {
  std::stringstream buffer;
  WriteTraceCsv(buffer, {});
  EXPECT_EQ(buffer.str(), std::string(kTraceCsvHeader) + "\n");
}

TEST(TraceCsvTest, MalformedRowReportsLine) {
  std::stringstream in(std::string(kTraceCsvHeader) +
                       "\nalg1,pb,10,1,4,0.1,0.2,0,1.5,0\n"
                       "alg1,pb,10,1,4,0.1,0.2,ten,1.4,0\n");
  try {
    ReadTraceCsv(in, "trace.csv");
    FAIL();
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("trace.csv:3"), std::string::npos)
        << e.what();
  }
}

TEST(TraceCsvTest, WrongFieldCountReportsLine) {
  std::stringstream in(std::string(kTraceCsvHeader) + "\nalg1,pb,10\n");
  try {
    ReadTraceCsv(in, "t.csv");
    FAIL();
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("t.csv:2"), std::string::npos);
  }
}

TEST(TraceCsvTest, MissingHeaderIsRejected) {
  std::stringstream in("a,b,c\n");
  EXPECT_THROW(ReadTraceCsv(in, "x"), IoError);
  std::stringstream empty("");
  EXPECT_THROW(ReadTraceCsv(empty, "x"), IoError);
}

}  // namespace
}  // namespace bvi
