// Copyright 2026 The freelab Authors.
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


#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "freelab/config.hpp"
#include "freelab/csv.hpp"
#include "freelab/errors.hpp"

namespace freelab {
namespace {

TEST(Numbers, FormatRoundTrips) {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0,
                   std::numeric_limits<double>::denorm_min()}) {
    EXPECT_EQ(parse_double(format_double(x)), x);
  }
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
}

TEST(Numbers, StrictParsing) {
  EXPECT_EQ(parse_double(" +1.5 "), 1.5);
  EXPECT_EQ(parse_int(" -42"), -42);
  EXPECT_THROW(parse_double("1.5x"), IoError);
  EXPECT_THROW(parse_double(""), IoError);
  EXPECT_THROW(parse_int("3.0"), IoError);
  EXPECT_EQ(parse_double_list("1, 2,3.5"), (std::vector<double>{1, 2, 3.5}));
  EXPECT_EQ(parse_double_list("4;5", ';'), (std::vector<double>{4, 5}));
  EXPECT_TRUE(parse_double_list("  ").empty());
  EXPECT_THROW(parse_double_list("1,,2"), IoError);
}

TEST(Csv, WriterLayout) {
  std::stringstream ss;
  CsvWriter w(ss);
  w.run_metadata(7, 16, 512);
  w.metadata("note", std::string("x"));
  w.header({"n", "delta", "tag"});
  w.row({std::int64_t{4}, 0.25, std::string("a")});
  std::vector<std::string> lines;
  for (std::string l; std::getline(ss, l);) lines.push_back(l);
  ASSERT_EQ(lines.size(), 7u);
  EXPECT_EQ(lines[0], "# seed = 7");
  EXPECT_EQ(lines[1], "# n = 16");
  EXPECT_EQ(lines[2], "# N = 512");
  EXPECT_EQ(lines[3].rfind("# git_describe = ", 0), 0u);
  EXPECT_EQ(lines[5], "n,delta,tag");
  EXPECT_EQ(lines[6], "4,0.25,a");
  EXPECT_THROW(w.row({1.0}), IoError);
}

TEST(Csv, ReadTable) {
  std::stringstream ss("# meta\nx, y\n1,2\n\n3,4.5\n");
  const CsvTable t = read_csv_table(ss);
  EXPECT_EQ(t.header, (std::vector<std::string>{"x", "y"}));
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[1][t.column("y")], 4.5);
  EXPECT_THROW(t.column("z"), IoError);
  std::stringstream bad("x,y\n1\n");
  EXPECT_THROW(read_csv_table(bad), IoError);
  std::stringstream empty("# only\n");
  EXPECT_THROW(read_csv_table(empty), IoError);
  EXPECT_THROW(read_csv_table(std::string("/nonexistent/file.csv")), IoError);
}

TEST(ConfigTest, ParseAndSections) {
  std::stringstream ss(
      "# comment\n\nclt.n = 16\nclt.base = two.txt \n gue-selfnorm.N=512\n");
  const Config c = Config::parse(ss);
  EXPECT_EQ(c.entries().size(), 3u);
  const auto s = c.section("clt");
  EXPECT_EQ(s.at("n"), "16");
  EXPECT_EQ(s.at("base"), "two.txt");
  EXPECT_EQ(c.section("gue-selfnorm").at("N"), "512");
  EXPECT_TRUE(c.section("bai").empty());
  c.validate({{"clt", {"n", "base"}}, {"gue-selfnorm", {"N"}}});
}

TEST(ConfigTest, RejectsBadInput) {
  auto parse = [](const std::string& text) {
    std::stringstream ss(text);
    return Config::parse(ss, "cfg");
  };
  EXPECT_THROW(parse("clt.n 16\n"), IoError);
  EXPECT_THROW(parse("n = 16\n"), IoError);
  EXPECT_THROW(parse(".n = 16\n"), IoError);
  EXPECT_THROW(parse("clt. = 16\n"), IoError);
  try {
    parse("clt.n = 1\nclt.n = 2\n");
    FAIL();
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("cfg:2"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("duplicate"), std::string::npos);
  }
  const Config c = parse("clt.n = 1\nclt.bogus = 2\n");
  EXPECT_THROW(c.validate({{"clt", {"n"}}}), IoError);
  EXPECT_THROW(parse("nope.n = 1\n").validate({{"clt", {"n"}}}), IoError);
  EXPECT_THROW(Config::load("/nonexistent/cfg"), IoError);
}

}  // namespace
}  // namespace freelab
