#include <doctest.h>

#include <bit>
#include <cmath>
#include <filesystem>
#include <limits>
#include <random>

#include "fixtures.hpp"
#include "tightlab/error.hpp"
#include "tightlab/io/csv.hpp"

using namespace tightlab;
using namespace tightlab::io;

TEST_SUITE("csv") {

TEST_CASE("RFC 4180 quoting, CRLF and BOM") {
  const auto t = parse_csv("\xEF\xBB\xBF" "a,b,c\r\n1,\"x,y\",\"he said \"\"hi\"\"\"\r\n2,\"multi\nline\",\r\n\n", "t.csv");
  CHECK(t.header == std::vector<std::string>{"a", "b", "c"});
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0][1] == "x,y");
  CHECK(t.rows[0][2] == "he said \"hi\"");
  CHECK(t.rows[1][1] == "multi\nline");
  CHECK(t.rows[1][2].empty());
  CHECK(t.line == std::vector<std::size_t>{2, 3});
}

TEST_CASE("malformed input reports the line") {
  try {
    (void)parse_csv("a,b\n1,2\n3\n", "bad.csv");
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(e.file() == "bad.csv");
    CHECK(e.row() == 3);
  }
  CHECK_THROWS_AS(parse_csv("a\n\"open\n", "q.csv"), SchemaError);
  CHECK_THROWS_AS(parse_csv("", "empty.csv"), SchemaError);
  CHECK_THROWS_AS(parse_csv("a\nx\"y\n", "stray.csv"), SchemaError);
}

TEST_CASE("typed fields carry row and column diagnostics") {
  const auto t = parse_csv("id,value\n1,2.5\n2,abc\nx,1\n3,inf\n", "f.csv");
  CHECK(field_int(t, 0, 0) == 1);
  CHECK(field_double(t, 0, 1) == 2.5);
  try {
    (void)field_double(t, 1, 1);
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(e.row() == 3);
    CHECK(e.column() == "value");
    CHECK(std::string(e.what()).find("f.csv:3 [value]") != std::string::npos);
  }
  CHECK_THROWS_AS(field_int(t, 2, 0), SchemaError);
  CHECK_THROWS_AS(field_double(t, 3, 1), SchemaError);
}

TEST_CASE("header must match exactly") {
  const auto t = parse_csv("a,c\n", "h.csv");
  CHECK_NOTHROW(require_header(t, {"a", "c"}));
  CHECK_THROWS_AS(require_header(t, {"a", "b"}), SchemaError);
  CHECK_THROWS_AS(require_header(t, {"a"}), SchemaError);
}

TEST_CASE("property: doubles round-trip bit-exactly") {
  std::mt19937_64 rng(71);
  for (int i = 0; i < 100000; ++i) {
    double v = std::bit_cast<double>(rng());
    if (!std::isfinite(v)) continue;
    CsvWriter w({"v"});
    w.field(v);
    w.end_row();
    const auto t = parse_csv(w.str(), "r.csv");
    CHECK(std::bit_cast<std::uint64_t>(field_double(t, 0, 0)) == std::bit_cast<std::uint64_t>(v));
  }
  for (double v : {0.0, -0.0, 1e-320, std::numeric_limits<double>::max(), 0.1, 1.0 / 3.0})
    CHECK(std::bit_cast<std::uint64_t>(field_double(parse_csv("v\n" + format_double(v) + "\n", "s"), 0, 0)) ==
          std::bit_cast<std::uint64_t>(v));
}

TEST_CASE("property: strings round-trip through the writer") {
  std::mt19937_64 rng(72);
  const std::string alphabet = "ab,\"\n\r x";
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1), len(1, 12);
  for (int i = 0; i < 2000; ++i) {
    std::string s;
    for (std::size_t k = len(rng); k > 0; --k) s.push_back(alphabet[pick(rng)]);
    CsvWriter w({"s", "n"});
    w.field(s).field(std::int64_t{7});
    w.end_row();
    const auto t = parse_csv(w.str(), "s.csv");
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0][0] == s);
  }
}

TEST_CASE("writer enforces the header width") {
  CsvWriter w({"a", "b"});
  w.field(1);
  CHECK_THROWS_AS(w.end_row(), InvalidArgument);
  w.field(2);
  CHECK_THROWS_AS(w.field(3), InvalidArgument);
}

TEST_CASE("atomic writes replace the target and leave no temporary") {
  testing::ScratchDir dir("csv");
  const auto path = dir.file("nested/out.csv");
  write_file_atomic(path, "first\n");
  write_file_atomic(path, "second\n");
  CHECK(read_file(path) == "second\n");
  std::size_t files = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir.path() / "nested")) {
    (void)entry;
    ++files;
  }
  CHECK(files == 1);
  CHECK_THROWS_AS(read_file(dir.file("missing.csv")), Error);
}

}
