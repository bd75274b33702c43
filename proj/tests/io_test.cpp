#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "hsp/io.hpp"
#include "hsp/verify.hpp"

using namespace hsp;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& p) : path(p) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("pencil json round trip") {
  Pencil P = fixture_pencil();
  Pencil Q = parse_pencil_json(pencil_to_json(P));
  REQUIRE(Q.order() == P.order());
  for (int i = 0; i <= P.order(); ++i)
    for (int m = 0; m <= i; ++m) CHECK(std::abs(Q.a(i, m) - P.a(i, m)) < 1e-16);
}

TEST_CASE("malformed documents are rejected with invalid_argument") {
  CHECK_THROWS_AS(parse_pencil_json("{ not json"), std::invalid_argument);
  CHECK_THROWS_AS(parse_pencil_json("[1,2,3]"), std::invalid_argument);
  CHECK_THROWS_AS(parse_pencil_json(R"({"k": 1, "Q": [[[0,0]]]})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_pencil_json(R"({"k": 1, "Q": [[[0,0]], [["x",0],[1,0]]]})"),
                  std::invalid_argument);
  // deg Q_0 > 0
  CHECK_THROWS_AS(parse_pencil_json(R"({"k": 1, "Q": [[[0,0],[1,0]], [[0,0],[1,0]]]})"),
                  std::invalid_argument);
}

TEST_CASE("hash is stable and coefficient-sensitive") {
  Pencil P = fixture_pencil();
  std::string h = pencil_hash(P);
  CHECK(h.size() == 16);
  CHECK(h == pencil_hash(fixture_pencil()));
  Pencil Q({ComplexPolynomial({cxd(-1, 0)}),
            ComplexPolynomial({cxd(0, 0), cxd(1, 0)})});
  CHECK(h != pencil_hash(Q));
}

TEST_CASE("csv carries the provenance comment, header, and CRLF endings") {
  TempFile f("io_test_points.csv");
  write_points_csv(f.path, "deadbeefdeadbeef", {cxd(1, 2), cxd(-0.5, 0)}, 17);
  std::string text = slurp(f.path);
  CHECK(text.rfind("# pencil=deadbeefdeadbeef version=", 0) == 0);
  CHECK(text.find("\r\n") != std::string::npos);
  CHECK(text.find("re,im\r\n") != std::string::npos);
  CHECK(text.find("1,2\r\n") != std::string::npos);
  CHECK(text.find("-0.5,0\r\n") != std::string::npos);
}

TEST_CASE("series csv records its origin") {
  TempFile f("io_test_series.csv");
  TruncatedSeries s;
  s.coeffs = {cxd(0, 0), cxd(0.5, -0.25)};
  s.origin = TruncatedSeries::Origin::LogDerivative;
  write_series_csv(f.path, "0123456789abcdef", s, 17);
  std::string text = slurp(f.path);
  CHECK(text.find("origin=log-derivative") != std::string::npos);
  CHECK(text.find("index,re,im\r\n") != std::string::npos);
}

TEST_CASE("svg output is byte-stable and timestamp-free") {
  TempFile f1("io_test_a.svg"), f2("io_test_b.svg");
  std::vector<SvgGroup> groups(1);
  groups[0].pts = {cxd(0, 0), cxd(1, 1), cxd(2, 0.5)};
  groups[0].polyline = true;
  write_svg_scatter(f1.path, groups, "plot");
  write_svg_scatter(f2.path, groups, "plot");
  std::string a = slurp(f1.path), b = slurp(f2.path);
  CHECK(a == b);
  CHECK(a.rfind("<svg", 0) == 0);
  CHECK(a.find("<polyline") != std::string::npos);
  CHECK(a.find("<title>plot</title>") != std::string::npos);
}

TEST_CASE("unwritable paths raise IoError") {
  CHECK_THROWS_AS(write_points_csv("/nonexistent_dir_zz/x.csv", "00", {}, 17), IoError);
  CHECK_THROWS_AS(write_svg_scatter("/nonexistent_dir_zz/x.svg", {}), IoError);
}
