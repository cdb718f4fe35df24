#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "edwsax/ucr.hpp"

using edwsax::Dataset;
using edwsax::Delimiter;
using edwsax::LabeledSeries;
using edwsax::ParseError;

namespace {

namespace fs = std::filesystem;

//! Scratch directory wiped per test case.
struct TempDir {
  fs::path path;

  TempDir() {
    path = fs::temp_directory_path() /
           ("edwsax_ucr_" + std::to_string(
                                reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }

  fs::path write(const std::string& name, const std::string& content) const {
    const fs::path p = path / name;
    fs::create_directories(p.parent_path());
    std::ofstream out(p);
    out << content;
    return p;
  }
};

}  // namespace

TEST_CASE("load_ucr parses tab separated rows") {
  TempDir dir;
  const fs::path p =
      dir.write("data.tsv", "1\t0.5\t-1.25\t3\n2\t1\t2\t3\n");
  const std::vector<LabeledSeries> rows = edwsax::load_ucr(p);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].label == 1);
  CHECK(rows[0].series.values() == std::vector<double>{0.5, -1.25, 3.0});
  CHECK(rows[1].label == 2);
  CHECK(rows[1].series.size() == 3);
}

TEST_CASE("load_ucr parses comma separated rows") {
  TempDir dir;
  const fs::path p = dir.write("data.csv", "-1,0.25,0.5\n-1,1e-3,2E2\n");
  const std::vector<LabeledSeries> rows = edwsax::load_ucr(p);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].label == -1);
  CHECK(rows[1].series[0] == Catch::Approx(0.001));
  CHECK(rows[1].series[1] == Catch::Approx(200.0));
}

TEST_CASE("load_ucr auto detects the delimiter per file") {
  TempDir dir;
  const fs::path tabs = dir.write("a.txt", "1\t2\t3\n");
  const fs::path commas = dir.write("b.txt", "1,2,3\n");
  const fs::path spaces = dir.write("c.txt", "1 2 3\n");
  CHECK(edwsax::load_ucr(tabs)[0].series.size() == 2);
  CHECK(edwsax::load_ucr(commas)[0].series.size() == 2);
  CHECK(edwsax::load_ucr(spaces)[0].series.size() == 2);
}

TEST_CASE("a forced delimiter overrides detection") {
  TempDir dir;
  // With tabs forced, the comma line is one whitespace-free token, so the
  // row has no value fields.
  const fs::path p = dir.write("d.txt", "1,2,3\n");
  CHECK_THROWS_AS(edwsax::load_ucr(p, Delimiter::tab), ParseError);
}

TEST_CASE("load_ucr skips blank lines and handles windows endings") {
  TempDir dir;
  const fs::path p =
      dir.write("e.tsv", "\n1\t2\t3\r\n\n   \n2\t4\t5\r\n\n");
  const std::vector<LabeledSeries> rows = edwsax::load_ucr(p);
  REQUIRE(rows.size() == 2);
  CHECK(rows[1].series.values() == std::vector<double>{4.0, 5.0});
}

TEST_CASE("load_ucr reports the line and field of a bad number") {
  TempDir dir;
  const fs::path p = dir.write("f.tsv", "1\t2\t3\n1\t2\tNaN\n");
  try {
    edwsax::load_ucr(p);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 3);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("load_ucr rejects label only rows and empty files") {
  TempDir dir;
  CHECK_THROWS_AS(edwsax::load_ucr(dir.write("g.tsv", "42\n")), ParseError);
  CHECK_THROWS_AS(edwsax::load_ucr(dir.write("h.tsv", "\n  \n")),
                  edwsax::EmptyFile);
  CHECK_THROWS_AS(edwsax::load_ucr(dir.path / "missing.tsv"), edwsax::Error);
}

TEST_CASE("find_ucr_split tries flat and nested layouts") {
  TempDir dir;
  dir.write("Alpha_TRAIN.tsv", "1\t2\t3\n");
  dir.write("Beta/Beta_TRAIN", "1\t2\t3\n");
  CHECK(edwsax::find_ucr_split(dir.path, "Alpha", "TRAIN").filename() ==
        "Alpha_TRAIN.tsv");
  CHECK(edwsax::find_ucr_split(dir.path, "Beta", "TRAIN").filename() ==
        "Beta_TRAIN");
  CHECK_THROWS_AS(edwsax::find_ucr_split(dir.path, "Gamma", "TRAIN"),
                  edwsax::Error);
}

TEST_CASE("load_ucr_dataset assembles both splits") {
  TempDir dir;
  dir.write("Demo/Demo_TRAIN.txt", "1\t0\t1\n2\t1\t0\n");
  dir.write("Demo/Demo_TEST.txt", "1\t0.5\t0.5\n");
  const Dataset ds = edwsax::load_ucr_dataset(dir.path, "Demo");
  CHECK(ds.name == "Demo");
  CHECK(ds.train.size() == 2);
  CHECK(ds.test.size() == 1);
}

TEST_CASE("the reference manifest knows the usual benchmark datasets") {
  CHECK(edwsax::reference_manifest().size() == 20);
  const edwsax::DatasetInfo* gp = edwsax::manifest_entry("GunPoint");
  REQUIRE(gp != nullptr);
  CHECK(gp->train_count == 50);
  CHECK(gp->test_count == 150);
  CHECK(gp->series_length == 150);
  CHECK(edwsax::manifest_entry("NotADataset") == nullptr);
}

TEST_CASE("validate_dataset flags shape mismatches") {
  Dataset ds;
  ds.name = "GunPoint";
  for (int i = 0; i < 3; ++i) {
    ds.train.push_back({1, edwsax::TimeSeries({0.0, 1.0})});
  }
  ds.test.push_back({1, edwsax::TimeSeries({0.0, 1.0})});
  const std::vector<std::string> warnings = edwsax::validate_dataset(ds);
  REQUIRE(warnings.size() == 3);
  CHECK(warnings[0].find("50 train") != std::string::npos);
  CHECK(warnings[1].find("150 test") != std::string::npos);
  CHECK(warnings[2].find("length 150") != std::string::npos);

  Dataset unknown;
  unknown.name = "Custom";
  unknown.train.push_back({1, edwsax::TimeSeries({0.0})});
  CHECK(edwsax::validate_dataset(unknown).empty());
}
