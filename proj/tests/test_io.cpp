#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>

#include "framekit/gabor.hpp"
#include "framekit/io.hpp"

using namespace framekit;

namespace {

DecompositionPtr share(IndexDecomposition d) {
  return std::make_shared<const IndexDecomposition>(std::move(d));
}

// Unique temp path per test body; removed on destruction.
struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) {
    path = (std::filesystem::temp_directory_path() / ("framekit_test_" + name)).string();
  }
  ~TempFile() { std::remove(path.c_str()); }
};

void writeText(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

}  // namespace

TEST_CASE("g17 text round-trips every double exactly") {
  // strtod instead of stod: stod throws on subnormals that strtod parses.
  for (double v : {1.0 / 3.0, 0.1, 3.141592653589793, 1e-300, 4.9406564584124654e-324,
                   2.2250738585072014e-308, 123456789.123456789}) {
    CHECK(std::strtod(formatG17(v).c_str(), nullptr) == v);
    CHECK(std::strtod(formatG17(-v).c_str(), nullptr) == -v);
  }
  CHECK(std::strtod(formatG17(0.0).c_str(), nullptr) == 0.0);
}

TEST_CASE("frame json round-trips vectors, labels, collar, and dual") {
  GaborLattice lat;
  lat.modulus = 8;
  lat.points = {{0.0, 0.0}, {1.0, 0.0}, {4.0, 4.0}};
  FrameSnapshot snap = gaborSystem(gaussianWindow(8, 1.3), lat, BoxSpec(0.5, 0.5), {2, 3});
  ComplexMatrix dual = 0.5 * snap.vectors;
  FrameSnapshot with_dual(snap.vectors, snap.decomp, dual);

  TempFile f("frame.json");
  writeFrameJson(f.path, with_dual);
  FrameSnapshot back = readFrameJson(f.path);

  CHECK(back.ambientDim() == 8);
  CHECK(back.totalLabels() == 3);
  CHECK(back.decomp->depth() == 2);
  CHECK(back.decomp->collarSize() == 1);
  for (Index i = 0; i < 3; ++i) CHECK(back.decomp->label(i) == snap.decomp->label(i));
  CHECK((back.vectors - snap.vectors).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE(back.has_dual);
  CHECK((back.dual - dual).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("frame json fills in default labels") {
  TempFile f("frame_min.json");
  writeText(f.path,
            R"({"ambient_dim": 2, "blocks": [1, 2],
                "vectors": [[[1,0],[0,0]], [[0,0],[1,0]]]})");
  FrameSnapshot snap = readFrameJson(f.path);
  CHECK(snap.ambientDim() == 2);
  CHECK(snap.totalLabels() == 2);
  CHECK_FALSE(snap.has_dual);
  CHECK(snap.vectors(0, 0) == Complex(1.0, 0.0));
  CHECK(snap.vectors(1, 1) == Complex(1.0, 0.0));
}

TEST_CASE("frame json reader flags malformed input") {
  TempFile f("frame_bad.json");
  writeText(f.path, "this is not json");
  CHECK_THROWS_AS(readFrameJson(f.path), InputError);
  writeText(f.path, R"({"ambient_dim": 2, "blocks": [1]})");
  CHECK_THROWS_AS(readFrameJson(f.path), InputError);
  writeText(f.path,
            R"({"ambient_dim": 2, "blocks": [1], "vectors": [[[1,0]]]})");
  CHECK_THROWS_AS(readFrameJson(f.path), InputError);
  CHECK_THROWS_AS(readFrameJson("/nonexistent/path.json"), InputError);
}

TEST_CASE("matrix json round-trips entries and blocks") {
  auto d = share(IndexDecomposition::prefixBlocks(3));
  ComplexMatrix m(3, 3);
  for (Index r = 0; r < 3; ++r)
    for (Index c = 0; c < 3; ++c)
      m(r, c) = Complex(1.0 / (1.0 + r + c), -0.25 * static_cast<double>(r - c));
  TempFile f("matrix.json");
  writeMatrixJson(f.path, OperatorSnapshot(m, d));
  OperatorSnapshot back = readMatrixJson(f.path);
  CHECK(back.matrix.rows() == 3);
  CHECK((back.matrix - m).cwiseAbs().maxCoeff() == 0.0);
  CHECK(back.decomp->depth() == 3);
  CHECK(back.decomp->blockSize(2) == 2);
}

TEST_CASE("matrix json defaults to a single block") {
  TempFile f("matrix_min.json");
  writeText(f.path, R"({"dim": 2, "entries": [[[1,0],[0,0]], [[0,0],[1,0]]]})");
  OperatorSnapshot op = readMatrixJson(f.path);
  CHECK(op.decomp->depth() == 1);
  CHECK(op.decomp->blockSize(1) == 2);
  writeText(f.path, R"({"dim": 2, "entries": [[[1,0]]]})");
  CHECK_THROWS_AS(readMatrixJson(f.path), InputError);
}

TEST_CASE("lattice json round-trips points, modulus, and phases") {
  GaborLattice lat = regularLattice(8, 2, 4);
  lat.phases.assign(lat.points.size(), 0.25);
  TempFile f("lattice.json");
  writeLatticeJson(f.path, lat);
  GaborLattice back = readLatticeJson(f.path);
  REQUIRE(back.modulus.has_value());
  CHECK(*back.modulus == 8);
  CHECK(back.points == lat.points);
  CHECK(back.phases == lat.phases);

  GaborLattice plane;
  plane.points = {{0.25, -1.5}, {2.0, 3.0}};
  writeLatticeJson(f.path, plane);
  GaborLattice plane_back = readLatticeJson(f.path);
  CHECK_FALSE(plane_back.modulus.has_value());
  CHECK(plane_back.points == plane.points);
  CHECK(plane_back.phases.empty());
}

TEST_CASE("sequence csv round-trips values exactly") {
  auto d = share(IndexDecomposition::prefixBlocks(5));
  RealVector v(5);
  v << 1.0 / 3.0, 0.1, -2.5, 1e-15, 4.0;
  RealSequence x(v, d);
  TempFile f("seq.csv");
  writeSequenceCsv(f.path, x);

  std::ifstream in(f.path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "n,size,value");

  RealSequence back = readSequenceCsv(f.path);
  CHECK(back.depth() == 5);
  for (Index n = 0; n < 5; ++n) {
    CHECK(back.values(n) == v(n));
    CHECK(back.decomp->blockSize(n + 1) == n + 1);
  }

  writeText(f.path, "n,size,value\n1,not,a number\n");
  CHECK_THROWS_AS(readSequenceCsv(f.path), InputError);
}

TEST_CASE("profile and channel writers emit their schemas") {
  MeasureProfile p;
  p.liminf = 0.25;
  p.limsup = 0.5;
  p.clusters = {{0.25, 0.5}, {0.5, 0.5}};
  p.window_first = 3;
  p.window_last = 10;
  TempFile f("profile.json");
  writeProfileJson(f.path, p);
  std::ifstream in(f.path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(text.find("liminf") != std::string::npos);
  CHECK(text.find("clusters") != std::string::npos);

  ChannelReport rep;
  rep.trials = 100;
  rep.seed = 1;
  rep.rows.push_back({1, 0.5, 0.49, 0.01, -1.0});
  rep.rows.push_back({2, 0.5, 0.52, 0.01, 2.0});
  TempFile g("channel.csv");
  writeChannelCsv(g.path, rep);
  std::ifstream cin_(g.path);
  std::string header;
  std::getline(cin_, header);
  CHECK(header == "n,analytic,empirical,stderr,z");
  int rows = 0;
  std::string line;
  while (std::getline(cin_, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 2);
}

TEST_CASE("frame file validation collects every defect") {
  TempFile f("validate.json");
  writeFrameJson(f.path, FrameSnapshot(ComplexMatrix::Identity(3, 3),
                                       share(IndexDecomposition::prefixBlocks(3))));
  ValidationReport good = validateFrameFile(f.path);
  CHECK(good.ok);
  CHECK(good.errors.empty());

  writeText(f.path,
            R"({"ambient_dim": 2, "blocks": [2, 1],
                "vectors": [[[1,0],[0,0]]], "dual": []})");
  ValidationReport bad = validateFrameFile(f.path);
  CHECK_FALSE(bad.ok);
  CHECK(bad.errors.size() >= 2);

  ValidationReport missing = validateFrameFile("/nonexistent/file.json");
  CHECK_FALSE(missing.ok);
  CHECK(missing.errors.size() == 1);
}
