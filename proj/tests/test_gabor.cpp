#include <doctest.h>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "framekit/frame.hpp"
#include "framekit/gabor.hpp"
#include "framekit/measure.hpp"

using namespace framekit;

namespace {

std::vector<Index> evenSides(Index n) {
  std::vector<Index> out;
  for (Index s = 2; s <= n; s += 2) out.push_back(s);
  return out;
}

// Asymmetric unit-norm window. Symmetric windows (the wrapped gaussian
// included) are degenerate on critically sampled lattices, so rank checks
// here need a window without that symmetry.
ComplexVector genericWindow(Index N, double a, double b) {
  ComplexVector g(N);
  for (Index x = 0; x < N; ++x) {
    double t = static_cast<double>(x);
    g(x) = Complex(std::cos(a + 1.3 * t), std::sin(b + 2.1 * t * t));
  }
  g /= g.norm();
  return g;
}

}  // namespace

TEST_CASE("regular lattices enumerate the grid and validate divisibility") {
  GaborLattice lat = regularLattice(8, 2, 2);
  CHECK(lat.points.size() == 16);
  REQUIRE(lat.modulus.has_value());
  CHECK(*lat.modulus == 8);
  CHECK_THROWS_AS(regularLattice(8, 3, 2), std::invalid_argument);
  CHECK_THROWS_AS(regularLattice(8, 0, 2), std::invalid_argument);
  CHECK_THROWS_AS(regularLattice(-8, 2, 2), std::invalid_argument);
}

TEST_CASE("jitter keeps points integral, wrapped, and reproducible") {
  GaborLattice base = regularLattice(8, 2, 2);
  GaborLattice j1 = jitterLattice(base, 1, 99);
  GaborLattice j2 = jitterLattice(base, 1, 99);
  REQUIRE(j1.points.size() == base.points.size());
  CHECK(j1.points == j2.points);
  bool moved = false;
  for (size_t i = 0; i < j1.points.size(); ++i) {
    const auto& p = j1.points[i];
    CHECK(p.first >= 0.0);
    CHECK(p.first < 8.0);
    CHECK(p.second >= 0.0);
    CHECK(p.second < 8.0);
    CHECK(p.first == std::floor(p.first));
    CHECK(p.second == std::floor(p.second));
    moved = moved || p != base.points[i];
  }
  CHECK(moved);
  // Zero amplitude is the identity.
  CHECK(jitterLattice(base, 0, 7).points == base.points);
  CHECK_THROWS_AS(jitterLattice(base, -1, 7), std::invalid_argument);
}

TEST_CASE("box counts on the doubled grid grow with the square of the side") {
  GaborLattice lat = regularLattice(8, 2, 2);
  std::vector<Index> counts = boxCounts(lat, BoxSpec(0.5, 0.5), evenSides(8));
  REQUIRE(counts.size() == 4);
  CHECK(counts[0] == 1);
  CHECK(counts[1] == 4);
  CHECK(counts[2] == 9);
  CHECK(counts[3] == 16);
  CHECK_THROWS_AS(boxCounts(lat, BoxSpec(0.5, 0.5), {}), std::invalid_argument);
  CHECK_THROWS_AS(boxCounts(lat, BoxSpec(0.5, 0.5), {4, 4}), std::invalid_argument);
}

TEST_CASE("windows are unit norm with wrapped symmetry") {
  ComplexVector g = gaussianWindow(8, 2.0);
  CHECK(g.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(g(1) - g(7)) <= 1e-15);
  CHECK(std::abs(g(3) - g(5)) <= 1e-15);
  CHECK(deltaWindow(4).norm() == 1.0);
  CHECK_THROWS_AS(gaussianWindow(0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(gaussianWindow(8, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(deltaWindow(0), std::invalid_argument);
}

TEST_CASE("the full time-frequency family is tight with a flat diagonal") {
  GaborLattice lat = regularLattice(4, 1, 1);
  FrameSnapshot snap = gaborSystem(deltaWindow(4), lat, BoxSpec(0.5, 0.5), {1, 2, 3, 4});
  CHECK(snap.totalLabels() == 16);
  FrameAnalysis an = analyze(snap);
  CHECK(an.span_dim == 4);
  CHECK(an.lower_bound == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(an.upper_bound == doctest::Approx(4.0).epsilon(1e-9));
  for (Index i = 0; i < 16; ++i) CHECK(an.diag(i) == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("doubled grid density and measure are exact reciprocals") {
  GaborLattice lat = regularLattice(8, 2, 2);
  BoxSpec box(0.5, 0.5);
  std::vector<Index> sides = evenSides(8);

  DensityEstimate est =
      densityEstimate(lat, box, sides, VolumeNormalization::FiniteModel, 0.0);
  REQUIRE(est.rows.size() == 4);
  for (const auto& row : est.rows) CHECK(row.ratio == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(est.profile.converged);
  CHECK(est.beurling_lower == doctest::Approx(2.0));
  CHECK(est.beurling_upper == doctest::Approx(2.0));

  FrameSnapshot snap = gaborSystem(gaussianWindow(8, std::sqrt(8.0) / 2.0), lat, box, sides);
  CHECK(snap.decomp->depth() == 4);
  CHECK(snap.decomp->blockSize(4) == 16);

  MeasureDensityReport rep = measureVsDensity(snap, est, 1e-9);
  CHECK(rep.pass);
  CHECK(rep.measure.liminf == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(rep.measure.limsup == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(rep.trace_product == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("lebesgue normalization differs from the finite model by the modulus") {
  GaborLattice lat = regularLattice(8, 2, 2);
  BoxSpec box(0.5, 0.5);
  DensityEstimate fin =
      densityEstimate(lat, box, evenSides(8), VolumeNormalization::FiniteModel, 0.0);
  DensityEstimate leb =
      densityEstimate(lat, box, evenSides(8), VolumeNormalization::Lebesgue, 0.0);
  for (size_t k = 0; k < fin.rows.size(); ++k)
    CHECK(fin.rows[k].ratio == doctest::Approx(8.0 * leb.rows[k].ratio).epsilon(1e-12));
}

TEST_CASE("a critically sampled system carries measure one") {
  GaborLattice lat = regularLattice(8, 2, 4);
  CHECK(lat.points.size() == 8);
  FrameSnapshot snap = gaborSystem(genericWindow(8, 0.7, 0.4), lat, BoxSpec(0.5, 0.5),
                                   evenSides(8));
  FrameAnalysis an = analyze(snap);
  CHECK(an.span_dim == 8);
  MeasureProfile p = frameMeasure(snap, ProfileOptions{}, AnalyzeOptions{});
  CHECK(p.liminf == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(p.limsup == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("point phases leave the diagonal untouched") {
  GaborLattice lat = regularLattice(8, 2, 2);
  BoxSpec box(0.5, 0.5);
  ComplexVector g = gaussianWindow(8, 2.0);
  FrameAnalysis plain = analyze(gaborSystem(g, lat, box, evenSides(8)));

  GaborLattice phased = lat;
  for (size_t i = 0; i < phased.points.size(); ++i)
    phased.phases.push_back(0.3 * static_cast<double>(i) - 1.0);
  FrameAnalysis rotated = analyze(gaborSystem(g, phased, box, evenSides(8)));
  CHECK((plain.diag - rotated.diag).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(plain.lower_bound == doctest::Approx(rotated.lower_bound).epsilon(1e-12));

  GaborLattice short_phases = lat;
  short_phases.phases = {0.1};
  CHECK_THROWS_AS(gaborSystem(g, short_phases, box, evenSides(8)), std::invalid_argument);
}

TEST_CASE("points outside the largest box become collar labels") {
  GaborLattice lat;
  lat.modulus = 8;
  lat.points = {{0.0, 0.0}, {1.0, 0.0}, {4.0, 4.0}};
  FrameSnapshot snap = gaborSystem(deltaWindow(8), lat, BoxSpec(0.5, 0.5), {2, 3});
  CHECK(snap.totalLabels() == 3);
  CHECK(snap.decomp->depth() == 2);
  CHECK(snap.decomp->blockSize(2) == 2);
  CHECK(snap.decomp->collarSize() == 1);
  CHECK(snap.decomp->label(2) == Label(4, 4));
}

TEST_CASE("repeated points get modulus-shifted labels") {
  GaborLattice lat;
  lat.modulus = 8;
  lat.points = {{0.0, 0.0}, {0.0, 0.0}, {1.0, 1.0}};
  FrameSnapshot snap = gaborSystem(deltaWindow(8), lat, BoxSpec(0.5, 0.5), {2});
  CHECK(snap.decomp->label(0) == Label(0, 0));
  CHECK(snap.decomp->label(1) == Label(8, 0));
  CHECK(snap.decomp->label(2) == Label(1, 1));
  // The shifted label still denotes the same vector.
  CHECK((snap.vectors.col(0) - snap.vectors.col(1)).norm() <= 1e-15);
}

TEST_CASE("system construction rejects malformed input") {
  GaborLattice lat = regularLattice(8, 2, 2);
  BoxSpec box(0.5, 0.5);
  GaborLattice no_mod = lat;
  no_mod.modulus.reset();
  CHECK_THROWS_AS(gaborSystem(deltaWindow(8), no_mod, box, {2, 4}), std::invalid_argument);
  CHECK_THROWS_AS(gaborSystem(deltaWindow(4), lat, box, {2, 4}), std::invalid_argument);

  GaborLattice frac;
  frac.modulus = 8;
  frac.points = {{0.5, 0.0}};
  CHECK_THROWS_AS(gaborSystem(deltaWindow(8), frac, box, {2}), std::invalid_argument);

  GaborLattice far;
  far.modulus = 8;
  far.points = {{4.0, 4.0}};
  CHECK_THROWS_AS(gaborSystem(deltaWindow(8), far, box, {2}), std::invalid_argument);
}

TEST_CASE("real-plane density is independent of the box shear") {
  RealMatrix gen = RealMatrix::Identity(2, 2) * 2.0;
  GaborLattice lat = latticeFromMatrix(gen, 40.0);
  CHECK_FALSE(lat.modulus.has_value());

  RealMatrix shear(2, 2);
  shear << 1.0, 0.5, 0.0, 1.0;
  std::vector<Index> sides{8, 16, 24, 32};
  DensityEstimate straight =
      densityEstimate(lat, BoxSpec(0.5, 0.5), sides, VolumeNormalization::Lebesgue, 0.0);
  DensityEstimate sheared = densityEstimate(lat, BoxSpec(0.5, 0.5, shear), sides,
                                            VolumeNormalization::Lebesgue, 0.0);
  CHECK(straight.rows.back().ratio == doctest::Approx(0.25).epsilon(0.1));
  CHECK(sheared.rows.back().ratio == doctest::Approx(0.25).epsilon(0.1));

  RealMatrix singular = RealMatrix::Zero(2, 2);
  CHECK_THROWS_AS(latticeFromMatrix(singular, 10.0), std::invalid_argument);
}

TEST_CASE("two generic windows on the doubled grid exhaust the budget") {
  GaborLattice lat = regularLattice(8, 2, 2);
  std::vector<ComplexVector> windows{genericWindow(8, 0.7, 0.4), genericWindow(8, 1.9, 2.6)};
  SuperframeDensityReport rep = superframeDensityCondition(
      windows, {lat, lat}, BoxSpec(0.5, 0.5), evenSides(8), 1e-6);
  CHECK(rep.measure_sum_low == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(rep.measure_sum_high == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(rep.det_analogue_sum == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.necessary_condition);
  CHECK(rep.superframe.is_superframe);
  CHECK(rep.superframe.combined_span == 16);
}

TEST_CASE("critically doubled systems overdraw the budget") {
  GaborLattice lat = regularLattice(8, 2, 4);
  std::vector<ComplexVector> windows{genericWindow(8, 0.7, 0.4), genericWindow(8, 1.9, 2.6)};
  SuperframeDensityReport rep = superframeDensityCondition(
      windows, {lat, lat}, BoxSpec(0.5, 0.5), evenSides(8), 1e-6);
  CHECK(rep.measure_sum_high == doctest::Approx(2.0).epsilon(1e-9));
  CHECK_FALSE(rep.necessary_condition);
  CHECK_FALSE(rep.superframe.is_superframe);

  CHECK_THROWS_AS(superframeDensityCondition({}, {}, BoxSpec(0.5, 0.5), {2, 4}, 1e-6),
                  std::invalid_argument);
}

TEST_CASE("single system budget reduces to its own measure") {
  GaborLattice lat = regularLattice(8, 2, 2);
  SuperframeDensityReport rep = superframeDensityCondition(
      {gaussianWindow(8, 2.0)}, {lat}, BoxSpec(0.5, 0.5), evenSides(8), 1e-6);
  CHECK(rep.measure_sum_high == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(rep.necessary_condition);
  bool has_single_note = false;
  for (const auto& note : rep.notes)
    has_single_note = has_single_note || note.find("single system") != std::string::npos;
  CHECK(has_single_note);
}
