#include <doctest.h>

#include <cmath>
#include <complex>
#include <memory>
#include <stdexcept>
#include <vector>

#include "framekit/frame.hpp"
#include "framekit/index.hpp"
#include "framekit/operators.hpp"

using namespace framekit;

namespace {

DecompositionPtr share(IndexDecomposition d) {
  return std::make_shared<const IndexDecomposition>(std::move(d));
}

Index posOf(const IndexDecomposition& d, Index label) {
  auto p = d.position(Label{label});
  REQUIRE(p.has_value());
  return *p;
}

// Upward shift on integer labels: the column of label l carries a single 1
// in the row of label l+1 (nothing where l+1 is not materialized).
ComplexMatrix shiftUp(const IndexDecomposition& d, Index lo, Index hi) {
  ComplexMatrix m = ComplexMatrix::Zero(d.totalLabels(), d.totalLabels());
  for (Index l = lo; l < hi; ++l) m(posOf(d, l + 1), posOf(d, l)) = 1.0;
  return m;
}

FrameSnapshot onb(Index dim) {
  auto d = share(IndexDecomposition::prefixBlocks(dim));
  return FrameSnapshot(ComplexMatrix::Identity(dim, dim), d);
}

FrameSnapshot evenLabelFamily(Index depth) {
  auto d = share(IndexDecomposition::prefixBlocks(depth));
  ComplexMatrix v = ComplexMatrix::Zero(depth / 2, depth);
  for (Index k = 2; k <= depth; k += 2) v(k / 2 - 1, k - 1) = 1.0;
  return FrameSnapshot(std::move(v), d);
}

FrameSnapshot oddLabelFamily(Index depth) {
  auto d = share(IndexDecomposition::prefixBlocks(depth));
  ComplexMatrix v = ComplexMatrix::Zero((depth + 1) / 2, depth);
  for (Index k = 1; k <= depth; k += 2) v((k - 1) / 2, k - 1) = 1.0;
  return FrameSnapshot(std::move(v), d);
}

// Depth-32 pair family: unit vectors on even labels, and rank-one doubled
// vectors that tie each even label k to its partner k*k+1. Partners beyond
// label 32 are materialized in the collar so no pair is ever cut off.
struct PairedFamilies {
  DecompositionPtr decomp;
  FrameSnapshot first, second;
};

PairedFamilies pairedFamilies() {
  std::vector<Label> labels;
  std::vector<Index> sizes;
  for (Index i = 1; i <= 32; ++i) {
    labels.emplace_back(i);
    sizes.push_back(i);
  }
  for (Index k = 6; k <= 32; k += 2) labels.emplace_back(k * k + 1);
  auto d = share(IndexDecomposition(std::move(labels), std::move(sizes)));

  ComplexMatrix vf = ComplexMatrix::Zero(16, d->totalLabels());
  ComplexMatrix vg = ComplexMatrix::Zero(32, d->totalLabels());
  for (Index k = 2; k <= 32; k += 2) {
    Index p = k / 2 - 1;
    vf(p, posOf(*d, k)) = 1.0;
    for (Index col : {posOf(*d, k), posOf(*d, k * k + 1)}) {
      vg(2 * p, col) = 0.5;
      vg(2 * p + 1, col) = 0.5;
    }
  }
  PairedFamilies out;
  out.decomp = d;
  out.first = FrameSnapshot(std::move(vf), d);
  out.second = FrameSnapshot(std::move(vg), d);
  return out;
}

}  // namespace

TEST_CASE("operator snapshots insist on square matrices over all labels") {
  auto d = share(IndexDecomposition::prefixBlocks(4));
  CHECK_THROWS_AS(OperatorSnapshot(ComplexMatrix::Zero(3, 4), d), std::invalid_argument);
  CHECK_THROWS_AS(OperatorSnapshot(ComplexMatrix::Zero(5, 5), d), std::invalid_argument);
  CHECK_THROWS_AS(OperatorSnapshot(ComplexMatrix::Zero(4, 4), nullptr), std::invalid_argument);
}

TEST_CASE("operatorNorm is the largest singular value") {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = 3.0;
  m(1, 0) = 4.0;
  CHECK(operatorNorm(m) == doctest::Approx(5.0));
  CHECK(operatorNorm(ComplexMatrix::Zero(3, 3)) == 0.0);
}

TEST_CASE("bOp splits partial traces into real and imaginary staircases") {
  auto d = share(IndexDecomposition::prefixBlocks(4));
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  m(0, 0) = Complex(1, 0);
  m(1, 1) = Complex(0, 1);
  m(2, 2) = Complex(1, 0);
  m(3, 3) = Complex(0, 1);
  m(0, 3) = Complex(5, 0);  // off-diagonal entries do not touch the traces
  BopResult r = bOp(OperatorSnapshot(m, d));
  std::vector<double> re{1, 1, 2, 2}, im{0, 1, 1, 2};
  for (Index n = 0; n < 4; ++n) {
    CHECK(r.real_part.values(n) == re[static_cast<size_t>(n)]);
    CHECK(r.imag_part.values(n) == im[static_cast<size_t>(n)]);
  }
  CHECK(r.real_cert.member);
  CHECK(r.imag_cert.member);
  CHECK(r.real_cert.c == doctest::Approx(1.0));
  CHECK(r.op_norm >= 5.0);
}

TEST_CASE("shift operator tails vanish exactly at radius one") {
  auto d = share(IndexDecomposition::integerBoxes(8, 2));
  OperatorSnapshot op(shiftUp(*d, -10, 10), d, absMetric());
  NonExpansiveReport rep = nonexpansiveReport(op, {1.0, 0.5});
  REQUIRE(rep.rows.size() == 2);
  CHECK(rep.rows[0].radius == 0.5);  // rows come back sorted by radius
  CHECK(rep.rows[0].row_tail == 1.0);
  CHECK(rep.rows[0].col_tail == 1.0);
  CHECK(rep.rows[0].centers_used == 17);
  CHECK(rep.rows[1].radius == 1.0);
  CHECK(rep.rows[1].row_tail == 0.0);
  CHECK(rep.rows[1].col_tail == 0.0);
  CHECK(rep.rows[1].centers_used == 15);
  CHECK(rep.rows[1].centers_excluded == 2);
  CHECK(rep.interior_block == 8);

  CHECK(smallestRadiusBelow(rep, 0.25) == 1.0);
  NonExpansiveReport tight = nonexpansiveReport(op, {0.5});
  CHECK_FALSE(smallestRadiusBelow(tight, 0.25).has_value());
}

TEST_CASE("tail reports validate their inputs") {
  auto d = share(IndexDecomposition::integerBoxes(8, 2));
  OperatorSnapshot no_metric(shiftUp(*d, -10, 10), d);
  CHECK_THROWS_AS(nonexpansiveReport(no_metric, {1.0}), std::invalid_argument);
  OperatorSnapshot op(shiftUp(*d, -10, 10), d, absMetric());
  CHECK_THROWS_AS(nonexpansiveReport(op, {}), std::invalid_argument);
  CHECK_THROWS_AS(nonexpansiveReport(op, {1.0}, 99), std::invalid_argument);
  // A huge radius disqualifies every center.
  CHECK_THROWS_AS(nonexpansiveReport(op, {100.0}), std::runtime_error);
}

TEST_CASE("tracial residual vanishes for commuting operators") {
  auto d = share(IndexDecomposition::integerBoxes(6, 2));
  ComplexMatrix s = shiftUp(*d, -8, 8);
  OperatorSnapshot t1(s, d), t2(2.0 * s, d);
  RealSequence r = tracialResidual(t1, t2);
  CHECK(r.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("tracial residual of a weighted shift pair decays like the box size") {
  auto d = share(IndexDecomposition::integerBoxes(16, 2));
  ComplexMatrix up = shiftUp(*d, -18, 18);
  // down(l -> l-1) weighted by |l-1|: together with the plain up shift the
  // commutator telescopes to exactly 1 on every box.
  ComplexMatrix down = ComplexMatrix::Zero(d->totalLabels(), d->totalLabels());
  for (Index l = -17; l <= 18; ++l)
    down(posOf(*d, l - 1), posOf(*d, l)) = static_cast<double>(l - 1 < 0 ? 1 - l : l - 1);
  RealSequence r = tracialResidual(OperatorSnapshot(up, d), OperatorSnapshot(down, d));
  for (Index n = 1; n <= 16; ++n)
    CHECK(r.values(n - 1) == doctest::Approx(1.0 / (2.0 * n + 1.0)));

  auto other = share(IndexDecomposition::prefixBlocks(4));
  OperatorSnapshot mismatched(ComplexMatrix::Zero(4, 4), other);
  CHECK_THROWS_AS(tracialResidual(OperatorSnapshot(up, d), mismatched),
                  std::invalid_argument);
}

TEST_CASE("complementary families make a tight superframe") {
  SuperframeReport rep = superframeCheck(evenLabelFamily(8), oddLabelFamily(8));
  CHECK(rep.is_superframe);
  CHECK(rep.span1 == 4);
  CHECK(rep.span2 == 4);
  CHECK(rep.combined_span == 8);
  CHECK(rep.p1p2_norm <= 1e-12);
  CHECK(rep.combined_lower == doctest::Approx(1.0));
  CHECK(rep.combined_upper == doctest::Approx(1.0));
}

TEST_CASE("a frame never forms a superframe with itself") {
  FrameSnapshot f = onb(4);
  SuperframeReport rep = superframeCheck(f, f);
  CHECK_FALSE(rep.is_superframe);
  CHECK(rep.combined_span == 4);
  CHECK(rep.p1p2_norm == doctest::Approx(1.0));

  auto d = share(IndexDecomposition::prefixBlocks(4));
  FrameSnapshot zero(ComplexMatrix::Zero(2, 4), d);
  CHECK_THROWS_AS(superframeCheck(zero, f), std::invalid_argument);
}

TEST_CASE("paired doubled vectors meet the even basis at a right angle cosine") {
  PairedFamilies fam = pairedFamilies();

  FrameAnalysis second = analyze(fam.second);
  CHECK(second.span_dim == 16);
  CHECK(second.lower_bound == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(second.upper_bound == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(second.diag(posOf(*fam.decomp, 2)) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(second.diag(posOf(*fam.decomp, 5)) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(second.diag(posOf(*fam.decomp, 3)) <= 1e-12);

  SuperframeReport rep = superframeCheck(fam.first, fam.second);
  CHECK(rep.is_superframe);
  CHECK(rep.span1 == 16);
  CHECK(rep.span2 == 16);
  CHECK(rep.combined_span == 32);
  double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(rep.p1p2_norm == doctest::Approx(inv_sqrt2).epsilon(1e-9));
  CHECK(rep.combined_lower == doctest::Approx(1.0 - inv_sqrt2).epsilon(1e-9));
  CHECK(rep.combined_upper == doctest::Approx(1.0 + inv_sqrt2).epsilon(1e-9));
}

TEST_CASE("additivity report sees complementary families as exactly additive") {
  FrameSnapshot f1 = evenLabelFamily(16), f2 = oddLabelFamily(16);
  AdditivityReport rep = supersetAdditivityReport(f1, f2);
  CHECK(rep.superframe.is_superframe);
  CHECK(rep.stable_blocks == 8);
  CHECK(rep.stable_residual_sup <= 1e-12);
  CHECK(rep.profile_direct_sum.liminf == doctest::Approx(1.0));
  CHECK(rep.profile_direct_sum.limsup == doctest::Approx(1.0));
  CHECK(rep.notes.empty());
}

TEST_CASE("additivity report flags a duplicated frame") {
  FrameSnapshot f = onb(16);
  AdditivityReport rep = supersetAdditivityReport(f, f);
  CHECK_FALSE(rep.superframe.is_superframe);
  REQUIRE(!rep.notes.empty());
  CHECK(rep.notes[0].find("superframe condition not met") != std::string::npos);
  // The direct sum of a frame with itself keeps the profile at 1 while the
  // naive sum doubles it, so the residual sits at exactly -1.
  CHECK(rep.stable_blocks == 8);
  CHECK(rep.stable_residual_sup == doctest::Approx(1.0));
}
