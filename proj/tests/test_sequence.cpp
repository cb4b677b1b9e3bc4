#include <doctest.h>

#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "framekit/index.hpp"
#include "framekit/sequence.hpp"

using namespace framekit;

namespace {

DecompositionPtr share(IndexDecomposition d) {
  return std::make_shared<const IndexDecomposition>(std::move(d));
}

RealSequence seqOf(std::vector<double> v, DecompositionPtr d) {
  RealVector x(static_cast<Index>(v.size()));
  for (Index i = 0; i < x.size(); ++i) x(i) = v[static_cast<size_t>(i)];
  return RealSequence(std::move(x), std::move(d));
}

}  // namespace

TEST_CASE("sequence construction checks length and decomposition") {
  auto d = share(IndexDecomposition::prefixBlocks(4));
  CHECK_THROWS_AS(RealSequence(RealVector::Zero(3), d), std::invalid_argument);
  CHECK_THROWS_AS(RealSequence(RealVector::Zero(4), nullptr), std::invalid_argument);
  RealSequence ok = RealSequence::constant(2.5, d);
  CHECK(ok.depth() == 4);
  CHECK(ok.values(3) == 2.5);
  CHECK(ok.blockSizeAsReal(3) == 3.0);
}

TEST_CASE("normalized divides by block sizes") {
  auto d = share(IndexDecomposition::prefixBlocks(6));
  RealSequence sizes = RealSequence::blockSizes(d);
  RealVector a = sizes.normalized();
  for (Index i = 0; i < a.size(); ++i) CHECK(a(i) == 1.0);
  RealVector half = seqOf({0.5, 1, 1.5, 2, 2.5, 3}, d).normalized();
  for (Index i = 0; i < half.size(); ++i) CHECK(half(i) == 0.5);
}

TEST_CASE("frame compatibility accepts integer staircases and reports violations") {
  auto d = share(IndexDecomposition::prefixBlocks(6));
  CHECK(isFrameCompatible(seqOf({1, 1, 2, 2, 3, 3}, d)));
  CHECK(isFrameCompatible(seqOf({0, 0, 0, 0, 0, 0}, d)));
  CHECK(isFrameCompatible(RealSequence::blockSizes(d)));

  // First value above the first block size.
  std::string issue = frameCompatibilityIssue(seqOf({2, 2, 2, 2, 2, 2}, d));
  CHECK(issue.find("x_1") != std::string::npos);

  // Decreasing step.
  issue = frameCompatibilityIssue(seqOf({1, 0, 1, 1, 1, 1}, d));
  CHECK(issue.find("increment") != std::string::npos);

  // Step larger than the block growth (growth is 1 for prefix blocks).
  CHECK_FALSE(isFrameCompatible(seqOf({0, 2, 2, 2, 2, 2}, d)));

  // Tolerance absorbs roundoff-sized wobble.
  CHECK_FALSE(isFrameCompatible(seqOf({1, 1 - 1e-12, 2, 2, 3, 3}, d)));
  CHECK(isFrameCompatible(seqOf({1, 1 - 1e-12, 2, 2, 3, 3}, d), 1e-9));
}

TEST_CASE("floorSeq floors entrywise") {
  auto d = share(IndexDecomposition::prefixBlocks(4));
  RealSequence f = floorSeq(seqOf({0.9, 1.0, 2.7, -0.3}, d));
  CHECK(f.values(0) == 0.0);
  CHECK(f.values(1) == 1.0);
  CHECK(f.values(2) == 2.0);
  CHECK(f.values(3) == -1.0);
}

TEST_CASE("signed cone membership certificate scales with the steepest step") {
  auto d = share(IndexDecomposition::prefixBlocks(6));
  XrCertificate cert = xrMembership(seqOf({0.5, 1.0, 1.5, 2.0, 2.5, 3.0}, d));
  CHECK(cert.member);
  CHECK(cert.c == doctest::Approx(0.5));

  // Alternating sequence needs c = 1: every step uses the whole growth.
  cert = xrMembership(seqOf({1, 0, 1, 0, 1, 0}, d));
  CHECK(cert.member);
  CHECK(cert.c == doctest::Approx(1.0));

  // A change across a zero-growth block cannot be certified.
  auto flat = share(IndexDecomposition::fromBlockSizes({2, 2, 3}));
  cert = xrMembership(seqOf({1, 2, 2}, flat));
  CHECK_FALSE(cert.member);
  CHECK(cert.issue.find("zero block growth") != std::string::npos);
  // Constant across the flat step is fine.
  CHECK(xrMembership(seqOf({1, 1, 2}, flat)).member);
}

TEST_CASE("positive decomposition splits increments by sign") {
  auto d = share(IndexDecomposition::prefixBlocks(6));
  PositiveDecomposition pd = decomposePositive(seqOf({1, 0, 1, 0, 1, 0}, d));
  std::vector<double> plus{1, 1, 2, 2, 3, 3}, minus{0, 1, 1, 2, 2, 3};
  for (Index i = 0; i < 6; ++i) {
    CHECK(pd.x_plus.values(i) == plus[static_cast<size_t>(i)]);
    CHECK(pd.x_minus.values(i) == minus[static_cast<size_t>(i)]);
  }
  CHECK(pd.certificate_c == doctest::Approx(1.0));
  // Both halves are nondecreasing with steps inside the block growth, so
  // they are realizable staircases while the difference reproduces x.
  CHECK(isFrameCompatible(pd.x_plus));
  CHECK(isFrameCompatible(pd.x_minus));

  auto flat = share(IndexDecomposition::fromBlockSizes({2, 2, 3}));
  CHECK_THROWS_AS(decomposePositive(seqOf({1, 2, 2}, flat)), std::invalid_argument);
}

TEST_CASE("wedge and vee are entrywise lattice operations") {
  auto d = share(IndexDecomposition::prefixBlocks(6));
  RealSequence x = seqOf({1, 1, 2, 2, 3, 3}, d);
  RealSequence y = seqOf({0, 1, 1, 2, 2, 3}, d);
  RealSequence lo = wedge(x, y), hi = vee(x, y);
  for (Index i = 0; i < 6; ++i) {
    CHECK(lo.values(i) == std::min(x.values(i), y.values(i)));
    CHECK(hi.values(i) == std::max(x.values(i), y.values(i)));
  }
  // Compatibility is closed under the lattice operations.
  CHECK(isFrameCompatible(lo));
  CHECK(isFrameCompatible(hi));
  // Absorption holds exactly.
  RealSequence back = vee(wedge(x, y), y);
  for (Index i = 0; i < 6; ++i) CHECK(back.values(i) == y.values(i));

  auto other = share(IndexDecomposition::prefixBlocks(5));
  CHECK_THROWS_AS(wedge(x, RealSequence::constant(1.0, other)), std::invalid_argument);
}

TEST_CASE("compare calls sequences equivalent when gaps vanish per block size") {
  // Cubic blocks make the flooring error negligible in normalized terms.
  std::vector<Index> cum;
  for (Index m = 1; m <= 20; ++m) cum.push_back(m * m * m);
  auto d = share(IndexDecomposition::fromBlockSizes(cum));
  RealVector v(20);
  for (Index m = 1; m <= 20; ++m) v(m - 1) = 0.37 * static_cast<double>(m * m * m);
  RealSequence x(v, d);
  ComparisonVerdict verdict = compare(x, floorSeq(x), CompareOptions{});
  CHECK(verdict.kind == ComparisonKind::Equivalent);
  CHECK(verdict.window_start == 11);
  CHECK(verdict.limsup_gap >= 0.0);
  CHECK(verdict.limsup_gap <= 1e-3);
}

TEST_CASE("compare separates dominated and incomparable tails") {
  auto d = share(IndexDecomposition::prefixBlocks(16));
  RealSequence sizes = RealSequence::blockSizes(d);
  RealSequence small(0.2 * sizes.values, d);
  RealSequence big(0.5 * sizes.values, d);

  ComparisonVerdict verdict = compare(small, big, CompareOptions{});
  CHECK(verdict.kind == ComparisonKind::LeftDominated);
  CHECK(verdict.liminf_gap == doctest::Approx(-0.3));
  CHECK(verdict.limsup_gap == doctest::Approx(-0.3));
  CHECK(compare(big, small, CompareOptions{}).kind == ComparisonKind::RightDominated);

  // Persistent alternation in the tail is incomparable.
  RealVector w(16);
  for (Index n = 0; n < 16; ++n)
    w(n) = (0.5 + ((n % 2 == 0) ? 0.2 : -0.2)) * static_cast<double>(n + 1);
  verdict = compare(RealSequence(w, d), big, CompareOptions{});
  CHECK(verdict.kind == ComparisonKind::Incomparable);
}

TEST_CASE("compare degrades to undecided for signed or drifting input") {
  auto d = share(IndexDecomposition::prefixBlocks(8));
  RealSequence sizes = RealSequence::blockSizes(d);
  RealSequence neg(-1.0 * sizes.values, d);
  ComparisonVerdict verdict = compare(neg, sizes, CompareOptions{});
  CHECK(verdict.kind == ComparisonKind::Undecided);
  CHECK(verdict.note.find("nonnegative") != std::string::npos);

  // Sign change that does not persist into the last quarter.
  RealVector w(8);
  for (Index n = 0; n < 8; ++n)
    w(n) = (n < 6 ? 0.2 : 0.8) * static_cast<double>(n + 1);
  RealSequence mid(0.5 * sizes.values, d);
  verdict = compare(RealSequence(w, d), mid, CompareOptions{});
  CHECK(verdict.kind == ComparisonKind::Undecided);
  CHECK(verdict.note.find("non-monotone") != std::string::npos);
}

TEST_CASE("compare validates its options") {
  auto d = share(IndexDecomposition::prefixBlocks(8));
  RealSequence x = RealSequence::blockSizes(d);
  CompareOptions bad;
  bad.tail_fraction = 0.0;
  CHECK_THROWS_AS(compare(x, x, bad), std::invalid_argument);
  bad.tail_fraction = 1.5;
  CHECK_THROWS_AS(compare(x, x, bad), std::invalid_argument);
}
