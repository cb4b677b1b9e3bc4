#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "framekit/index.hpp"
#include "framekit/sequence.hpp"
#include "framekit/synthesis.hpp"

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

TEST_CASE("support families count their members per block") {
  auto d = share(IndexDecomposition::prefixBlocks(6));
  PerpNormalFrame f = perpNormalFromSupport({0, 2, 5}, d);
  CHECK(f.warnings.empty());
  CHECK(f.snapshot.ambientDim() == 3);
  CHECK(f.snapshot.totalLabels() == 6);
  for (Index k = 0; k < 3; ++k) {
    CHECK(f.basis_assignment[static_cast<size_t>(k)] == k);
    CHECK(f.snapshot.vectors(k, f.support[static_cast<size_t>(k)]) == Complex(1.0, 0.0));
  }
  std::vector<double> want{1, 1, 2, 2, 2, 3};
  RealSequence b = bSequence(f);
  for (Index n = 0; n < 6; ++n) CHECK(b.values(n) == want[static_cast<size_t>(n)]);

  CHECK_THROWS_AS(perpNormalFromSupport({2, 1}, d), std::invalid_argument);
  CHECK_THROWS_AS(perpNormalFromSupport({0, 6}, d), std::invalid_argument);

  PerpNormalFrame empty = perpNormalFromSupport({}, d);
  REQUIRE(empty.warnings.size() == 1);
  CHECK(empty.warnings[0].find("zero family") != std::string::npos);
  CHECK(bSequence(empty).values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("synthesis floors the target and uses the lowest labels") {
  auto d = share(IndexDecomposition::fromBlockSizes({3, 6, 9}));
  PerpNormalFrame f = synthPerpNormal(seqOf({2.0, 4.0, 6.5}, d));
  RealSequence b = bSequence(f);
  CHECK(b.values(0) == 2.0);
  CHECK(b.values(1) == 4.0);
  CHECK(b.values(2) == 6.0);
  std::vector<Index> want{0, 1, 3, 4, 6, 7};
  REQUIRE(f.support.size() == want.size());
  for (size_t k = 0; k < want.size(); ++k) CHECK(f.support[k] == want[k]);
}

TEST_CASE("synthesis rejects incompatible targets with a reason") {
  auto d = share(IndexDecomposition::prefixBlocks(4));
  CHECK_THROWS_WITH_AS(synthPerpNormal(seqOf({0, 2, 2, 2}, d)),
                       doctest::Contains("not frame-compatible"), std::invalid_argument);
}

TEST_CASE("synthesis realizes the floor exactly for fractional targets") {
  auto d = share(IndexDecomposition::prefixBlocks(12));
  RealVector x(12);
  for (Index n = 1; n <= 12; ++n) x(n - 1) = static_cast<double>(n) / 2.0;
  RealSequence target(x, d);
  RealSequence b = bSequence(synthPerpNormal(target));
  RealSequence fl = floorSeq(target);
  for (Index n = 0; n < 12; ++n) CHECK(b.values(n) == fl.values(n));
}

TEST_CASE("splitting a balanced superset gives two equal staircases") {
  std::vector<Index> cum;
  for (Index n = 1; n <= 10; ++n) cum.push_back(2 * n);
  auto d = share(IndexDecomposition::fromBlockSizes(cum));
  RealVector half(10);
  for (Index n = 1; n <= 10; ++n) half(n - 1) = static_cast<double>(n);
  RealSequence x(half, d);
  SupersetSplit split = splitSuperset({x, x});
  REQUIRE(split.parts.size() == 2);
  for (const auto& part : split.parts) {
    RealSequence b = bSequence(part);
    for (Index n = 1; n <= 10; ++n) CHECK(b.values(n - 1) == static_cast<double>(n));
  }
}

TEST_CASE("split parts partition the total support and absorb rounding at the end") {
  auto d = share(IndexDecomposition::prefixBlocks(12));
  RealVector v1(12), v2(12);
  for (Index n = 1; n <= 12; ++n) {
    v1(n - 1) = static_cast<double>(n) / 2.0;
    v2(n - 1) = static_cast<double>(n) / 3.0;
  }
  RealSequence x1(v1, d), x2(v2, d);
  SupersetSplit split = splitSuperset({x1, x2});
  REQUIRE(split.parts.size() == 2);

  // First part hits its own floor on the nose.
  RealSequence b1 = bSequence(split.parts[0]);
  RealSequence fl1 = floorSeq(x1);
  for (Index n = 0; n < 12; ++n) CHECK(b1.values(n) == fl1.values(n));

  // Second part carries the leftovers; it may exceed its own floor by one
  // but never drops below floor minus one, and the parts sum to the total.
  RealSequence b2 = bSequence(split.parts[1]);
  RealSequence fl2 = floorSeq(x2);
  RealSequence bt = bSequence(split.total);
  RealSequence flz = floorSeq(RealSequence(v1 + v2, d));
  int overshoots = 0;
  for (Index n = 0; n < 12; ++n) {
    CHECK(bt.values(n) == flz.values(n));
    CHECK(b1.values(n) + b2.values(n) == bt.values(n));
    CHECK(b2.values(n) >= fl2.values(n) - 1.0);
    CHECK(b2.values(n) <= fl2.values(n) + 1.0);
    if (b2.values(n) > fl2.values(n)) ++overshoots;
  }
  CHECK(overshoots == 2);
  CHECK(b2.values(4) == fl2.values(4) + 1.0);
  CHECK(b2.values(10) == fl2.values(10) + 1.0);

  // Supports are disjoint and exhaust the total's support.
  std::vector<Index> merged = split.parts[0].support;
  merged.insert(merged.end(), split.parts[1].support.begin(), split.parts[1].support.end());
  std::sort(merged.begin(), merged.end());
  CHECK(std::adjacent_find(merged.begin(), merged.end()) == merged.end());
  CHECK(merged == split.total.support);
}

TEST_CASE("split rejects bad input") {
  auto d = share(IndexDecomposition::prefixBlocks(4));
  CHECK_THROWS_WITH_AS(splitSuperset({}), doctest::Contains("nothing to split"),
                       std::invalid_argument);
  RealSequence ok = seqOf({0, 1, 1, 2}, d);
  RealSequence bad = seqOf({0, 2, 2, 2}, d);
  CHECK_THROWS_AS(splitSuperset({ok, bad}), std::invalid_argument);
  auto other = share(IndexDecomposition::prefixBlocks(5));
  CHECK_THROWS_AS(splitSuperset({ok, RealSequence::constant(0.0, other)}),
                  std::invalid_argument);
}

TEST_CASE("frame lattice operations act on the counting sequences") {
  auto d = share(IndexDecomposition::prefixBlocks(6));
  PerpNormalFrame a = perpNormalFromSupport({0, 2, 5}, d);
  PerpNormalFrame b = perpNormalFromSupport({1, 2, 3}, d);
  RealSequence lo = bSequence(frameWedge(a, b));
  RealSequence hi = bSequence(frameVee(a, b));
  std::vector<double> want_lo{0, 1, 2, 2, 2, 3}, want_hi{1, 1, 2, 3, 3, 3};
  for (Index n = 0; n < 6; ++n) {
    CHECK(lo.values(n) == want_lo[static_cast<size_t>(n)]);
    CHECK(hi.values(n) == want_hi[static_cast<size_t>(n)]);
  }
}
