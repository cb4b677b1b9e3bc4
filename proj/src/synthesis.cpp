#include "framekit/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace framekit {

RealSequence bSequence(const PerpNormalFrame& f) {
  const auto& d = *f.snapshot.decomp;
  RealVector b(d.depth());
  Index pos = 0;
  for (Index n = 1; n <= d.depth(); ++n) {
    Index upto = d.blockSize(n);
    while (pos < static_cast<Index>(f.support.size()) && f.support[pos] < upto) ++pos;
    b(n - 1) = static_cast<double>(pos);
  }
  return RealSequence(std::move(b), f.snapshot.decomp);
}

PerpNormalFrame perpNormalFromSupport(std::vector<Index> support, DecompositionPtr decomp) {
  if (!decomp) throw std::invalid_argument("support needs a decomposition");
  Index prefix = decomp->blockSize(decomp->depth());
  for (size_t k = 0; k < support.size(); ++k) {
    if (support[k] < 0 || support[k] >= prefix)
      throw std::invalid_argument("support position outside the block prefix");
    if (k > 0 && support[k] <= support[k - 1])
      throw std::invalid_argument("support positions must be strictly ascending");
  }
  PerpNormalFrame out;
  Index dim = static_cast<Index>(support.size());
  ComplexMatrix v = ComplexMatrix::Zero(dim, decomp->totalLabels());
  for (Index k = 0; k < dim; ++k) v(k, support[k]) = Complex(1.0, 0.0);
  out.snapshot = FrameSnapshot(std::move(v), std::move(decomp));
  out.basis_assignment.resize(support.size());
  std::iota(out.basis_assignment.begin(), out.basis_assignment.end(), Index{0});
  out.support = std::move(support);
  if (out.support.empty()) out.warnings.push_back("empty support: the zero family");
  return out;
}

namespace {

// floor(x_n) per block, with the increment feasibility re-checked after
// rounding: compatibility of x guarantees the integer increments fit.
std::vector<Index> floorTargets(const RealSequence& x) {
  std::vector<Index> fl(static_cast<size_t>(x.depth()));
  for (Index n = 0; n < x.depth(); ++n)
    fl[static_cast<size_t>(n)] = static_cast<Index>(std::floor(x.values(n)));
  const auto& d = *x.decomp;
  Index prev = 0, prev_size = 0;
  for (Index n = 1; n <= x.depth(); ++n) {
    Index cur = fl[static_cast<size_t>(n - 1)];
    Index room = d.blockSize(n) - prev_size;
    if (cur < prev || cur - prev > room)
      throw std::logic_error("rounded increments left the feasible range");
    prev = cur;
    prev_size = d.blockSize(n);
  }
  return fl;
}

PerpNormalFrame realizeLowest(const std::vector<Index>& targets, DecompositionPtr decomp) {
  std::vector<Index> support;
  const auto& d = *decomp;
  Index prev = 0;
  for (Index n = 1; n <= d.depth(); ++n) {
    Index start = n == 1 ? 0 : d.blockSize(n - 1);
    Index count = targets[static_cast<size_t>(n - 1)] - prev;
    for (Index j = 0; j < count; ++j) support.push_back(start + j);
    prev = targets[static_cast<size_t>(n - 1)];
  }
  return perpNormalFromSupport(std::move(support), std::move(decomp));
}

}  // namespace

PerpNormalFrame synthPerpNormal(const RealSequence& x) {
  std::string issue = frameCompatibilityIssue(x, 1e-9);
  if (!issue.empty()) throw std::invalid_argument("not frame-compatible: " + issue);
  return realizeLowest(floorTargets(x), x.decomp);
}

SupersetSplit splitSuperset(const std::vector<RealSequence>& xs) {
  if (xs.empty()) throw std::invalid_argument("nothing to split");
  for (size_t j = 0; j < xs.size(); ++j) {
    std::string issue = frameCompatibilityIssue(xs[j], 1e-9);
    if (!issue.empty())
      throw std::invalid_argument("summand " + std::to_string(j + 1) +
                                  " not frame-compatible: " + issue);
    if (j > 0) requireSameBlocks(xs[0], xs[j]);
  }
  RealVector zv = xs[0].values;
  for (size_t j = 1; j < xs.size(); ++j) zv += xs[j].values;
  RealSequence z(std::move(zv), xs[0].decomp);
  std::string issue = frameCompatibilityIssue(z, 1e-9 * static_cast<double>(xs.size()));
  if (!issue.empty())
    throw std::invalid_argument("sum leaves the compatible cone: " + issue);

  const size_t k = xs.size();
  const Index depth = z.depth();
  std::vector<Index> rest = floorTargets(z);

  // Stage recursion: part j tracks the remainder's integer increments but
  // never exceeds its own floor; what is left after k-1 stages is part k.
  std::vector<std::vector<Index>> part_targets(k);
  for (size_t j = 0; j + 1 < k; ++j) {
    std::vector<Index> fl = floorTargets(xs[j]);
    std::vector<Index> t(static_cast<size_t>(depth));
    t[0] = std::min(fl[0], rest[0]);
    for (Index n = 1; n < depth; ++n) {
      Index inc = rest[static_cast<size_t>(n)] - rest[static_cast<size_t>(n - 1)];
      t[static_cast<size_t>(n)] =
          std::min(t[static_cast<size_t>(n - 1)] + inc, fl[static_cast<size_t>(n)]);
    }
    for (Index n = 0; n < depth; ++n) rest[static_cast<size_t>(n)] -= t[static_cast<size_t>(n)];
    part_targets[j] = std::move(t);
  }
  part_targets[k - 1] = std::move(rest);

  // Disjoint supports: within each block increment, hand the lowest unused
  // labels to the parts in order.
  SupersetSplit out;
  out.parts.resize(k);
  std::vector<std::vector<Index>> supports(k);
  const auto& d = *z.decomp;
  for (Index n = 1; n <= depth; ++n) {
    Index cursor = n == 1 ? 0 : d.blockSize(n - 1);
    for (size_t j = 0; j < k; ++j) {
      Index prev = n == 1 ? 0 : part_targets[j][static_cast<size_t>(n - 2)];
      Index count = part_targets[j][static_cast<size_t>(n - 1)] - prev;
      for (Index c = 0; c < count; ++c) supports[j].push_back(cursor++);
    }
    if (cursor > d.blockSize(n))
      throw std::logic_error("stage targets overflow the block increment");
  }
  for (size_t j = 0; j < k; ++j)
    out.parts[j] = perpNormalFromSupport(std::move(supports[j]), z.decomp);
  out.total = realizeLowest(floorTargets(z), z.decomp);
  return out;
}

PerpNormalFrame frameWedge(const PerpNormalFrame& a, const PerpNormalFrame& b) {
  return synthPerpNormal(wedge(bSequence(a), bSequence(b)));
}

PerpNormalFrame frameVee(const PerpNormalFrame& a, const PerpNormalFrame& b) {
  return synthPerpNormal(vee(bSequence(a), bSequence(b)));
}

}  // namespace framekit
