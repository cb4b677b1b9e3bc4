#pragma once

#include <vector>

#include "framekit/frame.hpp"
#include "framekit/sequence.hpp"
#include "framekit/types.hpp"

namespace framekit {

// A family whose nonzero members are distinct standard basis vectors of a
// minimal ambient space, everything else zero. basis_assignment[k] is the
// basis index (row) occupied by support[k]; assignments follow label order,
// so it is always 0, 1, 2, ...
struct PerpNormalFrame {
  FrameSnapshot snapshot;
  std::vector<Index> support;           // positions with nonzero vectors, ascending
  std::vector<Index> basis_assignment;  // same length as support
  std::vector<std::string> warnings;
};

// Counts of occupied labels per block: b_n = |support within the n-th block|.
RealSequence bSequence(const PerpNormalFrame& f);

// Builds the family occupying exactly the given positions. Positions must be
// strictly ascending and inside the block prefix.
PerpNormalFrame perpNormalFromSupport(std::vector<Index> support, DecompositionPtr decomp);

// Realizes the integer part of a compatible sequence: the result satisfies
// b_n = floor(x_n) exactly, occupying the lowest-ordered labels within each
// block increment.
PerpNormalFrame synthPerpNormal(const RealSequence& x);

// Splits the sum z of compatible sequences into support-disjoint families,
// one per summand, whose occupied counts add up to floor(z_n) in every
// block. Each of the first k-1 parts obeys floor(x_n) - 1 <= b_n <=
// floor(x_n); the last part absorbs the rounding remainder and may overshoot
// its own floor by the deficit floor(z_n) - sum of floor(x^i_n).
struct SupersetSplit {
  std::vector<PerpNormalFrame> parts;
  PerpNormalFrame total;  // realizes floor(z); support is the union of the parts'
};

SupersetSplit splitSuperset(const std::vector<RealSequence>& xs);

// Entrywise lattice witnesses: realize the min respectively max of the two
// occupied-count sequences.
PerpNormalFrame frameWedge(const PerpNormalFrame& a, const PerpNormalFrame& b);
PerpNormalFrame frameVee(const PerpNormalFrame& a, const PerpNormalFrame& b);

}  // namespace framekit
