#pragma once

#include <utility>
#include <vector>

#include "framekit/frame.hpp"
#include "framekit/sequence.hpp"
#include "framekit/types.hpp"

namespace framekit {

// Envelope of the tail of a running-average sequence: the [liminf, limsup]
// surrogate for limits along arbitrary accumulation points, plus the
// accumulation clusters at a chosen resolution. `converged` means the
// envelope is a single cluster and the tail flattened relative to the whole
// history, never a claim about blocks we have not seen.
struct MeasureProfile {
  double liminf = 0.0;
  double limsup = 0.0;
  std::vector<std::pair<double, double>> clusters;  // (center, weight)
  bool converged = false;
  Index window_first = 0;  // 1-based inclusive block range used
  Index window_last = 0;
  RealVector stability_digits;  // per-block agreed digits vs half depth; empty if not run
};

struct ProfileOptions {
  Index window = 0;  // trailing blocks to inspect; 0 means half the depth, at least 4
  double cluster_eps = 1e-2;
};

// Profile of raw average values (already divided by block sizes).
MeasureProfile profile(const RealVector& averages, const ProfileOptions& opts = {});

MeasureProfile profile(const RealSequence& normalized, const ProfileOptions& opts = {});

// Analyzes the snapshot, forms running averages of the diagonal, profiles
// them, and annotates per-block stability against the half-depth prefix.
MeasureProfile frameMeasure(const FrameSnapshot& snap, const ProfileOptions& popts = {},
                            const AnalyzeOptions& aopts = {});

// Order/equivalence decision between two snapshots via their diagonal
// partial-sum sequences.
ComparisonVerdict framesCompare(const FrameSnapshot& f1, const FrameSnapshot& f2,
                                const CompareOptions& copts = {},
                                const AnalyzeOptions& aopts = {});

// Removal probe: try to discard labels with diagonal value at most alpha
// while preserving the span, then re-check the frame bounds. The claim under
// test is that the remaining family keeps a lower bound of at least
// A(1 - epsilon - alpha).
struct ExcessReport {
  double alpha = 0.0;
  double epsilon = 0.0;
  std::vector<Index> removed_positions;  // ascending
  double original_lower = 0.0, original_upper = 0.0;
  double remaining_lower = 0.0, remaining_upper = 0.0;
  bool claim_satisfied = false;
  bool trivial = false;  // profile already at 1: nothing removable
  std::vector<std::string> notes;
};

ExcessReport excessProbe(const FrameSnapshot& snap, double alpha, double epsilon,
                         double tol = 1e-9, const AnalyzeOptions& aopts = {});

// Reciprocal of the profile envelope. liminf 0 flips the unbounded flag and
// the upper end becomes infinity.
struct RedundancyInterval {
  double low = 1.0;
  double high = 1.0;
  bool unbounded = false;
};

RedundancyInterval redundancy(const MeasureProfile& p);

}  // namespace framekit
