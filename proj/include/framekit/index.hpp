#pragma once

#include "framekit/types.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace framekit {

// Nested decomposition I_1 ⊆ I_2 ⊆ ... of a countable index set, truncated.
// Blocks are prefixes of the stored label order: I_n = labels[0 .. size(n)).
// Labels past the last block are a materialized collar: they belong to the
// index set but to no block yet, which is what boundary and tail computations
// need to see past a block edge.
class IndexDecomposition {
 public:
  IndexDecomposition(std::vector<Label> labels, std::vector<Index> cumulative_sizes);

  // Labels 1..count with I_n = {1..n}.
  static IndexDecomposition prefixBlocks(Index count);
  // Synthesized labels 1..total for sequence work where only sizes matter.
  static IndexDecomposition fromBlockSizes(std::vector<Index> cumulative_sizes);
  // Z with I_n = [-n, n]; `collar` extra shells are materialized beyond depth.
  static IndexDecomposition integerBoxes(Index n_max, Index collar = 0);
  // Z^2 with sup-norm boxes I_n = [-n, n]^2 and optional collar shells.
  static IndexDecomposition planeBoxes(Index n_max, Index collar = 0);

  Index depth() const { return static_cast<Index>(sizes_.size()); }
  Index blockSize(Index n) const;                 // |I_n|, 1-based
  Index lastBlockSize() const { return sizes_.back(); }
  Index totalLabels() const { return static_cast<Index>(labels_.size()); }
  Index collarSize() const { return totalLabels() - lastBlockSize(); }

  const std::vector<Index>& sizes() const { return sizes_; }
  const std::vector<Label>& labels() const { return labels_; }
  const Label& label(Index pos) const { return labels_[static_cast<std::size_t>(pos)]; }
  std::optional<Index> position(const Label& l) const;
  // 1-based block index of a position inside the blocked prefix.
  Index blockOf(Index pos) const;

  bool sameBlocks(const IndexDecomposition& other) const { return sizes_ == other.sizes_; }

 private:
  std::vector<Label> labels_;
  std::vector<Index> sizes_;  // cumulative |I_n|, nondecreasing, >= 1
  std::unordered_map<Label, Index, LabelHash> pos_;
};

using DecompositionPtr = std::shared_ptr<const IndexDecomposition>;

// Quasi-distance on labels: d(i,i) = 0, symmetric, nonnegative; the triangle
// inequality is spot-checked on samples, not assumed.
struct QuasiMetric {
  std::string name;
  std::function<double(const Label&, const Label&)> dist;

  double operator()(const Label& x, const Label& y) const { return dist(x, y); }
};

QuasiMetric absMetric();                  // |i - j| on integers
QuasiMetric sup2dMetric();                // max(|di|, |dj|) on pairs
QuasiMetric torusSupMetric(Index modulus);  // wrap-around sup distance on (Z_N)^2

// Axioms on sampled pairs/triples; returns human-readable violations.
std::vector<std::string> metricSpotCheck(const IndexDecomposition& decomp,
                                         const QuasiMetric& metric,
                                         Index sample_triples = 64,
                                         std::uint64_t seed = 7);

// All materialized labels within distance <= radius of center (decomposition
// order). Throws if center is not materialized.
std::vector<Label> ball(const IndexDecomposition& decomp, const QuasiMetric& metric,
                        const Label& center, double radius);

// |{i in I_n : dist(i, I \ I_n) <= radius}| / |I_n| over materialized labels.
// Throws when nothing beyond block n is materialized to witness the collar.
double boundaryFraction(const IndexDecomposition& decomp, const QuasiMetric& metric,
                        Index n, double radius);

struct UniformMetricRow {
  Index n = 0;
  double radius = 0;
  double fraction = 0;
};

struct UniformMetricReport {
  std::vector<UniformMetricRow> rows;
  std::vector<std::string> radius_verdicts;  // "consistent" / "inconsistent" per radius
  bool consistent = false;                   // all radii trend to zero
  std::vector<std::string> warnings;
};

// Boundary fractions over n_list for each radius with a trend-to-zero verdict
// per radius (last-third window). Needs >= 2 usable blocks.
UniformMetricReport uniformMetricReport(const IndexDecomposition& decomp,
                                        const QuasiMetric& metric,
                                        const std::vector<double>& radii,
                                        const std::vector<Index>& n_list,
                                        double tol = 1e-2);

// Bijection between two decompositions' materialized labels, stored by
// position: forward[p] = position in target of the image of source label p.
class IndexRemap {
 public:
  IndexRemap(DecompositionPtr source, DecompositionPtr target, std::vector<Index> forward);

  static IndexRemap identity(DecompositionPtr d);
  // Map by label value i -> i + shift (integer labels).
  static IndexRemap integerShift(DecompositionPtr source, DecompositionPtr target, Index shift);
  // Arbitrary label-to-label map.
  static IndexRemap fromLabelMap(
      DecompositionPtr source, DecompositionPtr target,
      const std::function<Label(const Label&)>& map);

  const IndexDecomposition& source() const { return *source_; }
  const IndexDecomposition& target() const { return *target_; }
  Index forwardPosition(Index source_pos) const { return forward_[static_cast<std::size_t>(source_pos)]; }
  Index inversePosition(Index target_pos) const { return inverse_[static_cast<std::size_t>(target_pos)]; }

 private:
  DecompositionPtr source_;
  DecompositionPtr target_;
  std::vector<Index> forward_;
  std::vector<Index> inverse_;
};

struct RemapMeasureRow {
  Index n = 0;
  double image_overlap = 0;  // |a(I_n) ∩ J_n| / |I_n|
  double size_ratio = 0;     // |J_n| / |I_n|
};

struct RemapMeasureReport {
  std::vector<RemapMeasureRow> rows;
  bool condition_met = false;  // both ratios trend to 1
};

RemapMeasureReport remapMeasureCondition(const IndexRemap& remap,
                                         const std::vector<Index>& n_list,
                                         double tol = 1e-2);

struct RemapLipschitzRow {
  double target_dist = 0;
  double max_source_dist = 0;  // max d(a^-1 j1, a^-1 j2) among sampled pairs at e <= target_dist
};

struct RemapLipschitzReport {
  std::vector<RemapLipschitzRow> rows;  // empirical modulus, ascending in target_dist
  bool candidate_ok = false;            // every sampled pair satisfies d < r(e)
  Index violations = 0;
};

RemapLipschitzReport remapLipschitzCondition(
    const IndexRemap& remap, const QuasiMetric& source_metric,
    const QuasiMetric& target_metric,
    const std::function<double(double)>& candidate_r,
    Index sample_pairs = 4096, std::uint64_t seed = 11);

}  // namespace framekit
