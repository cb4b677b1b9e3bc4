#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "framekit/index.hpp"
#include "framekit/sequence.hpp"
#include "framekit/types.hpp"

namespace framekit {

// A materialized finite view of a labelled vector family. Columns of
// `vectors` line up with the decomposition's stored label order, collar
// included. An explicit dual may be attached when the caller knows one;
// nothing here checks it at construction time.
struct FrameSnapshot {
  ComplexMatrix vectors;  // ambient_dim x total_labels
  DecompositionPtr decomp;
  ComplexMatrix dual;
  bool has_dual = false;

  FrameSnapshot() = default;
  FrameSnapshot(ComplexMatrix v, DecompositionPtr d);
  FrameSnapshot(ComplexMatrix v, DecompositionPtr d, ComplexMatrix explicit_dual);

  Index ambientDim() const { return vectors.rows(); }
  Index totalLabels() const { return vectors.cols(); }
};

enum class Route { Auto, Gram, Operator };

struct AnalyzeOptions {
  double rank_tol = 1e-10;  // relative to the largest eigenvalue
  Route route = Route::Auto;
};

// Spectral data of a snapshot. `range_basis` is an isometry (total_labels x
// span_dim) whose rows encode the diagonal: diag_i = |row_i|^2, and whose
// column span is the range of the Gram matrix.
struct FrameAnalysis {
  double lower_bound = 0.0;  // smallest nonzero eigenvalue of the frame operator
  double upper_bound = 0.0;  // largest eigenvalue
  Index span_dim = 0;
  ComplexMatrix dual;        // canonical dual, one column per label
  RealVector diag;           // <f_i, dual_i>, clamped to [0, 1]
  ComplexMatrix range_basis;
  std::string route;         // "gram" or "operator"
  std::vector<std::string> warnings;
};

// Eigendecomposes whichever of the Gram matrix or the frame operator is
// smaller (overridable). All materialized vectors participate, collar
// included; only the block prefix matters later, when sequences are formed.
FrameAnalysis analyze(const FrameSnapshot& snap, const AnalyzeOptions& opts = {});

// Partial sums of diagonal values over the block prefix: b_n = sum of
// diag_i for labels in the n-th block. Normalize to get the running
// averages a_n = b_n / |I_n|.
RealSequence diagPartialSums(const RealVector& diag, DecompositionPtr decomp);

// Keeps the first `blocks` blocks and exactly the labels they cover. Any
// collar and any attached dual are dropped; truncation does not commute
// with duality.
FrameSnapshot prefixSubSnapshot(const FrameSnapshot& snap, Index blocks);

// Compares running averages of the snapshot against its half-depth prefix.
// stable[n] means block n+1 moved by at most `tol` when the family was
// deepened; blocks past the half depth are unverified and reported false.
struct StabilityReport {
  Index half_depth = 0;
  RealVector full_values;
  RealVector half_values;
  std::vector<bool> stable;
  double max_dev = 0.0;  // over verified blocks
};

StabilityReport twoDepthStability(const FrameSnapshot& snap, double tol = 1e-6,
                                  const AnalyzeOptions& opts = {});

// Stacks two snapshots over the same label structure into the orthogonal
// direct sum of their ambient spaces. Attached duals are dropped (the dual
// of a sum is not the sum of duals unless the pieces already stand alone);
// a note lands in `warnings` when that happens.
FrameSnapshot directSum(const FrameSnapshot& x, const FrameSnapshot& y,
                        std::vector<std::string>* warnings = nullptr);

// Largest singular value of C1^H C2 for the two range bases, i.e. the norm
// of the product of the Gram range projections. Zero when either span is
// trivial; 1 when the ranges share a direction.
double gramProjectionOverlap(const FrameAnalysis& a, const FrameAnalysis& b);

bool isOrthogonalSupersets(const FrameAnalysis& a, const FrameAnalysis& b,
                           double tol = 1e-8);

// Relabels positions through `perm` (new position p takes old position
// perm[p]) and multiplies each vector by a unit scalar. The frame operator
// is untouched, so an attached dual is carried along covariantly.
FrameSnapshot applyPhasesAndPermutation(const FrameSnapshot& snap,
                                        const RealVector& phases,
                                        const std::vector<Index>& perm);

// ||V D^H V - V||_F / ||V||_F where D claims to be a dual: zero iff every
// frame vector reconstructs from its own coefficients.
double dualReconstructionResidual(const ComplexMatrix& vectors,
                                  const ComplexMatrix& dual);

// <f_i, dual_i> per label. The imaginary parts vanish for canonical duals;
// the largest one seen is reported through `max_imag` when given.
RealVector diagFromDual(const ComplexMatrix& vectors, const ComplexMatrix& dual,
                        double* max_imag = nullptr);

}  // namespace framekit
