#pragma once

#include "framekit/index.hpp"
#include "framekit/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace framekit {

// One value per block of a decomposition. Sequences are value types; the
// decomposition is shared and never mutated.
struct RealSequence {
  RealVector values;       // length = decomposition depth
  DecompositionPtr decomp;

  RealSequence() = default;
  RealSequence(RealVector v, DecompositionPtr d);

  Index depth() const { return static_cast<Index>(values.size()); }
  double blockSizeAsReal(Index n) const {
    return static_cast<double>(decomp->blockSize(n));
  }
  // x_n / |I_n| for every block.
  RealVector normalized() const;

  static RealSequence constant(double c, DecompositionPtr d);
  // The sequence i = (|I_1|, |I_2|, ...).
  static RealSequence blockSizes(DecompositionPtr d);
};

void requireSameBlocks(const RealSequence& x, const RealSequence& y);

// Membership in X: 0 <= x_1 <= |I_1| and 0 <= x_i - x_{i-1} <= |I_i| - |I_{i-1}|,
// within slack tol on every inequality.
bool isFrameCompatible(const RealSequence& x, double tol = 0.0);
// First violated constraint as text, or empty when compatible.
std::string frameCompatibilityIssue(const RealSequence& x, double tol = 0.0);

// Entrywise floor; preserves membership in X.
RealSequence floorSeq(const RealSequence& x);

// Cone membership: |x_1| <= c |I_1| and |x_i - x_{i-1}| <= c (|I_i| - |I_{i-1}|)
// for some finite c. Reports the minimal certificate.
struct XrCertificate {
  bool member = false;
  double c = 0;              // minimal constant when member
  std::string issue;         // reason when not a member
};

XrCertificate xrMembership(const RealSequence& x);

// Constructive split x = x_plus - x_minus with both parts in the positive cone
// X^+ (increment-wise: positive increments go to x_plus, negative to x_minus).
struct PositiveDecomposition {
  RealSequence x_plus;
  RealSequence x_minus;
  double certificate_c = 0;
};

PositiveDecomposition decomposePositive(const RealSequence& x);

// Entrywise lattice operations; X, X^+ and X_R are closed under both.
RealSequence wedge(const RealSequence& x, const RealSequence& y);
RealSequence vee(const RealSequence& x, const RealSequence& y);

enum class ComparisonKind {
  Equivalent,      // (x_n - y_n)/|I_n| -> 0 within tol over the tail window
  LeftDominated,   // x eventually below y in normalized gap (x <= y)
  RightDominated,  // y eventually below x
  Incomparable,    // normalized gap persistently crosses both signs beyond tol
  Undecided,
};

std::string to_string(ComparisonKind k);

struct ComparisonVerdict {
  ComparisonKind kind = ComparisonKind::Undecided;
  double liminf_gap = 0;   // min over window of (x_n - y_n)/|I_n|
  double limsup_gap = 0;   // max over window
  Index window_start = 0;  // first block (1-based) of the tail window
  std::string note;
};

struct CompareOptions {
  double tol = 1e-3;
  double tail_fraction = 0.5;  // fraction of blocks forming the tail window
};

// Tail-window comparison of two sequences on the same blocks. Domination
// verdicts are only issued for nonnegative sequences; signed inputs that are
// not equivalent come back Undecided with a note.
ComparisonVerdict compare(const RealSequence& x, const RealSequence& y,
                          const CompareOptions& opts = {});

}  // namespace framekit
