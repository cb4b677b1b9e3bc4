#pragma once

#include <optional>
#include <vector>

#include "framekit/frame.hpp"
#include "framekit/index.hpp"
#include "framekit/measure.hpp"
#include "framekit/sequence.hpp"
#include "framekit/types.hpp"

namespace framekit {

// A dense matrix over the decomposition's materialized labels (one row and
// column per label, collar included). The optional metric feeds the tail
// diagnostics.
struct OperatorSnapshot {
  ComplexMatrix matrix;
  DecompositionPtr decomp;
  std::optional<QuasiMetric> metric;

  OperatorSnapshot() = default;
  OperatorSnapshot(ComplexMatrix m, DecompositionPtr d, std::optional<QuasiMetric> qm = {});
};

// Partial sums of the matrix diagonal over the block prefix, split into real
// and imaginary parts, each with its signed-cone certificate. The minimal
// certificate constants never exceed the operator norm.
struct BopResult {
  RealSequence real_part;
  RealSequence imag_part;
  XrCertificate real_cert;
  XrCertificate imag_cert;
  double op_norm = 0.0;
};

BopResult bOp(const OperatorSnapshot& op);

double operatorNorm(const ComplexMatrix& m);

// Worst-case tail energy outside radius-R balls, over centers whose
// surroundings are materialized out to R. This is a decay table about the
// finite matrix at hand, not a verdict about any infinite extension.
struct NonExpansiveRow {
  double radius = 0.0;
  double row_tail = 0.0;  // max over centers i of sum_{d(i,j)>R} |matrix(j,i)|^2
  double col_tail = 0.0;  // same for the adjoint
  Index centers_used = 0;
  Index centers_excluded = 0;
};

struct NonExpansiveReport {
  std::vector<NonExpansiveRow> rows;  // ascending radius; tails nonincreasing
  Index interior_block = 0;           // centers come from this block
  std::vector<std::string> notes;
};

// interior_block 0 means the deepest block. A center counts as interior for
// radius R when every materialized label outside the interior block is
// farther than R; with no collar everything is interior, which is only
// meaningful for exact finite models (tori).
NonExpansiveReport nonexpansiveReport(const OperatorSnapshot& op, std::vector<double> radii,
                                      Index interior_block = 0);

std::optional<double> smallestRadiusBelow(const NonExpansiveReport& rep, double eps);

// r_n = |b_n(T1 T2) - b_n(T2 T1)| / |I_n| on the materialized product. With
// no collar the last block is the full trace and the residual is trivially
// zero there; a collar keeps the boundary honest.
RealSequence tracialResidual(const OperatorSnapshot& t1, const OperatorSnapshot& t2);

// The direct sum of two frames is a frame for the whole sum space iff the
// ranks add and the combined lower bound stays away from zero; the Gram
// range projections' product norm staying below 1 is the equivalent test,
// reported for cross-checking.
struct SuperframeReport {
  bool is_superframe = false;
  double p1p2_norm = 0.0;
  double combined_lower = 0.0;
  double combined_upper = 0.0;
  Index span1 = 0;
  Index span2 = 0;
  Index combined_span = 0;
  std::vector<std::string> warnings;
};

SuperframeReport superframeCheck(const FrameSnapshot& f1, const FrameSnapshot& f2,
                                 double tol = 1e-8, const AnalyzeOptions& aopts = {});

// Per-block additivity defect of running averages under the direct sum.
// The superframe precondition is reported, not enforced: the interesting
// failures are exactly the families that never satisfy it at finite depth.
struct AdditivityReport {
  SuperframeReport superframe;
  RealVector residuals;      // a_n(sum) - a_n(f1) - a_n(f2) per block
  std::vector<bool> stable;  // blocks stable for all three families
  Index stable_blocks = 0;
  double stable_residual_sup = 0.0;
  MeasureProfile profile_sum;         // profile of a(f1) + a(f2)
  MeasureProfile profile_direct_sum;  // profile of a(f1 (+) f2)
  std::vector<std::string> notes;
};

AdditivityReport supersetAdditivityReport(const FrameSnapshot& f1, const FrameSnapshot& f2,
                                          double stab_tol = 1e-6,
                                          const ProfileOptions& popts = {},
                                          const AnalyzeOptions& aopts = {});

}  // namespace framekit
