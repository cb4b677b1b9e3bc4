#include "framekit/measure.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace framekit {

MeasureProfile profile(const RealVector& averages, const ProfileOptions& opts) {
  Index depth = averages.size();
  Index window = opts.window > 0 ? opts.window
                                 : std::max<Index>(4, depth / 2);
  if (window < 4) throw std::invalid_argument("profile window needs at least 4 blocks");
  if (window > depth) throw std::invalid_argument("profile window exceeds the depth");

  MeasureProfile out;
  out.window_first = depth - window + 1;
  out.window_last = depth;
  RealVector tail = averages.tail(window);
  out.liminf = tail.minCoeff();
  out.limsup = tail.maxCoeff();

  // Single-linkage clusters: split the sorted tail wherever neighbours are
  // more than cluster_eps apart.
  std::vector<double> sorted(tail.data(), tail.data() + window);
  std::sort(sorted.begin(), sorted.end());
  Index run_start = 0;
  for (Index k = 1; k <= window; ++k) {
    if (k == window || sorted[k] - sorted[k - 1] > opts.cluster_eps) {
      double sum = 0.0;
      for (Index j = run_start; j < k; ++j) sum += sorted[j];
      double count = static_cast<double>(k - run_start);
      out.clusters.emplace_back(sum / count, count / static_cast<double>(window));
      run_start = k;
    }
  }

  // Converged: one tight cluster, and the last quarter of the window moves
  // less than the sequence as a whole did.
  double spread = out.limsup - out.liminf;
  double osc_all = averages.maxCoeff() - averages.minCoeff();
  Index q = std::max<Index>(1, window / 4);
  RealVector quarter = averages.tail(q);
  double osc_q = quarter.maxCoeff() - quarter.minCoeff();
  out.converged = spread <= opts.cluster_eps && osc_q <= 0.9 * osc_all + 1e-12;
  return out;
}

MeasureProfile profile(const RealSequence& normalized, const ProfileOptions& opts) {
  return profile(normalized.values, opts);
}

MeasureProfile frameMeasure(const FrameSnapshot& snap, const ProfileOptions& popts,
                            const AnalyzeOptions& aopts) {
  StabilityReport stab = twoDepthStability(snap, 1e-6, aopts);
  MeasureProfile out = profile(stab.full_values, popts);
  out.stability_digits = RealVector::Zero(snap.decomp->depth());
  for (Index n = 0; n < stab.half_depth; ++n) {
    double dev = std::abs(stab.full_values(n) - stab.half_values(n));
    out.stability_digits(n) = -std::log10(std::max(dev, 1e-17));
  }
  return out;
}

ComparisonVerdict framesCompare(const FrameSnapshot& f1, const FrameSnapshot& f2,
                                const CompareOptions& copts, const AnalyzeOptions& aopts) {
  if (!f1.decomp->sameBlocks(*f2.decomp))
    throw std::invalid_argument("frames live on different block structures");
  RealSequence b1 = diagPartialSums(analyze(f1, aopts).diag, f1.decomp);
  RealSequence b2 = diagPartialSums(analyze(f2, aopts).diag, f2.decomp);
  return compare(b1, b2, copts);
}

namespace {

Index rankOfColumns(const ComplexMatrix& V, const std::vector<bool>& keep, Index kept_count) {
  ComplexMatrix sub(V.rows(), kept_count);
  Index c = 0;
  for (Index i = 0; i < V.cols(); ++i)
    if (keep[static_cast<size_t>(i)]) sub.col(c++) = V.col(i);
  if (kept_count == 0) return 0;
  Eigen::ColPivHouseholderQR<ComplexMatrix> qr(sub);
  return qr.rank();
}

}  // namespace

ExcessReport excessProbe(const FrameSnapshot& snap, double alpha, double epsilon, double tol,
                         const AnalyzeOptions& aopts) {
  if (alpha < 0.0 || alpha >= 1.0) throw std::invalid_argument("alpha must lie in [0, 1)");
  if (epsilon <= 0.0 || epsilon >= 1.0) throw std::invalid_argument("epsilon must lie in (0, 1)");

  ExcessReport rep;
  rep.alpha = alpha;
  rep.epsilon = epsilon;

  FrameAnalysis an = analyze(snap, aopts);
  rep.original_lower = an.lower_bound;
  rep.original_upper = an.upper_bound;

  MeasureProfile prof = profile(diagPartialSums(an.diag, snap.decomp).normalized());
  if (prof.limsup >= 1.0 - 1e-6) {
    rep.trivial = true;
    rep.claim_satisfied = true;
    rep.remaining_lower = an.lower_bound;
    rep.remaining_upper = an.upper_bound;
    rep.notes.push_back("running averages already at 1: no removable excess");
    return rep;
  }

  // Candidates in ascending diagonal order; a removal sticks only if the
  // remaining columns still span the original range.
  std::vector<Index> candidates;
  for (Index i = 0; i < an.diag.size(); ++i)
    if (an.diag(i) <= alpha) candidates.push_back(i);
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](Index a, Index b) { return an.diag(a) < an.diag(b); });

  std::vector<bool> keep(static_cast<size_t>(snap.totalLabels()), true);
  Index kept = snap.totalLabels();
  for (Index cand : candidates) {
    keep[static_cast<size_t>(cand)] = false;
    if (rankOfColumns(snap.vectors, keep, kept - 1) == an.span_dim) {
      --kept;
      rep.removed_positions.push_back(cand);
    } else {
      keep[static_cast<size_t>(cand)] = true;
    }
  }
  std::sort(rep.removed_positions.begin(), rep.removed_positions.end());

  if (kept == 0) throw std::runtime_error("removal emptied the family");
  ComplexMatrix remaining(snap.ambientDim(), kept);
  Index c = 0;
  for (Index i = 0; i < snap.totalLabels(); ++i)
    if (keep[static_cast<size_t>(i)]) remaining.col(c++) = snap.vectors.col(i);

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(remaining * remaining.adjoint());
  RealVector ev = es.eigenvalues();
  double lam_max = ev(ev.size() - 1);
  double thr = std::max(lam_max, 0.0) * aopts.rank_tol;
  Index r = 0;
  for (Index k = 0; k < ev.size(); ++k)
    if (ev(k) > thr) ++r;
  rep.remaining_upper = lam_max;
  rep.remaining_lower = r > 0 ? ev(ev.size() - r) : 0.0;
  if (r != an.span_dim)
    rep.notes.push_back("remaining span rank drifted under re-analysis");

  rep.claim_satisfied =
      rep.remaining_lower >= rep.original_lower * (1.0 - epsilon - alpha) - tol;
  return rep;
}

RedundancyInterval redundancy(const MeasureProfile& p) {
  if (p.liminf < 0.0) throw std::invalid_argument("redundancy needs a nonnegative profile");
  RedundancyInterval out;
  out.low = p.limsup > 0.0 ? 1.0 / p.limsup : std::numeric_limits<double>::infinity();
  if (p.liminf > 0.0) {
    out.high = 1.0 / p.liminf;
  } else {
    out.high = std::numeric_limits<double>::infinity();
    out.unbounded = true;
  }
  return out;
}

}  // namespace framekit
