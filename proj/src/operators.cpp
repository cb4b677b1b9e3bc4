#include "framekit/operators.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace framekit {

OperatorSnapshot::OperatorSnapshot(ComplexMatrix m, DecompositionPtr d,
                                   std::optional<QuasiMetric> qm)
    : matrix(std::move(m)), decomp(std::move(d)), metric(std::move(qm)) {
  if (!decomp) throw std::invalid_argument("operator needs a decomposition");
  if (matrix.rows() != matrix.cols() || matrix.rows() != decomp->totalLabels())
    throw std::invalid_argument("matrix must be square over all materialized labels");
}

double operatorNorm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m.adjoint() * m);
  double lam = es.eigenvalues()(es.eigenvalues().size() - 1);
  return std::sqrt(std::max(lam, 0.0));
}

BopResult bOp(const OperatorSnapshot& op) {
  const auto& d = *op.decomp;
  RealVector re(d.depth()), im(d.depth());
  Index pos = 0;
  double acc_re = 0.0, acc_im = 0.0;
  for (Index n = 1; n <= d.depth(); ++n) {
    for (; pos < d.blockSize(n); ++pos) {
      acc_re += op.matrix(pos, pos).real();
      acc_im += op.matrix(pos, pos).imag();
    }
    re(n - 1) = acc_re;
    im(n - 1) = acc_im;
  }
  BopResult out;
  out.real_part = RealSequence(std::move(re), op.decomp);
  out.imag_part = RealSequence(std::move(im), op.decomp);
  out.real_cert = xrMembership(out.real_part);
  out.imag_cert = xrMembership(out.imag_part);
  out.op_norm = operatorNorm(op.matrix);
  return out;
}

NonExpansiveReport nonexpansiveReport(const OperatorSnapshot& op, std::vector<double> radii,
                                      Index interior_block) {
  if (!op.metric) throw std::invalid_argument("tail report needs a metric");
  if (radii.empty()) throw std::invalid_argument("no radii requested");
  std::sort(radii.begin(), radii.end());
  const auto& d = *op.decomp;
  Index block = interior_block == 0 ? d.depth() : interior_block;
  if (block < 1 || block > d.depth()) throw std::invalid_argument("interior block out of range");
  Index inside = d.blockSize(block);
  Index total = d.totalLabels();
  const auto& dist = op.metric->dist;

  // Distance from each inside label to the materialized complement of the
  // interior block; infinite when there is nothing outside.
  RealVector boundary_dist =
      RealVector::Constant(inside, std::numeric_limits<double>::infinity());
  for (Index i = 0; i < inside; ++i)
    for (Index j = inside; j < total; ++j)
      boundary_dist(i) = std::min(boundary_dist(i), dist(d.label(i), d.label(j)));

  NonExpansiveReport rep;
  rep.interior_block = block;
  if (inside < total)
    rep.notes.push_back("centers restricted to labels whose R-surroundings are materialized");
  else
    rep.notes.push_back("no labels beyond the interior block: every center counts");

  for (double R : radii) {
    NonExpansiveRow row;
    row.radius = R;
    for (Index i = 0; i < inside; ++i) {
      if (boundary_dist(i) <= R) {
        ++row.centers_excluded;
        continue;
      }
      ++row.centers_used;
      double rt = 0.0, ct = 0.0;
      for (Index j = 0; j < total; ++j) {
        if (dist(d.label(i), d.label(j)) <= R) continue;
        rt += std::norm(op.matrix(j, i));
        ct += std::norm(op.matrix(i, j));
      }
      row.row_tail = std::max(row.row_tail, rt);
      row.col_tail = std::max(row.col_tail, ct);
    }
    if (row.centers_used == 0)
      throw std::runtime_error("no interior center at radius " + std::to_string(R));
    rep.rows.push_back(row);
  }
  return rep;
}

std::optional<double> smallestRadiusBelow(const NonExpansiveReport& rep, double eps) {
  for (const auto& row : rep.rows)
    if (std::max(row.row_tail, row.col_tail) <= eps) return row.radius;
  return std::nullopt;
}

RealSequence tracialResidual(const OperatorSnapshot& t1, const OperatorSnapshot& t2) {
  if (!t1.decomp->sameBlocks(*t2.decomp) || t1.matrix.rows() != t2.matrix.rows())
    throw std::invalid_argument("operands live on different label structures");
  ComplexMatrix commutator = t1.matrix * t2.matrix - t2.matrix * t1.matrix;
  const auto& d = *t1.decomp;
  RealVector r(d.depth());
  Index pos = 0;
  Complex acc(0.0, 0.0);
  for (Index n = 1; n <= d.depth(); ++n) {
    for (; pos < d.blockSize(n); ++pos) acc += commutator(pos, pos);
    r(n - 1) = std::abs(acc) / static_cast<double>(d.blockSize(n));
  }
  return RealSequence(std::move(r), t1.decomp);
}

SuperframeReport superframeCheck(const FrameSnapshot& f1, const FrameSnapshot& f2, double tol,
                                 const AnalyzeOptions& aopts) {
  FrameAnalysis a1 = analyze(f1, aopts);
  FrameAnalysis a2 = analyze(f2, aopts);
  if (a1.span_dim == 0 || a2.span_dim == 0)
    throw std::invalid_argument("superframe check needs two nontrivial frames");

  std::vector<std::string> warnings;
  FrameSnapshot sum = directSum(f1, f2, &warnings);
  FrameAnalysis as = analyze(sum, aopts);

  SuperframeReport rep;
  rep.warnings = std::move(warnings);
  rep.span1 = a1.span_dim;
  rep.span2 = a2.span_dim;
  rep.combined_span = as.span_dim;
  rep.combined_lower = as.lower_bound;
  rep.combined_upper = as.upper_bound;
  rep.p1p2_norm = gramProjectionOverlap(a1, a2);
  rep.is_superframe =
      rep.combined_span == rep.span1 + rep.span2 && rep.combined_lower > tol;

  bool overlap_says = rep.p1p2_norm < 1.0 - tol;
  if (overlap_says != rep.is_superframe)
    rep.warnings.push_back("range-overlap test and rank test disagree near the threshold");
  return rep;
}

AdditivityReport supersetAdditivityReport(const FrameSnapshot& f1, const FrameSnapshot& f2,
                                          double stab_tol, const ProfileOptions& popts,
                                          const AnalyzeOptions& aopts) {
  AdditivityReport rep;
  rep.superframe = superframeCheck(f1, f2, 1e-8, aopts);
  if (!rep.superframe.is_superframe)
    rep.notes.push_back("superframe condition not met at this depth; residuals reported anyway");

  FrameSnapshot sum = directSum(f1, f2);
  StabilityReport s1 = twoDepthStability(f1, stab_tol, aopts);
  StabilityReport s2 = twoDepthStability(f2, stab_tol, aopts);
  StabilityReport ss = twoDepthStability(sum, stab_tol, aopts);

  Index depth = f1.decomp->depth();
  rep.residuals = ss.full_values - s1.full_values - s2.full_values;
  rep.stable.assign(depth, false);
  for (Index n = 0; n < depth; ++n) {
    rep.stable[n] = s1.stable[n] && s2.stable[n] && ss.stable[n];
    if (rep.stable[n]) {
      ++rep.stable_blocks;
      rep.stable_residual_sup = std::max(rep.stable_residual_sup, std::abs(rep.residuals(n)));
    }
  }
  if (rep.stable_blocks == 0)
    rep.notes.push_back("no block survived two-depth stability; sup left at 0");

  rep.profile_sum = profile(RealVector(s1.full_values + s2.full_values), popts);
  rep.profile_direct_sum = profile(ss.full_values, popts);
  return rep;
}

}  // namespace framekit
