#include "framekit/frame.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace framekit {

FrameSnapshot::FrameSnapshot(ComplexMatrix v, DecompositionPtr d)
    : vectors(std::move(v)), decomp(std::move(d)) {
  if (!decomp) throw std::invalid_argument("snapshot needs a decomposition");
  if (vectors.cols() != decomp->totalLabels())
    throw std::invalid_argument("one vector per label required, collar included");
}

FrameSnapshot::FrameSnapshot(ComplexMatrix v, DecompositionPtr d, ComplexMatrix explicit_dual)
    : FrameSnapshot(std::move(v), std::move(d)) {
  if (explicit_dual.rows() != vectors.rows() || explicit_dual.cols() != vectors.cols())
    throw std::invalid_argument("dual must have the snapshot's shape");
  dual = std::move(explicit_dual);
  has_dual = true;
}

namespace {

// Shared tail of both analysis routes: given ascending eigenvalues, find the
// numerical rank and the bounds.
Index numericalRank(const RealVector& ev, double rank_tol, double* lo, double* hi) {
  double lam_max = ev.size() > 0 ? ev(ev.size() - 1) : 0.0;
  if (lam_max <= 0.0) {
    *lo = 0.0;
    *hi = 0.0;
    return 0;
  }
  double thr = lam_max * rank_tol;
  Index r = 0;
  for (Index k = 0; k < ev.size(); ++k)
    if (ev(k) > thr) ++r;
  *hi = lam_max;
  *lo = r > 0 ? ev(ev.size() - r) : 0.0;
  return r;
}

}  // namespace

FrameAnalysis analyze(const FrameSnapshot& snap, const AnalyzeOptions& opts) {
  const ComplexMatrix& V = snap.vectors;
  const Index d = V.rows();
  const Index M = V.cols();
  if (M == 0) throw std::invalid_argument("cannot analyze an empty snapshot");

  bool gram_route = opts.route == Route::Auto ? (M <= d) : (opts.route == Route::Gram);
  FrameAnalysis out;
  out.route = gram_route ? "gram" : "operator";

  if (gram_route) {
    ComplexMatrix G = V.adjoint() * V;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(G);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
    RealVector ev = es.eigenvalues();
    Index r = numericalRank(ev, opts.rank_tol, &out.lower_bound, &out.upper_bound);
    out.span_dim = r;
    if (r == 0) {
      out.dual = ComplexMatrix::Zero(d, M);
      out.diag = RealVector::Zero(M);
      out.range_basis = ComplexMatrix::Zero(M, 0);
      out.warnings.push_back("span is trivial");
      return out;
    }
    ComplexMatrix W = es.eigenvectors().rightCols(r);
    RealVector inv_ev = ev.tail(r).cwiseInverse();
    out.dual = V * (W * inv_ev.asDiagonal() * W.adjoint());
    out.range_basis = std::move(W);
  } else {
    ComplexMatrix S = V * V.adjoint();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(S);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
    RealVector ev = es.eigenvalues();
    Index r = numericalRank(ev, opts.rank_tol, &out.lower_bound, &out.upper_bound);
    out.span_dim = r;
    if (r == 0) {
      out.dual = ComplexMatrix::Zero(d, M);
      out.diag = RealVector::Zero(M);
      out.range_basis = ComplexMatrix::Zero(M, 0);
      out.warnings.push_back("span is trivial");
      return out;
    }
    ComplexMatrix U = es.eigenvectors().rightCols(r);
    RealVector lam = ev.tail(r);
    ComplexMatrix coeff = U.adjoint() * V;  // r x M
    out.dual = U * (lam.cwiseInverse().asDiagonal() * coeff);
    out.range_basis =
        coeff.adjoint() * lam.cwiseSqrt().cwiseInverse().asDiagonal();  // M x r isometry
  }

  out.diag = out.range_basis.rowwise().squaredNorm();
  out.diag = out.diag.cwiseMax(0.0).cwiseMin(1.0);
  return out;
}

RealSequence diagPartialSums(const RealVector& diag, DecompositionPtr decomp) {
  if (!decomp) throw std::invalid_argument("partial sums need a decomposition");
  if (diag.size() < decomp->blockSize(decomp->depth()))
    throw std::invalid_argument("diagonal shorter than the last block");
  RealVector b(decomp->depth());
  Index pos = 0;
  double acc = 0.0;
  for (Index n = 1; n <= decomp->depth(); ++n) {
    Index upto = decomp->blockSize(n);
    for (; pos < upto; ++pos) acc += diag(pos);
    b(n - 1) = acc;
  }
  return RealSequence(std::move(b), std::move(decomp));
}

FrameSnapshot prefixSubSnapshot(const FrameSnapshot& snap, Index blocks) {
  const auto& d = *snap.decomp;
  if (blocks < 1 || blocks > d.depth())
    throw std::invalid_argument("prefix depth out of range");
  Index keep = d.blockSize(blocks);
  std::vector<Label> labels(d.labels().begin(), d.labels().begin() + keep);
  std::vector<Index> sizes(d.sizes().begin(), d.sizes().begin() + blocks);
  auto sub = std::make_shared<const IndexDecomposition>(std::move(labels), std::move(sizes));
  return FrameSnapshot(snap.vectors.leftCols(keep), std::move(sub));
}

StabilityReport twoDepthStability(const FrameSnapshot& snap, double tol,
                                  const AnalyzeOptions& opts) {
  Index depth = snap.decomp->depth();
  if (depth < 2) throw std::invalid_argument("stability needs at least two blocks");
  Index half = depth / 2;

  FrameAnalysis full = analyze(snap, opts);
  FrameSnapshot half_snap = prefixSubSnapshot(snap, half);
  FrameAnalysis half_an = analyze(half_snap, opts);

  StabilityReport rep;
  rep.half_depth = half;
  rep.full_values = diagPartialSums(full.diag, snap.decomp).normalized();
  rep.half_values = diagPartialSums(half_an.diag, half_snap.decomp).normalized();
  rep.stable.assign(depth, false);
  for (Index n = 0; n < half; ++n) {
    double dev = std::abs(rep.full_values(n) - rep.half_values(n));
    rep.max_dev = std::max(rep.max_dev, dev);
    rep.stable[n] = dev <= tol;
  }
  return rep;
}

FrameSnapshot directSum(const FrameSnapshot& x, const FrameSnapshot& y,
                        std::vector<std::string>* warnings) {
  if (!x.decomp->sameBlocks(*y.decomp) || x.totalLabels() != y.totalLabels())
    throw std::invalid_argument("direct sum needs matching label structures");
  ComplexMatrix v(x.ambientDim() + y.ambientDim(), x.totalLabels());
  v.topRows(x.ambientDim()) = x.vectors;
  v.bottomRows(y.ambientDim()) = y.vectors;
  if (warnings && (x.has_dual || y.has_dual))
    warnings->push_back(
        "attached duals dropped: stacking duals is only valid when each piece "
        "reconstructs on its own");
  return FrameSnapshot(std::move(v), x.decomp);
}

double gramProjectionOverlap(const FrameAnalysis& a, const FrameAnalysis& b) {
  if (a.span_dim == 0 || b.span_dim == 0) return 0.0;
  if (a.range_basis.rows() != b.range_basis.rows())
    throw std::invalid_argument("range bases live over different label counts");
  ComplexMatrix cross = a.range_basis.adjoint() * b.range_basis;
  Eigen::JacobiSVD<ComplexMatrix> svd(cross);
  return svd.singularValues()(0);
}

bool isOrthogonalSupersets(const FrameAnalysis& a, const FrameAnalysis& b, double tol) {
  return gramProjectionOverlap(a, b) <= tol;
}

FrameSnapshot applyPhasesAndPermutation(const FrameSnapshot& snap, const RealVector& phases,
                                        const std::vector<Index>& perm) {
  Index M = snap.totalLabels();
  if (phases.size() != M || static_cast<Index>(perm.size()) != M)
    throw std::invalid_argument("phases and permutation must cover every label");
  std::vector<bool> seen(M, false);
  for (Index p : perm) {
    if (p < 0 || p >= M || seen[p])
      throw std::invalid_argument("permutation is not a bijection on positions");
    seen[p] = true;
  }
  ComplexMatrix v(snap.ambientDim(), M);
  ComplexMatrix dual;
  if (snap.has_dual) dual.resize(snap.ambientDim(), M);
  for (Index p = 0; p < M; ++p) {
    Complex unit = std::polar(1.0, phases(p));
    v.col(p) = unit * snap.vectors.col(perm[p]);
    if (snap.has_dual) dual.col(p) = unit * snap.dual.col(perm[p]);
  }
  if (snap.has_dual) return FrameSnapshot(std::move(v), snap.decomp, std::move(dual));
  return FrameSnapshot(std::move(v), snap.decomp);
}

double dualReconstructionResidual(const ComplexMatrix& vectors, const ComplexMatrix& dual) {
  if (dual.rows() != vectors.rows() || dual.cols() != vectors.cols())
    throw std::invalid_argument("dual must have the snapshot's shape");
  double denom = vectors.norm();
  if (denom == 0.0) return 0.0;
  return (vectors * (dual.adjoint() * vectors) - vectors).norm() / denom;
}

RealVector diagFromDual(const ComplexMatrix& vectors, const ComplexMatrix& dual,
                        double* max_imag) {
  if (dual.rows() != vectors.rows() || dual.cols() != vectors.cols())
    throw std::invalid_argument("dual must have the snapshot's shape");
  RealVector out(vectors.cols());
  double worst = 0.0;
  for (Index i = 0; i < vectors.cols(); ++i) {
    Complex z = dual.col(i).dot(vectors.col(i));  // conjugates the dual side
    out(i) = z.real();
    worst = std::max(worst, std::abs(z.imag()));
  }
  if (max_imag) *max_imag = worst;
  return out;
}

}  // namespace framekit
