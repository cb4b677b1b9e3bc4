#include "framekit/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace framekit {

RealSequence::RealSequence(RealVector v, DecompositionPtr d)
    : values(std::move(v)), decomp(std::move(d)) {
  if (!decomp) throw std::invalid_argument("sequence needs a decomposition");
  if (static_cast<Index>(values.size()) != decomp->depth())
    throw std::invalid_argument("sequence length must equal decomposition depth");
}

RealVector RealSequence::normalized() const {
  RealVector out(values.size());
  for (Index n = 0; n < values.size(); ++n)
    out(n) = values(n) / static_cast<double>(decomp->blockSize(n + 1));
  return out;
}

RealSequence RealSequence::constant(double c, DecompositionPtr d) {
  RealVector v = RealVector::Constant(d->depth(), c);
  return RealSequence(std::move(v), std::move(d));
}

RealSequence RealSequence::blockSizes(DecompositionPtr d) {
  RealVector v(d->depth());
  for (Index n = 1; n <= d->depth(); ++n) v(n - 1) = static_cast<double>(d->blockSize(n));
  return RealSequence(std::move(v), std::move(d));
}

void requireSameBlocks(const RealSequence& x, const RealSequence& y) {
  if (!x.decomp || !y.decomp || !x.decomp->sameBlocks(*y.decomp))
    throw std::invalid_argument("sequences live on different block structures");
}

std::string frameCompatibilityIssue(const RealSequence& x, double tol) {
  const auto& d = *x.decomp;
  if (x.values(0) < -tol || x.values(0) > static_cast<double>(d.blockSize(1)) + tol) {
    std::ostringstream os;
    os << "x_1 = " << x.values(0) << " outside [0, " << d.blockSize(1) << "]";
    return os.str();
  }
  for (Index n = 2; n <= x.depth(); ++n) {
    double inc = x.values(n - 1) - x.values(n - 2);
    double growth = static_cast<double>(d.blockSize(n) - d.blockSize(n - 1));
    if (inc < -tol || inc > growth + tol) {
      std::ostringstream os;
      os << "increment " << inc << " at block " << n << " outside [0, " << growth << "]";
      return os.str();
    }
  }
  return {};
}

bool isFrameCompatible(const RealSequence& x, double tol) {
  return frameCompatibilityIssue(x, tol).empty();
}

RealSequence floorSeq(const RealSequence& x) {
  RealVector v(x.values.size());
  for (Index i = 0; i < v.size(); ++i) v(i) = std::floor(x.values(i));
  return RealSequence(std::move(v), x.decomp);
}

XrCertificate xrMembership(const RealSequence& x) {
  const auto& d = *x.decomp;
  XrCertificate cert;
  double c = std::abs(x.values(0)) / static_cast<double>(d.blockSize(1));
  for (Index n = 2; n <= x.depth(); ++n) {
    double inc = std::abs(x.values(n - 1) - x.values(n - 2));
    double growth = static_cast<double>(d.blockSize(n) - d.blockSize(n - 1));
    if (growth == 0.0) {
      if (inc > 0.0) {
        std::ostringstream os;
        os << "nonzero increment " << inc << " at block " << n << " with zero block growth";
        cert.issue = os.str();
        return cert;
      }
      continue;
    }
    c = std::max(c, inc / growth);
  }
  cert.member = true;
  cert.c = c;
  return cert;
}

PositiveDecomposition decomposePositive(const RealSequence& x) {
  XrCertificate cert = xrMembership(x);
  if (!cert.member)
    throw std::invalid_argument("not in the signed cone: " + cert.issue);
  RealVector plus(x.values.size()), minus(x.values.size());
  double d1 = x.values(0);
  plus(0) = std::max(d1, 0.0);
  minus(0) = std::max(-d1, 0.0);
  for (Index n = 1; n < x.values.size(); ++n) {
    double inc = x.values(n) - x.values(n - 1);
    plus(n) = plus(n - 1) + std::max(inc, 0.0);
    minus(n) = minus(n - 1) + std::max(-inc, 0.0);
  }
  PositiveDecomposition out{RealSequence(std::move(plus), x.decomp),
                            RealSequence(std::move(minus), x.decomp), cert.c};
  return out;
}

RealSequence wedge(const RealSequence& x, const RealSequence& y) {
  requireSameBlocks(x, y);
  return RealSequence(x.values.cwiseMin(y.values), x.decomp);
}

RealSequence vee(const RealSequence& x, const RealSequence& y) {
  requireSameBlocks(x, y);
  return RealSequence(x.values.cwiseMax(y.values), x.decomp);
}

std::string to_string(ComparisonKind k) {
  switch (k) {
    case ComparisonKind::Equivalent: return "equivalent";
    case ComparisonKind::LeftDominated: return "left_dominated";
    case ComparisonKind::RightDominated: return "right_dominated";
    case ComparisonKind::Incomparable: return "incomparable";
    case ComparisonKind::Undecided: return "undecided";
  }
  return "undecided";
}

ComparisonVerdict compare(const RealSequence& x, const RealSequence& y,
                          const CompareOptions& opts) {
  requireSameBlocks(x, y);
  if (opts.tail_fraction <= 0.0 || opts.tail_fraction > 1.0)
    throw std::invalid_argument("tail fraction must be in (0, 1]");
  Index depth = x.depth();
  Index window = std::max<Index>(2, static_cast<Index>(std::ceil(
                                        static_cast<double>(depth) * opts.tail_fraction)));
  if (window > depth)
    throw std::invalid_argument("comparison needs at least two blocks");
  Index start = depth - window;  // 0-based

  ComparisonVerdict verdict;
  verdict.window_start = start + 1;
  RealVector gap(window);
  for (Index n = start; n < depth; ++n)
    gap(n - start) =
        (x.values(n) - y.values(n)) / static_cast<double>(x.decomp->blockSize(n + 1));
  verdict.liminf_gap = gap.minCoeff();
  verdict.limsup_gap = gap.maxCoeff();

  double abs_max = gap.cwiseAbs().maxCoeff();
  Index q4 = std::max<Index>(1, window / 4);
  double abs_max_q4 = gap.tail(q4).cwiseAbs().maxCoeff();
  bool trending = abs_max_q4 <= abs_max + 1e-15;

  if (abs_max <= opts.tol && trending) {
    verdict.kind = ComparisonKind::Equivalent;
    return verdict;
  }

  bool nonneg = (x.values.minCoeff() >= 0.0) && (y.values.minCoeff() >= 0.0);
  if (!nonneg) {
    verdict.kind = ComparisonKind::Undecided;
    verdict.note = "domination verdicts are defined for nonnegative sequences only";
    return verdict;
  }

  if (verdict.limsup_gap <= opts.tol) {
    verdict.kind = ComparisonKind::LeftDominated;
    return verdict;
  }
  if (verdict.liminf_gap >= -opts.tol) {
    verdict.kind = ComparisonKind::RightDominated;
    return verdict;
  }
  // Signs cross beyond tolerance; call it incomparable only when both signs
  // persist into the last quarter, otherwise leave it undecided.
  double q4_min = gap.tail(q4).minCoeff();
  double q4_max = gap.tail(q4).maxCoeff();
  if (q4_min < -opts.tol && q4_max > opts.tol) {
    verdict.kind = ComparisonKind::Incomparable;
  } else {
    verdict.kind = ComparisonKind::Undecided;
    verdict.note = "tail window is non-monotone and outside tolerance";
  }
  return verdict;
}

}  // namespace framekit
