#include "framekit/gabor.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>

namespace framekit {

GaborLattice regularLattice(Index N, Index a, Index b) {
  if (N <= 0 || a <= 0 || b <= 0 || N % a != 0 || N % b != 0)
    throw std::invalid_argument("lattice steps must divide the modulus");
  GaborLattice lat;
  lat.modulus = N;
  for (Index t = 0; t < N; t += a)
    for (Index w = 0; w < N; w += b)
      lat.points.emplace_back(static_cast<double>(t), static_cast<double>(w));
  return lat;
}

GaborLattice jitterLattice(const GaborLattice& base, Index amplitude, std::uint64_t seed) {
  if (amplitude < 0) throw std::invalid_argument("jitter amplitude must be nonnegative");
  std::mt19937_64 rng(seed);
  auto draw = [&]() {
    std::uint64_t span = static_cast<std::uint64_t>(2 * amplitude + 1);
    return static_cast<double>(static_cast<Index>(rng() % span) - amplitude);
  };
  GaborLattice out = base;
  for (auto& p : out.points) {
    p.first += draw();
    p.second += draw();
    if (out.modulus) {
      double N = static_cast<double>(*out.modulus);
      p.first -= N * std::floor(p.first / N);
      p.second -= N * std::floor(p.second / N);
    }
  }
  return out;
}

GaborLattice latticeFromMatrix(const RealMatrix& generator, double extent) {
  if (generator.rows() != 2 || generator.cols() != 2 ||
      std::abs(generator.determinant()) < 1e-12)
    throw std::invalid_argument("generator must be an invertible 2x2 matrix");
  RealMatrix inv = generator.inverse();
  double reach = inv.cwiseAbs().rowwise().sum().maxCoeff() * extent + 2.0;
  Index K = static_cast<Index>(std::ceil(reach));
  GaborLattice lat;
  for (Index i = -K; i <= K; ++i)
    for (Index j = -K; j <= K; ++j) {
      double x = generator(0, 0) * static_cast<double>(i) +
                 generator(0, 1) * static_cast<double>(j);
      double y = generator(1, 0) * static_cast<double>(i) +
                 generator(1, 1) * static_cast<double>(j);
      if (std::abs(x) <= extent && std::abs(y) <= extent) lat.points.emplace_back(x, y);
    }
  return lat;
}

BoxSpec::BoxSpec() : center(RealVector::Zero(2)), skew(RealMatrix::Identity(2, 2)) {}

BoxSpec::BoxSpec(double cx, double cy) : BoxSpec() {
  center(0) = cx;
  center(1) = cy;
}

BoxSpec::BoxSpec(double cx, double cy, RealMatrix skew_matrix) : BoxSpec(cx, cy) {
  if (skew_matrix.rows() != 2 || skew_matrix.cols() != 2 ||
      std::abs(skew_matrix.determinant()) < 1e-12)
    throw std::invalid_argument("skew must be an invertible 2x2 matrix");
  skew = std::move(skew_matrix);
}

namespace {

// Skewed sup-norm radius of a point relative to the box center, after torus
// wrap when a modulus is present.
double boxRadius(double t, double w, const BoxSpec& box, const RealMatrix& skew_inv,
                 const std::optional<Index>& modulus) {
  double dx = t - box.center(0);
  double dy = w - box.center(1);
  if (modulus) {
    double N = static_cast<double>(*modulus);
    dx -= N * std::round(dx / N);
    dy -= N * std::round(dy / N);
  }
  double u = skew_inv(0, 0) * dx + skew_inv(0, 1) * dy;
  double v = skew_inv(1, 0) * dx + skew_inv(1, 1) * dy;
  return std::max(std::abs(u), std::abs(v));
}

void requireAscendingSides(const std::vector<Index>& n_list) {
  if (n_list.empty()) throw std::invalid_argument("no box sides given");
  for (size_t k = 0; k < n_list.size(); ++k) {
    if (n_list[k] <= 0) throw std::invalid_argument("box sides must be positive");
    if (k > 0 && n_list[k] <= n_list[k - 1])
      throw std::invalid_argument("box sides must be strictly increasing");
  }
}

}  // namespace

std::vector<Index> boxCounts(const GaborLattice& lat, const BoxSpec& box,
                             const std::vector<Index>& n_list) {
  requireAscendingSides(n_list);
  RealMatrix inv = box.skew.inverse();
  std::vector<Index> counts(n_list.size(), 0);
  for (const auto& p : lat.points) {
    double r = boxRadius(p.first, p.second, box, inv, lat.modulus);
    for (size_t k = 0; k < n_list.size(); ++k)
      if (2.0 * r <= static_cast<double>(n_list[k]) + 1e-9) ++counts[k];
  }
  return counts;
}

ComplexVector deltaWindow(Index N) {
  if (N <= 0) throw std::invalid_argument("modulus must be positive");
  ComplexVector g = ComplexVector::Zero(N);
  g(0) = Complex(1.0, 0.0);
  return g;
}

ComplexVector gaussianWindow(Index N, double sigma) {
  if (N <= 0) throw std::invalid_argument("modulus must be positive");
  if (sigma <= 0.0) throw std::invalid_argument("sigma must be positive");
  ComplexVector g(N);
  for (Index x = 0; x < N; ++x) {
    double d = std::min(static_cast<double>(x), static_cast<double>(N - x));
    g(x) = Complex(std::exp(-d * d / (2.0 * sigma * sigma)), 0.0);
  }
  g /= g.norm();
  return g;
}

FrameSnapshot gaborSystem(const ComplexVector& window, const GaborLattice& lat,
                          const BoxSpec& box, const std::vector<Index>& n_list) {
  if (!lat.modulus) throw std::invalid_argument("building vectors needs the finite model");
  Index N = *lat.modulus;
  if (window.size() != N) throw std::invalid_argument("window length must equal the modulus");
  if (window.norm() == 0.0) throw std::invalid_argument("zero window");
  if (!lat.phases.empty() && lat.phases.size() != lat.points.size())
    throw std::invalid_argument("phases must cover every point");
  requireAscendingSides(n_list);

  struct Entry {
    Index enter;  // smallest listed side containing the point; -1 for collar
    Index t, w;
    size_t original;
  };
  RealMatrix inv = box.skew.inverse();
  std::vector<Entry> entries;
  entries.reserve(lat.points.size());
  for (size_t i = 0; i < lat.points.size(); ++i) {
    double td = lat.points[i].first;
    double wd = lat.points[i].second;
    Index t = static_cast<Index>(std::llround(td));
    Index w = static_cast<Index>(std::llround(wd));
    if (std::abs(td - static_cast<double>(t)) > 1e-9 ||
        std::abs(wd - static_cast<double>(w)) > 1e-9)
      throw std::invalid_argument("finite model needs integer lattice points");
    t = ((t % N) + N) % N;
    w = ((w % N) + N) % N;
    double r = boxRadius(static_cast<double>(t), static_cast<double>(w), box, inv,
                         lat.modulus);
    Index enter = -1;
    for (Index side : n_list)
      if (2.0 * r <= static_cast<double>(side) + 1e-9) {
        enter = side;
        break;
      }
    entries.push_back({enter, t, w, i});
  }
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    Index ea = a.enter < 0 ? std::numeric_limits<Index>::max() : a.enter;
    Index eb = b.enter < 0 ? std::numeric_limits<Index>::max() : b.enter;
    if (ea != eb) return ea < eb;
    if (a.t != b.t) return a.t < b.t;
    return a.w < b.w;
  });

  // Cumulative block sizes per listed side; leading empty boxes are dropped.
  std::vector<Index> sizes;
  for (Index side : n_list) {
    Index c = 0;
    for (const auto& e : entries)
      if (e.enter >= 0 && e.enter <= side) ++c;
    if (c == 0 && sizes.empty()) continue;
    sizes.push_back(c);
  }
  if (sizes.empty()) throw std::invalid_argument("no lattice point inside the largest box");

  // Labels; repeated (t, w) points get t offset by N per extra occurrence so
  // labels stay unique while wrap metrics still see the same point.
  std::vector<Label> labels;
  labels.reserve(entries.size());
  std::map<std::pair<Index, Index>, Index> seen;
  for (const auto& e : entries) {
    Index occ = seen[{e.t, e.w}]++;
    labels.emplace_back(e.t + occ * N, e.w);
  }
  auto decomp = std::make_shared<const IndexDecomposition>(std::move(labels), std::move(sizes));

  ComplexMatrix vectors(N, static_cast<Index>(entries.size()));
  const double tau = 2.0 * std::numbers::pi / static_cast<double>(N);
  for (size_t col = 0; col < entries.size(); ++col) {
    const Entry& e = entries[col];
    double phase = lat.phases.empty() ? 0.0 : lat.phases[e.original];
    Complex scalar = std::polar(1.0, phase);
    for (Index x = 0; x < N; ++x) {
      Index src = ((x - e.t) % N + N) % N;
      vectors(x, static_cast<Index>(col)) =
          scalar * std::polar(1.0, tau * static_cast<double>(e.w) * static_cast<double>(x)) *
          window(src);
    }
  }
  return FrameSnapshot(std::move(vectors), std::move(decomp));
}

DensityEstimate densityEstimate(const GaborLattice& lat, const BoxSpec& box,
                                const std::vector<Index>& n_list, VolumeNormalization norm,
                                double scan_halfwidth) {
  if (lat.points.empty()) throw std::invalid_argument("empty lattice");
  if (norm == VolumeNormalization::FiniteModel && !lat.modulus)
    throw std::invalid_argument("finite-model normalization needs a modulus");
  requireAscendingSides(n_list);

  DensityEstimate est;
  est.normalization = norm;
  double det = std::abs(box.skew.determinant());
  double divisor = norm == VolumeNormalization::FiniteModel
                       ? static_cast<double>(*lat.modulus)
                       : 1.0;
  std::vector<Index> counts = boxCounts(lat, box, n_list);
  RealVector ratios(static_cast<Index>(n_list.size()));
  for (size_t k = 0; k < n_list.size(); ++k) {
    DensityRow row;
    row.n = n_list[k];
    row.count = counts[k];
    row.volume = det * static_cast<double>(n_list[k]) * static_cast<double>(n_list[k]) / divisor;
    row.ratio = static_cast<double>(row.count) / row.volume;
    ratios(static_cast<Index>(k)) = row.ratio;
    est.rows.push_back(row);
  }
  est.profile = profile(ratios);
  est.notes.push_back(norm == VolumeNormalization::FiniteModel
                          ? "volume normalization: det(skew) n^2 / modulus"
                          : "volume normalization: det(skew) n^2 (Lebesgue)");

  if (scan_halfwidth > 0.0) {
    // Beurling scan: per side, slide the center on a grid of step n/4 and
    // track the extreme ratios; envelope over the profile's tail window.
    est.beurling_upper = 0.0;
    est.beurling_lower = std::numeric_limits<double>::infinity();
    for (Index idx = est.profile.window_first; idx <= est.profile.window_last; ++idx) {
      Index side = n_list[static_cast<size_t>(idx - 1)];
      double step = static_cast<double>(side) / 4.0;
      Index reach = static_cast<Index>(std::floor(scan_halfwidth / step));
      double vol = det * static_cast<double>(side) * static_cast<double>(side) / divisor;
      for (Index i = -reach; i <= reach; ++i)
        for (Index j = -reach; j <= reach; ++j) {
          BoxSpec shifted(box.center(0) + step * static_cast<double>(i),
                          box.center(1) + step * static_cast<double>(j), box.skew);
          Index c = boxCounts(lat, shifted, {side})[0];
          double ratio = static_cast<double>(c) / vol;
          est.beurling_upper = std::max(est.beurling_upper, ratio);
          est.beurling_lower = std::min(est.beurling_lower, ratio);
        }
    }
    est.notes.push_back("center scan grid step n/4, halfwidth " +
                        std::to_string(scan_halfwidth));
  } else {
    est.beurling_upper = est.profile.limsup;
    est.beurling_lower = est.profile.liminf;
    est.notes.push_back("center scan skipped: envelope taken from the fixed center");
  }
  return est;
}

MeasureDensityReport measureVsDensity(const FrameSnapshot& frame, const DensityEstimate& est,
                                      double tol, const ProfileOptions& popts,
                                      const AnalyzeOptions& aopts) {
  MeasureDensityReport rep;
  rep.measure = frameMeasure(frame, popts, aopts);
  rep.density = est;
  if (est.profile.liminf <= 0.0)
    throw std::invalid_argument("density envelope touches zero; reciprocal undefined");
  double recip_low = 1.0 / est.profile.limsup;
  double recip_high = 1.0 / est.profile.liminf;
  rep.residual = std::max(std::abs(rep.measure.liminf - recip_low),
                          std::abs(rep.measure.limsup - recip_high));
  rep.pass = rep.residual <= tol;

  FrameAnalysis an = analyze(frame, aopts);
  RealVector a = diagPartialSums(an.diag, frame.decomp).normalized();
  rep.trace_product = a(a.size() - 1) * est.rows.back().ratio;
  rep.notes.push_back("envelope residual compares measure ends against reciprocal density ends");
  return rep;
}

SuperframeDensityReport superframeDensityCondition(const std::vector<ComplexVector>& windows,
                                                   const std::vector<GaborLattice>& lattices,
                                                   const BoxSpec& box,
                                                   const std::vector<Index>& n_list,
                                                   double tol) {
  if (windows.empty() || windows.size() != lattices.size())
    throw std::invalid_argument("need one window per lattice");

  std::vector<FrameSnapshot> systems;
  systems.reserve(windows.size());
  for (size_t k = 0; k < windows.size(); ++k)
    systems.push_back(gaborSystem(windows[k], lattices[k], box, n_list));
  for (size_t k = 1; k < systems.size(); ++k)
    if (!systems[0].decomp->sameBlocks(*systems[k].decomp) ||
        systems[0].totalLabels() != systems[k].totalLabels())
      throw std::invalid_argument("lattices fill the boxes differently; identify them first");

  SuperframeDensityReport rep;
  Index span_sum = 0;
  double overlap_max = 0.0;
  std::vector<FrameAnalysis> analyses;
  for (const auto& sys : systems) {
    analyses.push_back(analyze(sys));
    span_sum += analyses.back().span_dim;
    rep.measures.push_back(frameMeasure(sys));
    rep.measure_sum_low += rep.measures.back().liminf;
    rep.measure_sum_high += rep.measures.back().limsup;
    rep.det_analogue_sum += static_cast<double>(*lattices[0].modulus) /
                            static_cast<double>(sys.totalLabels());
  }
  for (size_t i = 0; i < analyses.size(); ++i)
    for (size_t j = i + 1; j < analyses.size(); ++j)
      overlap_max = std::max(overlap_max, gramProjectionOverlap(analyses[i], analyses[j]));

  FrameSnapshot combined = systems[0];
  for (size_t k = 1; k < systems.size(); ++k) combined = directSum(combined, systems[k]);
  FrameAnalysis ac = analyze(combined);

  rep.superframe.span1 = analyses[0].span_dim;
  rep.superframe.span2 = systems.size() > 1 ? analyses[1].span_dim : 0;
  rep.superframe.combined_span = ac.span_dim;
  rep.superframe.combined_lower = ac.lower_bound;
  rep.superframe.combined_upper = ac.upper_bound;
  rep.superframe.p1p2_norm = overlap_max;
  rep.superframe.is_superframe = ac.span_dim == span_sum && ac.lower_bound > 1e-8;

  rep.necessary_condition = rep.measure_sum_high <= 1.0 + tol;
  rep.notes.push_back("det analogue per system is modulus/count (= a*b/modulus when regular)");
  if (systems.size() == 1)
    rep.notes.push_back("single system: the budget reduces to the measure envelope itself");
  return rep;
}

}  // namespace framekit
