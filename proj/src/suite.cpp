#include "framekit/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <random>

#include <json.hpp>

#include "framekit/channel.hpp"
#include "framekit/frame.hpp"
#include "framekit/gabor.hpp"
#include "framekit/index.hpp"
#include "framekit/io.hpp"
#include "framekit/measure.hpp"
#include "framekit/operators.hpp"
#include "framekit/sequence.hpp"
#include "framekit/synthesis.hpp"

namespace framekit {

namespace {

namespace fs = std::filesystem;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// Collects pass/fail lines; a failed check flips the experiment verdict but
// never aborts it, so one run reports every violated clause at once.
struct Checker {
  ExperimentResult& res;

  bool check(bool ok, const std::string& what) {
    res.lines.push_back(std::string(ok ? "pass: " : "FAIL: ") + what);
    if (!ok) res.pass = false;
    return ok;
  }
  void note(const std::string& what) { res.lines.push_back("note: " + what); }
};

double unitReal(std::mt19937_64& rng) {  // uniform on [0, 1), bit-portable
  return static_cast<double>(rng() >> 11) * 0x1p-53;
}

DecompositionPtr sharedDecomp(IndexDecomposition d) {
  return std::make_shared<const IndexDecomposition>(std::move(d));
}

// Deterministic asymmetric unit-norm window. The wrapped gaussian is
// rank-degenerate on critically sampled grids (its symmetry forces a Zak
// transform zero), so budget-sharp systems need a window without symmetry.
ComplexVector chirpWindow(Index N, double a, double b) {
  ComplexVector g(N);
  for (Index x = 0; x < N; ++x) {
    double t = static_cast<double>(x);
    g(x) = Complex(std::cos(a + 1.3 * t), std::sin(b + 2.1 * t * t));
  }
  g /= g.norm();
  return g;
}

std::string artifact(const ExperimentConfig& cfg, ExperimentResult& res,
                     const std::string& name) {
  fs::create_directories(cfg.output_dir);
  std::string path = (fs::path(cfg.output_dir) / name).string();
  res.artifacts.push_back(path);
  return path;
}

// ---------------------------------------------------------------------------
// The non-additive pair. Even labels carry orthonormal vectors in the first
// family; the second couples even label k to a private partner coordinate
// k^2+1 with weight 1/2 on both ends, so each pair of labels {k, k^2+1}
// shares one direction. The running averages of the diagonal products tend
// to 1/2, 1/4 and (for the elementwise direct sum) 1/2: the direct sum's
// average is not the sum of the pieces'.
// ---------------------------------------------------------------------------

// Count of partner labels k^2+1 (k even) up to n, accumulated incrementally.
struct PartnerCounter {
  Index next_k = 2;
  Index count = 0;
  void advance(Index n) {  // call with n = 1, 2, 3, ...
    if (next_k * next_k + 1 == n) {
      ++count;
      next_k += 2;
    }
  }
};

struct PairSequences {
  RealVector first, second, direct;  // occupied-count partial sums b_n
};

PairSequences pairClosedForm(Index depth) {
  PairSequences out;
  out.first.resize(depth);
  out.second.resize(depth);
  out.direct.resize(depth);
  Index evens = 0;
  PartnerCounter partners;
  for (Index n = 1; n <= depth; ++n) {
    if (n % 2 == 0) ++evens;
    partners.advance(n);
    out.first(n - 1) = static_cast<double>(evens);
    out.second(n - 1) = 0.5 * static_cast<double>(evens + partners.count);
    out.direct(n - 1) = static_cast<double>(evens + partners.count);
  }
  return out;
}

struct PairFamilies {
  FrameSnapshot first, second, direct;  // each carries its closed-form dual
};

// Dense truncation to labels 1..depth. Ambient coordinates are compressed to
// the ones the vectors touch: one per even label for the first family, one
// per even label plus one per partner coordinate for the second.
PairFamilies pairFamilies(Index depth) {
  Index half = depth / 2;
  auto decomp = sharedDecomp(IndexDecomposition::prefixBlocks(depth));

  ComplexMatrix vf = ComplexMatrix::Zero(half, depth);
  for (Index k = 2; k <= depth; k += 2) vf(k / 2 - 1, k - 1) = 1.0;

  ComplexMatrix vg = ComplexMatrix::Zero(2 * half, depth);
  for (Index k = 2; k <= depth; k += 2) {
    Index ev = k / 2 - 1, pa = half + k / 2 - 1;
    vg(ev, k - 1) = 0.5;
    vg(pa, k - 1) = 0.5;
    if (k * k + 1 <= depth) {  // partner label's column is identical
      vg(ev, k * k) = 0.5;
      vg(pa, k * k) = 0.5;
    }
  }

  ComplexMatrix vd = ComplexMatrix::Zero(3 * half, depth);
  vd.topRows(half) = vf;
  vd.bottomRows(2 * half) = vg;

  // Closed-form canonical duals. First family: orthonormal, self-dual.
  // Second: each complete two-label piece is tight for its one-dimensional
  // span, so the dual equals the family there; truncation-broken pieces
  // disagree, which is exactly what the stability mask excludes.
  ComplexMatrix dd = ComplexMatrix::Zero(3 * half, depth);
  for (Index k = 2; k <= depth; k += 2) {
    dd(k / 2 - 1, k - 1) = 1.0;                // basis vector, first slot only
    if (k * k + 1 <= depth) {
      Index col = k * k;                       // partner label k^2+1
      dd(k / 2 - 1, col) = -1.0;               // minus the even basis vector
      dd(half + k / 2 - 1, col) = 1.0;         // plus both second-slot coords
      dd(2 * half + k / 2 - 1, col) = 1.0;
    }
  }

  PairFamilies out;
  out.first = FrameSnapshot(vf, decomp, vf);
  out.second = FrameSnapshot(vg, decomp, vg);  // tight on every complete piece
  out.direct = FrameSnapshot(std::move(vd), decomp, std::move(dd));
  return out;
}

// Explicit vs numerical diagonal products, compared label by label inside
// the blocks the two-depth run certifies as stable.
struct DualAgreement {
  double worst = 0.0;         // max |numerical - explicit| over stable labels
  double closed_worst = 0.0;  // max |numerical b_n - closed form| on stable blocks
  Index stable_blocks = 0;
};

DualAgreement dualAgreement(const FrameSnapshot& snap, const RealVector& closed_b) {
  StabilityReport stab = twoDepthStability(snap);
  FrameAnalysis an = analyze(snap);
  RealVector exp_diag = diagFromDual(snap.vectors, snap.dual);
  RealVector num_b = diagPartialSums(an.diag, snap.decomp).values;

  DualAgreement out;
  const auto& sizes = snap.decomp->sizes();
  for (Index n = 0; n < snap.decomp->depth(); ++n) {
    if (!stab.stable[static_cast<size_t>(n)]) continue;
    ++out.stable_blocks;
    Index lo = n == 0 ? 0 : sizes[static_cast<size_t>(n - 1)];
    for (Index p = lo; p < sizes[static_cast<size_t>(n)]; ++p)
      out.worst = std::max(out.worst, std::abs(an.diag(p) - exp_diag(p)));
    out.closed_worst = std::max(out.closed_worst, std::abs(num_b(n) - closed_b(n)));
  }
  return out;
}

ExperimentResult counterexamplePair(const ExperimentConfig& cfg) {
  ExperimentResult res{cfg.kind, true, {}, {}, {}};
  Checker ck{res};
  auto t0 = std::chrono::steady_clock::now();

  const Index deep = 4097;
  auto deep_decomp = sharedDecomp(IndexDecomposition::prefixBlocks(deep));
  PairSequences closed = pairClosedForm(deep);
  RealSequence sF(closed.first, deep_decomp);
  RealSequence sG(closed.second, deep_decomp);
  RealSequence sD(closed.direct, deep_decomp);

  struct Row {
    const char* name;
    const RealSequence* seq;
    double target;
  };
  bool profiles_ok = true;
  for (const Row& row : {Row{"first", &sF, 0.5}, Row{"second", &sG, 0.25},
                         Row{"direct_sum", &sD, 0.5}}) {
    MeasureProfile p = profile(row.seq->normalized());
    bool ok = std::abs(p.liminf - row.target) <= 0.02 &&
              std::abs(p.limsup - row.target) <= 0.02 && p.converged;
    profiles_ok = ck.check(ok, std::string(row.name) + " profile [" + fmt(p.liminf) +
                                   ", " + fmt(p.limsup) + "] within 0.02 of " +
                                   fmt(row.target) + ", converged") &&
                  profiles_ok;
    res.metrics[std::string(row.name) + "_liminf"] = p.liminf;
    res.metrics[std::string(row.name) + "_limsup"] = p.limsup;
  }
  res.metrics["profiles_ok"] = profiles_ok ? 1.0 : 0.0;

  double n = static_cast<double>(deep);
  double residual = closed.direct(deep - 1) / n - closed.first(deep - 1) / n -
                    closed.second(deep - 1) / n;
  bool residual_ok = std::abs(std::abs(residual) - 0.25) <= 0.02;
  ck.check(residual_ok, "additivity residual magnitude " + fmt(std::abs(residual)) +
                            " at depth 4097 inside 0.25 +/- 0.02 (non-additive pair)");
  res.metrics["residual_abs_final"] = std::abs(residual);
  res.metrics["residual_in_range"] = residual_ok ? 1.0 : 0.0;

  // Dense cross-check: numerical canonical dual vs the closed-form dual at
  // depth 512, stability certified against the 256 prefix.
  const Index dense = 512;
  PairFamilies fams = pairFamilies(dense);
  PairSequences closed_dense = pairClosedForm(dense);

  double recon = dualReconstructionResidual(fams.direct.vectors, fams.direct.dual);
  bool recon_ok = recon <= 1e-10;
  ck.check(recon_ok, "closed-form dual reconstructs the direct sum, residual " + fmt(recon));
  res.metrics["reconstruction_ok"] = recon_ok ? 1.0 : 0.0;

  DualAgreement af = dualAgreement(fams.first, closed_dense.first);
  DualAgreement ag = dualAgreement(fams.second, closed_dense.second);
  DualAgreement ad = dualAgreement(fams.direct, closed_dense.direct);
  double worst = std::max({af.worst, ag.worst, ad.worst});
  double closed_worst = std::max({af.closed_worst, ag.closed_worst, ad.closed_worst});
  bool dual_ok = worst <= 1e-8 && closed_worst <= 1e-8;
  ck.check(dual_ok, "explicit vs numerical diagonal products agree to " + fmt(worst) +
                        " on stable blocks (" + std::to_string(af.stable_blocks) + "/" +
                        std::to_string(ag.stable_blocks) + "/" +
                        std::to_string(ad.stable_blocks) + " stable)");
  ck.note("closed-form partial sums match the numerics to " + fmt(closed_worst) +
          " on stable blocks");
  res.metrics["dual_ok"] = dual_ok ? 1.0 : 0.0;
  res.metrics["dual_agreement_worst"] = worst;
  res.metrics["stable_blocks_second"] = static_cast<double>(ag.stable_blocks);

  // The measured duration stays out of the payload: artifacts must be
  // byte-identical across runs, and a timing is a timestamp in disguise.
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool runtime_ok = seconds < 60.0;
  ck.check(runtime_ok, "runtime under 60 s");
  res.metrics["runtime_ok"] = runtime_ok ? 1.0 : 0.0;

  if (!cfg.output_dir.empty()) {
    writeSequenceCsv(artifact(cfg, res, "first_counts.csv"), sF);
    writeSequenceCsv(artifact(cfg, res, "second_counts.csv"), sG);
    writeSequenceCsv(artifact(cfg, res, "direct_sum_counts.csv"), sD);
    writeProfileJson(artifact(cfg, res, "first_profile.json"), profile(sF.normalized()));
    writeProfileJson(artifact(cfg, res, "second_profile.json"), profile(sG.normalized()));
    writeProfileJson(artifact(cfg, res, "direct_sum_profile.json"), profile(sD.normalized()));
  }
  return res;
}

// ---------------------------------------------------------------------------

ExperimentResult rieszImage(const ExperimentConfig& cfg) {
  ExperimentResult res{cfg.kind, true, {}, {}, {}};
  Checker ck{res};
  const Index dim = 64;
  auto decomp = sharedDecomp(IndexDecomposition::prefixBlocks(dim));
  double worst = 0.0;
  for (int draw = 0; draw < 3; ++draw) {
    NoiseSource noise(cfg.seed + static_cast<std::uint64_t>(draw));
    ComplexMatrix t(dim, dim);
    for (Index j = 0; j < dim; ++j)
      for (Index i = 0; i < dim; ++i) t(i, j) = noise.next();
    FrameSnapshot snap(t, decomp);
    FrameAnalysis an = analyze(snap);
    ck.check(an.span_dim == dim, "draw " + std::to_string(draw) + " image spans, dimension " +
                                     std::to_string(an.span_dim));
    RealVector a = diagPartialSums(an.diag, decomp).normalized();
    double dev = (a.array() - 1.0).abs().maxCoeff();
    worst = std::max(worst, dev);
    MeasureProfile p = profile(a);
    ck.check(dev <= 1e-9 && std::abs(p.liminf - 1.0) <= 1e-9 &&
                 std::abs(p.limsup - 1.0) <= 1e-9,
             "draw " + std::to_string(draw) + " profile identically 1, deviation " + fmt(dev));
  }
  res.metrics["max_deviation"] = worst;
  return res;
}

// ---------------------------------------------------------------------------

ExperimentResult orthogonalAdditivity(const ExperimentConfig& cfg) {
  ExperimentResult res{cfg.kind, true, {}, {}, {}};
  Checker ck{res};
  std::mt19937_64 rng(cfg.seed);
  const Index depth = 24;
  double worst = 0.0, worst_overlap = 0.0;

  for (int draw = 0; draw < 5; ++draw) {
    std::vector<Index> sizes(depth);
    Index total = 0;
    for (Index nidx = 0; nidx < depth; ++nidx) {
      total += 1 + static_cast<Index>(rng() % 4);
      sizes[static_cast<size_t>(nidx)] = total;
    }
    auto decomp = sharedDecomp(IndexDecomposition::fromBlockSizes(sizes));

    RealVector x(depth), y(depth);
    double prev_size = 0.0, xv = 0.0, yv = 0.0;
    for (Index nidx = 0; nidx < depth; ++nidx) {
      double growth = static_cast<double>(sizes[static_cast<size_t>(nidx)]) - prev_size;
      double u = (0.15 + 0.8 * unitReal(rng)) * growth;
      double t = unitReal(rng);
      xv += t * u;
      yv += u - t * u;
      x(nidx) = xv;
      y(nidx) = yv;
      prev_size = static_cast<double>(sizes[static_cast<size_t>(nidx)]);
    }
    SupersetSplit split = splitSuperset({RealSequence(x, decomp), RealSequence(y, decomp)});

    FrameAnalysis an1 = analyze(split.parts[0].snapshot);
    FrameAnalysis an2 = analyze(split.parts[1].snapshot);
    double overlap = gramProjectionOverlap(an1, an2);
    worst_overlap = std::max(worst_overlap, overlap);
    ck.check(isOrthogonalSupersets(an1, an2),
             "draw " + std::to_string(draw) + " coefficient ranges orthogonal, overlap " +
                 fmt(overlap));

    FrameSnapshot sum = directSum(split.parts[0].snapshot, split.parts[1].snapshot);
    RealVector a = diagPartialSums(analyze(sum).diag, decomp).normalized();
    RealVector a1 = diagPartialSums(an1.diag, decomp).normalized();
    RealVector a2 = diagPartialSums(an2.diag, decomp).normalized();
    double dev = (a - a1 - a2).cwiseAbs().maxCoeff();
    worst = std::max(worst, dev);
    ck.check(dev <= 1e-10, "draw " + std::to_string(draw) +
                               " additivity residual identically 0, max " + fmt(dev));
  }
  res.metrics["max_residual"] = worst;
  res.metrics["max_overlap"] = worst_overlap;
  return res;
}

// ---------------------------------------------------------------------------

ExperimentResult twoCluster(const ExperimentConfig& cfg) {
  ExperimentResult res{cfg.kind, true, {}, {}, {}};
  Checker ck{res};
  const Index depth = 20;
  std::vector<Index> sizes(depth);
  for (Index m = 1; m <= depth; ++m) sizes[static_cast<size_t>(m - 1)] = Index{1} << m;
  auto decomp = sharedDecomp(IndexDecomposition::fromBlockSizes(sizes));

  RealVector b(depth);
  for (Index m = 1; m <= depth; ++m) {
    Index nn = m / 2;
    Index pow4 = Index{1} << (2 * nn);
    b(m - 1) = static_cast<double>(2 * (pow4 - 1) / 3);
  }
  RealSequence seq(b, decomp);
  ck.check(isFrameCompatible(seq, 0.0), "alternating-count sequence is frame compatible");

  MeasureProfile p = profile(seq.normalized());
  ck.check(std::abs(p.liminf - 1.0 / 3.0) <= 1e-3,
           "liminf " + fmt(p.liminf) + " within 1e-3 of 1/3");
  ck.check(std::abs(p.limsup - 2.0 / 3.0) <= 1e-3,
           "limsup " + fmt(p.limsup) + " within 1e-3 of 2/3");
  ck.check(p.clusters.size() == 2, "exactly two accumulation clusters, got " +
                                       std::to_string(p.clusters.size()));
  if (p.clusters.size() == 2) {
    ck.check(std::abs(p.clusters[0].first - 1.0 / 3.0) <= 1e-3 &&
                 std::abs(p.clusters[1].first - 2.0 / 3.0) <= 1e-3,
             "cluster centers " + fmt(p.clusters[0].first) + ", " + fmt(p.clusters[1].first));
    ck.check(std::abs(p.clusters[0].second - 0.5) <= 0.11 &&
                 std::abs(p.clusters[1].second - 0.5) <= 0.11,
             "cluster weights near 1/2: " + fmt(p.clusters[0].second) + ", " +
                 fmt(p.clusters[1].second));
  }
  res.metrics["liminf"] = p.liminf;
  res.metrics["limsup"] = p.limsup;
  res.metrics["clusters"] = static_cast<double>(p.clusters.size());

  if (!cfg.output_dir.empty()) {
    writeSequenceCsv(artifact(cfg, res, "alternating_counts.csv"), seq);
    writeProfileJson(artifact(cfg, res, "alternating_profile.json"), p);
  }
  return res;
}

// ---------------------------------------------------------------------------

std::vector<Index> evenSides(Index n_max, Index step) {
  std::vector<Index> out;
  for (Index n = step; n <= n_max; n += step) out.push_back(n);
  return out;
}

ExperimentResult gaborRegular(const ExperimentConfig& cfg) {
  ExperimentResult res{cfg.kind, true, {}, {}, {}};
  Checker ck{res};
  const Index N = 16;
  GaborLattice lat = regularLattice(N, 2, 2);
  ComplexVector window = gaussianWindow(N, 0.5 * std::sqrt(double(N)));
  BoxSpec box(0.5, 0.5);
  std::vector<Index> n_list = evenSides(N, 4);

  FrameSnapshot frame = gaborSystem(window, lat, box, n_list);
  DensityEstimate est = densityEstimate(lat, box, n_list, VolumeNormalization::FiniteModel,
                                        0.5 * double(N));
  MeasureDensityReport rep = measureVsDensity(frame, est, 1e-9);

  ck.check(std::abs(rep.measure.liminf - 0.25) <= 1e-9 &&
               std::abs(rep.measure.limsup - 0.25) <= 1e-9,
           "measure profile [" + fmt(rep.measure.liminf) + ", " + fmt(rep.measure.limsup) +
               "] equals 1/4");
  ck.check(std::abs(est.profile.liminf - 4.0) <= 1e-9 &&
               std::abs(est.profile.limsup - 4.0) <= 1e-9,
           "density ratios equal 4 at every side");
  ck.check(std::abs(rep.trace_product - 1.0) <= 1e-9,
           "measure times density " + fmt(rep.trace_product) + " equals 1");
  ck.check(rep.pass, "measure envelope matches the reciprocal density, residual " +
                         fmt(rep.residual));
  ck.note("center-scanned density envelope [" + fmt(est.beurling_lower) + ", " +
          fmt(est.beurling_upper) + "] (finite boxes overshoot until the box wraps)");

  res.metrics["measure_liminf"] = rep.measure.liminf;
  res.metrics["measure_limsup"] = rep.measure.limsup;
  res.metrics["trace_product"] = rep.trace_product;
  res.metrics["residual"] = rep.residual;

  if (!cfg.output_dir.empty())
    writeProfileJson(artifact(cfg, res, "measure_profile.json"), rep.measure);
  return res;
}

ExperimentResult gaborJittered(const ExperimentConfig& cfg) {
  ExperimentResult res{cfg.kind, true, {}, {}, {}};
  Checker ck{res};
  const Index N = 64;
  GaborLattice lat = jitterLattice(regularLattice(N, 4, 4), 1, cfg.seed);
  ComplexVector window = gaussianWindow(N, 0.5 * std::sqrt(double(N)));
  BoxSpec box(0.5, 0.5);
  std::vector<Index> n_list = evenSides(N, 8);

  FrameSnapshot frame = gaborSystem(window, lat, box, n_list);
  DensityEstimate est = densityEstimate(lat, box, n_list, VolumeNormalization::FiniteModel);
  MeasureDensityReport rep = measureVsDensity(frame, est, 1e-2);

  ck.check(std::abs(rep.measure.liminf - 0.25) <= 1e-2 &&
               std::abs(rep.measure.limsup - 0.25) <= 1e-2,
           "measure profile [" + fmt(rep.measure.liminf) + ", " + fmt(rep.measure.limsup) +
               "] within 1e-2 of 1/4");
  ck.check(std::abs(rep.trace_product - 1.0) <= 1e-2,
           "measure times density " + fmt(rep.trace_product) + " within 1e-2 of 1");
  ck.check(rep.pass, "measure envelope within 1e-2 of the reciprocal density, residual " +
                         fmt(rep.residual));

  res.metrics["measure_liminf"] = rep.measure.liminf;
  res.metrics["measure_limsup"] = rep.measure.limsup;
  res.metrics["trace_product"] = rep.trace_product;
  res.metrics["residual"] = rep.residual;

  if (!cfg.output_dir.empty())
    writeProfileJson(artifact(cfg, res, "measure_profile.json"), rep.measure);
  return res;
}

ExperimentResult gaborSuperframe(const ExperimentConfig& cfg) {
  ExperimentResult res{cfg.kind, true, {}, {}, {}};
  Checker ck{res};
  std::map<Index, double> residual_by_n;

  for (Index N : {Index{16}, Index{32}, Index{64}}) {
    GaborLattice lat = jitterLattice(regularLattice(N, 2, 2), 1,
                                     cfg.seed + static_cast<std::uint64_t>(N));
    ComplexVector g1 = gaussianWindow(N, 0.5 * std::sqrt(double(N)));
    ComplexVector g2 = gaussianWindow(N, std::sqrt(double(N)));
    BoxSpec box(0.5, 0.5);
    std::vector<Index> n_list = evenSides(N, std::max<Index>(2, N / 8));

    FrameSnapshot f1 = gaborSystem(g1, lat, box, n_list);
    FrameSnapshot f2 = gaborSystem(g2, lat, box, n_list);

    SuperframeReport sf = superframeCheck(f1, f2);
    ck.check(sf.is_superframe, "N=" + std::to_string(N) + " direct sum is a frame (spans " +
                                   std::to_string(sf.span1) + "+" + std::to_string(sf.span2) +
                                   "=" + std::to_string(sf.combined_span) + ", lower " +
                                   fmt(sf.combined_lower) + ")");
    ck.note("N=" + std::to_string(N) + " range projection product norm " + fmt(sf.p1p2_norm));

    AdditivityReport rep = supersetAdditivityReport(f1, f2);
    Index depth = f1.decomp->depth();
    Index window = std::max<Index>(2, depth / 2);
    double sup = 0.0;
    for (Index b = depth - window; b < depth; ++b)
      sup = std::max(sup, std::abs(rep.residuals(b)));
    residual_by_n[N] = sup;
    res.metrics["residual_N" + std::to_string(N)] = sup;
    ck.note("N=" + std::to_string(N) + " tail-window additivity residual " + fmt(sup));

    // Decay of the frame correlations in the torus time-frequency metric.
    ComplexMatrix gram = f1.vectors.adjoint() * f1.vectors;
    OperatorSnapshot op(gram, f1.decomp, torusSupMetric(N));
    NonExpansiveReport ner = nonexpansiveReport(
        op, {double(N) / 8.0, double(N) / 4.0, 3.0 * double(N) / 8.0});
    std::optional<double> rad = smallestRadiusBelow(ner, 0.25);
    ck.check(rad.has_value(), "N=" + std::to_string(N) +
                                  " correlation tails fall below 0.25 by radius " +
                                  (rad ? fmt(*rad) : std::string("none")));
  }

  ck.check(residual_by_n[64] < 0.03,
           "residual " + fmt(residual_by_n[64]) + " at N=64 under 0.03");
  ck.check(residual_by_n[16] > residual_by_n[32] && residual_by_n[32] > residual_by_n[64],
           "residual decreases over N=16,32,64: " + fmt(residual_by_n[16]) + " > " +
               fmt(residual_by_n[32]) + " > " + fmt(residual_by_n[64]));
  return res;
}

// ---------------------------------------------------------------------------

ExperimentResult synthesisExactness(const ExperimentConfig& cfg) {
  ExperimentResult res{cfg.kind, true, {}, {}, {}};
  Checker ck{res};
  std::mt19937_64 rng(cfg.seed);
  const Index depth = 16;
  Index trials = cfg.trials > 0 ? cfg.trials : 1000;

  Index synth_bad = 0, sum_bad = 0, support_bad = 0, first_window_bad = 0;
  Index window_bad_trials = 0, window_bad_blocks = 0, window_total_blocks = 0;

  auto randomDecomp = [&]() {
    std::vector<Index> sizes(depth);
    Index total = 0;
    for (Index i = 0; i < depth; ++i) {
      total += 1 + static_cast<Index>(rng() % 4);
      sizes[static_cast<size_t>(i)] = total;
    }
    return sharedDecomp(IndexDecomposition::fromBlockSizes(sizes));
  };

  auto randomCompatible = [&](const DecompositionPtr& decomp, double share) {
    RealVector v(depth);
    double prev = 0.0, acc = 0.0;
    for (Index i = 0; i < depth; ++i) {
      double size = static_cast<double>(decomp->blockSize(i + 1));
      acc += share * unitReal(rng) * (size - prev);
      v(i) = acc;
      prev = size;
    }
    return RealSequence(v, decomp);
  };

  for (Index trial = 0; trial < trials; ++trial) {
    auto decomp = randomDecomp();
    RealSequence x = randomCompatible(decomp, 0.48);
    RealSequence y = randomCompatible(decomp, 0.48);

    PerpNormalFrame fx = synthPerpNormal(x);
    RealVector bx = bSequence(fx).values;
    if ((bx - floorSeq(x).values).cwiseAbs().maxCoeff() != 0.0) ++synth_bad;

    SupersetSplit split = splitSuperset({x, y});
    RealVector fz = floorSeq(RealSequence(x.values + y.values, decomp)).values;
    RealVector b0 = bSequence(split.parts[0]).values;
    RealVector b1 = bSequence(split.parts[1]).values;
    if ((b0 + b1 - fz).cwiseAbs().maxCoeff() != 0.0) ++sum_bad;

    std::vector<Index> all = split.parts[0].support;
    all.insert(all.end(), split.parts[1].support.begin(), split.parts[1].support.end());
    std::sort(all.begin(), all.end());
    bool disjoint = std::adjacent_find(all.begin(), all.end()) == all.end();
    if (!disjoint || all != split.total.support) ++support_bad;

    const RealVector fx_floor = floorSeq(x).values;
    const RealVector fy_floor = floorSeq(y).values;
    bool trial_bad = false;
    for (Index nidx = 0; nidx < depth; ++nidx) {
      if (b0(nidx) < fx_floor(nidx) - 1.0 || b0(nidx) > fx_floor(nidx)) ++first_window_bad;
      ++window_total_blocks;
      if (b1(nidx) < fy_floor(nidx) - 1.0 || b1(nidx) > fy_floor(nidx)) {
        ++window_bad_blocks;
        trial_bad = true;
      }
    }
    if (trial_bad) ++window_bad_trials;
  }

  ck.check(synth_bad == 0, "occupied counts of the realized family equal the floors in " +
                               std::to_string(trials) + "/" + std::to_string(trials) +
                               " trials");
  ck.check(sum_bad == 0, "split parts sum to the floor of the total in every trial");
  ck.check(support_bad == 0, "part supports are disjoint and union to the total's support");
  ck.check(first_window_bad == 0, "first part stays inside [floor-1, floor] in every block");
  ck.check(window_bad_blocks == 0,
           "every part stays inside [floor-1, floor]: violated in " +
               std::to_string(window_bad_blocks) + "/" + std::to_string(window_total_blocks) +
               " blocks (" + std::to_string(window_bad_trials) + "/" + std::to_string(trials) +
               " trials); the remainder part absorbs the rounding deficit " +
               "floor(z)-floor(x)-floor(y), which exceeds 0 whenever the fractional " +
               "parts add past 1, so the two-sided window cannot hold for both parts");

  res.metrics["synth_exact"] = synth_bad == 0 ? 1.0 : 0.0;
  res.metrics["parts_sum_exact"] = sum_bad == 0 ? 1.0 : 0.0;
  res.metrics["supports_disjoint"] = support_bad == 0 ? 1.0 : 0.0;
  res.metrics["first_part_window_ok"] = first_window_bad == 0 ? 1.0 : 0.0;
  res.metrics["all_parts_window_ok"] = window_bad_blocks == 0 ? 1.0 : 0.0;
  res.metrics["window_violation_blocks"] = static_cast<double>(window_bad_blocks);
  res.metrics["window_violation_trials"] = static_cast<double>(window_bad_trials);
  return res;
}

// ---------------------------------------------------------------------------

ExperimentResult latticeLaws(const ExperimentConfig& cfg) {
  ExperimentResult res{cfg.kind, true, {}, {}, {}};
  Checker ck{res};
  std::mt19937_64 rng(cfg.seed);
  const Index depth = 100;
  Index pairs = cfg.trials > 0 ? cfg.trials : 500;

  std::vector<Index> sizes(depth);
  for (Index m = 1; m <= depth; ++m) sizes[static_cast<size_t>(m - 1)] = m * m * m;
  auto decomp = sharedDecomp(IndexDecomposition::fromBlockSizes(sizes));

  auto convergent = [&](double c) {
    // Value c |I_n| plus a geometrically dying wiggle: the tail window sees
    // the limit to machine precision while early blocks stay generic.
    double amp = 0.04 * std::min(c, 1.0 - c);
    RealVector v(depth);
    for (Index m = 1; m <= depth; ++m) {
      double s = m == 1 ? 0.0 : (2.0 * unitReal(rng) - 1.0) * amp * std::pow(0.5, double(m));
      v(m - 1) = (c + s) * static_cast<double>(sizes[static_cast<size_t>(m - 1)]);
    }
    return RealSequence(v, decomp);
  };

  Index closure_bad = 0;
  double worst = 0.0;
  for (Index pair = 0; pair < pairs; ++pair) {
    double c1 = 0.05 + 0.9 * unitReal(rng);
    double c2 = 0.05 + 0.9 * unitReal(rng);
    RealSequence x = convergent(c1);
    RealSequence y = convergent(c2);
    if (!isFrameCompatible(x, 0.0) || !isFrameCompatible(y, 0.0)) {
      ++closure_bad;
      continue;
    }
    RealSequence w = wedge(x, y);
    RealSequence v = vee(x, y);
    if (!isFrameCompatible(w, 0.0) || !isFrameCompatible(v, 0.0)) ++closure_bad;

    MeasureProfile pw = profile(w.normalized());
    MeasureProfile pv = profile(v.normalized());
    double lo = std::min(c1, c2), hi = std::max(c1, c2);
    worst = std::max({worst, std::abs(pw.liminf - lo), std::abs(pw.limsup - lo),
                      std::abs(pv.liminf - hi), std::abs(pv.limsup - hi)});
  }

  ck.check(closure_bad == 0, "minimum and maximum of compatible pairs stay compatible " +
                                 std::string("(exact check, ") + std::to_string(pairs) +
                                 " pairs)");
  ck.check(worst <= 1e-6, "profiles of min/max land on min/max of the limits, worst " +
                              fmt(worst));
  res.metrics["worst_profile_deviation"] = worst;
  res.metrics["closure_violations"] = static_cast<double>(closure_bad);
  return res;
}

// ---------------------------------------------------------------------------

ExperimentResult bandTrace(const ExperimentConfig& cfg) {
  ExperimentResult res{cfg.kind, true, {}, {}, {}};
  Checker ck{res};
  std::mt19937_64 rng(cfg.seed);
  auto decomp = sharedDecomp(IndexDecomposition::integerBoxes(256, 16));
  Index dim = decomp->totalLabels();
  const auto& labels = decomp->labels();

  auto entry = [&]() {
    return Complex(1.4 * unitReal(rng) - 0.7, 1.4 * unitReal(rng) - 0.7);
  };
  auto banded = [&]() {
    ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
    for (Index i = 0; i < dim; ++i)
      for (Index j = 0; j < dim; ++j) {
        Index d = labels[static_cast<size_t>(i)].a - labels[static_cast<size_t>(j)].a;
        if (d < 0) d = -d;
        if (d <= 3) m(i, j) = entry();
      }
    return m;
  };
  auto dense = [&]() {
    ComplexMatrix m(dim, dim);
    for (Index i = 0; i < dim; ++i)
      for (Index j = 0; j < dim; ++j) m(i, j) = entry();
    return m;
  };

  // A single draw fluctuates too much for a clean trend; average the
  // residual over an ensemble of independent draws.
  QuasiMetric metric = absMetric();
  const int draws = 8;
  RealVector r_banded = RealVector::Zero(256), r_dense = RealVector::Zero(256);
  OperatorSnapshot b1(banded(), decomp, metric), d1(dense(), decomp, metric);
  {
    OperatorSnapshot b2(banded(), decomp, metric), d2(dense(), decomp, metric);
    r_banded += tracialResidual(b1, b2).values;
    r_dense += tracialResidual(d1, d2).values;
  }
  for (int k = 1; k < draws; ++k) {
    OperatorSnapshot p1(banded(), decomp, metric), p2(banded(), decomp, metric);
    OperatorSnapshot q1(dense(), decomp, metric), q2(dense(), decomp, metric);
    r_banded += tracialResidual(p1, p2).values;
    r_dense += tracialResidual(q1, q2).values;
  }
  r_banded /= double(draws);
  r_dense /= double(draws);

  std::vector<Index> checkpoints{32, 64, 128, 256};
  double prev = std::numeric_limits<double>::infinity();
  bool decreasing = true;
  for (Index n : checkpoints) {
    double r = r_banded(n - 1);
    res.metrics["banded_r" + std::to_string(n)] = r;
    ck.note("mean banded residual over " + std::to_string(draws) + " draws at block " +
            std::to_string(n) + ": " + fmt(r));
    if (r >= prev) decreasing = false;
    prev = r;
  }
  ck.check(decreasing, "banded commutator residual decreases over blocks 32,64,128,256");
  ck.check(r_banded(255) <= 0.05, "banded residual " + fmt(r_banded(255)) +
                                      " at block 256 at or under 0.05");
  ck.check(r_dense(255) > 0.05, "dense control residual " + fmt(r_dense(255)) +
                                    " at block 256 exceeds 0.05");
  res.metrics["dense_r256"] = r_dense(255);

  NonExpansiveReport banded_tails = nonexpansiveReport(b1, {2.0, 3.0, 8.0});
  ck.check(banded_tails.rows.back().row_tail == 0.0 &&
               banded_tails.rows.back().col_tail == 0.0,
           "bandwidth-3 matrix has exactly zero tails beyond its band");
  NonExpansiveReport dense_tails = nonexpansiveReport(d1, {8.0});
  ck.check(dense_tails.rows.back().row_tail > 1.0,
           "dense control keeps large tails at radius 8: " +
               fmt(dense_tails.rows.back().row_tail));

  if (!cfg.output_dir.empty())
    writeSequenceCsv(artifact(cfg, res, "banded_residuals.csv"),
                     RealSequence{r_banded, decomp});
  return res;
}

// ---------------------------------------------------------------------------

FrameSnapshot evenLabelBasis(Index depth) {
  // Orthonormal vectors on the even labels of 1..depth, zero elsewhere.
  auto decomp = sharedDecomp(IndexDecomposition::prefixBlocks(depth));
  ComplexMatrix v = ComplexMatrix::Zero(depth / 2, depth);
  for (Index k = 2; k <= depth; k += 2) v(k / 2 - 1, k - 1) = 1.0;
  return FrameSnapshot(std::move(v), decomp);
}

ExperimentResult channelNoise(const ExperimentConfig& cfg) {
  ExperimentResult res{cfg.kind, true, {}, {}, {}};
  Checker ck{res};
  FrameSnapshot frame = evenLabelBasis(256);
  ChannelOptions opts;
  opts.trials = cfg.trials > 0 ? cfg.trials : 10000;
  opts.seed = cfg.seed;

  ChannelReport rep = simulateChannel(frame, opts);
  ck.check(rep.frac_within_4se >= 0.95,
           "empirical block variance within 4 standard errors of the prediction in " +
               fmt(100.0 * rep.frac_within_4se) + "% of blocks");

  double worst_analytic = 0.0;
  for (const auto& row : rep.rows) {
    double expected = std::floor(double(row.block) / 2.0) / double(row.block);
    worst_analytic = std::max(worst_analytic, std::abs(row.analytic - expected));
  }
  ck.check(worst_analytic <= 1e-12, "predicted per-block variance equals the running " +
                                        std::string("average of the diagonal, deviation ") +
                                        fmt(worst_analytic));

  ChannelReport again = simulateChannel(frame, opts);
  bool identical = again.rows.size() == rep.rows.size();
  for (size_t i = 0; identical && i < rep.rows.size(); ++i)
    identical = rep.rows[i].empirical == again.rows[i].empirical &&
                rep.rows[i].std_error == again.rows[i].std_error;
  ck.check(identical, "a second run with the same seed reproduces every byte");

  NoiseSelfTest nt = noiseSelfTest(cfg.seed, 200000);
  double lag1 = std::hypot(nt.lag1_re, nt.lag1_im);
  ck.check(std::abs(nt.mean_re) <= 0.02 && std::abs(nt.mean_im) <= 0.02 &&
               std::abs(nt.variance - 1.0) <= 0.02 && lag1 <= 0.02,
           "noise source moments: mean (" + fmt(nt.mean_re) + ", " + fmt(nt.mean_im) +
               "), energy " + fmt(nt.variance) + ", lag-1 " + fmt(lag1));

  res.metrics["frac_within_4se"] = rep.frac_within_4se;
  res.metrics["trials"] = static_cast<double>(rep.trials);
  res.metrics["bit_reproducible"] = identical ? 1.0 : 0.0;

  if (!cfg.output_dir.empty())
    writeChannelCsv(artifact(cfg, res, "channel_blocks.csv"), rep);
  return res;
}

// ---------------------------------------------------------------------------

ExperimentResult excessProbe_(const ExperimentConfig& cfg) {
  ExperimentResult res{cfg.kind, true, {}, {}, {}};
  Checker ck{res};
  const Index dim = 32;
  std::vector<Index> sizes(dim);
  for (Index n = 1; n <= dim; ++n) sizes[static_cast<size_t>(n - 1)] = 2 * n;
  auto decomp = sharedDecomp(IndexDecomposition::fromBlockSizes(sizes));
  ComplexMatrix v = ComplexMatrix::Zero(dim, 2 * dim);
  for (Index p = 0; p < 2 * dim; ++p) v(p / 2, p) = 1.0;
  FrameSnapshot snap(std::move(v), decomp);

  ExcessReport rep = excessProbe(snap, 0.6, 0.1);
  ck.check(!rep.trivial, "profile sits at 1/2, so the probe has room to work");
  ck.check(static_cast<Index>(rep.removed_positions.size()) == dim,
           "probe removes exactly half the labels: " +
               std::to_string(rep.removed_positions.size()) + " of " + std::to_string(2 * dim));
  double target = rep.original_lower * (1.0 - 0.1 - 0.6);
  ck.check(rep.remaining_lower + 1e-9 >= target,
           "remaining lower bound " + fmt(rep.remaining_lower) + " at least " + fmt(target) +
               " = A(1-eps-alpha)");
  ck.check(rep.claim_satisfied, "probe reports the localized-excess bound satisfied");

  MeasureProfile p = frameMeasure(snap);
  RedundancyInterval red = redundancy(p);
  ck.check(!red.unbounded && std::abs(red.low - 2.0) <= 1e-9 && std::abs(red.high - 2.0) <= 1e-9,
           "redundancy interval [" + fmt(red.low) + ", " + fmt(red.high) + "] equals 2");

  res.metrics["removed"] = static_cast<double>(rep.removed_positions.size());
  res.metrics["original_lower"] = rep.original_lower;
  res.metrics["remaining_lower"] = rep.remaining_lower;
  return res;
}

// ---------------------------------------------------------------------------

ExperimentResult densityBudget(const ExperimentConfig& cfg) {
  ExperimentResult res{cfg.kind, true, {}, {}, {}};
  Checker ck{res};
  BoxSpec box(0.5, 0.5);

  struct Config {
    Index N, a, b;
    const char* tag;
  };
  // Budget = sum over systems of N/count = sum of a*b/N per system.
  for (const Config& c : {Config{16, 4, 2, "half+half"}, Config{16, 2, 2, "quarter+quarter"},
                          Config{16, 4, 4, "one+one"}}) {
    GaborLattice lat = regularLattice(c.N, c.a, c.b);
    std::vector<ComplexVector> windows{chirpWindow(c.N, 0.7, 0.4),
                                       chirpWindow(c.N, 1.9, 2.6)};
    std::vector<GaborLattice> lats{lat, lat};
    std::vector<Index> n_list = evenSides(c.N, c.N / 4);
    SuperframeDensityReport rep =
        superframeDensityCondition(windows, lats, box, n_list);
    std::string tag(c.tag);
    ck.note(tag + ": budget " + fmt(rep.measure_sum_high) + ", lattice determinant sum " +
            fmt(rep.det_analogue_sum) + ", superframe " +
            (rep.superframe.is_superframe ? "yes" : "no"));
    if (rep.superframe.is_superframe)
      ck.check(rep.necessary_condition,
               tag + ": superframe holds, so the measure budget stays at or under 1 (" +
                   fmt(rep.measure_sum_high) + ")");
    if (tag == "half+half") {
      ck.check(rep.superframe.is_superframe,
               tag + ": critically budgeted pair still stacks to a frame (lower " +
                   fmt(rep.superframe.combined_lower) + ")");
      ck.check(std::abs(rep.measure_sum_high - 1.0) <= 1e-9,
               tag + ": measure budget exactly 1");
      res.metrics["sharp_budget"] = rep.measure_sum_high;
      res.metrics["sharp_superframe"] = rep.superframe.is_superframe ? 1.0 : 0.0;
    }
    if (tag == "one+one")
      ck.check(!rep.superframe.is_superframe,
               tag + ": budget 2 cannot stack to a frame; superframe check fails");
  }

  // Constructed violation: two critically sampled systems, budget 3/2.
  {
    const Index N = 12;
    GaborLattice lat = regularLattice(N, 3, 3);
    std::vector<ComplexVector> windows{chirpWindow(N, 0.7, 0.4),
                                       chirpWindow(N, 1.9, 2.6)};
    std::vector<GaborLattice> lats{lat, lat};
    std::vector<Index> n_list = evenSides(N, 3);
    SuperframeDensityReport rep = superframeDensityCondition(windows, lats, box, n_list);
    ck.check(std::abs(rep.measure_sum_high - 1.5) <= 1e-9,
             "violation: measure budget " + fmt(rep.measure_sum_high) + " equals 3/2");
    ck.check(!rep.superframe.is_superframe,
             "violation: budget 3/2 makes the superframe check fail (spans " +
                 std::to_string(rep.superframe.span1) + "+" +
                 std::to_string(rep.superframe.span2) + " vs combined " +
                 std::to_string(rep.superframe.combined_span) + ")");
    res.metrics["violation_budget"] = rep.measure_sum_high;
    res.metrics["violation_superframe"] = rep.superframe.is_superframe ? 1.0 : 0.0;
  }
  return res;
}

// ---------------------------------------------------------------------------

using Runner = ExperimentResult (*)(const ExperimentConfig&);

const std::vector<std::pair<std::string, Runner>>& registry() {
  static const std::vector<std::pair<std::string, Runner>> reg = {
      {"counterexample-pair", counterexamplePair},
      {"riesz-image", rieszImage},
      {"orthogonal-additivity", orthogonalAdditivity},
      {"two-cluster", twoCluster},
      {"gabor-regular", gaborRegular},
      {"gabor-jittered", gaborJittered},
      {"gabor-superframe", gaborSuperframe},
      {"synthesis-exactness", synthesisExactness},
      {"lattice-laws", latticeLaws},
      {"band-trace", bandTrace},
      {"channel-noise", channelNoise},
      {"excess-probe", excessProbe_},
      {"density-budget", densityBudget},
  };
  return reg;
}

void writeSummary(const ExperimentConfig& cfg, ExperimentResult& res) {
  if (cfg.output_dir.empty()) return;
  fs::create_directories(cfg.output_dir);
  nlohmann::json j;
  j["kind"] = res.kind;
  j["pass"] = res.pass;
  j["seed"] = cfg.seed;
  j["lines"] = res.lines;
  j["metrics"] = res.metrics;
  j["artifacts"] = res.artifacts;
  std::string path = (fs::path(cfg.output_dir) / "summary.json").string();
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << j.dump(1) << '\n';
  res.artifacts.push_back(path);
}

}  // namespace

const std::vector<std::string>& experimentKinds() {
  static const std::vector<std::string> kinds = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : registry()) out.push_back(name);
    return out;
  }();
  return kinds;
}

ExperimentResult runExperiment(const ExperimentConfig& config) {
  for (const auto& [name, fn] : registry()) {
    if (name == config.kind) {
      ExperimentResult res = fn(config);
      writeSummary(config, res);
      return res;
    }
  }
  throw InputError("unknown experiment kind: " + config.kind);
}

}  // namespace framekit
