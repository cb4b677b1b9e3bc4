#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "framekit/frame.hpp"
#include "framekit/index.hpp"
#include "framekit/measure.hpp"
#include "framekit/operators.hpp"
#include "framekit/types.hpp"

namespace framekit {

// Time-frequency point set. Integer points with `modulus` set give the exact
// finite model; real points without a modulus serve density studies only.
// Repetitions are allowed and counted everywhere.
struct GaborLattice {
  std::vector<std::pair<double, double>> points;  // (t, omega)
  std::optional<Index> modulus;
  std::vector<double> phases;  // radians; empty or one per point
};

GaborLattice regularLattice(Index N, Index a, Index b);  // aZ x bZ reduced mod N

// Integer jitter uniform on [-amplitude, amplitude] per coordinate,
// deterministic in the seed. Finite-model coordinates are reduced mod N.
GaborLattice jitterLattice(const GaborLattice& base, Index amplitude, std::uint64_t seed);

// Points of A Z^2 whose image lands in [-extent, extent]^2 (real model).
GaborLattice latticeFromMatrix(const RealMatrix& generator, double extent);

// Nested skewed boxes: side-n membership is |skew^{-1} wrap(p - center)|_inf
// <= n/2, boundary inclusive. Half-integer centers avoid boundary ties on
// integer lattices.
struct BoxSpec {
  RealVector center;  // 2 entries
  RealMatrix skew;    // 2x2, invertible

  BoxSpec();
  BoxSpec(double cx, double cy);
  BoxSpec(double cx, double cy, RealMatrix skew_matrix);
};

// Count of lattice points inside each box side, with multiplicity. The wrap
// is torus-aware when the lattice has a modulus.
std::vector<Index> boxCounts(const GaborLattice& lat, const BoxSpec& box,
                             const std::vector<Index>& n_list);

ComplexVector deltaWindow(Index N);
ComplexVector gaussianWindow(Index N, double sigma);  // wrap-distance gaussian, unit norm

// One vector e^{i phi} e^{2 pi i w x / N} g((x - t) mod N) per lattice point,
// ordered by box entry side with (t, w) tie-break; points outside the
// largest box are kept as collar labels. Repeated points get distinguishable
// labels by offsetting t by multiples of N per extra occurrence.
FrameSnapshot gaborSystem(const ComplexVector& window, const GaborLattice& lat,
                          const BoxSpec& box, const std::vector<Index>& n_list);

enum class VolumeNormalization { Lebesgue, FiniteModel };

struct DensityRow {
  Index n = 0;
  Index count = 0;
  double volume = 0.0;
  double ratio = 0.0;
};

struct DensityEstimate {
  std::vector<DensityRow> rows;
  MeasureProfile profile;  // of the ratio sequence
  double beurling_upper = 0.0;
  double beurling_lower = 0.0;
  VolumeNormalization normalization = VolumeNormalization::Lebesgue;
  std::vector<std::string> notes;
};

// scan_halfwidth > 0 turns on the Beurling center scan: per side n, centers
// move on a grid of step n/4 within the halfwidth window; the sup/inf ratios
// over the profile's tail window land in beurling_upper/lower. Lebesgue
// volume is det(skew) n^2; the finite model divides by the modulus so that
// the full box has volume N and measure times density can reach 1.
DensityEstimate densityEstimate(const GaborLattice& lat, const BoxSpec& box,
                                const std::vector<Index>& n_list, VolumeNormalization norm,
                                double scan_halfwidth = 0.0);

struct MeasureDensityReport {
  MeasureProfile measure;
  DensityEstimate density;
  double residual = 0.0;  // worst deviation of the measure envelope from 1/density
  bool pass = false;
  double trace_product = 0.0;  // last-block average times last ratio; 1 when the box covers all
  std::vector<std::string> notes;
};

MeasureDensityReport measureVsDensity(const FrameSnapshot& frame, const DensityEstimate& est,
                                      double tol, const ProfileOptions& popts = {},
                                      const AnalyzeOptions& aopts = {});

// Direct sum of several finite-model systems over structurally identical
// lattices: superframe verdict, per-system measures, and the density budget
// (the sum of measure envelopes must stay at or below 1 for a superframe).
struct SuperframeDensityReport {
  SuperframeReport superframe;
  std::vector<MeasureProfile> measures;
  double measure_sum_low = 0.0;
  double measure_sum_high = 0.0;
  double det_analogue_sum = 0.0;  // sum of N/count per system; a*b/N for regular lattices
  bool necessary_condition = false;
  std::vector<std::string> notes;
};

SuperframeDensityReport superframeDensityCondition(const std::vector<ComplexVector>& windows,
                                                   const std::vector<GaborLattice>& lattices,
                                                   const BoxSpec& box,
                                                   const std::vector<Index>& n_list,
                                                   double tol = 1e-6);

}  // namespace framekit
