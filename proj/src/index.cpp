#include "framekit/index.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace framekit {

std::string to_string(const Label& l) {
  std::ostringstream os;
  if (l.arity == 1) {
    os << l.a;
  } else {
    os << "(" << l.a << "," << l.b << ")";
  }
  return os.str();
}

IndexDecomposition::IndexDecomposition(std::vector<Label> labels,
                                       std::vector<Index> cumulative_sizes)
    : labels_(std::move(labels)), sizes_(std::move(cumulative_sizes)) {
  if (sizes_.empty()) throw std::invalid_argument("decomposition needs at least one block");
  Index prev = 0;
  for (Index s : sizes_) {
    if (s < 1) throw std::invalid_argument("block sizes must be strictly positive");
    if (s < prev) throw std::invalid_argument("block sizes must be nondecreasing");
    prev = s;
  }
  if (static_cast<Index>(labels_.size()) < sizes_.back())
    throw std::invalid_argument("fewer labels than the last block size");
  pos_.reserve(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    auto [it, fresh] = pos_.emplace(labels_[i], static_cast<Index>(i));
    (void)it;
    if (!fresh) throw std::invalid_argument("duplicate label " + to_string(labels_[i]));
  }
}

IndexDecomposition IndexDecomposition::prefixBlocks(Index count) {
  if (count < 1) throw std::invalid_argument("prefixBlocks needs count >= 1");
  std::vector<Label> labels;
  std::vector<Index> sizes;
  labels.reserve(static_cast<std::size_t>(count));
  sizes.reserve(static_cast<std::size_t>(count));
  for (Index i = 1; i <= count; ++i) {
    labels.emplace_back(i);
    sizes.push_back(i);
  }
  return IndexDecomposition(std::move(labels), std::move(sizes));
}

IndexDecomposition IndexDecomposition::fromBlockSizes(std::vector<Index> cumulative_sizes) {
  if (cumulative_sizes.empty()) throw std::invalid_argument("empty block size list");
  Index total = cumulative_sizes.back();
  std::vector<Label> labels;
  labels.reserve(static_cast<std::size_t>(total));
  for (Index i = 1; i <= total; ++i) labels.emplace_back(i);
  return IndexDecomposition(std::move(labels), std::move(cumulative_sizes));
}

IndexDecomposition IndexDecomposition::integerBoxes(Index n_max, Index collar) {
  if (n_max < 1) throw std::invalid_argument("integerBoxes needs n_max >= 1");
  std::vector<Label> labels;
  std::vector<Index> sizes;
  labels.emplace_back(Index{0});
  for (Index n = 1; n <= n_max + collar; ++n) {
    labels.emplace_back(-n);
    labels.emplace_back(n);
    if (n <= n_max) sizes.push_back(2 * n + 1);
  }
  return IndexDecomposition(std::move(labels), std::move(sizes));
}

IndexDecomposition IndexDecomposition::planeBoxes(Index n_max, Index collar) {
  if (n_max < 1) throw std::invalid_argument("planeBoxes needs n_max >= 1");
  std::vector<Label> labels;
  std::vector<Index> sizes;
  labels.emplace_back(Index{0}, Index{0});
  for (Index n = 1; n <= n_max + collar; ++n) {
    // shell of the sup-norm box [-n, n]^2
    for (Index x = -n; x <= n; ++x) {
      for (Index y = -n; y <= n; ++y) {
        if (std::max(std::llabs(x), std::llabs(y)) == n) labels.emplace_back(x, y);
      }
    }
    if (n <= n_max) sizes.push_back((2 * n + 1) * (2 * n + 1));
  }
  return IndexDecomposition(std::move(labels), std::move(sizes));
}

Index IndexDecomposition::blockSize(Index n) const {
  if (n < 1 || n > depth()) throw std::out_of_range("block index out of range");
  return sizes_[static_cast<std::size_t>(n - 1)];
}

std::optional<Index> IndexDecomposition::position(const Label& l) const {
  auto it = pos_.find(l);
  if (it == pos_.end()) return std::nullopt;
  return it->second;
}

Index IndexDecomposition::blockOf(Index pos) const {
  if (pos < 0 || pos >= lastBlockSize()) throw std::out_of_range("position outside blocked prefix");
  auto it = std::upper_bound(sizes_.begin(), sizes_.end(), pos);
  return static_cast<Index>(it - sizes_.begin()) + 1;
}

QuasiMetric absMetric() {
  return {"abs", [](const Label& x, const Label& y) {
            return std::abs(static_cast<double>(x.a - y.a));
          }};
}

QuasiMetric sup2dMetric() {
  return {"sup2d", [](const Label& x, const Label& y) {
            return std::max(std::abs(static_cast<double>(x.a - y.a)),
                            std::abs(static_cast<double>(x.b - y.b)));
          }};
}

QuasiMetric torusSupMetric(Index modulus) {
  if (modulus < 1) throw std::invalid_argument("torus metric needs modulus >= 1");
  auto wrap = [modulus](Index d) {
    Index m = ((d % modulus) + modulus) % modulus;
    return static_cast<double>(std::min(m, modulus - m));
  };
  return {"torus" + std::to_string(modulus), [wrap](const Label& x, const Label& y) {
            return std::max(wrap(x.a - y.a), wrap(x.b - y.b));
          }};
}

std::vector<std::string> metricSpotCheck(const IndexDecomposition& decomp,
                                         const QuasiMetric& metric, Index sample_triples,
                                         std::uint64_t seed) {
  std::vector<std::string> issues;
  const auto& labels = decomp.labels();
  if (labels.empty()) return issues;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, labels.size() - 1);
  for (Index t = 0; t < sample_triples; ++t) {
    const Label& x = labels[pick(rng)];
    const Label& y = labels[pick(rng)];
    const Label& z = labels[pick(rng)];
    double dxy = metric(x, y), dyx = metric(y, x), dxx = metric(x, x);
    if (dxx != 0.0) issues.push_back("d(i,i) != 0 at " + to_string(x));
    if (dxy < 0.0) issues.push_back("negative distance at " + to_string(x) + "," + to_string(y));
    if (std::abs(dxy - dyx) > 1e-12 * (1.0 + std::abs(dxy)))
      issues.push_back("asymmetric at " + to_string(x) + "," + to_string(y));
    double dxz = metric(x, z), dzy = metric(z, y);
    if (dxy > dxz + dzy + 1e-9 * (1.0 + dxy))
      issues.push_back("triangle violation at " + to_string(x) + "," + to_string(y) + "," +
                       to_string(z));
  }
  return issues;
}

std::vector<Label> ball(const IndexDecomposition& decomp, const QuasiMetric& metric,
                        const Label& center, double radius) {
  if (!decomp.position(center))
    throw std::invalid_argument("ball center " + to_string(center) + " not materialized");
  if (radius < 0) throw std::invalid_argument("ball radius must be nonnegative");
  std::vector<Label> out;
  for (const Label& l : decomp.labels())
    if (metric(center, l) <= radius) out.push_back(l);
  return out;
}

double boundaryFraction(const IndexDecomposition& decomp, const QuasiMetric& metric, Index n,
                        double radius) {
  Index inside = decomp.blockSize(n);
  Index total = decomp.totalLabels();
  if (inside == total)
    throw std::invalid_argument(
        "collar not witnessed: nothing is materialized beyond block " + std::to_string(n));
  const auto& labels = decomp.labels();
  Index hits = 0;
  for (Index i = 0; i < inside; ++i) {
    for (Index j = inside; j < total; ++j) {
      if (metric(labels[static_cast<std::size_t>(i)], labels[static_cast<std::size_t>(j)]) <=
          radius) {
        ++hits;
        break;
      }
    }
  }
  return static_cast<double>(hits) / static_cast<double>(inside);
}

UniformMetricReport uniformMetricReport(const IndexDecomposition& decomp,
                                        const QuasiMetric& metric,
                                        const std::vector<double>& radii,
                                        const std::vector<Index>& n_list, double tol) {
  UniformMetricReport report;
  std::vector<Index> usable;
  for (Index n : n_list) {
    if (n >= 1 && n <= decomp.depth() && decomp.blockSize(n) < decomp.totalLabels())
      usable.push_back(n);
  }
  if (usable.size() < 2)
    throw std::invalid_argument("uniform metric report needs at least two usable blocks");
  std::sort(usable.begin(), usable.end());

  report.warnings = metricSpotCheck(decomp, metric);
  report.consistent = true;
  for (double r : radii) {
    std::vector<double> fracs;
    for (Index n : usable) {
      double f = boundaryFraction(decomp, metric, n, r);
      report.rows.push_back({n, r, f});
      fracs.push_back(f);
    }
    // Trend over the last third: nonincreasing within slack and visibly
    // heading down (or already below tolerance).
    std::size_t start = fracs.size() - std::max<std::size_t>(2, fracs.size() / 3);
    bool nonincreasing = true;
    for (std::size_t i = start + 1; i < fracs.size(); ++i)
      if (fracs[i] > fracs[i - 1] + 1e-12) nonincreasing = false;
    bool heading_down = fracs.back() <= std::max(tol, 0.9 * fracs[start]);
    bool ok = nonincreasing && heading_down;
    report.radius_verdicts.push_back(ok ? "consistent" : "inconsistent");
    if (!ok) report.consistent = false;
  }
  return report;
}

IndexRemap::IndexRemap(DecompositionPtr source, DecompositionPtr target,
                       std::vector<Index> forward)
    : source_(std::move(source)), target_(std::move(target)), forward_(std::move(forward)) {
  if (!source_ || !target_) throw std::invalid_argument("remap needs both decompositions");
  Index ns = source_->totalLabels(), nt = target_->totalLabels();
  if (static_cast<Index>(forward_.size()) != ns)
    throw std::invalid_argument("remap table size mismatch");
  if (ns != nt) throw std::invalid_argument("remap must be a bijection: label counts differ");
  inverse_.assign(static_cast<std::size_t>(nt), -1);
  for (Index p = 0; p < ns; ++p) {
    Index q = forward_[static_cast<std::size_t>(p)];
    if (q < 0 || q >= nt) throw std::invalid_argument("remap image out of range");
    if (inverse_[static_cast<std::size_t>(q)] != -1)
      throw std::invalid_argument("remap is not injective");
    inverse_[static_cast<std::size_t>(q)] = p;
  }
}

IndexRemap IndexRemap::identity(DecompositionPtr d) {
  std::vector<Index> fwd(static_cast<std::size_t>(d->totalLabels()));
  for (std::size_t i = 0; i < fwd.size(); ++i) fwd[i] = static_cast<Index>(i);
  return IndexRemap(d, d, std::move(fwd));
}

IndexRemap IndexRemap::integerShift(DecompositionPtr source, DecompositionPtr target,
                                    Index shift) {
  return fromLabelMap(std::move(source), std::move(target), [shift](const Label& l) {
    if (l.arity != 1) throw std::invalid_argument("integerShift needs integer labels");
    return Label(l.a + shift);
  });
}

IndexRemap IndexRemap::fromLabelMap(DecompositionPtr source, DecompositionPtr target,
                                    const std::function<Label(const Label&)>& map) {
  std::vector<Index> fwd;
  fwd.reserve(static_cast<std::size_t>(source->totalLabels()));
  for (const Label& l : source->labels()) {
    auto q = target->position(map(l));
    if (!q)
      throw std::invalid_argument("remap image of " + to_string(l) + " is not materialized");
    fwd.push_back(*q);
  }
  return IndexRemap(std::move(source), std::move(target), std::move(fwd));
}

RemapMeasureReport remapMeasureCondition(const IndexRemap& remap,
                                         const std::vector<Index>& n_list, double tol) {
  RemapMeasureReport report;
  const auto& src = remap.source();
  const auto& tgt = remap.target();
  for (Index n : n_list) {
    if (n < 1 || n > src.depth() || n > tgt.depth())
      throw std::invalid_argument("remap measure block out of range");
    Index in = src.blockSize(n);
    Index jn = tgt.blockSize(n);
    Index overlap = 0;
    for (Index p = 0; p < in; ++p)
      if (remap.forwardPosition(p) < jn) ++overlap;
    report.rows.push_back({n, static_cast<double>(overlap) / static_cast<double>(in),
                           static_cast<double>(jn) / static_cast<double>(in)});
  }
  if (report.rows.size() < 2)
    throw std::invalid_argument("remap measure report needs at least two blocks");
  std::size_t start = report.rows.size() - std::max<std::size_t>(2, report.rows.size() / 3);
  bool ok = true;
  for (std::size_t i = start; i < report.rows.size(); ++i) {
    if (std::abs(report.rows[i].image_overlap - 1.0) > tol) ok = false;
    if (std::abs(report.rows[i].size_ratio - 1.0) > tol) ok = false;
  }
  report.condition_met = ok;
  return report;
}

RemapLipschitzReport remapLipschitzCondition(const IndexRemap& remap,
                                             const QuasiMetric& source_metric,
                                             const QuasiMetric& target_metric,
                                             const std::function<double(double)>& candidate_r,
                                             Index sample_pairs, std::uint64_t seed) {
  RemapLipschitzReport report;
  const auto& tgt = remap.target();
  const auto& src = remap.source();
  Index total = tgt.totalLabels();
  if (total < 2) throw std::invalid_argument("lipschitz check needs at least two labels");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Index> pick(0, total - 1);
  std::vector<std::pair<double, double>> samples;  // (e(j1,j2), d(a^-1 j1, a^-1 j2))
  samples.reserve(static_cast<std::size_t>(sample_pairs));
  for (Index s = 0; s < sample_pairs; ++s) {
    Index q1 = pick(rng), q2 = pick(rng);
    if (q1 == q2) continue;
    double e = target_metric(tgt.label(q1), tgt.label(q2));
    double d = source_metric(src.label(remap.inversePosition(q1)),
                             src.label(remap.inversePosition(q2)));
    samples.emplace_back(e, d);
    if (!(d < candidate_r(e))) ++report.violations;
  }
  report.candidate_ok = report.violations == 0;
  std::sort(samples.begin(), samples.end());
  double running_max = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    running_max = std::max(running_max, samples[i].second);
    bool last_at_this_e = (i + 1 == samples.size()) || (samples[i + 1].first > samples[i].first);
    if (last_at_this_e) report.rows.push_back({samples[i].first, running_max});
  }
  return report;
}

}  // namespace framekit
