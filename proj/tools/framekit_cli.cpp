// framekit: command-line surface over the library. Exit codes: 0 all checks
// pass, 1 a check failed, 2 the inputs or the invocation were unusable.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Core>
#include <json.hpp>

#include "framekit/channel.hpp"
#include "framekit/frame.hpp"
#include "framekit/gabor.hpp"
#include "framekit/index.hpp"
#include "framekit/io.hpp"
#include "framekit/measure.hpp"
#include "framekit/operators.hpp"
#include "framekit/sequence.hpp"
#include "framekit/suite.hpp"
#include "framekit/synthesis.hpp"

namespace fk = framekit;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitInputError = 2;

std::string g17(double v) { return fk::formatG17(v); }

void printProfile(const fk::MeasureProfile& p) {
  std::cout << "liminf " << g17(p.liminf) << "\n";
  std::cout << "limsup " << g17(p.limsup) << "\n";
  std::cout << "converged " << (p.converged ? "yes" : "no") << "\n";
  std::cout << "window blocks " << p.window_first << ".." << p.window_last << "\n";
  for (const auto& [center, weight] : p.clusters)
    std::cout << "cluster center " << g17(center) << " weight " << g17(weight) << "\n";
}

fk::QuasiMetric metricByName(const std::string& name) {
  if (name == "abs") return fk::absMetric();
  if (name == "sup2d") return fk::sup2dMetric();
  if (name.rfind("torus:", 0) == 0) {
    fk::Index n = std::stoll(name.substr(6));
    if (n < 1) throw fk::InputError("torus metric needs a positive modulus");
    return fk::torusSupMetric(n);
  }
  throw fk::InputError("unknown metric '" + name + "' (abs, sup2d, torus:N)");
}

// Window registry: "delta", "gaussian:<sigma>", "file:<path>" where the file
// is a JSON array of values, each a number or an [re, im] pair.
fk::ComplexVector windowBySpec(const std::string& spec, fk::Index n) {
  if (spec == "delta") return fk::deltaWindow(n);
  if (spec.rfind("gaussian:", 0) == 0) {
    double sigma = std::stod(spec.substr(9));
    return fk::gaussianWindow(n, sigma);
  }
  if (spec.rfind("file:", 0) == 0) {
    std::string path = spec.substr(5);
    std::ifstream in(path);
    if (!in) throw fk::InputError("cannot open window file " + path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw fk::InputError(path + ": " + e.what());
    }
    if (!j.is_array() || static_cast<fk::Index>(j.size()) != n)
      throw fk::InputError(path + ": expected an array of " + std::to_string(n) + " values");
    fk::ComplexVector w(n);
    for (fk::Index i = 0; i < n; ++i) {
      const auto& cell = j[static_cast<size_t>(i)];
      if (cell.is_number())
        w(i) = fk::Complex(cell.get<double>(), 0.0);
      else if (cell.is_array() && cell.size() == 2)
        w(i) = fk::Complex(cell[0].get<double>(), cell[1].get<double>());
      else
        throw fk::InputError(path + ": entry " + std::to_string(i) +
                             " is neither a number nor an [re, im] pair");
    }
    double norm = w.norm();
    if (norm == 0.0) throw fk::InputError(path + ": window is identically zero");
    return w / norm;
  }
  throw fk::InputError("unknown window '" + spec + "' (delta, gaussian:sigma, file:path)");
}

// Lattice argument: a JSON file path, or the shortcuts "regular:a,b" and
// "jitter:a,b,amplitude[,seed]" on the finite model of the given modulus.
fk::GaborLattice latticeBySpec(const std::string& spec, fk::Index n) {
  auto split = [](const std::string& s) {
    std::vector<long long> out;
    size_t pos = 0;
    while (pos <= s.size()) {
      size_t comma = s.find(',', pos);
      if (comma == std::string::npos) comma = s.size();
      out.push_back(std::stoll(s.substr(pos, comma - pos)));
      pos = comma + 1;
    }
    return out;
  };
  if (spec.rfind("regular:", 0) == 0) {
    auto v = split(spec.substr(8));
    if (v.size() != 2) throw fk::InputError("regular lattice shortcut needs a,b");
    return fk::regularLattice(n, v[0], v[1]);
  }
  if (spec.rfind("jitter:", 0) == 0) {
    auto v = split(spec.substr(7));
    if (v.size() != 3 && v.size() != 4)
      throw fk::InputError("jitter lattice shortcut needs a,b,amplitude[,seed]");
    std::uint64_t seed = v.size() == 4 ? static_cast<std::uint64_t>(v[3]) : 42;
    return fk::jitterLattice(fk::regularLattice(n, v[0], v[1]), v[2], seed);
  }
  return fk::readLatticeJson(spec);
}

std::vector<fk::Index> defaultSides(fk::Index n) {
  return {n / 4, n / 2, 3 * n / 4, n};
}

fk::BoxSpec boxFromOption(const std::vector<double>& v) {
  if (v.empty()) return fk::BoxSpec(0.5, 0.5);
  if (v.size() == 2) return fk::BoxSpec(v[0], v[1]);
  if (v.size() == 6) {
    fk::RealMatrix skew(2, 2);
    skew << v[2], v[3], v[4], v[5];
    return fk::BoxSpec(v[0], v[1], skew);
  }
  throw fk::InputError("--box takes cx,cy or cx,cy,m11,m12,m21,m22");
}

int cmdSeqCheck(const std::string& input, double tol) {
  fk::RealSequence x = fk::readSequenceCsv(input);
  bool ok = fk::isFrameCompatible(x, tol);
  if (ok) {
    std::cout << "compatible yes\n";
  } else {
    std::cout << "compatible no\n";
    std::cout << "issue " << fk::frameCompatibilityIssue(x, tol) << "\n";
  }
  fk::XrCertificate cert = fk::xrMembership(x);
  if (cert.member)
    std::cout << "signed-cone member, certificate " << g17(cert.c) << "\n";
  else
    std::cout << "signed-cone issue " << cert.issue << "\n";
  return ok ? kExitPass : kExitCheckFailed;
}

int cmdSeqCompare(const std::string& left, const std::string& right,
                  const fk::CompareOptions& opts) {
  fk::RealSequence x = fk::readSequenceCsv(left);
  fk::RealSequence y = fk::readSequenceCsv(right);
  fk::ComparisonVerdict v = fk::compare(x, y, opts);
  std::cout << "verdict " << fk::to_string(v.kind) << "\n";
  std::cout << "normalized gap [" << g17(v.liminf_gap) << ", " << g17(v.limsup_gap)
            << "] from block " << v.window_start << "\n";
  if (!v.note.empty()) std::cout << "note " << v.note << "\n";
  return kExitPass;
}

int cmdSeqDecompose(const std::string& input, const std::string& out_plus,
                    const std::string& out_minus) {
  fk::RealSequence x = fk::readSequenceCsv(input);
  fk::PositiveDecomposition d = fk::decomposePositive(x);
  std::cout << "certificate " << g17(d.certificate_c) << "\n";
  if (!out_plus.empty()) fk::writeSequenceCsv(out_plus, d.x_plus);
  if (!out_minus.empty()) fk::writeSequenceCsv(out_minus, d.x_minus);
  return kExitPass;
}

int cmdSeqLattice(const std::string& left, const std::string& right,
                  const std::string& out_wedge, const std::string& out_vee) {
  fk::RealSequence x = fk::readSequenceCsv(left);
  fk::RealSequence y = fk::readSequenceCsv(right);
  fk::RealSequence w = fk::wedge(x, y);
  fk::RealSequence v = fk::vee(x, y);
  std::cout << "wedge compatible " << (fk::isFrameCompatible(w) ? "yes" : "no") << "\n";
  std::cout << "vee compatible " << (fk::isFrameCompatible(v) ? "yes" : "no") << "\n";
  if (!out_wedge.empty()) fk::writeSequenceCsv(out_wedge, w);
  if (!out_vee.empty()) fk::writeSequenceCsv(out_vee, v);
  return kExitPass;
}

int cmdFrameSynth(const std::string& seq_path, const std::string& output) {
  fk::RealSequence x = fk::readSequenceCsv(seq_path);
  if (!fk::isFrameCompatible(x))
    throw fk::InputError(seq_path + ": not frame compatible: " +
                         fk::frameCompatibilityIssue(x));
  fk::PerpNormalFrame f = fk::synthPerpNormal(x);
  for (const auto& w : f.warnings) std::cout << "warning " << w << "\n";
  std::cout << "occupied " << f.support.size() << " of " << x.decomp->lastBlockSize()
            << " labels, ambient dimension " << f.snapshot.ambientDim() << "\n";
  fk::writeFrameJson(output, f.snapshot);
  return kExitPass;
}

int cmdFrameMeasure(const std::string& input, fk::Index window, double cluster_eps,
                    const std::string& profile_out) {
  fk::FrameSnapshot snap = fk::readFrameJson(input);
  fk::ProfileOptions popts;
  popts.window = window;
  popts.cluster_eps = cluster_eps;
  fk::MeasureProfile p = fk::frameMeasure(snap, popts);
  printProfile(p);
  if (!profile_out.empty()) fk::writeProfileJson(profile_out, p);
  return kExitPass;
}

int cmdFrameCompare(const std::string& left, const std::string& right,
                    const fk::CompareOptions& copts) {
  fk::FrameSnapshot f1 = fk::readFrameJson(left);
  fk::FrameSnapshot f2 = fk::readFrameJson(right);
  fk::ComparisonVerdict v = fk::framesCompare(f1, f2, copts);
  std::cout << "verdict " << fk::to_string(v.kind) << "\n";
  std::cout << "normalized gap [" << g17(v.liminf_gap) << ", " << g17(v.limsup_gap)
            << "] from block " << v.window_start << "\n";
  if (!v.note.empty()) std::cout << "note " << v.note << "\n";
  return kExitPass;
}

int cmdFrameExcess(const std::string& input, double alpha, double epsilon, double tol) {
  fk::FrameSnapshot snap = fk::readFrameJson(input);
  fk::ExcessReport rep = fk::excessProbe(snap, alpha, epsilon, tol);
  std::cout << "removed " << rep.removed_positions.size() << " labels\n";
  std::cout << "original bounds [" << g17(rep.original_lower) << ", "
            << g17(rep.original_upper) << "]\n";
  std::cout << "remaining bounds [" << g17(rep.remaining_lower) << ", "
            << g17(rep.remaining_upper) << "]\n";
  std::cout << "required lower " << g17(rep.original_lower * (1 - epsilon - alpha)) << "\n";
  for (const auto& n : rep.notes) std::cout << "note " << n << "\n";
  if (rep.trivial) {
    std::cout << "trivial yes (profile at 1, nothing removable)\n";
    return kExitPass;
  }
  std::cout << "claim satisfied " << (rep.claim_satisfied ? "yes" : "no") << "\n";
  return rep.claim_satisfied ? kExitPass : kExitCheckFailed;
}

int cmdFrameRedundancy(const std::string& input) {
  fk::FrameSnapshot snap = fk::readFrameJson(input);
  fk::MeasureProfile p = fk::frameMeasure(snap);
  fk::RedundancyInterval r = fk::redundancy(p);
  if (r.unbounded)
    std::cout << "redundancy [" << g17(r.low) << ", unbounded)\n";
  else
    std::cout << "redundancy [" << g17(r.low) << ", " << g17(r.high) << "]\n";
  return kExitPass;
}

int cmdFrameGram(const std::string& input, const std::string& output) {
  fk::FrameSnapshot snap = fk::readFrameJson(input);
  fk::ComplexMatrix gram = snap.vectors.adjoint() * snap.vectors;
  fk::writeMatrixJson(output, fk::OperatorSnapshot(std::move(gram), snap.decomp));
  std::cout << "wrote " << output << "\n";
  return kExitPass;
}

int cmdFrameValidate(const std::string& input) {
  fk::ValidationReport rep = fk::validateFrameFile(input);
  if (rep.ok) {
    std::cout << "ok\n";
    return kExitPass;
  }
  for (const auto& e : rep.errors) std::cout << "error " << e << "\n";
  return kExitInputError;
}

int cmdOpBmap(const std::string& input, const std::string& out_real,
              const std::string& out_imag) {
  fk::OperatorSnapshot op = fk::readMatrixJson(input);
  fk::BopResult b = fk::bOp(op);
  std::cout << "operator norm " << g17(b.op_norm) << "\n";
  auto certLine = [](const char* part, const fk::XrCertificate& c) {
    if (c.member)
      std::cout << part << " certificate " << g17(c.c) << "\n";
    else
      std::cout << part << " not in the signed cone: " << c.issue << "\n";
  };
  certLine("real", b.real_cert);
  certLine("imag", b.imag_cert);
  if (!out_real.empty()) fk::writeSequenceCsv(out_real, b.real_part);
  if (!out_imag.empty()) fk::writeSequenceCsv(out_imag, b.imag_part);
  return kExitPass;
}

int cmdOpTails(const std::string& input, const std::string& metric_name,
               std::vector<double> radii, fk::Index interior_block) {
  fk::OperatorSnapshot op = fk::readMatrixJson(input);
  op.metric = metricByName(metric_name);
  fk::NonExpansiveReport rep = fk::nonexpansiveReport(op, std::move(radii), interior_block);
  for (const auto& row : rep.rows)
    std::cout << "radius " << g17(row.radius) << " row tail " << g17(row.row_tail)
              << " col tail " << g17(row.col_tail) << " centers " << row.centers_used
              << " excluded " << row.centers_excluded << "\n";
  for (const auto& n : rep.notes) std::cout << "note " << n << "\n";
  return kExitPass;
}

int cmdOpTracial(const std::string& left, const std::string& right,
                 std::optional<double> threshold, const std::string& out_csv) {
  fk::OperatorSnapshot t1 = fk::readMatrixJson(left);
  fk::OperatorSnapshot t2 = fk::readMatrixJson(right);
  fk::RealSequence r = fk::tracialResidual(t1, t2);
  double last = r.values(r.depth() - 1);
  std::cout << "blocks " << r.depth() << "\n";
  std::cout << "final residual " << g17(last) << "\n";
  if (!out_csv.empty()) fk::writeSequenceCsv(out_csv, r);
  if (threshold && last > *threshold) {
    std::cout << "exceeds threshold " << g17(*threshold) << "\n";
    return kExitCheckFailed;
  }
  return kExitPass;
}

int cmdSuperframeCheck(const std::string& left, const std::string& right, double tol) {
  fk::FrameSnapshot f1 = fk::readFrameJson(left);
  fk::FrameSnapshot f2 = fk::readFrameJson(right);
  fk::SuperframeReport rep = fk::superframeCheck(f1, f2, tol);
  std::cout << "superframe " << (rep.is_superframe ? "yes" : "no") << "\n";
  std::cout << "spans " << rep.span1 << " + " << rep.span2 << " combined "
            << rep.combined_span << "\n";
  std::cout << "combined bounds [" << g17(rep.combined_lower) << ", "
            << g17(rep.combined_upper) << "]\n";
  std::cout << "projection product norm " << g17(rep.p1p2_norm) << "\n";
  for (const auto& w : rep.warnings) std::cout << "warning " << w << "\n";
  return rep.is_superframe ? kExitPass : kExitCheckFailed;
}

int cmdSuperframeAdditivity(const std::string& left, const std::string& right,
                            double stab_tol) {
  fk::FrameSnapshot f1 = fk::readFrameJson(left);
  fk::FrameSnapshot f2 = fk::readFrameJson(right);
  fk::AdditivityReport rep = fk::supersetAdditivityReport(f1, f2, stab_tol);
  std::cout << "superframe " << (rep.superframe.is_superframe ? "yes" : "no") << "\n";
  std::cout << "stable blocks " << rep.stable_blocks << " of " << rep.residuals.size()
            << "\n";
  std::cout << "stable residual sup " << g17(rep.stable_residual_sup) << "\n";
  std::cout << "sum profile [" << g17(rep.profile_sum.liminf) << ", "
            << g17(rep.profile_sum.limsup) << "]\n";
  std::cout << "direct sum profile [" << g17(rep.profile_direct_sum.liminf) << ", "
            << g17(rep.profile_direct_sum.limsup) << "]\n";
  for (const auto& n : rep.notes) std::cout << "note " << n << "\n";
  return kExitPass;
}

struct GaborArgs {
  fk::Index N = 16;
  std::string window = "gaussian:2";
  std::string lattice = "regular:2,2";
  std::vector<double> box;
  std::vector<fk::Index> sides;
  std::vector<fk::Index> sidesOrDefault() const {
    return sides.empty() ? defaultSides(N) : sides;
  }
};

int cmdGaborBuild(const GaborArgs& a, const std::string& output) {
  fk::GaborLattice lat = latticeBySpec(a.lattice, a.N);
  fk::FrameSnapshot snap = fk::gaborSystem(windowBySpec(a.window, a.N), lat,
                                           boxFromOption(a.box), a.sidesOrDefault());
  std::cout << "labels " << snap.totalLabels() << " ambient " << snap.ambientDim() << "\n";
  fk::writeFrameJson(output, snap);
  return kExitPass;
}

int cmdGaborDensity(const GaborArgs& a, const std::string& normalization, double scan) {
  fk::GaborLattice lat = latticeBySpec(a.lattice, a.N);
  fk::VolumeNormalization norm = normalization == "lebesgue"
                                     ? fk::VolumeNormalization::Lebesgue
                                     : fk::VolumeNormalization::FiniteModel;
  fk::DensityEstimate est =
      fk::densityEstimate(lat, boxFromOption(a.box), a.sidesOrDefault(), norm, scan);
  for (const auto& row : est.rows)
    std::cout << "side " << row.n << " count " << row.count << " volume " << g17(row.volume)
              << " ratio " << g17(row.ratio) << "\n";
  std::cout << "density envelope [" << g17(est.profile.liminf) << ", "
            << g17(est.profile.limsup) << "]\n";
  if (scan > 0)
    std::cout << "scanned envelope [" << g17(est.beurling_lower) << ", "
              << g17(est.beurling_upper) << "]\n";
  for (const auto& n : est.notes) std::cout << "note " << n << "\n";
  return kExitPass;
}

int cmdGaborVerifyMeasure(const GaborArgs& a, double tol) {
  fk::GaborLattice lat = latticeBySpec(a.lattice, a.N);
  std::vector<fk::Index> sides = a.sidesOrDefault();
  fk::BoxSpec box = boxFromOption(a.box);
  fk::FrameSnapshot snap = fk::gaborSystem(windowBySpec(a.window, a.N), lat, box, sides);
  fk::DensityEstimate est =
      fk::densityEstimate(lat, box, sides, fk::VolumeNormalization::FiniteModel);
  fk::MeasureDensityReport rep = fk::measureVsDensity(snap, est, tol);
  std::cout << "measure [" << g17(rep.measure.liminf) << ", " << g17(rep.measure.limsup)
            << "]\n";
  std::cout << "density [" << g17(est.profile.liminf) << ", " << g17(est.profile.limsup)
            << "]\n";
  std::cout << "measure x density " << g17(rep.trace_product) << "\n";
  std::cout << "residual " << g17(rep.residual) << "\n";
  for (const auto& n : rep.notes) std::cout << "note " << n << "\n";
  std::cout << "pass " << (rep.pass ? "yes" : "no") << "\n";
  return rep.pass ? kExitPass : kExitCheckFailed;
}

int cmdGaborSuperframe(const GaborArgs& a, const std::vector<std::string>& windows,
                       const std::vector<std::string>& lattices, double tol) {
  if (windows.empty()) throw fk::InputError("need at least one --window");
  std::vector<fk::ComplexVector> ws;
  for (const auto& spec : windows) ws.push_back(windowBySpec(spec, a.N));
  std::vector<fk::GaborLattice> ls;
  if (lattices.empty())
    ls.assign(ws.size(), latticeBySpec(a.lattice, a.N));
  else
    for (const auto& spec : lattices) ls.push_back(latticeBySpec(spec, a.N));
  if (ls.size() != ws.size())
    throw fk::InputError("need one lattice per window (or none for a shared one)");
  fk::SuperframeDensityReport rep = fk::superframeDensityCondition(
      ws, ls, boxFromOption(a.box), a.sidesOrDefault(), tol);
  std::cout << "superframe " << (rep.superframe.is_superframe ? "yes" : "no") << "\n";
  for (size_t i = 0; i < rep.measures.size(); ++i)
    std::cout << "measure " << i + 1 << " [" << g17(rep.measures[i].liminf) << ", "
              << g17(rep.measures[i].limsup) << "]\n";
  std::cout << "measure sum [" << g17(rep.measure_sum_low) << ", "
            << g17(rep.measure_sum_high) << "]\n";
  std::cout << "lattice determinant sum " << g17(rep.det_analogue_sum) << "\n";
  for (const auto& n : rep.notes) std::cout << "note " << n << "\n";
  if (rep.superframe.is_superframe && !rep.necessary_condition) {
    std::cout << "density budget violated for a superframe\n";
    return kExitCheckFailed;
  }
  return kExitPass;
}

int cmdChannelSim(const std::string& frame_path, fk::Index trials, std::uint64_t seed,
                  const std::string& output) {
  fk::FrameSnapshot snap = fk::readFrameJson(frame_path);
  fk::ChannelOptions opts;
  opts.trials = trials;
  opts.seed = seed;
  fk::ChannelReport rep = fk::simulateChannel(snap, opts);
  if (output.empty()) {
    std::cout << "n,analytic,empirical,stderr,z\n";
    for (const auto& row : rep.rows)
      std::cout << row.block << ',' << g17(row.analytic) << ',' << g17(row.empirical) << ','
                << g17(row.std_error) << ',' << g17(row.z) << "\n";
  } else {
    fk::writeChannelCsv(output, rep);
  }
  std::cout << "blocks within 4 standard errors: " << g17(100.0 * rep.frac_within_4se)
            << "%\n";
  for (const auto& n : rep.notes) std::cout << "note " << n << "\n";
  return rep.frac_within_4se >= 0.95 ? kExitPass : kExitCheckFailed;
}

fk::ExperimentConfig configFromJson(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw fk::InputError("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw fk::InputError(path + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("kind"))
    throw fk::InputError(path + ": expected an object with a \"kind\" field");
  fk::ExperimentConfig cfg;
  cfg.kind = j["kind"].get<std::string>();
  if (j.contains("output_dir")) cfg.output_dir = j["output_dir"].get<std::string>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("trials")) cfg.trials = j["trials"].get<fk::Index>();
  return cfg;
}

int runSuiteConfigs(const std::vector<fk::ExperimentConfig>& configs) {
  bool all_pass = true;
  for (const auto& cfg : configs) {
    fk::ExperimentResult res = fk::runExperiment(cfg);
    std::cout << "[" << res.kind << "] " << (res.pass ? "PASS" : "FAIL") << "\n";
    for (const auto& line : res.lines) std::cout << "  " << line << "\n";
    for (const auto& a : res.artifacts) std::cout << "  wrote " << a << "\n";
    all_pass = all_pass && res.pass;
  }
  return all_pass ? kExitPass : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* threads = std::getenv("FRAMEKIT_THREADS")) {
    int n = std::atoi(threads);
    if (n > 0) Eigen::setNbThreads(n);
  }

  CLI::App app{"frame measure toolkit"};
  app.require_subcommand(1);

  // seq ----------------------------------------------------------------
  auto* seq = app.add_subcommand("seq", "sequence checks and lattice operations");
  seq->require_subcommand(1);

  std::string seq_input, seq_left, seq_right;
  std::string seq_out_plus, seq_out_minus, seq_out_wedge, seq_out_vee;
  double seq_tol = 0.0;
  fk::CompareOptions seq_copts;

  auto* seq_check = seq->add_subcommand("check", "frame compatibility of a CSV sequence");
  seq_check->add_option("--input", seq_input, "sequence CSV")->required();
  seq_check->add_option("--tol", seq_tol, "slack on the membership inequalities");

  auto* seq_compare = seq->add_subcommand("compare", "tail-window order verdict");
  seq_compare->add_option("--left", seq_left)->required();
  seq_compare->add_option("--right", seq_right)->required();
  seq_compare->add_option("--tol", seq_copts.tol);
  seq_compare->add_option("--tail-fraction", seq_copts.tail_fraction);

  auto* seq_decompose = seq->add_subcommand("decompose", "split into positive cone parts");
  seq_decompose->add_option("--input", seq_input)->required();
  seq_decompose->add_option("--out-plus", seq_out_plus);
  seq_decompose->add_option("--out-minus", seq_out_minus);

  auto* seq_lattice = seq->add_subcommand("lattice", "entrywise min and max");
  seq_lattice->add_option("--left", seq_left)->required();
  seq_lattice->add_option("--right", seq_right)->required();
  seq_lattice->add_option("--out-wedge", seq_out_wedge);
  seq_lattice->add_option("--out-vee", seq_out_vee);

  // frame --------------------------------------------------------------
  auto* frame = app.add_subcommand("frame", "synthesis, measure and excess probes");
  frame->require_subcommand(1);

  std::string fr_seq, fr_input, fr_left, fr_right, fr_output, fr_profile_out;
  fk::Index fr_window = 0;
  double fr_cluster_eps = 1e-2, fr_alpha = 0.0, fr_epsilon = 0.0, fr_tol = 1e-9;
  fk::CompareOptions fr_copts;

  auto* fr_synth = frame->add_subcommand("synth", "realize the floor of a sequence");
  fr_synth->add_option("--seq", fr_seq, "sequence CSV")->required();
  fr_synth->add_option("--output", fr_output, "frame JSON")->required();

  auto* fr_measure = frame->add_subcommand("measure", "profile of the running averages");
  fr_measure->add_option("--input", fr_input)->required();
  fr_measure->add_option("--window", fr_window, "trailing blocks (0: half the depth)");
  fr_measure->add_option("--cluster-eps", fr_cluster_eps);
  fr_measure->add_option("--profile", fr_profile_out, "write the profile JSON here");

  auto* fr_compare = frame->add_subcommand("compare", "order verdict between two frames");
  fr_compare->add_option("--left", fr_left)->required();
  fr_compare->add_option("--right", fr_right)->required();
  fr_compare->add_option("--tol", fr_copts.tol);

  auto* fr_excess = frame->add_subcommand("excess", "low-diagonal removal probe");
  fr_excess->add_option("--input", fr_input)->required();
  fr_excess->add_option("--alpha", fr_alpha, "diagonal threshold")->required();
  fr_excess->add_option("--epsilon", fr_epsilon, "density budget")->required();
  fr_excess->add_option("--tol", fr_tol);

  auto* fr_redundancy = frame->add_subcommand("redundancy", "reciprocal profile envelope");
  fr_redundancy->add_option("--input", fr_input)->required();

  auto* fr_gram = frame->add_subcommand("gram", "emit the Gram matrix as matrix JSON");
  fr_gram->add_option("--input", fr_input)->required();
  fr_gram->add_option("--output", fr_output)->required();

  auto* fr_validate = frame->add_subcommand("validate", "schema and invariant sweep");
  fr_validate->add_option("--input", fr_input)->required();

  // op -----------------------------------------------------------------
  auto* op = app.add_subcommand("op", "diagonal maps and decay tables of matrices");
  op->require_subcommand(1);

  std::string op_input, op_left, op_right, op_out_real, op_out_imag, op_out_csv;
  std::string op_metric = "abs";
  std::vector<double> op_radii;
  fk::Index op_interior = 0;
  double op_threshold = -1.0;

  auto* op_bmap = op->add_subcommand("bmap", "diagonal partial sums with certificates");
  op_bmap->add_option("--input", op_input, "matrix JSON")->required();
  op_bmap->add_option("--out-real", op_out_real);
  op_bmap->add_option("--out-imag", op_out_imag);

  auto* op_tails = op->add_subcommand("tails", "off-ball energy decay table");
  op_tails->add_option("--input", op_input)->required();
  op_tails->add_option("--metric", op_metric, "abs, sup2d or torus:N");
  op_tails->add_option("--radii", op_radii, "ball radii")->required()->delimiter(',');
  op_tails->add_option("--interior-block", op_interior, "0 means the deepest block");

  auto* op_tracial = op->add_subcommand("tracial", "commutator trace residual");
  op_tracial->add_option("--left", op_left)->required();
  op_tracial->add_option("--right", op_right)->required();
  op_tracial->add_option("--threshold", op_threshold, "fail when the final residual exceeds this");
  op_tracial->add_option("--output", op_out_csv);

  // superframe -----------------------------------------------------------
  auto* sf = app.add_subcommand("superframe", "direct sum checks on two frames");
  sf->require_subcommand(1);

  std::string sf_left, sf_right;
  double sf_tol = 1e-8, sf_stab_tol = 1e-6;

  auto* sf_check = sf->add_subcommand("check", "is the direct sum a frame for the sum space");
  sf_check->add_option("--left", sf_left)->required();
  sf_check->add_option("--right", sf_right)->required();
  sf_check->add_option("--tol", sf_tol);

  auto* sf_add = sf->add_subcommand("additivity", "per-block additivity defect");
  sf_add->add_option("--left", sf_left)->required();
  sf_add->add_option("--right", sf_right)->required();
  sf_add->add_option("--stab-tol", sf_stab_tol);

  // gabor ----------------------------------------------------------------
  auto* gabor = app.add_subcommand("gabor", "finite time-frequency systems");
  gabor->require_subcommand(1);

  GaborArgs ga;
  std::string ga_output, ga_normalization = "finite";
  std::vector<std::string> ga_windows, ga_lattices;
  double ga_scan = 0.0, ga_tol = 1e-9;

  auto addGaborCommon = [&](CLI::App* cmd, bool with_window) {
    cmd->add_option("--N", ga.N, "modulus of the finite model")->required();
    if (with_window) cmd->add_option("--window", ga.window, "delta, gaussian:sigma, file:path");
    cmd->add_option("--lattice", ga.lattice, "lattice JSON path, regular:a,b or jitter:a,b,amp[,seed]");
    cmd->add_option("--box", ga.box, "cx,cy or cx,cy + 2x2 skew, row major")->delimiter(',');
    cmd->add_option("--sides", ga.sides, "box sides to count")->delimiter(',');
  };

  auto* ga_build = gabor->add_subcommand("build", "materialize a system as frame JSON");
  addGaborCommon(ga_build, true);
  ga_build->add_option("--output", ga_output)->required();

  auto* ga_density = gabor->add_subcommand("density", "lattice counting densities");
  addGaborCommon(ga_density, false);
  ga_density->add_option("--normalization", ga_normalization, "finite or lebesgue");
  ga_density->add_option("--scan", ga_scan, "center scan halfwidth (0: off)");

  auto* ga_verify = gabor->add_subcommand("verify-measure", "measure vs reciprocal density");
  addGaborCommon(ga_verify, true);
  ga_verify->add_option("--tol", ga_tol);

  auto* ga_super = gabor->add_subcommand("superframe", "density budget of stacked systems");
  addGaborCommon(ga_super, false);
  ga_super->add_option("--windows", ga_windows, "one spec per system")->required()->delimiter(';');
  ga_super->add_option("--lattices", ga_lattices, "one per system; default: shared --lattice")->delimiter(';');
  ga_super->add_option("--tol", ga_tol);

  // channel ----------------------------------------------------------------
  auto* channel = app.add_subcommand("channel", "additive noise transmission");
  channel->require_subcommand(1);

  std::string ch_frame, ch_output;
  fk::Index ch_trials = 10000;
  std::uint64_t ch_seed = 42;

  auto* ch_sim = channel->add_subcommand("sim", "per-block error energy vs prediction");
  ch_sim->add_option("--frame", ch_frame)->required();
  ch_sim->add_option("--trials", ch_trials);
  ch_sim->add_option("--seed", ch_seed);
  ch_sim->add_option("--output", ch_output, "CSV path (default: stdout)");

  // suite ----------------------------------------------------------------
  auto* suite = app.add_subcommand("suite", "named end-to-end experiments");

  std::string su_kind, su_config, su_out;
  std::uint64_t su_seed = 42;
  fk::Index su_trials = 0;
  bool su_all = false, su_list = false;

  suite->add_option("--kind", su_kind, "one experiment by name");
  suite->add_option("--config", su_config, "JSON config: {kind, seed, trials, output_dir}");
  suite->add_flag("--all", su_all, "run every experiment");
  suite->add_flag("--list", su_list, "print the registered kinds");
  suite->add_option("--out", su_out, "output directory for artifacts");
  suite->add_option("--seed", su_seed);
  suite->add_option("--trials", su_trials, "Monte Carlo count (0: per-kind default)");

  try {
    app.parse(argc, argv);

    if (seq_check->parsed()) return cmdSeqCheck(seq_input, seq_tol);
    if (seq_compare->parsed()) return cmdSeqCompare(seq_left, seq_right, seq_copts);
    if (seq_decompose->parsed())
      return cmdSeqDecompose(seq_input, seq_out_plus, seq_out_minus);
    if (seq_lattice->parsed())
      return cmdSeqLattice(seq_left, seq_right, seq_out_wedge, seq_out_vee);

    if (fr_synth->parsed()) return cmdFrameSynth(fr_seq, fr_output);
    if (fr_measure->parsed())
      return cmdFrameMeasure(fr_input, fr_window, fr_cluster_eps, fr_profile_out);
    if (fr_compare->parsed()) return cmdFrameCompare(fr_left, fr_right, fr_copts);
    if (fr_excess->parsed()) return cmdFrameExcess(fr_input, fr_alpha, fr_epsilon, fr_tol);
    if (fr_redundancy->parsed()) return cmdFrameRedundancy(fr_input);
    if (fr_gram->parsed()) return cmdFrameGram(fr_input, fr_output);
    if (fr_validate->parsed()) return cmdFrameValidate(fr_input);

    if (op_bmap->parsed()) return cmdOpBmap(op_input, op_out_real, op_out_imag);
    if (op_tails->parsed()) return cmdOpTails(op_input, op_metric, op_radii, op_interior);
    if (op_tracial->parsed())
      return cmdOpTracial(op_left, op_right,
                          op_threshold >= 0 ? std::optional<double>(op_threshold)
                                            : std::nullopt,
                          op_out_csv);

    if (sf_check->parsed()) return cmdSuperframeCheck(sf_left, sf_right, sf_tol);
    if (sf_add->parsed()) return cmdSuperframeAdditivity(sf_left, sf_right, sf_stab_tol);

    if (ga_build->parsed()) return cmdGaborBuild(ga, ga_output);
    if (ga_density->parsed()) return cmdGaborDensity(ga, ga_normalization, ga_scan);
    if (ga_verify->parsed()) return cmdGaborVerifyMeasure(ga, ga_tol);
    if (ga_super->parsed()) return cmdGaborSuperframe(ga, ga_windows, ga_lattices, ga_tol);

    if (ch_sim->parsed()) return cmdChannelSim(ch_frame, ch_trials, ch_seed, ch_output);

    if (suite->parsed()) {
      if (su_list) {
        for (const auto& kind : fk::experimentKinds()) std::cout << kind << "\n";
        return kExitPass;
      }
      std::vector<fk::ExperimentConfig> configs;
      if (!su_config.empty()) {
        configs.push_back(configFromJson(su_config));
      } else if (su_all) {
        for (const auto& kind : fk::experimentKinds()) {
          fk::ExperimentConfig cfg;
          cfg.kind = kind;
          cfg.seed = su_seed;
          cfg.trials = su_trials;
          if (!su_out.empty())
            cfg.output_dir = (std::filesystem::path(su_out) / kind).string();
          configs.push_back(cfg);
        }
      } else if (!su_kind.empty()) {
        fk::ExperimentConfig cfg;
        cfg.kind = su_kind;
        cfg.seed = su_seed;
        cfg.trials = su_trials;
        cfg.output_dir = su_out;
        configs.push_back(cfg);
      } else {
        throw fk::InputError("suite needs --kind, --config, --all or --list");
      }
      return runSuiteConfigs(configs);
    }

    throw fk::InputError("no subcommand selected");
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitPass : kExitInputError;
  } catch (const fk::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  }
}
