#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "framekit/channel.hpp"
#include "framekit/frame.hpp"
#include "framekit/gabor.hpp"
#include "framekit/measure.hpp"
#include "framekit/operators.hpp"
#include "framekit/sequence.hpp"

namespace framekit {

// Anything wrong with bytes coming from outside: malformed JSON or CSV,
// schema violations, impossible shapes. The CLI maps this to its own exit
// code so wiring mistakes are not confused with failed checks.
struct InputError : std::runtime_error {
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// 17 significant digits: enough to round-trip any double through text.
std::string formatG17(double v);

// Frame files: {"ambient_dim": d, "blocks": [cumulative sizes], "labels":
// [[a] | [a,b], ...], "vectors": [[[re,im] x d] per label], "dual": same
// shape, optional}. Labels beyond the last block size are the collar.
void writeFrameJson(const std::string& path, const FrameSnapshot& snap);
FrameSnapshot readFrameJson(const std::string& path);

// Dense matrices: {"dim": n, "entries": [[[re,im] x n] per row], "blocks":
// optional cumulative sizes (default one block), "labels": optional}.
void writeMatrixJson(const std::string& path, const OperatorSnapshot& op);
OperatorSnapshot readMatrixJson(const std::string& path);

// Lattices: {"N": 16, "points": [[t,w],...], "phases": [...] optional}.
// Omit "N" for real-valued density studies.
void writeLatticeJson(const std::string& path, const GaborLattice& lat);
GaborLattice readLatticeJson(const std::string& path);

// Sequences as CSV rows "n,size,value" with a header line.
void writeSequenceCsv(const std::string& path, const RealSequence& x);
RealSequence readSequenceCsv(const std::string& path);

void writeProfileJson(const std::string& path, const MeasureProfile& p);

// Channel reports as CSV rows "n,analytic,empirical,stderr,z".
void writeChannelCsv(const std::string& path, const ChannelReport& rep);

// Full schema and invariant sweep over a frame file; collects every failure
// instead of stopping at the first.
struct ValidationReport {
  bool ok = false;
  std::vector<std::string> errors;
};

ValidationReport validateFrameFile(const std::string& path);

}  // namespace framekit
