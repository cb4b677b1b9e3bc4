#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "framekit/frame.hpp"
#include "framekit/types.hpp"

namespace framekit {

// Unit-variance circular complex noise: real and imaginary parts each carry
// variance 1/2. The transform from engine output to samples is spelled out
// here instead of going through std::normal_distribution, whose algorithm is
// implementation-defined; a seed therefore pins byte-exact output anywhere.
class NoiseSource {
 public:
  explicit NoiseSource(std::uint64_t seed) : rng_(seed) {}
  Complex next();

 private:
  std::mt19937_64 rng_;
  double unitOpen();  // uniform on (0, 1]
};

struct ChannelOptions {
  Index trials = 10000;
  std::uint64_t seed = 42;
};

struct ChannelBlockRow {
  Index block = 0;     // 1-based
  double analytic = 0.0;
  double empirical = 0.0;
  double std_error = 0.0;
  double z = 0.0;
};

struct ChannelReport {
  std::vector<ChannelBlockRow> rows;
  Index trials = 0;
  std::uint64_t seed = 0;
  double frac_within_4se = 0.0;
  std::vector<std::string> notes;
};

// Runs the additive-noise transmission experiment on the Parseval companion
// of the snapshot: per trial, noise coefficients are synthesized back
// through the family and the accumulated error energy per block is averaged.
// The analytic prediction per block is the running average of the diagonal.
ChannelReport simulateChannel(const FrameSnapshot& frame, const ChannelOptions& opts = {});

struct NoiseSelfTest {
  Index samples = 0;
  double mean_re = 0.0;
  double mean_im = 0.0;
  double variance = 0.0;  // mean of |sample|^2
  double lag1_re = 0.0;   // mean of sample_i * conj(sample_{i+1})
  double lag1_im = 0.0;
};

NoiseSelfTest noiseSelfTest(std::uint64_t seed, Index samples);

}  // namespace framekit
