#include "framekit/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace framekit {

double NoiseSource::unitOpen() {
  // 53 uniform bits mapped to (0, 1]: never zero, so the log below is safe.
  return (static_cast<double>(rng_() >> 11) + 1.0) * 0x1p-53;
}

Complex NoiseSource::next() {
  double u1 = unitOpen();
  double u2 = unitOpen();
  double r = std::sqrt(-std::log(u1));  // Box-Muller scaled to variance 1/2 per part
  double a = 2.0 * std::numbers::pi * u2;
  return Complex(r * std::cos(a), r * std::sin(a));
}

namespace {

struct Kahan {
  double sum = 0.0;
  double carry = 0.0;
  void add(double v) {
    double y = v - carry;
    double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

}  // namespace

ChannelReport simulateChannel(const FrameSnapshot& frame, const ChannelOptions& opts) {
  if (opts.trials < 100) throw std::invalid_argument("need at least 100 trials");

  FrameAnalysis an = analyze(frame);
  if (an.span_dim == 0) throw std::invalid_argument("cannot transmit through the zero family");
  const auto& d = *frame.decomp;
  Index depth = d.depth();
  Index r = an.span_dim;

  // Rows of the range basis are the Parseval companion's vectors expressed
  // in span coordinates; only their Gram matters for the error statistics.
  ComplexMatrix parseval = an.range_basis.adjoint();  // r x total labels

  RealVector analytic = diagPartialSums(an.diag, frame.decomp).normalized();

  NoiseSource noise(opts.seed);
  std::vector<Kahan> mean(static_cast<size_t>(depth));
  std::vector<Kahan> moment2(static_cast<size_t>(depth));
  std::vector<Kahan> acc_re(static_cast<size_t>(r)), acc_im(static_cast<size_t>(r));

  for (Index trial = 0; trial < opts.trials; ++trial) {
    for (Index k = 0; k < r; ++k) {
      acc_re[static_cast<size_t>(k)] = Kahan{};
      acc_im[static_cast<size_t>(k)] = Kahan{};
    }
    Index pos = 0;
    for (Index n = 1; n <= depth; ++n) {
      for (; pos < d.blockSize(n); ++pos) {
        Complex eta = noise.next();
        for (Index k = 0; k < r; ++k) {
          Complex term = eta * parseval(k, pos);
          acc_re[static_cast<size_t>(k)].add(term.real());
          acc_im[static_cast<size_t>(k)].add(term.imag());
        }
      }
      Kahan energy;
      for (Index k = 0; k < r; ++k) {
        double re = acc_re[static_cast<size_t>(k)].sum;
        double im = acc_im[static_cast<size_t>(k)].sum;
        energy.add(re * re + im * im);
      }
      double per_label = energy.sum / static_cast<double>(d.blockSize(n));
      mean[static_cast<size_t>(n - 1)].add(per_label);
      moment2[static_cast<size_t>(n - 1)].add(per_label * per_label);
    }
  }

  ChannelReport rep;
  rep.trials = opts.trials;
  rep.seed = opts.seed;
  double t = static_cast<double>(opts.trials);
  Index within = 0;
  for (Index n = 0; n < depth; ++n) {
    ChannelBlockRow row;
    row.block = n + 1;
    row.analytic = analytic(n);
    row.empirical = mean[static_cast<size_t>(n)].sum / t;
    double var = moment2[static_cast<size_t>(n)].sum / t - row.empirical * row.empirical;
    row.std_error = std::sqrt(std::max(var, 0.0) / t);
    row.z = row.std_error > 0.0 ? (row.empirical - row.analytic) / row.std_error : 0.0;
    if (std::abs(row.z) <= 4.0) ++within;
    rep.rows.push_back(row);
  }
  rep.frac_within_4se = static_cast<double>(within) / static_cast<double>(depth);
  rep.notes.push_back("noise convention: circular complex, variance 1/2 per part");
  rep.notes.push_back("family replaced by its Parseval companion before transmission");
  return rep;
}

NoiseSelfTest noiseSelfTest(std::uint64_t seed, Index samples) {
  if (samples < 10000) throw std::invalid_argument("need at least 10^4 samples");
  NoiseSource noise(seed);
  NoiseSelfTest out;
  out.samples = samples;
  Kahan mre, mim, var, lre, lim;
  Complex prev(0.0, 0.0);
  for (Index i = 0; i < samples; ++i) {
    Complex z = noise.next();
    mre.add(z.real());
    mim.add(z.imag());
    var.add(std::norm(z));
    if (i > 0) {
      Complex cross = prev * std::conj(z);
      lre.add(cross.real());
      lim.add(cross.imag());
    }
    prev = z;
  }
  double n = static_cast<double>(samples);
  out.mean_re = mre.sum / n;
  out.mean_im = mim.sum / n;
  out.variance = var.sum / n;
  out.lag1_re = lre.sum / (n - 1.0);
  out.lag1_im = lim.sum / (n - 1.0);
  return out;
}

}  // namespace framekit
