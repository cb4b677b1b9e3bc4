#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <functional>
#include <string>

namespace framekit {

using Real = double;
using Complex = std::complex<double>;
using Index = std::int64_t;

using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

// Index label: an integer or a fixed pair of integers. Real-valued point sets
// (jittered lattices) keep their coordinates in a side table and use the
// position in that table as the label.
struct Label {
  Index a = 0;
  Index b = 0;
  int arity = 1;

  Label() = default;
  explicit Label(Index v) : a(v), b(0), arity(1) {}
  Label(Index x, Index y) : a(x), b(y), arity(2) {}

  friend bool operator==(const Label& l, const Label& r) {
    return l.arity == r.arity && l.a == r.a && l.b == r.b;
  }
  friend bool operator!=(const Label& l, const Label& r) { return !(l == r); }
  friend bool operator<(const Label& l, const Label& r) {
    if (l.arity != r.arity) return l.arity < r.arity;
    if (l.a != r.a) return l.a < r.a;
    return l.b < r.b;
  }
};

std::string to_string(const Label& l);

struct LabelHash {
  std::size_t operator()(const Label& l) const {
    std::size_t h = std::hash<Index>()(l.a);
    h ^= std::hash<Index>()(l.b) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h ^ static_cast<std::size_t>(l.arity);
  }
};

}  // namespace framekit
