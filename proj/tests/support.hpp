#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "logconnect/logconnect.hpp"

namespace support {

using logconnect::Complex;
using logconnect::ComplexMatrix;
using logconnect::GaussianRational;

/// Seeded generators for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  Complex complex(double r = 1.0) { return {uniform(-r, r), uniform(-r, r)}; }

  ComplexMatrix matrix(Eigen::Index m, double r = 1.0) {
    ComplexMatrix a(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < m; ++j) a(i, j) = complex(r);
    return a;
  }

  /// Random matrix rescaled to Frobenius norm at most `bound`.
  ComplexMatrix bounded(Eigen::Index m, double bound) {
    ComplexMatrix a = matrix(m);
    return a * (uniform(0.05, 1.0) * bound / a.norm());
  }

  /// Well-conditioned random basis.
  ComplexMatrix basis(Eigen::Index m) {
    for (;;) {
      ComplexMatrix p = ComplexMatrix::Identity(m, m) + matrix(m, 0.4);
      Eigen::JacobiSVD<ComplexMatrix> svd(p);
      if (svd.singularValues()(m - 1) > 0.3) return p;
    }
  }

  GaussianRational rational(int num = 9, int den = 8) {
    const long d = integer(1, den);
    return {mpq_class(integer(-num, num), d), mpq_class(integer(-num, num), integer(1, den))};
  }

  /// Gaussian rational with real and imaginary parts in {-num..num} / den.
  GaussianRational small(int num = 2, long den = 8) {
    return {mpq_class(integer(-num, num), den), mpq_class(integer(-num, num), den)};
  }

  logconnect::ExactMatrix small_matrix(std::size_t m, int num = 2, long den = 8) {
    logconnect::ExactMatrix out(m);
    for (auto& e : out) e = small(num, den);
    return out;
  }

  logconnect::ExactMatrix exact_matrix(std::size_t m) {
    logconnect::ExactMatrix out(m);
    for (auto& e : out) e = rational();
    return out;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline double rel_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

/// Random exact Fuchsian system with distinct Gaussian-integer poles.
inline logconnect::FuchsianSystem random_fuchsian(Gen& g, std::size_t m, std::size_t k) {
  logconnect::FuchsianSystem f;
  f.rank = m;
  while (f.poles.size() < k) {
    GaussianRational p{mpq_class(g.integer(-3, 3)), mpq_class(g.integer(-3, 3))};
    bool fresh = true;
    for (const auto& q : f.poles) fresh = fresh && !(q == p);
    if (fresh) f.poles.push_back(p);
  }
  for (std::size_t i = 0; i < k; ++i) f.residues.push_back(g.exact_matrix(m));
  return f;
}

/// Clock and shift generators of the finite Heisenberg group in rank m.
inline ComplexMatrix clock(Eigen::Index m) {
  ComplexMatrix z = ComplexMatrix::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) z(i, i) = std::polar(1.0, 2.0 * logconnect::kPi * double(i) / double(m));
  return z;
}

inline ComplexMatrix shift(Eigen::Index m) {
  ComplexMatrix c = ComplexMatrix::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) c((i + 1) % m, i) = 1.0;
  return c;
}

inline ComplexMatrix int_power(const ComplexMatrix& a, int k) {
  ComplexMatrix out = ComplexMatrix::Identity(a.rows(), a.cols());
  for (int i = 0; i < k; ++i) out = out * a;
  return out;
}

/// Diagonal with random eigenvalues of modulus in [0.5, 2], so P_m holds generically.
inline ComplexMatrix random_diagonal(Gen& g, Eigen::Index m) {
  ComplexMatrix d = ComplexMatrix::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) d(i, i) = std::polar(g.uniform(0.5, 2.0), g.uniform(-3.1, 3.1));
  return d;
}

/// Projectively commuting pair: either clock-shift words (nontrivial
/// commutator scalar) or a commuting diagonal family, in a random basis and
/// with random scalar factors.
inline std::pair<ComplexMatrix, ComplexMatrix> commuting_pair(Gen& g, Eigen::Index m, bool heisenberg) {
  const ComplexMatrix p = g.basis(m);
  const ComplexMatrix pinv = p.inverse();
  ComplexMatrix a, b;
  if (heisenberg) {
    const ComplexMatrix z = clock(m);
    const ComplexMatrix c = shift(m);
    a = int_power(z, g.integer(0, int(m) - 1)) * int_power(c, g.integer(0, int(m) - 1));
    b = int_power(z, g.integer(0, int(m) - 1)) * int_power(c, g.integer(0, int(m) - 1));
  } else {
    a = random_diagonal(g, m);
    b = random_diagonal(g, m);
  }
  const Complex sa = std::polar(g.uniform(0.5, 2.0), g.uniform(-3.1, 3.1));
  const Complex sb = std::polar(g.uniform(0.5, 2.0), g.uniform(-3.1, 3.1));
  return {sa * p * a * pinv, sb * p * b * pinv};
}

}  // namespace support
