#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "errors.hpp"
#include "scalar.hpp"

namespace logconnect {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Relative tolerance used by every spectral equality test unless overridden.
inline constexpr double kEigenTolerance = 1e-9;

inline double norm(const ComplexMatrix& m) { return m.norm(); }

inline bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i)
    if (!std::isfinite(m.data()[i].real()) || !std::isfinite(m.data()[i].imag())) return false;
  return true;
}

inline void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() < 1)
    raise(ErrorCode::DimensionMismatch, std::string(what) + " must be square with size >= 1");
  if (!all_finite(m)) raise(ErrorCode::InvalidArgument, std::string(what) + " has non-finite entries");
}

/// Eigenvalues with algebraic multiplicity plus a unitary basis in which the
/// input is upper triangular: input = basis * triangular * basis^H.
struct Spectrum {
  std::vector<Complex> eigenvalues;
  ComplexMatrix basis;
  ComplexMatrix triangular;

  ComplexMatrix reconstruct() const { return basis * triangular * basis.adjoint(); }

  /// Groups numerically equal eigenvalues; returns (mean value, count) pairs.
  std::vector<std::pair<Complex, int>> multiplicities(double tol = 1e-6) const {
    std::vector<std::pair<Complex, int>> groups;
    std::vector<bool> used(eigenvalues.size(), false);
    for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
      if (used[i]) continue;
      Complex sum = eigenvalues[i];
      int count = 1;
      used[i] = true;
      for (std::size_t j = i + 1; j < eigenvalues.size(); ++j) {
        const double scale = std::max({1.0, std::abs(eigenvalues[i]), std::abs(eigenvalues[j])});
        if (!used[j] && std::abs(eigenvalues[i] - eigenvalues[j]) <= tol * scale) {
          used[j] = true;
          sum += eigenvalues[j];
          ++count;
        }
      }
      groups.emplace_back(sum / double(count), count);
    }
    return groups;
  }
};

inline Spectrum eigen_decompose(const ComplexMatrix& m) {
  require_square(m, "matrix");
  Eigen::ComplexSchur<ComplexMatrix> schur(m.rows());
  schur.setMaxIterations(60 * m.rows());
  schur.compute(m, true);
  if (schur.info() != Eigen::Success)
    raise(ErrorCode::NonConvergence, "Schur iteration did not converge");
  Spectrum s;
  s.basis = schur.matrixU();
  s.triangular = schur.matrixT();
  s.eigenvalues.reserve(m.rows());
  for (Eigen::Index i = 0; i < m.rows(); ++i) s.eigenvalues.push_back(s.triangular(i, i));
  return s;
}

inline std::vector<Complex> eigenvalues(const ComplexMatrix& m) { return eigen_decompose(m).eigenvalues; }

inline ComplexMatrix mat_exp(const ComplexMatrix& a) {
  require_square(a, "matrix");
  ComplexMatrix e = a.exp();
  if (!all_finite(e)) raise(ErrorCode::Overflow, "matrix exponential overflowed");
  return e;
}

/// The exponent mu with exp(2*pi*i*mu) = lambda and 0 <= Re(mu) < 1.
inline Complex normalized_exponent(Complex lambda) {
  if (lambda == Complex{}) raise(ErrorCode::SingularMatrix, "zero has no logarithm");
  double re = std::arg(lambda) / (2.0 * kPi);
  if (re < 0.0) re += 1.0;
  if (re >= 1.0) re -= 1.0;
  return {re, -std::log(std::abs(lambda)) / (2.0 * kPi)};
}

namespace detail {

// Solves T X - X S = C for upper triangular T and S by column substitution.
inline ComplexMatrix sylvester_triangular(const ComplexMatrix& t, const ComplexMatrix& s,
                                          const ComplexMatrix& c) {
  const Eigen::Index n = t.rows();
  const Eigen::Index p = s.rows();
  ComplexMatrix x(n, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    ComplexVector rhs = c.col(j);
    for (Eigen::Index k = 0; k < j; ++k) rhs += s(k, j) * x.col(k);
    ComplexMatrix shifted = t;
    shifted.diagonal().array() -= s(j, j);
    x.col(j) = shifted.triangularView<Eigen::Upper>().solve(rhs);
  }
  return x;
}

// Swaps the adjacent diagonal entries k, k+1 of a complex Schur form in place,
// updating the unitary factor. Same rotation as LAPACK ztrexc.
inline void swap_schur_entries(ComplexMatrix& t, ComplexMatrix& q, Eigen::Index k) {
  const Eigen::Index n = t.rows();
  const Complex t11 = t(k, k);
  const Complex t22 = t(k + 1, k + 1);
  const Complex f = t(k, k + 1);
  const Complex g = t22 - t11;
  double cs = 1.0;
  Complex sn{};
  if (g == Complex{}) {
    return;
  } else if (f == Complex{}) {
    cs = 0.0;
    sn = std::conj(g) / std::abs(g);
  } else {
    const double fa = std::abs(f);
    const double d = std::hypot(fa, std::abs(g));
    cs = fa / d;
    sn = (f / fa) * std::conj(g) / d;
  }
  auto rot = [](Complex& x, Complex& y, double c, Complex s) {
    const Complex tmp = c * x + s * y;
    y = c * y - std::conj(s) * x;
    x = tmp;
  };
  for (Eigen::Index j = k + 2; j < n; ++j) rot(t(k, j), t(k + 1, j), cs, sn);
  for (Eigen::Index i = 0; i < k; ++i) rot(t(i, k), t(i, k + 1), cs, std::conj(sn));
  for (Eigen::Index i = 0; i < n; ++i) rot(q(i, k), q(i, k + 1), cs, std::conj(sn));
  t(k, k) = t22;
  t(k + 1, k + 1) = t11;
  t(k + 1, k) = Complex{};
}

// Logarithm of an upper triangular block whose eigenvalues all sit close to
// `center`; the branch is fixed by the center.
inline ComplexMatrix cluster_log(const ComplexMatrix& block, Complex center) {
  const Eigen::Index s = block.rows();
  const Complex base = kTwoPiI * normalized_exponent(center);
  ComplexMatrix out = ComplexMatrix::Identity(s, s) * base;
  if (s == 1) {
    out(0, 0) += std::log(block(0, 0) / center);
    return out;
  }
  const ComplexMatrix n = block / center - ComplexMatrix::Identity(s, s);
  ComplexMatrix power = n;
  ComplexMatrix series = ComplexMatrix::Zero(s, s);
  for (int k = 1; k <= 400; ++k) {
    const ComplexMatrix term = power / double(k) * (k % 2 == 1 ? 1.0 : -1.0);
    series += term;
    if (k >= s && term.norm() <= 1e-17 * std::max(1.0, series.norm())) break;
    power = power * n;
    if (k == 400) raise(ErrorCode::NonConvergence, "logarithm series did not converge");
  }
  return out + series;
}

}  // namespace detail

/// Solves A X - X B = C. Fails when spec(A) and spec(B) meet within `tol`.
inline ComplexMatrix sylvester_solve(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& c,
                                     double tol = kEigenTolerance) {
  require_square(a, "A");
  require_square(b, "B");
  if (a.rows() != b.rows() || c.rows() != a.rows() || c.cols() != b.rows())
    raise(ErrorCode::DimensionMismatch, "sylvester operands have inconsistent sizes");
  const Spectrum sa = eigen_decompose(a);
  const Spectrum sb = eigen_decompose(b);
  for (Complex x : sa.eigenvalues)
    for (Complex y : sb.eigenvalues)
      if (std::abs(x - y) <= tol * std::max({1.0, std::abs(x), std::abs(y)}))
        raise(ErrorCode::ResonantSpectrum, "spectra of A and B intersect");
  const ComplexMatrix rhs = sa.basis.adjoint() * c * sb.basis;
  const ComplexMatrix y = detail::sylvester_triangular(sa.triangular, sb.triangular, rhs);
  return sa.basis * y * sb.basis.adjoint();
}

/// Returns A with exp(2*pi*i*A) = M and every eigenvalue of A in the strip
/// 0 <= Re < 1. Computed as a primary matrix function (block Schur-Parlett),
/// so the result commutes with everything that commutes with M.
inline ComplexMatrix mat_log_normalized(const ComplexMatrix& m) {
  require_square(m, "matrix");
  const Eigen::Index n = m.rows();
  const double scale = m.norm();
  if (std::abs(m.determinant()) < 1e-12 * std::pow(scale, double(n)))
    raise(ErrorCode::SingularMatrix, "matrix is numerically singular");

  Spectrum s = eigen_decompose(m);
  ComplexMatrix t = s.triangular;
  ComplexMatrix q = s.basis;

  // Cluster close eigenvalues; clusters share one logarithm branch. Across
  // the branch cut only near-coincident eigenvalues are merged.
  constexpr double kClusterTol = 0.05;
  constexpr double kCutClusterTol = 1e-6;
  std::vector<double> turns(n);
  for (Eigen::Index i = 0; i < n; ++i) turns[i] = normalized_exponent(t(i, i)).real();
  std::vector<int> cluster(n, -1);
  int clusters = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (cluster[i] >= 0) continue;
    cluster[i] = clusters;
    std::vector<Eigen::Index> stack{i};
    while (!stack.empty()) {
      const Eigen::Index a = stack.back();
      stack.pop_back();
      for (Eigen::Index j = 0; j < n; ++j) {
        if (cluster[j] >= 0) continue;
        const double sc = std::max(std::abs(t(a, a)), std::abs(t(j, j)));
        const double gap = std::abs(t(a, a) - t(j, j));
        const bool same_side = std::abs(turns[a] - turns[j]) < 0.5;
        if (gap <= (same_side ? kClusterTol : kCutClusterTol) * sc) {
          cluster[j] = clusters;
          stack.push_back(j);
        }
      }
    }
    ++clusters;
  }

  // Make clusters contiguous along the diagonal.
  for (bool swapped = true; swapped;) {
    swapped = false;
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
      if (cluster[k] > cluster[k + 1]) {
        detail::swap_schur_entries(t, q, k);
        std::swap(cluster[k], cluster[k + 1]);
        swapped = true;
      }
    }
  }

  std::vector<std::pair<Eigen::Index, Eigen::Index>> blocks;  // (start, size)
  for (Eigen::Index k = 0; k < n;) {
    Eigen::Index e = k;
    while (e < n && cluster[e] == cluster[k]) ++e;
    blocks.emplace_back(k, e - k);
    k = e;
  }

  ComplexMatrix f = ComplexMatrix::Zero(n, n);
  auto tb = [&](std::size_t i, std::size_t j) {
    return t.block(blocks[i].first, blocks[j].first, blocks[i].second, blocks[j].second);
  };
  auto fb = [&](std::size_t i, std::size_t j) {
    return f.block(blocks[i].first, blocks[j].first, blocks[i].second, blocks[j].second);
  };
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    const ComplexMatrix tjj = tb(j, j);
    fb(j, j) = detail::cluster_log(tjj, tjj.diagonal().mean());
    for (std::size_t i = j; i-- > 0;) {
      ComplexMatrix rhs = fb(i, i) * tb(i, j) - tb(i, j) * fb(j, j);
      for (std::size_t k = i + 1; k < j; ++k) rhs += fb(i, k) * tb(k, j) - tb(i, k) * fb(k, j);
      fb(i, j) = detail::sylvester_triangular(tb(i, i), tjj, rhs);
    }
  }
  return q * f * q.adjoint() / kTwoPiI;
}

/// True iff every pair commutes: ||AB - BA|| <= tol * ||A|| * ||B||.
inline bool commuting(std::span<const ComplexMatrix> family, double tol = 1e-10) {
  for (const auto& a : family)
    if (a.rows() != family.front().rows() || a.cols() != family.front().cols())
      raise(ErrorCode::DimensionMismatch, "family members differ in size");
  for (std::size_t i = 0; i < family.size(); ++i)
    for (std::size_t j = i + 1; j < family.size(); ++j) {
      const auto& a = family[i];
      const auto& b = family[j];
      if ((a * b - b * a).norm() > tol * a.norm() * b.norm()) return false;
    }
  return true;
}

inline bool commuting(std::initializer_list<ComplexMatrix> family, double tol = 1e-10) {
  std::vector<ComplexMatrix> v(family);
  return commuting(std::span<const ComplexMatrix>(v), tol);
}

/// Rank test per eigenvalue cluster: geometric multiplicity equals algebraic.
inline bool is_diagonalizable(const ComplexMatrix& m, double tol = 1e-8) {
  const Spectrum s = eigen_decompose(m);
  const double scale = std::max(1.0, m.norm());
  for (const auto& [lambda, count] : s.multiplicities()) {
    if (count == 1) continue;
    ComplexMatrix shifted = m;
    shifted.diagonal().array() -= lambda;
    Eigen::JacobiSVD<ComplexMatrix> svd(shifted);
    const auto& sv = svd.singularValues();
    int small = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv(i) <= tol * scale) ++small;
    if (small < count) return false;
  }
  return true;
}

/// Least-squares scalar c minimizing ||a - c b||.
inline Complex best_scalar(const ComplexMatrix& a, const ComplexMatrix& b) {
  const double bb = b.squaredNorm();
  if (bb == 0.0) return {};
  return (b.adjoint() * a).trace() / bb;
}

inline ComplexMatrix to_matrix(std::initializer_list<std::initializer_list<Complex>> rows) {
  const auto n = Eigen::Index(rows.size());
  const auto p = Eigen::Index(rows.begin()->size());
  ComplexMatrix m(n, p);
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (const auto& v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

inline ComplexMatrix diag(std::initializer_list<Complex> values) {
  ComplexMatrix m = ComplexMatrix::Zero(Eigen::Index(values.size()), Eigen::Index(values.size()));
  Eigen::Index i = 0;
  for (const auto& v : values) {
    m(i, i) = v;
    ++i;
  }
  return m;
}

}  // namespace logconnect
