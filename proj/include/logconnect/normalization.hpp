#pragma once

#include <cstddef>
#include <vector>

#include "connection.hpp"
#include "predicates.hpp"

namespace logconnect {

/// Truncated gauge G(x) = I + G_1 x + ... + G_N x^N.
struct GaugeSeries {
  std::vector<ComplexMatrix> coefficients;

  std::size_t order() const { return coefficients.empty() ? 0 : coefficients.size() - 1; }

  ComplexMatrix evaluate(Complex x) const {
    ComplexMatrix acc = coefficients.back();
    for (std::size_t k = coefficients.size() - 1; k-- > 0;) acc = acc * x + coefficients[k];
    return acc;
  }
};

/// Splits a one-variable connection with the single branch x = 0 into
/// omega = A dx/x + tau(x) dx with tau polynomial. Returns {A, tau_0, tau_1, ...}.
inline std::vector<ComplexMatrix> split_residue_and_holomorphic_part(const LogConnection& c) {
  if (c.dim() != 1) raise(ErrorCode::InvalidArgument, "normalization needs a one-variable chart");
  if (c.divisor().size() != 1 || !c.divisor().front().at.is_zero())
    raise(ErrorCode::InvalidArgument, "normalization needs the single branch x = 0");
  const auto m = Eigen::Index(c.rank());
  const auto x = Polynomial<GaussianRational>::variable(1, 0);
  std::vector<std::vector<GaussianRational>> entries(std::size_t(m * m));
  std::size_t degree = 0;
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) {
      const auto& f = c.component(0)(std::size_t(i), std::size_t(j));
      auto [q, r] = detail::divmod((x * f.num()).dense(0), f.den().dense(0));
      if (!(r.size() == 1 && r[0].is_zero()))
        raise(ErrorCode::InvalidArgument, "holomorphic part of the connection is not polynomial");
      degree = std::max(degree, q.size());
      entries[std::size_t(i * m + j)] = std::move(q);
    }
  std::vector<ComplexMatrix> out(degree, ComplexMatrix::Zero(m, m));
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) {
      const auto& q = entries[std::size_t(i * m + j)];
      for (std::size_t k = 0; k < q.size(); ++k) out[k](i, j) = q[k].to_complex();
    }
  return out;
}

/// Gauge G with G(x)^{-1} (omega G - dG) = A dx/x + O(x^order), where
/// omega = A dx/x + sum_k tau[k] x^k dx. Coefficients solve
/// A G_k - G_k (A + k I) = -[x^(k-1)] (tau G).
inline GaugeSeries poincare_normalize(const ComplexMatrix& a, const std::vector<ComplexMatrix>& tau,
                                      std::size_t order = 10) {
  require_square(a, "residue");
  for (const auto& t : tau)
    if (t.rows() != a.rows() || t.cols() != a.cols()) raise(ErrorCode::DimensionMismatch, "tau coefficient size");
  if (!nonresonant(a)) raise(ErrorCode::ResonantResidue, "residue has eigenvalues differing by a positive integer");
  const Eigen::Index m = a.rows();
  GaugeSeries g;
  g.coefficients.push_back(ComplexMatrix::Identity(m, m));
  for (std::size_t k = 1; k <= order; ++k) {
    ComplexMatrix rhs = ComplexMatrix::Zero(m, m);
    for (std::size_t l = 0; l < k; ++l) {
      const std::size_t ti = k - 1 - l;
      if (ti < tau.size()) rhs -= tau[ti] * g.coefficients[l];
    }
    ComplexMatrix shifted = a;
    shifted.diagonal().array() += double(k);
    try {
      g.coefficients.push_back(sylvester_solve(a, shifted, rhs));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::ResonantSpectrum) raise(ErrorCode::ResonantResidue, e.what());
      throw;
    }
  }
  return g;
}

inline GaugeSeries poincare_normalize(const LogConnection& c, std::size_t order = 10) {
  auto parts = split_residue_and_holomorphic_part(c);
  const ComplexMatrix a = parts.front();
  parts.erase(parts.begin());
  return poincare_normalize(a, parts, order);
}

/// Coefficients of E(x) = (A + x tau(x)) G(x) - x G'(x) - G(x) A, computed
/// by polynomial-matrix arithmetic independent of the recursion. E vanishing
/// through degree N means the gauge-transformed connection is A dx/x + O(x^N).
inline std::vector<ComplexMatrix> normalization_defect(const ComplexMatrix& a, const std::vector<ComplexMatrix>& tau,
                                                       const GaugeSeries& g) {
  using P = Polynomial<Complex>;
  const auto m = std::size_t(a.rows());
  const P x = P::variable(1, 0);
  auto constant_grid = [&](const ComplexMatrix& c) {
    Grid<P> out(m, P(1));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) out(i, j) = P::constant(1, c(Eigen::Index(i), Eigen::Index(j)));
    return out;
  };
  auto series_grid = [&](const std::vector<ComplexMatrix>& coeffs, unsigned shift) {
    Grid<P> out(m, P(1));
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      Monomial e{unsigned(k) + shift};
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) out(i, j).add_term(e, coeffs[k](Eigen::Index(i), Eigen::Index(j)));
    }
    return out;
  };
  const Grid<P> ag = constant_grid(a);
  const Grid<P> gg = series_grid(g.coefficients, 0);
  const Grid<P> lhs = (ag + series_grid(tau, 1)) * gg;
  const Grid<P> xdg = gg.map([&](const P& p) { return x * p.derivative(0); });
  const Grid<P> e = lhs - xdg - gg * ag;

  unsigned top = 0;
  for (const auto& p : e) top = std::max(top, p.degree(0));
  std::vector<ComplexMatrix> out(top + 1, ComplexMatrix::Zero(a.rows(), a.cols()));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (const auto& [exp, c] : e(i, j).terms()) out[exp[0]](Eigen::Index(i), Eigen::Index(j)) = c;
  return out;
}

}  // namespace logconnect
