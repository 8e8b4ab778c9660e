#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "grid.hpp"
#include "linalg.hpp"
#include "rational_function.hpp"

namespace logconnect {

using RatFun = RationalFunction<GaussianRational>;
using ExactMatrix = Grid<GaussianRational>;
using FormMatrix = Grid<RatFun>;
/// Scalar 1-form sum_j f_j dx_j, one rational function per chart variable.
using Form = std::vector<RatFun>;

inline ExactMatrix to_exact(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) raise(ErrorCode::DimensionMismatch, "matrix is not square");
  ExactMatrix out(std::size_t(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = GaussianRational::from_complex(m(i, j));
  return out;
}

inline ComplexMatrix to_complex(const ExactMatrix& m) {
  const auto n = Eigen::Index(m.size());
  ComplexMatrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) out(i, j) = m(i, j).to_complex();
  return out;
}

/// One-variable global model on the Riemann sphere:
/// omega = sum_i A_i dx / (x - p_i), with the residue at infinity -sum_i A_i
/// implied and never stored.
struct FuchsianSystem {
  std::size_t rank = 0;
  std::vector<GaussianRational> poles;
  std::vector<ExactMatrix> residues;
  /// Set when the coefficients came from floating-point data.
  bool approximate = false;

  static FuchsianSystem from_numeric(const std::vector<Complex>& poles, const std::vector<ComplexMatrix>& residues) {
    FuchsianSystem f;
    f.rank = residues.empty() ? 0 : std::size_t(residues.front().rows());
    for (Complex p : poles) f.poles.push_back(GaussianRational::from_complex(p));
    for (const auto& r : residues) f.residues.push_back(to_exact(r));
    f.approximate = true;
    f.validate();
    return f;
  }

  void validate() const {
    if (rank < 1) raise(ErrorCode::InvalidArgument, "rank must be at least 1");
    if (poles.size() != residues.size()) raise(ErrorCode::DimensionMismatch, "one residue per pole is required");
    for (const auto& r : residues)
      if (r.size() != rank) raise(ErrorCode::DimensionMismatch, "residue size differs from rank");
    for (std::size_t i = 0; i < poles.size(); ++i)
      for (std::size_t j = i + 1; j < poles.size(); ++j)
        if (std::abs(poles[i].to_complex() - poles[j].to_complex()) <= 1e-9)
          raise(ErrorCode::InvalidArgument, "poles must be pairwise distinct");
  }

  std::vector<Complex> numeric_poles() const {
    std::vector<Complex> out;
    for (const auto& p : poles) out.push_back(p.to_complex());
    return out;
  }

  ExactMatrix residue_at_infinity() const {
    ExactMatrix s(rank);
    for (const auto& r : residues) s = s + r;
    return ExactMatrix(rank) - s;
  }
};

/// D_A = d - sum_{i<k} A_i dx_i / x_i on a polydisk of dimension n >= k.
struct LocalModel {
  std::size_t rank = 0;
  std::size_t dim = 0;
  std::vector<ExactMatrix> residues;
  bool approximate = false;

  static LocalModel from_numeric(std::size_t dim, const std::vector<ComplexMatrix>& residues) {
    LocalModel l;
    l.rank = residues.empty() ? 0 : std::size_t(residues.front().rows());
    l.dim = dim;
    for (const auto& r : residues) l.residues.push_back(to_exact(r));
    l.approximate = true;
    l.validate();
    return l;
  }

  void validate() const {
    if (rank < 1) raise(ErrorCode::InvalidArgument, "rank must be at least 1");
    if (residues.size() > dim) raise(ErrorCode::DimensionMismatch, "more branches than chart dimensions");
    for (const auto& r : residues)
      if (r.size() != rank) raise(ErrorCode::DimensionMismatch, "residue size differs from rank");
  }

  std::vector<ComplexMatrix> numeric_residues() const {
    std::vector<ComplexMatrix> out;
    for (const auto& r : residues) out.push_back(to_complex(r));
    return out;
  }
};

/// Divisor branch x_var = at.
struct DivisorBranch {
  std::size_t var = 0;
  GaussianRational at;

  friend bool operator==(const DivisorBranch&, const DivisorBranch&) = default;
};

/// Flat logarithmic connection d - omega on the trivial rank-m bundle over a
/// chart of dimension n, omega = sum_j Omega_j dx_j with rational entries
/// whose poles lie on coordinate hyperplanes.
class LogConnection {
 public:
  LogConnection(std::size_t rank, std::size_t dim, std::vector<DivisorBranch> divisor,
                std::vector<FormMatrix> components, bool approximate = false)
      : rank_(rank), dim_(dim), divisor_(std::move(divisor)), components_(std::move(components)),
        approximate_(approximate) {
    if (rank_ < 1 || dim_ < 1) raise(ErrorCode::InvalidArgument, "rank and dimension must be positive");
    if (components_.size() != dim_) raise(ErrorCode::DimensionMismatch, "need one component per chart variable");
    for (const auto& c : components_)
      if (c.size() != rank_) raise(ErrorCode::DimensionMismatch, "component size differs from rank");
    for (const auto& b : divisor_)
      if (b.var >= dim_) raise(ErrorCode::InvalidArgument, "divisor branch on a missing variable");
  }

  static LogConnection from(const FuchsianSystem& f) {
    f.validate();
    FormMatrix omega(f.rank, RatFun::constant(1, GaussianRational{}));
    std::vector<DivisorBranch> divisor;
    for (std::size_t l = 0; l < f.poles.size(); ++l) {
      divisor.push_back({0, f.poles[l]});
      for (std::size_t i = 0; i < f.rank; ++i)
        for (std::size_t j = 0; j < f.rank; ++j)
          if (!f.residues[l](i, j).is_zero())
            omega(i, j) += RatFun::simple_pole(1, 0, f.poles[l], f.residues[l](i, j));
    }
    return {f.rank, 1, std::move(divisor), {std::move(omega)}, f.approximate};
  }

  static LogConnection from(const LocalModel& l) {
    l.validate();
    std::vector<FormMatrix> comps;
    std::vector<DivisorBranch> divisor;
    for (std::size_t v = 0; v < l.dim; ++v) {
      FormMatrix c(l.rank, RatFun::constant(l.dim, GaussianRational{}));
      if (v < l.residues.size()) {
        divisor.push_back({v, GaussianRational{}});
        for (std::size_t i = 0; i < l.rank; ++i)
          for (std::size_t j = 0; j < l.rank; ++j)
            if (!l.residues[v](i, j).is_zero())
              c(i, j) = RatFun::simple_pole(l.dim, v, GaussianRational{}, l.residues[v](i, j));
      }
      comps.push_back(std::move(c));
    }
    return {l.rank, l.dim, std::move(divisor), std::move(comps), l.approximate};
  }

  std::size_t rank() const { return rank_; }
  std::size_t dim() const { return dim_; }
  const std::vector<DivisorBranch>& divisor() const { return divisor_; }
  const std::vector<FormMatrix>& components() const { return components_; }
  const FormMatrix& component(std::size_t var) const { return components_.at(var); }
  bool approximate() const { return approximate_; }

  /// Branches lying in the coordinate x_var.
  std::vector<std::size_t> branches_on(std::size_t var) const {
    std::vector<std::size_t> out;
    for (std::size_t b = 0; b < divisor_.size(); ++b)
      if (divisor_[b].var == var) out.push_back(b);
    return out;
  }

  /// Checks that every denominator divides the product of divisor forms,
  /// i.e. poles only on the divisor and of order at most one.
  void validate_poles() const {
    for (std::size_t v = 0; v < dim_; ++v)
      for (const auto& entry : components_[v]) {
        auto q = entry.den();
        for (const auto& b : divisor_) {
          auto [quot, rem] = q.divide_linear(b.var, b.at);
          if (rem.is_zero()) q = std::move(quot);
        }
        if (!q.is_constant())
          raise(ErrorCode::InvalidArgument, "entry has poles off the divisor or of order above one");
      }
  }

  friend bool operator==(const LogConnection& a, const LogConnection& b) {
    return a.rank_ == b.rank_ && a.dim_ == b.dim_ && a.components_ == b.components_;
  }

 private:
  std::size_t rank_;
  std::size_t dim_;
  std::vector<DivisorBranch> divisor_;
  std::vector<FormMatrix> components_;
  bool approximate_;
};

inline Form zero_form(std::size_t dim) { return Form(dim, RatFun::constant(dim, GaussianRational{})); }

inline Form trace(const LogConnection& c) {
  Form t = zero_form(c.dim());
  for (std::size_t v = 0; v < c.dim(); ++v)
    for (std::size_t i = 0; i < c.rank(); ++i) t[v] += c.component(v)(i, i);
  return t;
}

/// omega + f * Id
inline LogConnection add_scalar_form(const LogConnection& c, const Form& f) {
  if (f.size() != c.dim()) raise(ErrorCode::DimensionMismatch, "form dimension differs from chart");
  std::vector<FormMatrix> comps = c.components();
  for (std::size_t v = 0; v < c.dim(); ++v)
    for (std::size_t i = 0; i < c.rank(); ++i) comps[v](i, i) += f[v];
  return {c.rank(), c.dim(), c.divisor(), std::move(comps), c.approximate()};
}

namespace detail {

inline double max_coefficient(const RatFun& f) {
  double m = 0.0;
  for (const auto& [e, c] : f.num().terms()) m = std::max(m, std::abs(c.to_complex()));
  return m;
}

}  // namespace detail

/// True iff d(omega) = omega ^ omega. Exact comparison for exact data; for
/// floating-origin data the curvature numerator must vanish to `tol`
/// relative to the size of the terms that produced it.
inline bool flatness_check(const LogConnection& c, double tol = 1e-12) {
  if (c.dim() == 1) return true;
  const std::size_t m = c.rank();
  for (std::size_t j = 0; j < c.dim(); ++j)
    for (std::size_t k = j + 1; k < c.dim(); ++k) {
      const auto& oj = c.component(j);
      const auto& ok = c.component(k);
      for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) {
          RatFun lhs = ok(a, b).derivative(j) - oj(a, b).derivative(k);
          double scale = std::max(detail::max_coefficient(lhs), 1.0);
          RatFun rhs;
          for (std::size_t s = 0; s < m; ++s) {
            RatFun t1 = oj(a, s) * ok(s, b);
            RatFun t2 = ok(a, s) * oj(s, b);
            scale = std::max({scale, detail::max_coefficient(t1), detail::max_coefficient(t2)});
            rhs += t1 - t2;
          }
          if (!c.approximate()) {
            if (!(lhs == rhs)) return false;
          } else {
            const RatFun diff = lhs - rhs;
            if (detail::max_coefficient(diff) > tol * scale) return false;
          }
        }
    }
  return true;
}

/// Index value selecting the point at infinity in `residue` for one-variable
/// connections.
inline constexpr std::size_t kInfinityBranch = static_cast<std::size_t>(-1);

/// Residue matrix along a divisor branch: the restriction of
/// (x_var - c) Omega_var to x_var = c, which must be constant.
inline ComplexMatrix residue(const LogConnection& c, std::size_t branch) {
  const std::size_t m = c.rank();
  ComplexMatrix out = ComplexMatrix::Zero(Eigen::Index(m), Eigen::Index(m));
  if (branch == kInfinityBranch) {
    if (c.dim() != 1) raise(ErrorCode::InvalidArgument, "the point at infinity needs a one-variable chart");
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        const auto& f = c.component(0)(i, j);
        if (f.is_zero()) continue;
        const unsigned dp = f.num().degree(0);
        const unsigned dq = f.den().degree(0);
        if (dp + 1 > dq) raise(ErrorCode::InvalidArgument, "connection is not logarithmic at infinity");
        if (dp + 1 == dq) {
          const auto p = f.num().dense(0);
          const auto q = f.den().dense(0);
          out(Eigen::Index(i), Eigen::Index(j)) = -(p.back() / q.back()).to_complex();
        }
      }
    return out;
  }
  if (branch >= c.divisor().size()) raise(ErrorCode::InvalidArgument, "branch index out of range");
  const auto& br = c.divisor()[branch];
  const std::size_t n = c.dim();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const auto& f = c.component(br.var)(i, j);
      auto [quot, rem] = f.den().divide_linear(br.var, br.at);
      if (!rem.is_zero()) continue;
      auto q_on = quot.substitute(br.var, br.at);
      if (q_on.is_zero()) raise(ErrorCode::InvalidArgument, "pole of order above one along the branch");
      const RatFun g(f.num().substitute(br.var, br.at), q_on);
      Complex value;
      if (g.is_polynomial() && g.num().is_constant()) {
        value = (g.num().constant_term() / g.den().constant_term()).to_complex();
      } else {
        // Sample the restriction at a few points of the branch.
        std::vector<Complex> samples;
        for (int s = 0; s < 4; ++s) {
          std::vector<Complex> pt(n);
          for (std::size_t v = 0; v < n; ++v) pt[v] = Complex(0.37 + 0.21 * s + 0.05 * v, 0.11 * (s + 1) - 0.03 * v);
          pt[br.var] = br.at.to_complex();
          samples.push_back(g.evaluate(pt));
        }
        value = samples.front();
        for (Complex s : samples)
          if (std::abs(s - value) > 1e-10 * std::max(1.0, std::abs(value)))
            raise(ErrorCode::NonConstantResidue, "residue varies along the branch");
      }
      out(Eigen::Index(i), Eigen::Index(j)) = value;
    }
  return out;
}

/// Pullback by the covering x_var = u^nu. The residue along x_var = 0 is
/// multiplied by nu; other branches are untouched.
inline LogConnection pullback_power(const LogConnection& c, std::size_t var, unsigned nu) {
  if (nu < 1) raise(ErrorCode::InvalidArgument, "covering degree must be at least 1");
  if (var >= c.dim()) raise(ErrorCode::InvalidArgument, "variable index out of range");
  const auto on_var = c.branches_on(var);
  if (on_var.empty()) raise(ErrorCode::UnsupportedBranch, "no divisor branch in the substituted variable");
  for (std::size_t b : on_var)
    if (!c.divisor()[b].at.is_zero())
      raise(ErrorCode::UnsupportedBranch, "branch does not pass through the origin; translate first");
  if (nu == 1) return c;

  const std::size_t n = c.dim();
  // d(u^nu) = nu u^(nu-1) du
  Monomial e(n, 0);
  e[var] = nu - 1;
  Polynomial<GaussianRational> jac(n);
  jac.add_term(e, GaussianRational(static_cast<long>(nu)));
  const RatFun jacobian(jac);

  std::vector<FormMatrix> comps;
  for (std::size_t v = 0; v < n; ++v) {
    FormMatrix out = c.component(v).map([&](const RatFun& f) { return f.compose_power(var, nu); });
    if (v == var)
      for (auto& f : out) f = f * jacobian;
    comps.push_back(std::move(out));
  }
  return {c.rank(), n, c.divisor(), std::move(comps), c.approximate()};
}

}  // namespace logconnect
