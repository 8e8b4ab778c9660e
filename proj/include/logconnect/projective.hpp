#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "connection.hpp"
#include "predicates.hpp"

namespace logconnect {

/// Element of PGL_m: an invertible representative taken modulo scalars.
///
/// The canonical representative has determinant one, and among the m such
/// representatives it is the one whose first entry of non-negligible size
/// (row-major order) has argument in [0, 2 pi / m).
class ProjectiveClass {
 public:
  explicit ProjectiveClass(ComplexMatrix rep) : rep_(std::move(rep)) {
    require_square(rep_, "projective representative");
    const double n = rep_.norm();
    const Complex det = rep_.determinant();
    if (std::abs(det) < 1e-12 * std::pow(n, double(rep_.rows())))
      raise(ErrorCode::SingularMatrix, "projective representative must be invertible");
    const double m = double(rep_.rows());
    canonical_ = rep_ * std::exp(-std::log(det) / m);

    const double big = canonical_.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < canonical_.size(); ++i) {
      const Complex e = canonical_(i / canonical_.cols(), i % canonical_.cols());
      if (std::abs(e) <= 1e-9 * big) continue;
      const double window = 2.0 * kPi / m;
      double arg = std::arg(e);
      if (arg < 0) arg += 2.0 * kPi;
      const double turns = std::floor(arg / window);
      canonical_ *= std::polar(1.0, -turns * window);
      break;
    }
  }

  std::size_t dim() const { return std::size_t(rep_.rows()); }
  const ComplexMatrix& rep() const { return rep_; }
  const ComplexMatrix& canonical() const { return canonical_; }

  ProjectiveClass inverse() const { return ProjectiveClass(rep_.inverse()); }

  ProjectiveClass power(int k) const {
    ComplexMatrix base = k < 0 ? ComplexMatrix(canonical_.inverse()) : canonical_;
    ComplexMatrix acc = ComplexMatrix::Identity(base.rows(), base.cols());
    for (int i = 0; i < std::abs(k); ++i) acc = acc * base;
    return ProjectiveClass(acc);
  }

  friend ProjectiveClass operator*(const ProjectiveClass& a, const ProjectiveClass& b) {
    return ProjectiveClass(a.canonical_ * b.canonical_);
  }

  static ProjectiveClass identity(std::size_t m) {
    return ProjectiveClass(ComplexMatrix::Identity(Eigen::Index(m), Eigen::Index(m)));
  }

 private:
  ComplexMatrix rep_;
  ComplexMatrix canonical_;
};

/// a.rep = lambda b.rep for some scalar, decided by the least-squares lambda.
inline bool proj_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol = 1e-9) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) raise(ErrorCode::DimensionMismatch, "classes differ in size");
  const Complex lambda = best_scalar(a, b);
  return (a - lambda * b).norm() < tol * a.norm();
}

inline bool proj_equal(const ProjectiveClass& a, const ProjectiveClass& b, double tol = 1e-9) {
  return proj_equal(a.rep(), b.rep(), tol);
}

/// Projectivized connection in the affine chart y_m != 0 with z_i = y_i / y_m:
///   dz_i = b_i + delta_i z_i + sum_{k != i} offdiag_{ik} z_k - sum_k c_k z_i z_k
/// where b_i = omega_{im}, delta_i = omega_{ii} - omega_{mm},
/// offdiag_{ik} = omega_{ik} (i != k < m) and c_k = omega_{mk}.
struct RiccatiSystem {
  std::size_t rank = 0;
  std::size_t dim = 0;
  /// Zero-based index of the coordinate set to one; always rank - 1.
  std::size_t chart = 0;
  std::vector<Form> b;
  std::vector<Form> delta;
  Grid<Form> offdiag;
  std::vector<Form> c;
  std::vector<DivisorBranch> divisor;
  bool approximate = false;

  void validate() const {
    if (rank < 1 || dim < 1) raise(ErrorCode::InvalidArgument, "rank and dimension must be positive");
    const std::size_t k = rank - 1;
    if (chart != k) raise(ErrorCode::InvalidArgument, "only the chart y_m != 0 is materialized");
    if (b.size() != k || delta.size() != k || c.size() != k || offdiag.size() != k)
      raise(ErrorCode::DimensionMismatch, "Riccati coefficient counts inconsistent with rank");
    auto check = [&](const Form& f) {
      if (f.size() != dim) raise(ErrorCode::DimensionMismatch, "Riccati coefficient form has the wrong dimension");
    };
    for (const auto& f : b) check(f);
    for (const auto& f : delta) check(f);
    for (const auto& f : c) check(f);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        if (i != j) check(offdiag(i, j));
  }

  friend bool operator==(const RiccatiSystem& x, const RiccatiSystem& y) {
    return x.rank == y.rank && x.dim == y.dim && x.b == y.b && x.delta == y.delta && x.offdiag == y.offdiag &&
           x.c == y.c;
  }
};

inline RiccatiSystem projectivize(const LogConnection& conn) {
  const std::size_t m = conn.rank();
  const std::size_t n = conn.dim();
  const std::size_t last = m - 1;
  RiccatiSystem r;
  r.rank = m;
  r.dim = n;
  r.chart = last;
  r.divisor = conn.divisor();
  r.approximate = conn.approximate();
  r.offdiag = Grid<Form>(last, zero_form(n));
  auto form_of = [&](std::size_t i, std::size_t j) {
    Form f(n);
    for (std::size_t v = 0; v < n; ++v) f[v] = conn.component(v)(i, j);
    return f;
  };
  for (std::size_t i = 0; i < last; ++i) {
    r.b.push_back(form_of(i, last));
    Form d(n);
    for (std::size_t v = 0; v < n; ++v) d[v] = conn.component(v)(i, i) - conn.component(v)(last, last);
    r.delta.push_back(std::move(d));
    r.c.push_back(form_of(last, i));
    for (std::size_t k = 0; k < last; ++k)
      if (k != i) r.offdiag(i, k) = form_of(i, k);
  }
  return r;
}

/// The unique omega with projectivize(omega) = r and trace(omega) = tr.
inline LogConnection reconstruct(const RiccatiSystem& r, const Form& tr) {
  r.validate();
  if (tr.size() != r.dim) raise(ErrorCode::DimensionMismatch, "trace form has the wrong dimension");
  const std::size_t m = r.rank;
  const std::size_t last = m - 1;
  const GaussianRational inv_m = GaussianRational(1) / GaussianRational(static_cast<long>(m));
  std::vector<FormMatrix> comps;
  for (std::size_t v = 0; v < r.dim; ++v) {
    FormMatrix w(m, RatFun::constant(r.dim, GaussianRational{}));
    RatFun sum_delta = RatFun::constant(r.dim, GaussianRational{});
    for (std::size_t i = 0; i < last; ++i) sum_delta += r.delta[i][v];
    w(last, last) = inv_m * (tr[v] - sum_delta);
    for (std::size_t i = 0; i < last; ++i) {
      w(i, i) = r.delta[i][v] + w(last, last);
      w(i, last) = r.b[i][v];
      w(last, i) = r.c[i][v];
      for (std::size_t k = 0; k < last; ++k)
        if (k != i) w(i, k) = r.offdiag(i, k)[v];
    }
    comps.push_back(std::move(w));
  }
  return {m, r.dim, r.divisor, std::move(comps), r.approximate};
}

/// Trace-free linear connection projecting to r; its flatness is verified.
inline LogConnection trace_free_lift(const RiccatiSystem& r, double tol = 1e-12) {
  LogConnection out = reconstruct(r, zero_form(r.dim));
  if (!flatness_check(out, tol))
    raise(ErrorCode::NonIntegrable, "trace-free reconstruction is not flat");
  return out;
}

/// dz/dx_var of the Riccati system at a point of the chart.
inline ComplexVector riccati_field(const RiccatiSystem& r, std::size_t var, std::span<const Complex> point,
                                   const ComplexVector& z) {
  const std::size_t k = r.rank - 1;
  if (std::size_t(z.size()) != k) raise(ErrorCode::DimensionMismatch, "affine point has the wrong size");
  Complex quad{};
  for (std::size_t j = 0; j < k; ++j) quad += r.c[j][var].evaluate(point) * z(Eigen::Index(j));
  ComplexVector dz(static_cast<Eigen::Index>(k));
  for (std::size_t i = 0; i < k; ++i) {
    Complex v = r.b[i][var].evaluate(point) + r.delta[i][var].evaluate(point) * z(Eigen::Index(i));
    for (std::size_t j = 0; j < k; ++j)
      if (j != i) v += r.offdiag(i, j)[var].evaluate(point) * z(Eigen::Index(j));
    dz(Eigen::Index(i)) = v - quad * z(Eigen::Index(i));
  }
  return dz;
}

}  // namespace logconnect
