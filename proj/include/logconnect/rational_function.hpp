#pragma once

#include <algorithm>
#include <set>
#include <span>
#include <utility>

#include "polynomial.hpp"

namespace logconnect {

/// Quotient of two polynomials over an exact field.
///
/// Normal form: common monomial factors removed, the univariate gcd removed
/// whenever numerator and denominator together involve at most one
/// variable, and the denominator's leading coefficient equal to one.
/// Equality is decided by cross multiplication, so it is exact even for
/// multivariate entries that are not fully reduced.
template <ExactField K>
class RationalFunction {
 public:
  using Poly = Polynomial<K>;
  using Traits = field_traits<K>;

  RationalFunction() : num_(), den_(Poly::constant(0, Traits::one())) {}
  RationalFunction(Poly num)  // NOLINT(google-explicit-constructor)
      : num_(std::move(num)), den_(Poly::constant(num_.nvars(), Traits::one())) {}
  RationalFunction(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

  static RationalFunction constant(std::size_t nvars, const K& c) { return RationalFunction(Poly::constant(nvars, c)); }

  /// coef / (x_var - at)
  static RationalFunction simple_pole(std::size_t nvars, std::size_t var, const K& at, const K& coef) {
    return {Poly::constant(nvars, coef), Poly::linear_form(nvars, var, at)};
  }

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  std::size_t nvars() const { return std::max(num_.nvars(), den_.nvars()); }
  bool is_zero() const { return num_.is_zero(); }

  bool is_polynomial() const { return den_.is_constant(); }

  RationalFunction derivative(std::size_t var) const {
    return {num_.derivative(var) * den_ - num_ * den_.derivative(var), den_ * den_};
  }

  RationalFunction substitute(std::size_t var, const K& value) const {
    Poly d = den_.substitute(var, value);
    if (d.is_zero()) raise(ErrorCode::InvalidArgument, "substitution hits a pole");
    return {num_.substitute(var, value), std::move(d)};
  }

  RationalFunction compose_power(std::size_t var, unsigned nu) const {
    return {num_.compose_power(var, nu), den_.compose_power(var, nu)};
  }

  Complex evaluate(std::span<const Complex> point) const { return num_.evaluate(point) / den_.evaluate(point); }

  RationalFunction operator-() const { return {-num_, den_}; }

  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
    if (a.den_ == b.den_) return {a.num_ + b.num_, a.den_};
    return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
  }
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) { return a + (-b); }
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
    return {a.num_ * b.num_, a.den_ * b.den_};
  }
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
    if (b.is_zero()) raise(ErrorCode::InvalidArgument, "division by the zero rational function");
    return {a.num_ * b.den_, a.den_ * b.num_};
  }
  friend RationalFunction operator*(const K& s, const RationalFunction& f) { return {s * f.num_, f.den_}; }

  RationalFunction& operator+=(const RationalFunction& o) { return *this = *this + o; }
  RationalFunction& operator-=(const RationalFunction& o) { return *this = *this - o; }

  friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
    return a.num_ * b.den_ == b.num_ * a.den_;
  }

 private:
  void normalize() {
    if (den_.is_zero()) raise(ErrorCode::InvalidArgument, "rational function with zero denominator");
    const std::size_t n = nvars();
    num_ = num_.promote(n);
    den_ = den_.promote(n);
    if (num_.is_zero()) {
      den_ = Poly::constant(n, Traits::one());
      return;
    }
    Monomial common = num_.min_monomial();
    const Monomial dm = den_.min_monomial();
    for (std::size_t i = 0; i < n; ++i) common[i] = std::min(common[i], dm[i]);
    if (std::any_of(common.begin(), common.end(), [](unsigned x) { return x > 0; })) {
      num_ = num_.divide_monomial(common);
      den_ = den_.divide_monomial(common);
    }

    std::set<std::size_t> vars;
    for (auto v : num_.variables()) vars.insert(v);
    for (auto v : den_.variables()) vars.insert(v);
    if (vars.size() == 1 && !den_.is_constant()) {
      const std::size_t v = *vars.begin();
      auto g = detail::gcd(num_.dense(v), den_.dense(v));
      if (g.size() > 1) {
        num_ = Poly::from_dense(n, v, detail::divmod(num_.dense(v), g).first);
        den_ = Poly::from_dense(n, v, detail::divmod(den_.dense(v), g).first);
      }
    }

    const K lead = den_.leading_coefficient();
    if (!(lead == Traits::one())) {
      const K inv = Traits::one() / lead;
      num_ = inv * num_;
      den_ = inv * den_;
    }
  }

  Poly num_;
  Poly den_;
};

}  // namespace logconnect
