#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "scalar.hpp"

namespace logconnect {

/// Exponent vector; entry i is the power of chart variable x_i.
using Monomial = std::vector<unsigned>;

/// Sparse multivariate polynomial over the chart variables x_0..x_{n-1}.
///
/// Terms are kept in a std::map keyed by exponent vector, which gives a
/// deterministic term order (lexicographic, x_0 most significant) for
/// printing, serialization and "leading coefficient" normalization.
/// A polynomial with zero variables is a constant and promotes silently
/// when combined with one over more variables.
template <Field K>
class Polynomial {
 public:
  using Traits = field_traits<K>;

  Polynomial() = default;
  explicit Polynomial(std::size_t nvars) : nvars_(nvars) {}

  static Polynomial constant(std::size_t nvars, const K& c) {
    Polynomial p(nvars);
    p.add_term(Monomial(nvars, 0), c);
    return p;
  }

  static Polynomial variable(std::size_t nvars, std::size_t var) {
    if (var >= nvars) raise(ErrorCode::InvalidArgument, "variable index out of range");
    Monomial e(nvars, 0);
    e[var] = 1;
    Polynomial p(nvars);
    p.add_term(std::move(e), Traits::one());
    return p;
  }

  /// x_var - c
  static Polynomial linear_form(std::size_t nvars, std::size_t var, const K& c) {
    return variable(nvars, var) - constant(nvars, c);
  }

  std::size_t nvars() const { return nvars_; }
  const std::map<Monomial, K>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }

  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && is_unit_monomial(terms_.begin()->first));
  }

  K constant_term() const { return coefficient(Monomial(nvars_, 0)); }

  K coefficient(const Monomial& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Traits::zero() : it->second;
  }

  void add_term(Monomial e, const K& c) {
    if (e.size() != nvars_) raise(ErrorCode::DimensionMismatch, "monomial arity differs from polynomial");
    if (Traits::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(std::move(e), c);
    if (!inserted) {
      it->second = it->second + c;
      if (Traits::is_zero(it->second)) terms_.erase(it);
    }
  }

  unsigned degree(std::size_t var) const {
    unsigned d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e[var]);
    return d;
  }

  unsigned total_degree() const {
    unsigned d = 0;
    for (const auto& [e, c] : terms_) {
      unsigned s = 0;
      for (unsigned x : e) s += x;
      d = std::max(d, s);
    }
    return d;
  }

  bool depends_on(std::size_t var) const {
    return std::any_of(terms_.begin(), terms_.end(), [&](const auto& t) { return t.first[var] > 0; });
  }

  std::vector<std::size_t> variables() const {
    std::vector<std::size_t> out;
    for (std::size_t v = 0; v < nvars_; ++v)
      if (depends_on(v)) out.push_back(v);
    return out;
  }

  /// Coefficient of the largest monomial in term order.
  const K& leading_coefficient() const {
    if (terms_.empty()) raise(ErrorCode::InvalidArgument, "zero polynomial has no leading coefficient");
    return terms_.rbegin()->second;
  }

  /// Componentwise minimum exponent over all terms.
  Monomial min_monomial() const {
    if (terms_.empty()) return Monomial(nvars_, 0);
    Monomial m = terms_.begin()->first;
    for (const auto& [e, c] : terms_)
      for (std::size_t i = 0; i < nvars_; ++i) m[i] = std::min(m[i], e[i]);
    return m;
  }

  Polynomial divide_monomial(const Monomial& m) const {
    Polynomial out(nvars_);
    for (const auto& [e, c] : terms_) {
      Monomial r = e;
      for (std::size_t i = 0; i < nvars_; ++i) {
        if (r[i] < m[i]) raise(ErrorCode::InvalidArgument, "monomial does not divide polynomial");
        r[i] -= m[i];
      }
      out.terms_.emplace(std::move(r), c);
    }
    return out;
  }

  Polynomial promote(std::size_t nvars) const {
    if (nvars == nvars_) return *this;
    if (nvars_ != 0) raise(ErrorCode::DimensionMismatch, "cannot change the variable count of a polynomial");
    Polynomial out(nvars);
    for (const auto& [e, c] : terms_) out.add_term(Monomial(nvars, 0), c);
    return out;
  }

  Polynomial derivative(std::size_t var) const {
    Polynomial out(nvars_);
    for (const auto& [e, c] : terms_) {
      if (e[var] == 0) continue;
      Monomial r = e;
      --r[var];
      out.add_term(std::move(r), c * K(static_cast<long>(e[var])));
    }
    return out;
  }

  /// Sets x_var = value; the result no longer depends on x_var.
  Polynomial substitute(std::size_t var, const K& value) const {
    Polynomial out(nvars_);
    for (const auto& [e, c] : terms_) {
      K f = c;
      for (unsigned k = 0; k < e[var]; ++k) f = f * value;
      Monomial r = e;
      r[var] = 0;
      out.add_term(std::move(r), f);
    }
    return out;
  }

  /// Replaces x_var by x_var^nu.
  Polynomial compose_power(std::size_t var, unsigned nu) const {
    Polynomial out(nvars_);
    for (const auto& [e, c] : terms_) {
      Monomial r = e;
      r[var] *= nu;
      out.terms_.emplace(std::move(r), c);
    }
    return out;
  }

  /// Synthetic division by (x_var - c): returns {quotient, remainder}, where
  /// the remainder equals this polynomial evaluated at x_var = c.
  std::pair<Polynomial, Polynomial> divide_linear(std::size_t var, const K& c) const {
    const unsigned d = degree(var);
    // Coefficients of x_var^k as polynomials in the remaining variables.
    std::vector<Polynomial> coef(d + 1, Polynomial(nvars_));
    for (const auto& [e, v] : terms_) {
      Monomial r = e;
      r[var] = 0;
      coef[e[var]].add_term(std::move(r), v);
    }
    Polynomial quotient(nvars_);
    Polynomial carry(nvars_);
    for (unsigned k = d; k >= 1; --k) {
      carry = coef[k] + carry * Polynomial::constant(nvars_, c);
      for (const auto& [e, v] : carry.terms_) {
        Monomial r = e;
        r[var] = k - 1;
        quotient.add_term(std::move(r), v);
      }
    }
    Polynomial remainder = coef[0] + carry * Polynomial::constant(nvars_, c);
    if (d == 0) remainder = coef[0];
    return {quotient, remainder};
  }

  Complex evaluate(std::span<const Complex> point) const {
    if (point.size() < nvars_) raise(ErrorCode::DimensionMismatch, "evaluation point has too few coordinates");
    Complex acc{};
    for (const auto& [e, c] : terms_) {
      Complex t = Traits::to_complex(c);
      for (std::size_t i = 0; i < nvars_; ++i)
        for (unsigned k = 0; k < e[i]; ++k) t *= point[i];
      acc += t;
    }
    return acc;
  }

  template <Field L, class F>
  Polynomial<L> map_coefficients(F&& f) const {
    Polynomial<L> out(nvars_);
    for (const auto& [e, c] : terms_) out.add_term(e, f(c));
    return out;
  }

  /// Dense coefficient list in x_var; requires no other variable to occur.
  std::vector<K> dense(std::size_t var) const {
    std::vector<K> out(degree(var) + 1, Traits::zero());
    for (const auto& [e, c] : terms_) {
      for (std::size_t i = 0; i < nvars_; ++i)
        if (i != var && e[i] != 0) raise(ErrorCode::InvalidArgument, "polynomial is not univariate");
      out[e[var]] = c;
    }
    return out;
  }

  static Polynomial from_dense(std::size_t nvars, std::size_t var, const std::vector<K>& coeffs) {
    Polynomial out(nvars);
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      Monomial e(nvars, 0);
      if (nvars > 0) e[var] = static_cast<unsigned>(k);
      else if (k > 0) raise(ErrorCode::InvalidArgument, "constant polynomial cannot hold higher powers");
      out.add_term(std::move(e), coeffs[k]);
    }
    return out;
  }

  Polynomial operator-() const {
    Polynomial out(nvars_);
    for (const auto& [e, c] : terms_) out.terms_.emplace(e, -c);
    return out;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    const std::size_t n = std::max(a.nvars_, b.nvars_);
    Polynomial out = a.promote(n);
    for (const auto& [e, c] : b.promote(n).terms_) out.add_term(e, c);
    return out;
  }

  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    const std::size_t n = std::max(a.nvars_, b.nvars_);
    const Polynomial pa = a.promote(n);
    const Polynomial pb = b.promote(n);
    Polynomial out(n);
    for (const auto& [ea, ca] : pa.terms_)
      for (const auto& [eb, cb] : pb.terms_) {
        Monomial e(n);
        for (std::size_t i = 0; i < n; ++i) e[i] = ea[i] + eb[i];
        out.add_term(std::move(e), ca * cb);
      }
    return out;
  }

  friend Polynomial operator*(const K& s, const Polynomial& p) {
    Polynomial out(p.nvars_);
    for (const auto& [e, c] : p.terms_) out.add_term(e, s * c);
    return out;
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    const std::size_t n = std::max(a.nvars_, b.nvars_);
    return a.promote(n).terms_ == b.promote(n).terms_;
  }

 private:
  static bool is_unit_monomial(const Monomial& e) {
    return std::all_of(e.begin(), e.end(), [](unsigned x) { return x == 0; });
  }

  std::size_t nvars_ = 0;
  std::map<Monomial, K> terms_;
};

namespace detail {

template <Field K>
void trim(std::vector<K>& p) {
  while (p.size() > 1 && field_traits<K>::is_zero(p.back())) p.pop_back();
}

/// Dense univariate long division over an exact field.
template <ExactField K>
std::pair<std::vector<K>, std::vector<K>> divmod(std::vector<K> a, std::vector<K> b) {
  trim(a);
  trim(b);
  if (b.size() == 1 && field_traits<K>::is_zero(b[0])) raise(ErrorCode::InvalidArgument, "division by zero polynomial");
  if (a.size() < b.size()) return {{field_traits<K>::zero()}, a};
  std::vector<K> q(a.size() - b.size() + 1, field_traits<K>::zero());
  for (std::size_t k = q.size(); k-- > 0;) {
    const K c = a[k + b.size() - 1] / b.back();
    q[k] = c;
    for (std::size_t j = 0; j < b.size(); ++j) a[k + j] = a[k + j] - c * b[j];
  }
  a.resize(b.size() - 1 == 0 ? 1 : b.size() - 1);
  trim(a);
  return {q, a};
}

template <ExactField K>
std::vector<K> gcd(std::vector<K> a, std::vector<K> b) {
  trim(a);
  trim(b);
  auto is_zero_poly = [](const std::vector<K>& p) { return p.size() == 1 && field_traits<K>::is_zero(p[0]); };
  while (!is_zero_poly(b)) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

}  // namespace detail

}  // namespace logconnect
