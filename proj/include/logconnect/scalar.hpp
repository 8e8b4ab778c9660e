#pragma once

#include <cmath>
#include <complex>
#include <concepts>
#include <ostream>
#include <string>

#include <gmpxx.h>

#include "errors.hpp"

namespace logconnect {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline const Complex kTwoPiI{0.0, 2.0 * kPi};

/// Exact complex number with rational real and imaginary parts.
///
/// Every finite double is a dyadic rational, so floating inputs embed into
/// this type without rounding; arithmetic on the embedded values is exact.
class GaussianRational {
 public:
  GaussianRational() = default;
  GaussianRational(long re) : re_(re) {}  // NOLINT(google-explicit-constructor)
  GaussianRational(mpq_class re, mpq_class im = 0) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
  }

  /// Exact embedding of a complex double.
  static GaussianRational from_complex(Complex z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      raise(ErrorCode::InvalidArgument, "non-finite scalar cannot be embedded exactly");
    return {mpq_class(z.real()), mpq_class(z.imag())};
  }

  /// Parses "p/q" or an integer literal for each part.
  static GaussianRational parse(const std::string& re, const std::string& im = "0") {
    try {
      return {mpq_class(re), mpq_class(im)};
    } catch (const std::invalid_argument&) {
      raise(ErrorCode::InvalidArgument, "malformed rational literal '" + re + "', '" + im + "'");
    }
  }

  const mpq_class& real() const { return re_; }
  const mpq_class& imag() const { return im_; }

  Complex to_complex() const { return {re_.get_d(), im_.get_d()}; }
  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }

  GaussianRational conj() const { return {re_, -im_}; }

  friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
    return {a.re_ + b.re_, a.im_ + b.im_};
  }
  friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
    return {a.re_ - b.re_, a.im_ - b.im_};
  }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    return {a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_};
  }
  friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
    if (b.is_zero()) raise(ErrorCode::InvalidArgument, "division by zero");
    mpq_class n = b.re_ * b.re_ + b.im_ * b.im_;
    return {(a.re_ * b.re_ + a.im_ * b.im_) / n, (a.im_ * b.re_ - a.re_ * b.im_) / n};
  }
  GaussianRational operator-() const { return {-re_, -im_}; }

  GaussianRational& operator+=(const GaussianRational& o) { return *this = *this + o; }
  GaussianRational& operator-=(const GaussianRational& o) { return *this = *this - o; }
  GaussianRational& operator*=(const GaussianRational& o) { return *this = *this * o; }
  GaussianRational& operator/=(const GaussianRational& o) { return *this = *this / o; }

  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

  friend std::ostream& operator<<(std::ostream& os, const GaussianRational& z) {
    return os << '(' << z.re_ << ',' << z.im_ << ')';
  }

 private:
  mpq_class re_{0};
  mpq_class im_{0};
};

/// Coefficient field of polynomials and rational functions.
template <class K>
concept Field = requires(const K& a, const K& b) {
  { a + b } -> std::convertible_to<K>;
  { a - b } -> std::convertible_to<K>;
  { a * b } -> std::convertible_to<K>;
  { a / b } -> std::convertible_to<K>;
  { -a } -> std::convertible_to<K>;
  { a == b } -> std::convertible_to<bool>;
};

template <Field K>
struct field_traits;

template <>
struct field_traits<GaussianRational> {
  static constexpr bool exact = true;
  static GaussianRational zero() { return {}; }
  static GaussianRational one() { return {1}; }
  static bool is_zero(const GaussianRational& z) { return z.is_zero(); }
  static Complex to_complex(const GaussianRational& z) { return z.to_complex(); }
  static GaussianRational from_complex(Complex z) { return GaussianRational::from_complex(z); }
};

template <>
struct field_traits<Complex> {
  static constexpr bool exact = false;
  static Complex zero() { return {}; }
  static Complex one() { return {1.0, 0.0}; }
  static bool is_zero(const Complex& z) { return z == Complex{}; }
  static Complex to_complex(const Complex& z) { return z; }
  static Complex from_complex(Complex z) { return z; }
};

template <class K>
concept ExactField = Field<K> && field_traits<K>::exact;

}  // namespace logconnect
