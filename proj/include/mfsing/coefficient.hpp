#pragma once

#include <gmpxx.h>

#include <string>
#include <utility>

#include "mfsing/error.hpp"

namespace mfsing {

using Rational = mpq_class;

inline std::string rational_to_string(const Rational& q) {
  // mpq_class::get_str already yields "a" or "a/b" in lowest terms.
  return q.get_str();
}

/// An element re + im*i of the Gaussian rationals Q(i).
class Coefficient {
 public:
  Coefficient() : re_(0), im_(0) {}
  Coefficient(long v) : re_(v), im_(0) {}  // NOLINT: implicit from integers is intended
  explicit Coefficient(Rational re, Rational im = 0) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
  }

  static Coefficient i() { return Coefficient(Rational(0), Rational(1)); }

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_one() const { return sgn(im_) == 0 && re_ == 1; }
  bool is_real() const { return sgn(im_) == 0; }

  Coefficient conj() const { return Coefficient(re_, -im_); }

  Coefficient inverse() const {
    if (is_zero()) internal_error("division by zero coefficient");
    if (is_real()) return Coefficient(Rational(1) / re_);
    Rational norm = re_ * re_ + im_ * im_;
    return Coefficient(re_ / norm, -im_ / norm);
  }

  Coefficient operator-() const { return Coefficient(-re_, -im_); }

  Coefficient& operator+=(const Coefficient& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  Coefficient& operator-=(const Coefficient& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  Coefficient& operator*=(const Coefficient& o) {
    if (is_real() && o.is_real()) {
      re_ *= o.re_;
      return *this;
    }
    Rational r = re_ * o.re_ - im_ * o.im_;
    Rational m = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    im_ = std::move(m);
    return *this;
  }
  Coefficient& operator/=(const Coefficient& o) { return *this *= o.inverse(); }

  friend Coefficient operator+(Coefficient a, const Coefficient& b) { return a += b; }
  friend Coefficient operator-(Coefficient a, const Coefficient& b) { return a -= b; }
  friend Coefficient operator*(Coefficient a, const Coefficient& b) { return a *= b; }
  friend Coefficient operator/(Coefficient a, const Coefficient& b) { return a /= b; }

  friend bool operator==(const Coefficient& a, const Coefficient& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const Coefficient& a, const Coefficient& b) { return !(a == b); }

  /// Canonical text: "a/b", "c/d*i", or "a/b+c/d*i" (negative imaginary parts print as "a/b-c/d*i").
  std::string to_string() const {
    if (is_real()) return rational_to_string(re_);
    std::string imag = rational_to_string(im_) + "*i";
    if (sgn(re_) == 0) return imag;
    if (sgn(im_) > 0) return rational_to_string(re_) + "+" + imag;
    return rational_to_string(re_) + imag;
  }

 private:
  Rational re_;
  Rational im_;
};

}  // namespace mfsing
