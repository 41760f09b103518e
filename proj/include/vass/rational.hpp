#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

namespace vass {

/// Exact rational number in lowest terms with a positive denominator.
class Rational {
 public:
  Rational() = default;
  Rational(long long n) : v_(static_cast<signed long>(n)) {}  // NOLINT(implicit)
  Rational(long long n, long long d);
  explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

  /// Accepts "a", "a/b", and finite decimals "1.25"; throws std::invalid_argument.
  static Rational parse(std::string_view text);

  std::string str() const;
  const mpq_class& raw() const { return v_; }

  mpz_class numerator() const { return v_.get_num(); }
  mpz_class denominator() const { return v_.get_den(); }
  bool is_integer() const { return v_.get_den() == 1; }
  int sign() const { return sgn(v_); }
  bool is_zero() const { return sgn(v_) == 0; }

  mpz_class floor() const;
  mpz_class ceil() const;
  double to_double() const { return v_.get_d(); }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.v_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  mpq_class v_;
};

Rational abs(const Rational& r);

/// Integer value of an mpz that must fit in 64 bits; throws std::overflow_error otherwise.
long long to_int64(const mpz_class& z);

/// Rational extended with both infinities and an undefined marker.
class ExtRational {
 public:
  enum class Kind { Finite, PlusInfinity, MinusInfinity, Undefined };

  ExtRational() : kind_(Kind::Undefined) {}
  ExtRational(Rational v) : kind_(Kind::Finite), value_(std::move(v)) {}  // NOLINT(implicit)

  static ExtRational plus_infinity() { return ExtRational(Kind::PlusInfinity); }
  static ExtRational minus_infinity() { return ExtRational(Kind::MinusInfinity); }
  static ExtRational undefined() { return ExtRational(Kind::Undefined); }

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::Finite; }
  bool is_undefined() const { return kind_ == Kind::Undefined; }
  /// Only valid when finite.
  const Rational& value() const;

  /// "a/b", "+inf", "-inf" or "undefined".
  std::string str() const;
  static ExtRational parse(std::string_view text);

  friend ExtRational operator+(const ExtRational& a, const ExtRational& b);
  friend ExtRational operator*(const Rational& scale, const ExtRational& a);

  /// Structural equality: Undefined == Undefined holds here.
  friend bool operator==(const ExtRational& a, const ExtRational& b);
  /// Order among Finite and the infinities; unordered if either side is Undefined.
  friend std::partial_ordering operator<=>(const ExtRational& a, const ExtRational& b);

  friend std::ostream& operator<<(std::ostream& os, const ExtRational& r) { return os << r.str(); }

 private:
  explicit ExtRational(Kind k) : kind_(k) {}
  Kind kind_;
  Rational value_;
};

}  // namespace vass

template <>
struct std::hash<vass::Rational> {
  std::size_t operator()(const vass::Rational& r) const noexcept {
    return std::hash<std::string>{}(r.str());
  }
};
