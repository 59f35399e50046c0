#pragma once

// Scalar types used throughout the library.
//
// Every geometric routine is templated on its scalar.  Three scalars are
// supported:
//   double    binary64 with a configured tolerance
//   Rational  exact arbitrary-precision rationals (GMP)
//   QSqrt2    exact elements a + b*sqrt(2) of the field Q(sqrt 2)

#include <cmath>
#include <compare>
#include <concepts>
#include <stdexcept>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>
#include <Eigen/Core>

namespace shadowlab {

using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

/// Exact element a + b*sqrt(2) with rational a, b.
class QSqrt2 {
 public:
  QSqrt2() = default;
  QSqrt2(int a) : a_(a) {}
  QSqrt2(long a) : a_(a) {}
  QSqrt2(long long a) : a_(a) {}
  QSqrt2(Rational a) : a_(std::move(a)) {}
  QSqrt2(Rational a, Rational b) : a_(std::move(a)), b_(std::move(b)) {}

  static QSqrt2 sqrt2() { return {Rational(0), Rational(1)}; }

  const Rational& rational_part() const { return a_; }
  const Rational& sqrt2_part() const { return b_; }
  bool is_rational() const { return b_ == 0; }

  /// -1, 0 or +1, decided exactly.
  int sign() const;
  double to_double() const;

  QSqrt2 operator-() const { return {-a_, -b_}; }
  QSqrt2& operator+=(const QSqrt2& o) {
    a_ += o.a_;
    b_ += o.b_;
    return *this;
  }
  QSqrt2& operator-=(const QSqrt2& o) {
    a_ -= o.a_;
    b_ -= o.b_;
    return *this;
  }
  QSqrt2& operator*=(const QSqrt2& o) {
    Rational a = a_ * o.a_ + 2 * b_ * o.b_;
    b_ = a_ * o.b_ + b_ * o.a_;
    a_ = std::move(a);
    return *this;
  }
  QSqrt2& operator/=(const QSqrt2& o);

  friend QSqrt2 operator+(QSqrt2 x, const QSqrt2& y) { return x += y; }
  friend QSqrt2 operator-(QSqrt2 x, const QSqrt2& y) { return x -= y; }
  friend QSqrt2 operator*(QSqrt2 x, const QSqrt2& y) { return x *= y; }
  friend QSqrt2 operator/(QSqrt2 x, const QSqrt2& y) { return x /= y; }

  friend bool operator==(const QSqrt2& x, const QSqrt2& y) {
    return x.a_ == y.a_ && x.b_ == y.b_;
  }
  friend std::strong_ordering operator<=>(const QSqrt2& x, const QSqrt2& y) {
    const int s = (x - y).sign();
    return s < 0 ? std::strong_ordering::less
                 : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  Rational a_{0};
  Rational b_{0};
};

inline QSqrt2 abs(const QSqrt2& x) { return x.sign() < 0 ? -x : x; }

// ---------------------------------------------------------------------------
// Traits

template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static constexpr const char* name = "float";
};

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static constexpr const char* name = "rational";
};

template <>
struct ScalarTraits<QSqrt2> {
  static constexpr bool exact = true;
  static constexpr const char* name = "qsqrt2";
};

template <class T>
concept Scalar = requires { ScalarTraits<T>::exact; };

template <class T>
concept ExactScalar = Scalar<T> && ScalarTraits<T>::exact;

template <class T>
inline constexpr bool is_exact_v = ScalarTraits<T>::exact;

// ---------------------------------------------------------------------------
// Conversions

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.convert_to<double>(); }
inline double to_double(const QSqrt2& x) { return x.to_double(); }

/// Converts between scalar types.  Conversions into exact types from double
/// are exact (every binary64 value is a dyadic rational).  Converting a QSqrt2
/// with a nonzero sqrt(2) part to Rational throws.
template <class To, class From>
To scalar_cast(const From& x) {
  if constexpr (std::same_as<To, From>) {
    return x;
  } else if constexpr (std::same_as<To, double>) {
    return to_double(x);
  } else if constexpr (std::same_as<To, Rational> && std::same_as<From, double>) {
    return Rational(x);
  } else if constexpr (std::same_as<To, Rational> && std::same_as<From, QSqrt2>) {
    if (!x.is_rational()) throw std::domain_error("value is not rational: has a sqrt(2) component");
    return x.rational_part();
  } else if constexpr (std::same_as<To, QSqrt2> && std::same_as<From, double>) {
    return QSqrt2(Rational(x));
  } else {
    static_assert(std::same_as<To, QSqrt2> && std::same_as<From, Rational>);
    return QSqrt2(x);
  }
}

/// Sign of x; in float mode values within `tol` of zero count as zero.
template <class T>
int sign_of(const T& x, double tol = 0.0) {
  if constexpr (std::same_as<T, double>) {
    return x > tol ? 1 : (x < -tol ? -1 : 0);
  } else if constexpr (std::same_as<T, QSqrt2>) {
    return x.sign();
  } else {
    return x > 0 ? 1 : (x < 0 ? -1 : 0);
  }
}

// ---------------------------------------------------------------------------
// Text form of exact numbers.
//
// Accepted grammar (whitespace ignored):
//   number := term (('+'|'-') term)*
//   term   := ['-'] atom ['*' 'sqrt2'] | ['-'] 'sqrt2'
//   atom   := integer | integer '/' integer | decimal | hex-float
// Hex floats ("0x1.8p-1") denote the exact binary64 value.  Malformed text
// throws Error(Parse).

QSqrt2 parse_qsqrt2(std::string_view text);
Rational parse_rational(std::string_view text);  // throws if a sqrt2 term is present

std::string format_rational(const Rational& x);  // "p" or "p/q"
std::string format_qsqrt2(const QSqrt2& x);      // "a", "b*sqrt2" or "a+b*sqrt2"
std::string format_hexfloat(double x);           // round-trippable binary64

inline std::ostream& operator<<(std::ostream& os, const QSqrt2& x) { return os << format_qsqrt2(x); }

template <class T>
std::string format_exact(const T& x) {
  if constexpr (std::same_as<T, double>) {
    return format_hexfloat(x);
  } else if constexpr (std::same_as<T, Rational>) {
    return format_rational(x);
  } else {
    return format_qsqrt2(x);
  }
}

template <class T>
T parse_scalar(std::string_view text) {
  if constexpr (std::same_as<T, double>) {
    return parse_qsqrt2(text).to_double();
  } else if constexpr (std::same_as<T, Rational>) {
    return parse_rational(text);
  } else {
    return parse_qsqrt2(text);
  }
}

}  // namespace shadowlab

namespace Eigen {

template <>
struct NumTraits<shadowlab::QSqrt2> : GenericNumTraits<shadowlab::QSqrt2> {
  using Real = shadowlab::QSqrt2;
  using NonInteger = shadowlab::QSqrt2;
  using Nested = shadowlab::QSqrt2;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 32,
    MulCost = 64
  };
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen

#include <boost/multiprecision/eigen.hpp>
