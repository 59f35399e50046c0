#include "shadowlab/scalar.hpp"

#include "shadowlab/error.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace shadowlab {

int QSqrt2::sign() const {
  const int sa = a_.sign();
  const int sb = b_.sign();
  if (sb == 0) return sa;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  // Opposite signs: compare a^2 with 2 b^2.
  const Rational lhs = a_ * a_;
  const Rational rhs = 2 * b_ * b_;
  if (lhs == rhs) return 0;  // impossible for rational a, b != 0, kept for completeness
  return lhs > rhs ? sa : sb;
}

double QSqrt2::to_double() const {
  return a_.convert_to<double>() + b_.convert_to<double>() * 1.41421356237309504880;
}

QSqrt2& QSqrt2::operator/=(const QSqrt2& o) {
  const Rational norm = o.a_ * o.a_ - 2 * o.b_ * o.b_;
  if (norm == 0) throw std::domain_error("QSqrt2 division by zero");
  // (a + b r)(c - d r) / (c^2 - 2 d^2)
  QSqrt2 conj(o.a_, -o.b_);
  *this *= conj;
  a_ /= norm;
  b_ /= norm;
  return *this;
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) {
    for (char c : text)
      if (!std::isspace(static_cast<unsigned char>(c))) s_.push_back(c);
  }

  QSqrt2 parse() {
    if (s_.empty()) fail("empty number");
    QSqrt2 total;
    bool first = true;
    while (pos_ < s_.size() || first) {
      int sign = 1;
      if (!first) {
        if (s_[pos_] == '+') {
          ++pos_;
        } else if (s_[pos_] == '-') {
          sign = -1;
          ++pos_;
        } else {
          fail("expected '+' or '-'");
        }
      } else if (peek() == '-') {
        sign = -1;
        ++pos_;
      } else if (peek() == '+') {
        ++pos_;
      }
      first = false;
      QSqrt2 term = parse_term();
      if (sign < 0) term = -term;
      total += term;
    }
    return total;
  }

 private:
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorKind::Parse, "cannot parse number '" + s_ + "': " + why);
  }

  bool consume(std::string_view word) {
    if (s_.compare(pos_, word.size(), word) == 0) {
      pos_ += word.size();
      return true;
    }
    return false;
  }

  QSqrt2 parse_term() {
    if (consume("sqrt2")) return QSqrt2::sqrt2();
    Rational value = parse_atom();
    if (consume("*sqrt2")) return QSqrt2(Rational(0), value);
    return QSqrt2(value);
  }

  Rational parse_atom() {
    if (s_.compare(pos_, 2, "0x") == 0 || s_.compare(pos_, 2, "0X") == 0) return parse_hex();
    const std::string digits = take_digits();
    if (digits.empty()) fail("expected digits");
    Rational value(digits);
    if (peek() == '.') {
      ++pos_;
      const std::string frac = take_digits();
      if (!frac.empty()) {
        Rational scale(1);
        for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
        value += Rational(frac) / scale;
      }
    }
    if (peek() == 'e' || peek() == 'E') {
      ++pos_;
      int esign = 1;
      if (peek() == '-') {
        esign = -1;
        ++pos_;
      } else if (peek() == '+') {
        ++pos_;
      }
      const std::string exp = take_digits();
      if (exp.empty() || exp.size() > 6) fail("bad exponent");
      Rational scale(1);
      for (int i = 0; i < std::stoi(exp); ++i) scale *= 10;
      value = esign > 0 ? value * scale : value / scale;
    }
    if (peek() == '/') {
      ++pos_;
      const std::string den = take_digits();
      if (den.empty()) fail("expected denominator");
      Rational d(den);
      if (d == 0) fail("zero denominator");
      value /= d;
    }
    return value;
  }

  Rational parse_hex() {
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("bad hex float");
    pos_ += static_cast<std::size_t>(end - begin);
    if (!std::isfinite(v)) fail("non-finite value");
    return Rational(v);
  }

  std::string take_digits() {
    std::string out;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) out.push_back(s_[pos_++]);
    return out;
  }

  std::string s_;
  std::size_t pos_ = 0;
};

}  // namespace

QSqrt2 parse_qsqrt2(std::string_view text) { return Parser(text).parse(); }

Rational parse_rational(std::string_view text) {
  const QSqrt2 v = parse_qsqrt2(text);
  if (!v.is_rational())
    throw Error(ErrorKind::Parse, "number '" + std::string(text) + "' is not rational");
  return v.rational_part();
}

std::string format_rational(const Rational& x) { return x.str(); }

std::string format_qsqrt2(const QSqrt2& x) {
  const Rational& a = x.rational_part();
  const Rational& b = x.sqrt2_part();
  if (b == 0) return format_rational(a);
  std::string out;
  if (a != 0) out = format_rational(a) + (b > 0 ? "+" : "");
  out += format_rational(b) + "*sqrt2";
  return out;
}

std::string format_hexfloat(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", x);
  return buf;
}

}  // namespace shadowlab
