#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

#include "umt/errors.hpp"

namespace umt {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

// Integer extended with +infinity.  Used for common-prefix lengths and for
// exponents of lambda-power distances, where +infinity encodes distance zero.
struct ExpInt {
  bool infinite = false;
  std::int64_t value = 0;

  static ExpInt inf() { return ExpInt{true, 0}; }
  static ExpInt of(std::int64_t v) { return ExpInt{false, v}; }

  friend bool operator==(const ExpInt& a, const ExpInt& b) {
    return a.infinite == b.infinite && (a.infinite || a.value == b.value);
  }
  friend bool operator!=(const ExpInt& a, const ExpInt& b) { return !(a == b); }
};

inline ExpInt operator+(const ExpInt& a, const ExpInt& b) {
  if (a.infinite || b.infinite) return ExpInt::inf();
  return ExpInt::of(a.value + b.value);
}

// a - b with b required finite (the flattening exponent never subtracts inf).
inline ExpInt operator-(const ExpInt& a, const ExpInt& b) {
  if (b.infinite) throw InvalidParams("cannot subtract an infinite prefix length");
  if (a.infinite) return ExpInt::inf();
  return ExpInt::of(a.value - b.value);
}

// A distance of the exact form lambda^e with e integer or +infinity
// (+infinity <=> the distance is zero).  Since 0 < lambda < 1, distances are
// ordered by the reversed order on exponents; products and quotients of
// distances are sums and differences of exponents.  No floating point enters.
struct ExactDistance {
  ExpInt exponent;

  static ExactDistance zero() { return ExactDistance{ExpInt::inf()}; }
  static ExactDistance power(std::int64_t e) { return ExactDistance{ExpInt::of(e)}; }
  bool is_zero() const { return exponent.infinite; }

  friend bool operator==(const ExactDistance& a, const ExactDistance& b) {
    return a.exponent == b.exponent;
  }
  friend bool operator!=(const ExactDistance& a, const ExactDistance& b) {
    return !(a == b);
  }
  // value comparison: zero is smallest, otherwise larger exponent = smaller value
  friend bool operator<(const ExactDistance& a, const ExactDistance& b) {
    if (a.is_zero()) return !b.is_zero();
    if (b.is_zero()) return false;
    return a.exponent.value > b.exponent.value;
  }
  friend bool operator<=(const ExactDistance& a, const ExactDistance& b) {
    return a < b || a == b;
  }

  friend ExactDistance operator*(const ExactDistance& a, const ExactDistance& b) {
    return ExactDistance{a.exponent + b.exponent};
  }
  friend ExactDistance operator/(const ExactDistance& a, const ExactDistance& b) {
    if (b.is_zero()) throw ZeroDenominator();
    return ExactDistance{a.exponent - b.exponent};
  }
};

// lambda^e as an exact rational; e may be negative.
inline BigRational rational_pow(const BigRational& lambda, std::int64_t e) {
  BigRational r(1);
  BigRational base = e >= 0 ? lambda : BigRational(1) / lambda;
  std::int64_t n = e >= 0 ? e : -e;
  for (std::int64_t i = 0; i < n; ++i) r *= base;
  return r;
}

inline double rational_to_double(const BigRational& r) {
  return r.convert_to<double>();
}

// Every finite double is a rational; the conversion is exact.
inline BigRational rational_from_double(double d) { return BigRational(d); }

inline double exact_distance_value(const ExactDistance& d, const BigRational& lambda) {
  if (d.is_zero()) return 0.0;
  return rational_to_double(rational_pow(lambda, d.exponent.value));
}

inline BigRational exact_distance_rational(const ExactDistance& d,
                                           const BigRational& lambda) {
  if (d.is_zero()) return BigRational(0);
  return rational_pow(lambda, d.exponent.value);
}

// Parses "p/q" or "p" into an exact rational.
inline BigRational parse_rational(const std::string& text) {
  auto digits = [](const std::string& part) {
    std::size_t at = part.size() > 0 && (part[0] == '-' || part[0] == '+') ? 1 : 0;
    if (at == part.size()) return false;
    for (; at < part.size(); ++at)
      if (part[at] < '0' || part[at] > '9') return false;
    return true;
  };
  auto slash = text.find('/');
  std::string np = text.substr(0, slash);
  if (!digits(np) || (slash != std::string::npos && !digits(text.substr(slash + 1))))
    throw ParseError("not a rational: \"" + text + "\"");
  try {
    if (slash == std::string::npos) return BigRational(BigInt(text));
    BigInt num(np);
    BigInt den(text.substr(slash + 1));
    if (den == 0) throw ParseError("rational with zero denominator: " + text);
    return BigRational(num, den);
  } catch (const Error&) {
    throw;
  } catch (const std::runtime_error&) {
    throw ParseError("not a rational: \"" + text + "\"");
  }
}

inline std::string rational_to_string(const BigRational& r) {
  BigInt num = boost::multiprecision::numerator(r);
  BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

}  // namespace umt
