#pragma once

// Numeric tower. All thermodynamic computations are generic over a scalar
// field S with two instantiations:
//
//   * double   — IEEE floating point, tolerance-based comparisons;
//   * Rational — exact arbitrary-precision rationals. Usable whenever the
//                Boltzmann weights exp(-beta*lambda) are themselves rational,
//                i.e. beta = 0, spectra identically zero, or weights given
//                directly as rational data.
//
// ScalarOps<S> centralizes every conversion and comparison so the rest of
// the library never mentions a concrete scalar. ExtScalar<S> adjoins +inf,
// which partition functions need (absorbing under + and *).

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <string>

#include "bratteli/error.hpp"

namespace bratteli {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// "p/q" (or plain "p") with the sign on the numerator.
std::string format_rational(const Rational& r);

// Accepts "p/q", plain integers, and decimal/scientific literals such as
// "0.125" or "25e-2", all converted exactly.
Rational parse_rational(const std::string& text);

// Shortest fixed formatting that round-trips: 17 significant digits.
std::string format_double(double v);

double parse_double(const std::string& text);

template <class S>
struct ScalarOps;

template <>
struct ScalarOps<double> {
  static constexpr bool kExact = false;

  static double zero() { return 0.0; }
  static double one() { return 1.0; }
  static double from_int(long long v) { return static_cast<double>(v); }
  static double from_bigint(const BigInt& v) { return v.convert_to<double>(); }
  static double from_rational(const Rational& r) { return r.convert_to<double>(); }
  static double to_double(double v) { return v; }
  static double absval(double v) { return std::fabs(v); }

  // Boltzmann factor exp(-beta * lambda).
  static double boltzmann(double beta, double lambda) { return std::exp(-beta * lambda); }

  static bool equal_within(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

  // 53-bit uniform dyadic in [0,1) from one 64-bit word (documented mapping:
  // top 53 bits scaled by 2^-53; identical across platforms).
  static double unit_from_bits(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
  }

  static std::string str(double v) { return format_double(v); }
  static double parse(const std::string& text) { return parse_double(text); }
};

template <>
struct ScalarOps<Rational> {
  static constexpr bool kExact = true;

  static Rational zero() { return Rational(0); }
  static Rational one() { return Rational(1); }
  static Rational from_int(long long v) { return Rational(v); }
  static Rational from_bigint(const BigInt& v) { return Rational(v); }
  static Rational from_rational(const Rational& r) { return r; }
  static double to_double(const Rational& v) { return v.convert_to<double>(); }
  static Rational absval(const Rational& v) { return v < 0 ? Rational(-v) : v; }

  // exp(-beta*lambda) is rational only in the trivial case beta*lambda = 0;
  // anything else cannot live in exact mode.
  static Rational boltzmann(double beta, double lambda) {
    if (beta == 0.0 || lambda == 0.0) return Rational(1);
    fail(Errc::NumericModeConflict,
         "exp(-beta*lambda) with beta=" + format_double(beta) + ", lambda=" +
             format_double(lambda) + " is not rational; use float mode");
  }

  static bool equal_within(const Rational& a, const Rational& b, double /*tol*/) {
    return a == b;
  }

  static Rational unit_from_bits(std::uint64_t bits) {
    return Rational(BigInt(bits >> 11), BigInt(1) << 53);
  }

  static std::string str(const Rational& v) { return format_rational(v); }
  static Rational parse(const std::string& text) { return parse_rational(text); }
};

// A value in [0, +inf]; partition functions live in (0, +inf] but sums are
// accumulated from zero. +inf absorbs under both + and * (weights are
// strictly positive, so inf*0 never arises).
template <class S>
class ExtScalar {
 public:
  ExtScalar() : value_(ScalarOps<S>::zero()) {}
  explicit ExtScalar(S v) : value_(std::move(v)) {}

  static ExtScalar infinity() {
    ExtScalar e;
    e.infinite_ = true;
    return e;
  }

  bool infinite() const { return infinite_; }

  // The finite value; calling this on +inf is the canonical "needed a
  // trace-class operator but the partition function diverges" failure.
  const S& finite() const {
    if (infinite_) fail(Errc::InfinitePartitionFunction, "value is +inf");
    return value_;
  }

  double to_double() const {
    return infinite_ ? std::numeric_limits<double>::infinity()
                     : ScalarOps<S>::to_double(value_);
  }

  ExtScalar& operator+=(const ExtScalar& o) {
    if (o.infinite_) infinite_ = true;
    if (!infinite_) value_ += o.value_;
    return *this;
  }

  ExtScalar& operator*=(const ExtScalar& o) {
    if (o.infinite_) infinite_ = true;
    if (!infinite_) value_ *= o.value_;
    return *this;
  }

  friend ExtScalar operator+(ExtScalar a, const ExtScalar& b) { return a += b; }
  friend ExtScalar operator*(ExtScalar a, const ExtScalar& b) { return a *= b; }

  friend bool operator==(const ExtScalar& a, const ExtScalar& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }

 private:
  bool infinite_ = false;
  S value_;
};

}  // namespace bratteli
