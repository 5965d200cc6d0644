#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "kummer/errors.hpp"

namespace kummer {

using Rational = mpq_class;
using Integer = mpz_class;

inline constexpr mpfr_prec_t kDefaultPrecision = 128;
inline constexpr mpfr_prec_t kMinPrecision = 64;

/// Three-valued comparison result. Unknown only comes out of approximate
/// comparisons whose enclosures straddle the boundary.
enum class TriBool { False, True, Unknown };

TriBool operator&&(TriBool a, TriBool b);
TriBool operator!(TriBool a);
std::string_view to_string(TriBool t);

/// RAII owner of an mpfr_t.
class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t prec = kDefaultPrecision);
  BigFloat(const BigFloat& other);
  BigFloat(BigFloat&& other) noexcept;
  BigFloat& operator=(const BigFloat& other);
  BigFloat& operator=(BigFloat&& other) noexcept;
  ~BigFloat();

  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }
  mpfr_prec_t precision() const { return mpfr_get_prec(value_); }

  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
  std::string to_string(int digits = 20) const;

 private:
  mpfr_t value_;
};

/// A scalar flowing through the engine: either an exact canonical rational,
/// or a binary float midpoint together with an absolute error radius such
/// that the true value lies in [mid - radius, mid + radius].
class NumericValue {
 public:
  struct Interval {
    BigFloat mid;
    BigFloat radius;
  };

  NumericValue() : rep_(Rational(0)) {}
  NumericValue(long v) : rep_(Rational(v)) {}  // NOLINT(google-explicit-constructor)
  NumericValue(int v) : rep_(Rational(v)) {}   // NOLINT(google-explicit-constructor)
  explicit NumericValue(Rational q);
  NumericValue(long num, long den);

  static NumericValue exact(Rational q) { return NumericValue(std::move(q)); }
  /// As exact() but skips canonicalization; `q` must already be canonical,
  /// as every result of mpq arithmetic is.
  static NumericValue exact_canonical(Rational q);
  /// Takes ownership of a midpoint/radius pair. The radius is rounded up to
  /// the radius working precision.
  static NumericValue approx(const BigFloat& mid, const BigFloat& radius);
  static NumericValue approx(double mid, double radius, mpfr_prec_t prec = kDefaultPrecision);
  /// Nearest float at `prec` bits with the conversion error as radius.
  static NumericValue to_approx(const NumericValue& v, mpfr_prec_t prec);

  bool is_exact() const { return std::holds_alternative<Rational>(rep_); }
  bool is_approx() const { return !is_exact(); }

  const Rational& exact_value() const;
  const Interval& interval() const;
  /// Precision of the approximate midpoint; 0 for exact values.
  mpfr_prec_t precision() const;

  /// Directed enclosure endpoints, rounded outward.
  BigFloat lower(mpfr_prec_t prec = kDefaultPrecision) const;
  BigFloat upper(mpfr_prec_t prec = kDefaultPrecision) const;
  /// Exact rational guaranteed >= every value in the enclosure; the value
  /// itself for exact inputs.
  Rational upper_rational() const;
  Rational lower_rational() const;

  double to_double() const;
  /// Natural log of the magnitude as a double; robust for values far
  /// outside the double exponent range.
  double log_abs() const;
  bool is_zero() const;

  /// Canonical machine form: "p/q" or "p" for exact values, "~mid+-radius"
  /// for approximate ones.
  std::string to_string() const;
  /// Decimal rendering with `digits` significant digits (no marker).
  std::string to_decimal(int digits) const;

  friend bool identical(const NumericValue& a, const NumericValue& b);

 private:
  std::variant<Rational, Interval> rep_;
};

NumericValue operator+(const NumericValue& x, const NumericValue& y);
NumericValue operator-(const NumericValue& x, const NumericValue& y);
NumericValue operator*(const NumericValue& x, const NumericValue& y);
NumericValue operator/(const NumericValue& x, const NumericValue& y);
NumericValue operator-(const NumericValue& x);

inline NumericValue add(const NumericValue& x, const NumericValue& y) { return x + y; }
inline NumericValue sub(const NumericValue& x, const NumericValue& y) { return x - y; }
inline NumericValue mul(const NumericValue& x, const NumericValue& y) { return x * y; }
inline NumericValue div(const NumericValue& x, const NumericValue& y) { return x / y; }

/// Sound >= : exact comparison for exact operands, interval comparison
/// otherwise.
TriBool cmp_ge(const NumericValue& x, const NumericValue& y);
TriBool cmp_gt(const NumericValue& x, const NumericValue& y);
inline TriBool cmp_le(const NumericValue& x, const NumericValue& y) { return cmp_ge(y, x); }
inline TriBool cmp_lt(const NumericValue& x, const NumericValue& y) { return cmp_gt(y, x); }
TriBool is_positive(const NumericValue& x);

/// True when the two enclosures intersect (exact equality for exact pairs).
bool overlaps(const NumericValue& x, const NumericValue& y);

// Transcendental and integer functions. Exact inputs are first rounded to
// `prec` bits; results are always approximate unless noted.
NumericValue ln(const NumericValue& x, mpfr_prec_t prec = kDefaultPrecision);
NumericValue log2(const NumericValue& x, mpfr_prec_t prec = kDefaultPrecision);
NumericValue exp(const NumericValue& x, mpfr_prec_t prec = kDefaultPrecision);
NumericValue sqrt(const NumericValue& x, mpfr_prec_t prec = kDefaultPrecision);
/// Exact for exact non-negative integer arguments.
NumericValue factorial(const NumericValue& x, mpfr_prec_t prec = kDefaultPrecision);
/// Exact when both operands are exact and the exponent is an integer.
NumericValue pow(const NumericValue& base, const NumericValue& exponent,
                 mpfr_prec_t prec = kDefaultPrecision);
NumericValue pi(mpfr_prec_t prec = kDefaultPrecision);
NumericValue euler_e(mpfr_prec_t prec = kDefaultPrecision);

/// Integer value of x when x is provably an integer representable in int64.
std::optional<std::int64_t> as_int64(const NumericValue& x);

/// Parses "p", "-p", "p/q" or a decimal literal such as "0.125".
Rational parse_rational(std::string_view text);
std::string print_rational(const Rational& q);

/// Simplest (smallest denominator) rational in the closed interval [lo, hi].
Rational simplest_rational_between(const Rational& lo, const Rational& hi);
Rational rational_from_double(double v);

/// Upper bound on numerator-plus-denominator bits for exact values.
/// Exceeding it raises ResourceError.
void set_exact_bit_budget(std::size_t bits);
std::size_t exact_bit_budget();

}  // namespace kummer
