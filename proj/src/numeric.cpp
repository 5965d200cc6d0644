#include "kummer/numeric.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>

namespace kummer {

namespace {

constexpr mpfr_prec_t kRadiusPrecision = 64;

std::atomic<std::size_t> g_exact_bit_budget{std::size_t{1} << 28};

using Interval = NumericValue::Interval;

void check_budget(const Rational& q) {
  const std::size_t bits = mpz_sizeinbase(q.get_num_mpz_t(), 2) +
                           mpz_sizeinbase(q.get_den_mpz_t(), 2);
  if (bits > g_exact_bit_budget.load(std::memory_order_relaxed)) {
    throw ResourceError("exact value exceeds the precision budget (" + std::to_string(bits) +
                        " bits)");
  }
}

BigFloat zero_radius() {
  BigFloat r(kRadiusPrecision);
  mpfr_set_zero(r.get(), 1);
  return r;
}

void check_finite(const BigFloat& v) {
  if (mpfr_nan_p(v.get())) throw DomainError("floating-point result is undefined");
  if (mpfr_inf_p(v.get())) throw ResourceError("floating-point result overflowed");
}

// radius += ulp(mid)
void add_ulp(BigFloat& radius, const BigFloat& mid) {
  BigFloat u(kRadiusPrecision);
  if (mpfr_zero_p(mid.get())) {
    mpfr_set_ui_2exp(u.get(), 1, mpfr_get_emin(), MPFR_RNDU);
  } else {
    mpfr_set_ui_2exp(u.get(), 1, mpfr_get_exp(mid.get()) - mpfr_get_prec(mid.get()), MPFR_RNDU);
  }
  mpfr_add(radius.get(), radius.get(), u.get(), MPFR_RNDU);
}

Interval interval_from_rational(const Rational& q, mpfr_prec_t prec) {
  Interval out{BigFloat(prec), zero_radius()};
  if (mpfr_set_q(out.mid.get(), q.get_mpq_t(), MPFR_RNDN) != 0) add_ulp(out.radius, out.mid);
  check_finite(out.mid);
  return out;
}

Interval as_interval(const NumericValue& v, mpfr_prec_t prec) {
  if (v.is_exact()) return interval_from_rational(v.exact_value(), prec);
  return v.interval();
}

mpfr_prec_t working_precision(const NumericValue& x, const NumericValue& y) {
  const mpfr_prec_t p = std::max(x.precision(), y.precision());
  return p == 0 ? kDefaultPrecision : p;
}

BigFloat abs_of(const BigFloat& v) {
  BigFloat out(v.precision());
  mpfr_abs(out.get(), v.get(), MPFR_RNDN);
  return out;
}

BigFloat lower_of(const Interval& i, mpfr_prec_t prec) {
  BigFloat lo(std::max(prec, i.mid.precision()));
  mpfr_sub(lo.get(), i.mid.get(), i.radius.get(), MPFR_RNDD);
  return lo;
}

BigFloat upper_of(const Interval& i, mpfr_prec_t prec) {
  BigFloat hi(std::max(prec, i.mid.precision()));
  mpfr_add(hi.get(), i.mid.get(), i.radius.get(), MPFR_RNDU);
  return hi;
}

Interval interval_add(const Interval& a, const Interval& b, mpfr_prec_t prec, bool negate_b) {
  Interval out{BigFloat(prec), zero_radius()};
  const int t = negate_b ? mpfr_sub(out.mid.get(), a.mid.get(), b.mid.get(), MPFR_RNDN)
                         : mpfr_add(out.mid.get(), a.mid.get(), b.mid.get(), MPFR_RNDN);
  check_finite(out.mid);
  mpfr_add(out.radius.get(), a.radius.get(), b.radius.get(), MPFR_RNDU);
  if (t != 0) add_ulp(out.radius, out.mid);
  return out;
}

Interval interval_mul(const Interval& a, const Interval& b, mpfr_prec_t prec) {
  Interval out{BigFloat(prec), zero_radius()};
  const int t = mpfr_mul(out.mid.get(), a.mid.get(), b.mid.get(), MPFR_RNDN);
  check_finite(out.mid);
  BigFloat term(kRadiusPrecision);
  const BigFloat abs_a = abs_of(a.mid);
  const BigFloat abs_b = abs_of(b.mid);
  mpfr_mul(term.get(), abs_a.get(), b.radius.get(), MPFR_RNDU);
  mpfr_add(out.radius.get(), out.radius.get(), term.get(), MPFR_RNDU);
  mpfr_mul(term.get(), abs_b.get(), a.radius.get(), MPFR_RNDU);
  mpfr_add(out.radius.get(), out.radius.get(), term.get(), MPFR_RNDU);
  mpfr_mul(term.get(), a.radius.get(), b.radius.get(), MPFR_RNDU);
  mpfr_add(out.radius.get(), out.radius.get(), term.get(), MPFR_RNDU);
  if (t != 0) add_ulp(out.radius, out.mid);
  return out;
}

Interval interval_div(const Interval& a, const Interval& b, mpfr_prec_t prec) {
  const BigFloat abs_b = abs_of(b.mid);
  if (mpfr_cmp(abs_b.get(), b.radius.get()) <= 0) {
    throw DomainError("division by a value that is not provably nonzero");
  }
  Interval out{BigFloat(prec), zero_radius()};
  const int t = mpfr_div(out.mid.get(), a.mid.get(), b.mid.get(), MPFR_RNDN);
  check_finite(out.mid);
  // |x/y - a/b| <= (|a| rb + |b| ra) / (|b| (|b| - rb))
  BigFloat num(kRadiusPrecision);
  BigFloat term(kRadiusPrecision);
  const BigFloat abs_a = abs_of(a.mid);
  mpfr_mul(num.get(), abs_a.get(), b.radius.get(), MPFR_RNDU);
  mpfr_mul(term.get(), abs_b.get(), a.radius.get(), MPFR_RNDU);
  mpfr_add(num.get(), num.get(), term.get(), MPFR_RNDU);
  if (!mpfr_zero_p(num.get())) {
    BigFloat den(kRadiusPrecision);
    mpfr_sub(den.get(), abs_b.get(), b.radius.get(), MPFR_RNDD);
    mpfr_mul(den.get(), den.get(), abs_b.get(), MPFR_RNDD);
    mpfr_div(out.radius.get(), num.get(), den.get(), MPFR_RNDU);
  }
  if (t != 0) add_ulp(out.radius, out.mid);
  return out;
}

// Bound used for comparisons: exact rational or a directed float.
struct Bound {
  const Rational* q = nullptr;
  BigFloat f{kRadiusPrecision};
};

int compare_bounds(const Bound& a, const Bound& b) {
  if (a.q != nullptr && b.q != nullptr) return cmp(*a.q, *b.q);
  if (a.q == nullptr && b.q == nullptr) return mpfr_cmp(a.f.get(), b.f.get());
  if (a.q == nullptr) return mpfr_cmp_q(a.f.get(), b.q->get_mpq_t());
  return -mpfr_cmp_q(b.f.get(), a.q->get_mpq_t());
}

Bound lower_bound(const NumericValue& v) {
  Bound b;
  if (v.is_exact()) {
    b.q = &v.exact_value();
  } else {
    b.f = lower_of(v.interval(), kRadiusPrecision);
  }
  return b;
}

Bound upper_bound(const NumericValue& v) {
  Bound b;
  if (v.is_exact()) {
    b.q = &v.exact_value();
  } else {
    b.f = upper_of(v.interval(), kRadiusPrecision);
  }
  return b;
}

Rational exact_integer_power(const Rational& q, std::int64_t k) {
  if (k == 0) return Rational(1);
  if (q == 0) {
    if (k < 0) throw DomainError("division by zero in negative power");
    return Rational(0);
  }
  const std::uint64_t e = k < 0 ? static_cast<std::uint64_t>(-(k + 1)) + 1 : static_cast<std::uint64_t>(k);
  const double est = static_cast<double>(e) *
                     static_cast<double>(mpz_sizeinbase(q.get_num_mpz_t(), 2) +
                                         mpz_sizeinbase(q.get_den_mpz_t(), 2));
  if (est > static_cast<double>(g_exact_bit_budget.load(std::memory_order_relaxed)) + 64.0) {
    throw ResourceError("exact power exceeds the precision budget");
  }
  Integer num;
  Integer den;
  mpz_pow_ui(num.get_mpz_t(), q.get_num_mpz_t(), static_cast<unsigned long>(e));
  mpz_pow_ui(den.get_mpz_t(), q.get_den_mpz_t(), static_cast<unsigned long>(e));
  Rational out = k < 0 ? Rational(den, num) : Rational(num, den);
  out.canonicalize();
  check_budget(out);
  return out;
}

Interval interval_integer_power(const Interval& x, std::int64_t k, mpfr_prec_t prec) {
  if (k < 0) {
    Interval one{BigFloat(prec), zero_radius()};
    mpfr_set_ui(one.mid.get(), 1, MPFR_RNDN);
    return interval_div(one, interval_integer_power(x, -k, prec), prec);
  }
  Interval out{BigFloat(prec), zero_radius()};
  const int t = mpfr_pow_si(out.mid.get(), x.mid.get(), static_cast<long>(k), MPFR_RNDN);
  check_finite(out.mid);
  if (k == 0) return out;
  // |x^k - v^k| <= (|v| + r)^k - |v|^k
  BigFloat hi(prec);
  BigFloat lo(prec);
  const BigFloat abs_v = abs_of(x.mid);
  mpfr_add(hi.get(), abs_v.get(), x.radius.get(), MPFR_RNDU);
  mpfr_pow_si(hi.get(), hi.get(), static_cast<long>(k), MPFR_RNDU);
  mpfr_pow_si(lo.get(), abs_v.get(), static_cast<long>(k), MPFR_RNDD);
  mpfr_sub(out.radius.get(), hi.get(), lo.get(), MPFR_RNDU);
  if (t != 0) add_ulp(out.radius, out.mid);
  return out;
}

// Enclosure of x required to be strictly positive by a named function.
Interval positive_interval(const NumericValue& x, mpfr_prec_t prec, const char* what,
                           BigFloat& lo_out) {
  if (x.is_exact() && sgn(x.exact_value()) <= 0) {
    throw DomainError(std::string(what) + " of a non-positive value");
  }
  Interval i = as_interval(x, prec);
  lo_out = lower_of(i, kRadiusPrecision);
  if (mpfr_sgn(lo_out.get()) <= 0) {
    throw DomainError(std::string(what) + " of a value that is not provably positive");
  }
  return i;
}

mpfr_prec_t unary_precision(const NumericValue& x, mpfr_prec_t prec) {
  return std::max(prec, x.precision());
}

}  // namespace

// ---------------------------------------------------------------------------

TriBool operator&&(TriBool a, TriBool b) {
  if (a == TriBool::False || b == TriBool::False) return TriBool::False;
  if (a == TriBool::True && b == TriBool::True) return TriBool::True;
  return TriBool::Unknown;
}

TriBool operator!(TriBool a) {
  switch (a) {
    case TriBool::True: return TriBool::False;
    case TriBool::False: return TriBool::True;
    default: return TriBool::Unknown;
  }
}

std::string_view to_string(TriBool t) {
  switch (t) {
    case TriBool::True: return "true";
    case TriBool::False: return "false";
    default: return "unknown";
  }
}

BigFloat::BigFloat(mpfr_prec_t prec) {
  mpfr_init2(value_, prec);
  mpfr_set_zero(value_, 1);
}

BigFloat::BigFloat(const BigFloat& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& other) noexcept {
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_swap(value_, other.value_);
}

BigFloat& BigFloat::operator=(const BigFloat& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept {
  if (this != &other) mpfr_swap(value_, other.value_);
  return *this;
}

BigFloat::~BigFloat() { mpfr_clear(value_); }

std::string BigFloat::to_string(int digits) const {
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*Rg", digits, value_);
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

// ---------------------------------------------------------------------------

NumericValue::NumericValue(Rational q) : rep_(std::move(q)) {
  auto& r = std::get<Rational>(rep_);
  r.canonicalize();
  check_budget(r);
}

NumericValue NumericValue::exact_canonical(Rational q) {
  check_budget(q);
  NumericValue out;
  out.rep_ = std::move(q);
  return out;
}

NumericValue::NumericValue(long num, long den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  rep_ = std::move(q);
}

NumericValue NumericValue::approx(const BigFloat& mid, const BigFloat& radius) {
  if (mpfr_sgn(radius.get()) < 0) throw ArgumentError("negative error radius");
  check_finite(mid);
  NumericValue out;
  Interval i{mid, BigFloat(kRadiusPrecision)};
  mpfr_set(i.radius.get(), radius.get(), MPFR_RNDU);
  out.rep_ = std::move(i);
  return out;
}

NumericValue NumericValue::approx(double mid, double radius, mpfr_prec_t prec) {
  BigFloat m(prec);
  mpfr_set_d(m.get(), mid, MPFR_RNDN);
  BigFloat r(kRadiusPrecision);
  mpfr_set_d(r.get(), radius, MPFR_RNDU);
  return approx(m, r);
}

NumericValue NumericValue::to_approx(const NumericValue& v, mpfr_prec_t prec) {
  if (v.is_approx()) return v;
  NumericValue out;
  out.rep_ = interval_from_rational(v.exact_value(), prec);
  return out;
}

const Rational& NumericValue::exact_value() const {
  if (!is_exact()) throw ArgumentError("value is not exact");
  return std::get<Rational>(rep_);
}

const NumericValue::Interval& NumericValue::interval() const {
  if (is_exact()) throw ArgumentError("value is exact");
  return std::get<Interval>(rep_);
}

mpfr_prec_t NumericValue::precision() const {
  return is_exact() ? 0 : std::get<Interval>(rep_).mid.precision();
}

BigFloat NumericValue::lower(mpfr_prec_t prec) const {
  if (is_exact()) {
    BigFloat lo(prec);
    mpfr_set_q(lo.get(), exact_value().get_mpq_t(), MPFR_RNDD);
    return lo;
  }
  return lower_of(interval(), prec);
}

BigFloat NumericValue::upper(mpfr_prec_t prec) const {
  if (is_exact()) {
    BigFloat hi(prec);
    mpfr_set_q(hi.get(), exact_value().get_mpq_t(), MPFR_RNDU);
    return hi;
  }
  return upper_of(interval(), prec);
}

Rational NumericValue::upper_rational() const {
  if (is_exact()) return exact_value();
  const BigFloat hi = upper(precision());
  Rational q;
  mpfr_get_q(q.get_mpq_t(), hi.get());
  return q;
}

Rational NumericValue::lower_rational() const {
  if (is_exact()) return exact_value();
  const BigFloat lo = lower(precision());
  Rational q;
  mpfr_get_q(q.get_mpq_t(), lo.get());
  return q;
}

double NumericValue::to_double() const {
  if (is_exact()) return exact_value().get_d();
  return interval().mid.to_double();
}

double NumericValue::log_abs() const {
  if (is_zero()) return -HUGE_VAL;
  constexpr double kLn2 = 0.69314718055994530942;
  if (is_exact()) {
    const Rational& q = exact_value();
    long en = 0;
    long ed = 0;
    const double mn = mpz_get_d_2exp(&en, q.get_num_mpz_t());
    const double md = mpz_get_d_2exp(&ed, q.get_den_mpz_t());
    return std::log(std::fabs(mn)) - std::log(md) + static_cast<double>(en - ed) * kLn2;
  }
  long e = 0;
  const double m = mpfr_get_d_2exp(&e, interval().mid.get(), MPFR_RNDN);
  return std::log(std::fabs(m)) + static_cast<double>(e) * kLn2;
}

bool NumericValue::is_zero() const {
  if (is_exact()) return sgn(exact_value()) == 0;
  return mpfr_zero_p(interval().mid.get()) != 0;
}

std::string NumericValue::to_string() const {
  if (is_exact()) return print_rational(exact_value());
  const auto& i = interval();
  return "~" + i.mid.to_string(20) + "+-" + i.radius.to_string(3);
}

std::string NumericValue::to_decimal(int digits) const {
  if (is_exact()) {
    const auto bits = static_cast<mpfr_prec_t>(digits * 3.33) + 16;
    BigFloat f(bits);
    mpfr_set_q(f.get(), exact_value().get_mpq_t(), MPFR_RNDN);
    return f.to_string(digits);
  }
  return interval().mid.to_string(digits);
}

bool identical(const NumericValue& a, const NumericValue& b) {
  if (a.is_exact() != b.is_exact()) return false;
  if (a.is_exact()) return a.exact_value() == b.exact_value();
  const auto& ia = a.interval();
  const auto& ib = b.interval();
  return mpfr_equal_p(ia.mid.get(), ib.mid.get()) && mpfr_equal_p(ia.radius.get(), ib.radius.get());
}

// ---------------------------------------------------------------------------

NumericValue operator+(const NumericValue& x, const NumericValue& y) {
  if (x.is_exact() && y.is_exact()) return NumericValue::exact_canonical(x.exact_value() + y.exact_value());
  const mpfr_prec_t p = working_precision(x, y);
  const Interval r = interval_add(as_interval(x, p), as_interval(y, p), p, false);
  return NumericValue::approx(r.mid, r.radius);
}

NumericValue operator-(const NumericValue& x, const NumericValue& y) {
  if (x.is_exact() && y.is_exact()) return NumericValue::exact_canonical(x.exact_value() - y.exact_value());
  const mpfr_prec_t p = working_precision(x, y);
  const Interval r = interval_add(as_interval(x, p), as_interval(y, p), p, true);
  return NumericValue::approx(r.mid, r.radius);
}

NumericValue operator*(const NumericValue& x, const NumericValue& y) {
  if (x.is_exact() && y.is_exact()) return NumericValue::exact_canonical(x.exact_value() * y.exact_value());
  const mpfr_prec_t p = working_precision(x, y);
  const Interval r = interval_mul(as_interval(x, p), as_interval(y, p), p);
  return NumericValue::approx(r.mid, r.radius);
}

NumericValue operator/(const NumericValue& x, const NumericValue& y) {
  if (y.is_exact() && sgn(y.exact_value()) == 0) throw DomainError("division by zero");
  if (x.is_exact() && y.is_exact()) return NumericValue::exact_canonical(x.exact_value() / y.exact_value());
  const mpfr_prec_t p = working_precision(x, y);
  const Interval r = interval_div(as_interval(x, p), as_interval(y, p), p);
  return NumericValue::approx(r.mid, r.radius);
}

NumericValue operator-(const NumericValue& x) {
  if (x.is_exact()) return NumericValue::exact_canonical(-x.exact_value());
  const auto& i = x.interval();
  BigFloat m(i.mid.precision());
  mpfr_neg(m.get(), i.mid.get(), MPFR_RNDN);
  return NumericValue::approx(m, i.radius);
}

TriBool cmp_ge(const NumericValue& x, const NumericValue& y) {
  if (x.is_exact() && y.is_exact()) {
    return x.exact_value() >= y.exact_value() ? TriBool::True : TriBool::False;
  }
  if (compare_bounds(lower_bound(x), upper_bound(y)) >= 0) return TriBool::True;
  if (compare_bounds(upper_bound(x), lower_bound(y)) < 0) return TriBool::False;
  return TriBool::Unknown;
}

TriBool cmp_gt(const NumericValue& x, const NumericValue& y) {
  if (x.is_exact() && y.is_exact()) {
    return x.exact_value() > y.exact_value() ? TriBool::True : TriBool::False;
  }
  if (compare_bounds(lower_bound(x), upper_bound(y)) > 0) return TriBool::True;
  if (compare_bounds(upper_bound(x), lower_bound(y)) <= 0) return TriBool::False;
  return TriBool::Unknown;
}

TriBool is_positive(const NumericValue& x) { return cmp_gt(x, NumericValue(0)); }

bool overlaps(const NumericValue& x, const NumericValue& y) {
  if (x.is_exact() && y.is_exact()) return x.exact_value() == y.exact_value();
  return compare_bounds(lower_bound(x), upper_bound(y)) <= 0 &&
         compare_bounds(lower_bound(y), upper_bound(x)) <= 0;
}

// ---------------------------------------------------------------------------

NumericValue ln(const NumericValue& x, mpfr_prec_t prec) {
  const mpfr_prec_t p = unary_precision(x, prec);
  BigFloat lo(kRadiusPrecision);
  const Interval i = positive_interval(x, p, "ln", lo);
  BigFloat mid(p);
  const int t = mpfr_log(mid.get(), i.mid.get(), MPFR_RNDN);
  BigFloat rad = zero_radius();
  if (!mpfr_zero_p(i.radius.get())) mpfr_div(rad.get(), i.radius.get(), lo.get(), MPFR_RNDU);
  if (t != 0) add_ulp(rad, mid);
  return NumericValue::approx(mid, rad);
}

NumericValue log2(const NumericValue& x, mpfr_prec_t prec) {
  const mpfr_prec_t p = unary_precision(x, prec);
  BigFloat lo(kRadiusPrecision);
  const Interval i = positive_interval(x, p, "log2", lo);
  BigFloat mid(p);
  const int t = mpfr_log2(mid.get(), i.mid.get(), MPFR_RNDN);
  BigFloat rad = zero_radius();
  if (!mpfr_zero_p(i.radius.get())) {
    // 1/ln 2 < 1.4427
    mpfr_div(rad.get(), i.radius.get(), lo.get(), MPFR_RNDU);
    mpfr_mul_d(rad.get(), rad.get(), 1.4427, MPFR_RNDU);
  }
  if (t != 0) add_ulp(rad, mid);
  return NumericValue::approx(mid, rad);
}

NumericValue exp(const NumericValue& x, mpfr_prec_t prec) {
  const mpfr_prec_t p = unary_precision(x, prec);
  const Interval i = as_interval(x, p);
  BigFloat mid(p);
  const int t = mpfr_exp(mid.get(), i.mid.get(), MPFR_RNDN);
  check_finite(mid);
  BigFloat rad = zero_radius();
  if (!mpfr_zero_p(i.radius.get())) {
    // exp is convex, so the upward deviation dominates.
    BigFloat hi(p);
    BigFloat lo(p);
    mpfr_add(hi.get(), i.mid.get(), i.radius.get(), MPFR_RNDU);
    mpfr_exp(hi.get(), hi.get(), MPFR_RNDU);
    mpfr_exp(lo.get(), i.mid.get(), MPFR_RNDD);
    mpfr_sub(rad.get(), hi.get(), lo.get(), MPFR_RNDU);
  }
  if (t != 0) add_ulp(rad, mid);
  return NumericValue::approx(mid, rad);
}

NumericValue sqrt(const NumericValue& x, mpfr_prec_t prec) {
  if (x.is_exact() && sgn(x.exact_value()) < 0) throw DomainError("sqrt of a negative value");
  const mpfr_prec_t p = unary_precision(x, prec);
  const Interval i = as_interval(x, p);
  const BigFloat lo = lower_of(i, kRadiusPrecision);
  if (mpfr_sgn(lo.get()) < 0) throw DomainError("sqrt of a value that is not provably non-negative");
  BigFloat mid(p);
  const int t = mpfr_sqrt(mid.get(), i.mid.get(), MPFR_RNDN);
  BigFloat rad = zero_radius();
  if (!mpfr_zero_p(i.radius.get())) {
    if (mpfr_sgn(i.mid.get()) > 0) {
      // |sqrt(x) - sqrt(v)| = |x - v| / (sqrt(x) + sqrt(v)) <= r / sqrt(v)
      BigFloat root(kRadiusPrecision);
      mpfr_sqrt(root.get(), i.mid.get(), MPFR_RNDD);
      mpfr_div(rad.get(), i.radius.get(), root.get(), MPFR_RNDU);
    } else {
      mpfr_sqrt(rad.get(), i.radius.get(), MPFR_RNDU);
    }
  }
  if (t != 0) add_ulp(rad, mid);
  return NumericValue::approx(mid, rad);
}

NumericValue factorial(const NumericValue& x, mpfr_prec_t prec) {
  const auto k = as_int64(x);
  if (!k) throw DomainError("factorial of a non-integer argument");
  if (*k < 0) throw DomainError("factorial of a negative integer");
  if (x.is_exact()) {
    const double n = static_cast<double>(*k);
    const double bits = n > 1 ? n * std::log2(n) : 1.0;
    if (bits > static_cast<double>(g_exact_bit_budget.load(std::memory_order_relaxed))) {
      throw ResourceError("exact factorial exceeds the precision budget");
    }
    Integer f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(*k));
    return NumericValue(Rational(f));
  }
  const mpfr_prec_t p = unary_precision(x, prec);
  BigFloat mid(p);
  const int t = mpfr_fac_ui(mid.get(), static_cast<unsigned long>(*k), MPFR_RNDN);
  check_finite(mid);
  BigFloat rad = zero_radius();
  if (t != 0) add_ulp(rad, mid);
  return NumericValue::approx(mid, rad);
}

NumericValue pow(const NumericValue& base, const NumericValue& exponent, mpfr_prec_t prec) {
  if (const auto k = as_int64(exponent)) {
    if (base.is_exact() && exponent.is_exact()) {
      return NumericValue::exact_canonical(exact_integer_power(base.exact_value(), *k));
    }
    const mpfr_prec_t p = std::max(unary_precision(base, prec), exponent.precision());
    const Interval r = interval_integer_power(as_interval(base, p), *k, p);
    return NumericValue::approx(r.mid, r.radius);
  }
  const mpfr_prec_t p = std::max(unary_precision(base, prec), exponent.precision());
  // x^y = exp(y ln x) for provably positive x
  return exp(NumericValue::to_approx(exponent, p) * ln(base, p), p);
}

NumericValue pi(mpfr_prec_t prec) {
  BigFloat mid(prec);
  mpfr_const_pi(mid.get(), MPFR_RNDN);
  BigFloat rad = zero_radius();
  add_ulp(rad, mid);
  return NumericValue::approx(mid, rad);
}

NumericValue euler_e(mpfr_prec_t prec) {
  BigFloat one(prec);
  mpfr_set_ui(one.get(), 1, MPFR_RNDN);
  BigFloat mid(prec);
  mpfr_exp(mid.get(), one.get(), MPFR_RNDN);
  BigFloat rad = zero_radius();
  add_ulp(rad, mid);
  return NumericValue::approx(mid, rad);
}

std::optional<std::int64_t> as_int64(const NumericValue& x) {
  if (x.is_exact()) {
    const Rational& q = x.exact_value();
    if (q.get_den() != 1 || !mpz_fits_slong_p(q.get_num_mpz_t())) return std::nullopt;
    return static_cast<std::int64_t>(mpz_get_si(q.get_num_mpz_t()));
  }
  const auto& i = x.interval();
  if (!mpfr_zero_p(i.radius.get()) || !mpfr_integer_p(i.mid.get()) ||
      !mpfr_fits_slong_p(i.mid.get(), MPFR_RNDN)) {
    return std::nullopt;
  }
  return static_cast<std::int64_t>(mpfr_get_si(i.mid.get(), MPFR_RNDN));
}

// ---------------------------------------------------------------------------

Rational parse_rational(std::string_view text) {
  auto fail = [&]() -> Rational {
    throw ArgumentError("not a rational number: '" + std::string(text) + "'");
  };
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
          s.end());
  if (s.empty()) return fail();
  bool negative = false;
  std::size_t pos = 0;
  if (s[0] == '-' || s[0] == '+') {
    negative = s[0] == '-';
    pos = 1;
  }
  auto all_digits = [](std::string_view d) {
    return !d.empty() && std::all_of(d.begin(), d.end(), [](unsigned char c) { return std::isdigit(c); });
  };
  std::string_view body(s);
  body.remove_prefix(pos);
  Rational out;
  if (const auto slash = body.find('/'); slash != std::string_view::npos) {
    const auto num = body.substr(0, slash);
    const auto den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) return fail();
    Integer n(std::string(num), 10);
    Integer d(std::string(den), 10);
    if (d == 0) throw DomainError("rational with zero denominator");
    out = Rational(n, d);
  } else {
    const auto dot = body.find('.');
    const auto whole = body.substr(0, dot);
    const auto frac = dot == std::string_view::npos ? std::string_view{} : body.substr(dot + 1);
    if (!all_digits(whole) || (dot != std::string_view::npos && !all_digits(frac))) return fail();
    Integer n(std::string(whole) + std::string(frac), 10);
    Integer d;
    mpz_ui_pow_ui(d.get_mpz_t(), 10, frac.size());
    out = Rational(n, d);
  }
  out.canonicalize();
  if (negative) out = -out;
  return out;
}

std::string print_rational(const Rational& q) { return q.get_str(); }

Rational simplest_rational_between(const Rational& lo_in, const Rational& hi_in) {
  Rational lo = lo_in;
  Rational hi = hi_in;
  if (lo > hi) std::swap(lo, hi);
  if (sgn(lo) <= 0 && sgn(hi) >= 0) return Rational(0);
  if (sgn(hi) < 0) return Rational(-simplest_rational_between(-hi, -lo));
  Integer fl;
  mpz_fdiv_q(fl.get_mpz_t(), lo.get_num_mpz_t(), lo.get_den_mpz_t());
  if (Rational(fl) == lo) return lo;
  if (Rational(fl + 1) <= hi) return Rational(fl + 1);
  // lo, hi both inside (fl, fl + 1)
  const Rational inner = simplest_rational_between(Rational(1) / (hi - fl), Rational(1) / (lo - fl));
  Rational out = Rational(fl) + Rational(1) / inner;
  out.canonicalize();
  return out;
}

Rational rational_from_double(double v) {
  Rational q;
  mpq_set_d(q.get_mpq_t(), v);
  return q;
}

void set_exact_bit_budget(std::size_t bits) { g_exact_bit_budget.store(bits); }
std::size_t exact_bit_budget() { return g_exact_bit_budget.load(); }

}  // namespace kummer
