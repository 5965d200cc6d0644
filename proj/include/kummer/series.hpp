#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "kummer/expr.hpp"
#include "kummer/numeric.hpp"

namespace kummer {

namespace detail {
struct SeriesState;
}

/// A positive series sum_{n >= start} a(n). Copies share one term and
/// partial-sum cache; the cache is internally synchronized.
class Series {
 public:
  Series(TermExpr expr, std::int64_t start = 1, EvalMode mode = EvalMode::ExactPreferred,
         mpfr_prec_t precision = kDefaultPrecision);
  static Series parse(std::string_view text, std::int64_t start = 1,
                      EvalMode mode = EvalMode::ExactPreferred,
                      mpfr_prec_t precision = kDefaultPrecision);

  const TermExpr& expr() const;
  std::int64_t start() const;
  EvalMode mode() const;
  mpfr_prec_t precision() const;
  /// Canonical cache key: printed expression, start, mode, precision.
  const std::string& key() const;
  /// True when terms, ratios and sums are computed in exact rationals.
  bool is_exact() const;

  /// a_n; PositivityViolation when a_n is not provably positive.
  NumericValue term(std::int64_t n) const;
  /// a_n / a_{n+1}
  NumericValue ratio(std::int64_t n) const;
  /// sum_{k=from}^{to} a_k; 0 when to == from - 1.
  NumericValue partial_sum(std::int64_t from, std::int64_t to) const;
  /// Same value as partial_sum, computed without growing the cache.
  NumericValue streamed_sum(std::int64_t from, std::int64_t to) const;

  /// Largest index whose positivity has been checked (start - 1 if none).
  std::int64_t positivity_checked_up_to() const;

 private:
  std::shared_ptr<detail::SeriesState> state_;
};

struct TailBounds {
  NumericValue lower;
  /// Empty means no majorant was certified ("oracle silent").
  std::optional<NumericValue> upper;
  /// "geometric", "power" or "none".
  std::string majorant;
  /// Ratio bound q or exponent p used by the majorant.
  std::optional<double> parameter;
};

/// Encloses sum_{k >= from} a_k: lower is the partial sum through horizon,
/// upper adds a geometric or power-law tail majorant fitted on the window
/// when the window's trend supports one.
TailBounds oracle_tail_bounds(const Series& s, std::int64_t from, std::int64_t horizon);

}  // namespace kummer
