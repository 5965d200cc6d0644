#include "kummer/series.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <unordered_map>
#include <vector>

namespace kummer {

namespace detail {

struct SeriesState {
  TermExpr expr;
  std::int64_t start = 1;
  EvalMode mode = EvalMode::ExactPreferred;
  mpfr_prec_t precision = kDefaultPrecision;
  std::string key;
  bool exact = false;

  mutable std::mutex mu;
  // Sparse, bounded term cache.
  mutable std::unordered_map<std::int64_t, NumericValue> terms;
  // cumulative[i] = sum_{k=start}^{start+i} a_k
  mutable std::vector<NumericValue> cumulative;
  mutable std::int64_t checked_up_to = 0;
};

}  // namespace detail

namespace {

constexpr std::size_t kTermCacheLimit = 1 << 16;
constexpr std::int64_t kSplitLeaf = 16;

std::string make_key(const TermExpr& e, std::int64_t start, EvalMode mode, mpfr_prec_t prec) {
  return print(e) + "|" + std::to_string(start) + "|" +
         (mode == EvalMode::ExactPreferred ? "exact" : "approx") + "|" + std::to_string(prec);
}

std::shared_ptr<detail::SeriesState> acquire_state(TermExpr expr, std::int64_t start, EvalMode mode,
                                                   mpfr_prec_t prec) {
  static std::mutex registry_mu;
  static std::unordered_map<std::string, std::weak_ptr<detail::SeriesState>> registry;

  std::string key = make_key(expr, start, mode, prec);
  std::lock_guard lock(registry_mu);
  if (auto it = registry.find(key); it != registry.end()) {
    if (auto alive = it->second.lock()) return alive;
  }
  auto state = std::make_shared<detail::SeriesState>();
  state->exact = mode == EvalMode::ExactPreferred && is_exactly_evaluable(expr);
  state->expr = std::move(expr);
  state->start = start;
  state->mode = mode;
  state->precision = prec;
  state->key = key;
  registry[key] = state;
  // Drop dead entries occasionally.
  if (registry.size() > 1024) {
    std::erase_if(registry, [](const auto& kv) { return kv.second.expired(); });
  }
  return state;
}

NumericValue evaluate_term(const detail::SeriesState& st, std::int64_t n) {
  NumericValue v = eval(st.expr, n, st.mode, st.precision);
  if (is_positive(v) != TriBool::True) throw PositivityViolation(n);
  return v;
}

void note_checked(const detail::SeriesState& st, std::int64_t n) {
  std::lock_guard lock(st.mu);
  st.checked_up_to = std::max(st.checked_up_to, n);
}

Rational split_sum(const detail::SeriesState& st, std::int64_t lo, std::int64_t hi) {
  if (hi - lo < kSplitLeaf) {
    Rational acc(0);
    for (std::int64_t k = lo; k <= hi; ++k) acc += evaluate_term(st, k).exact_value();
    return acc;
  }
  const std::int64_t mid = lo + (hi - lo) / 2;
  Rational out = split_sum(st, lo, mid) + split_sum(st, mid + 1, hi);
  out.canonicalize();
  return out;
}

}  // namespace

Series::Series(TermExpr expr, std::int64_t start, EvalMode mode, mpfr_prec_t precision) {
  if (expr.empty()) throw ArgumentError("empty term expression");
  if (start < 1) throw ArgumentError("start index must be >= 1");
  if (precision < kMinPrecision) throw ArgumentError("precision must be >= 64 bits");
  state_ = acquire_state(std::move(expr), start, mode, precision);
  std::lock_guard lock(state_->mu);
  if (state_->checked_up_to == 0) state_->checked_up_to = start - 1;
}

Series Series::parse(std::string_view text, std::int64_t start, EvalMode mode, mpfr_prec_t precision) {
  return Series(kummer::parse(text), start, mode, precision);
}

const TermExpr& Series::expr() const { return state_->expr; }
std::int64_t Series::start() const { return state_->start; }
EvalMode Series::mode() const { return state_->mode; }
mpfr_prec_t Series::precision() const { return state_->precision; }
const std::string& Series::key() const { return state_->key; }
bool Series::is_exact() const { return state_->exact; }

std::int64_t Series::positivity_checked_up_to() const {
  std::lock_guard lock(state_->mu);
  return state_->checked_up_to;
}

NumericValue Series::term(std::int64_t n) const {
  const auto& st = *state_;
  if (n < st.start) {
    throw ArgumentError("index " + std::to_string(n) + " precedes the series start " +
                        std::to_string(st.start));
  }
  {
    std::lock_guard lock(st.mu);
    if (auto it = st.terms.find(n); it != st.terms.end()) return it->second;
  }
  NumericValue v = evaluate_term(st, n);
  std::lock_guard lock(st.mu);
  st.checked_up_to = std::max(st.checked_up_to, n);
  if (st.terms.size() < kTermCacheLimit) st.terms.emplace(n, v);
  return v;
}

NumericValue Series::ratio(std::int64_t n) const { return term(n) / term(n + 1); }

NumericValue Series::partial_sum(std::int64_t from, std::int64_t to) const {
  const auto& st = *state_;
  if (from < st.start) throw ArgumentError("partial sum starts before the series start");
  if (to < from - 1) throw ArgumentError("partial sum range is reversed");
  if (to == from - 1) return NumericValue(0);

  std::unique_lock lock(st.mu);
  const auto need = static_cast<std::size_t>(to - st.start + 1);
  while (st.cumulative.size() < need) {
    const std::int64_t k = st.start + static_cast<std::int64_t>(st.cumulative.size());
    NumericValue a;
    if (auto it = st.terms.find(k); it != st.terms.end()) {
      a = it->second;
    } else {
      lock.unlock();
      a = evaluate_term(st, k);
      lock.lock();
      if (st.cumulative.size() != static_cast<std::size_t>(k - st.start)) continue;
    }
    st.checked_up_to = std::max(st.checked_up_to, k);
    st.cumulative.push_back(st.cumulative.empty() ? a : st.cumulative.back() + a);
  }
  const NumericValue& upper = st.cumulative[static_cast<std::size_t>(to - st.start)];
  if (from == st.start) return upper;
  return upper - st.cumulative[static_cast<std::size_t>(from - 1 - st.start)];
}

NumericValue Series::streamed_sum(std::int64_t from, std::int64_t to) const {
  const auto& st = *state_;
  if (from < st.start) throw ArgumentError("partial sum starts before the series start");
  if (to < from - 1) throw ArgumentError("partial sum range is reversed");
  if (to == from - 1) return NumericValue(0);
  bool cached = false;
  {
    std::lock_guard lock(st.mu);
    cached = st.cumulative.size() >= static_cast<std::size_t>(to - st.start + 1);
  }
  if (cached) return partial_sum(from, to);

  NumericValue out;
  if (st.exact) {
    out = NumericValue(split_sum(st, from, to));
  } else {
    for (std::int64_t k = from; k <= to; ++k) out = out + evaluate_term(st, k);
  }
  note_checked(st, to);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// Rounds the enclosure's upper end up to a short dyadic rational.
Rational round_up_short(const NumericValue& v) {
  const BigFloat hi = v.upper(64);
  Rational q;
  mpfr_get_q(q.get_mpq_t(), hi.get());
  return q;
}

std::optional<TailBounds> geometric_majorant(const Series& s, std::int64_t from, std::int64_t horizon,
                                             const NumericValue& lower) {
  if (horizon - from < 4) return std::nullopt;
  const std::int64_t span = horizon - from;
  const std::int64_t n_mid = from + span / 2;
  const std::int64_t n_late = from + (3 * span) / 4;
  const std::int64_t n_end = horizon - 1;
  // q(n) = a_{n+1} / a_n
  const NumericValue q_mid = NumericValue(1) / s.ratio(n_mid);
  const NumericValue q_late = NumericValue(1) / s.ratio(n_late);
  const NumericValue q_end = NumericValue(1) / s.ratio(n_end);

  NumericValue q_max = q_mid;
  for (const NumericValue* q : {&q_late, &q_end}) {
    if (cmp_gt(*q, q_max) != TriBool::False) q_max = *q;
  }
  NumericValue spread = q_end - q_mid;
  if (cmp_lt(spread, NumericValue(0)) == TriBool::True) spread = -spread;
  NumericValue q_bound = q_max + NumericValue(2) * spread;
  if (q_bound.is_approx()) q_bound = NumericValue(round_up_short(q_bound));
  if (cmp_lt(q_bound, NumericValue(1)) != TriBool::True) return std::nullopt;

  // sum_{k > horizon} a_k <= a_h q / (1 - q)
  const NumericValue tail = s.term(horizon) * q_bound / (NumericValue(1) - q_bound);
  TailBounds out{lower, lower + tail, "geometric", q_bound.to_double()};
  return out;
}

std::optional<TailBounds> power_majorant(const Series& s, std::int64_t from, std::int64_t horizon,
                                         const NumericValue& lower) {
  const std::int64_t m0 = horizon / 8;
  if (m0 < from || m0 < 8) return std::nullopt;
  const std::int64_t m[4] = {m0, 2 * m0, 4 * m0, 8 * m0};
  double log_a[4];
  for (int i = 0; i < 4; ++i) log_a[i] = s.term(m[i]).log_abs();
  constexpr double kLn2 = 0.69314718055994530942;
  double p[3];
  for (int i = 0; i < 3; ++i) p[i] = (log_a[i] - log_a[i + 1]) / kLn2;
  const double d1 = std::fabs(p[0] - p[1]);
  const double d2 = std::fabs(p[1] - p[2]);
  // Local exponents must settle geometrically, as for c/n^p (1 + O(1/n)).
  if (!(d2 <= 0.05) || !(d2 <= 1e-12 || d2 <= 0.6 * d1)) return std::nullopt;
  const double p_low = std::min(p[1], p[2]) - 3.0 * d2 - 1e-9;
  if (!(p_low > 1.0 + 1e-6)) return std::nullopt;

  // n^p_low a_n must be non-increasing across the sampled window.
  double prev = HUGE_VAL;
  for (int i = 1; i < 4; ++i) {
    const double f = p_low * std::log(static_cast<double>(m[i])) + log_a[i];
    if (f > prev + 1e-12 * std::fabs(prev)) return std::nullopt;
    prev = f;
  }
  // sum_{k > h} a_k <= h a_h / (p - 1)
  const NumericValue exponent_gap(rational_from_double(p_low - 1.0));
  const NumericValue tail =
      s.term(horizon) * NumericValue(static_cast<long>(horizon)) / exponent_gap;
  TailBounds out{lower, lower + tail, "power", p_low};
  return out;
}

}  // namespace

TailBounds oracle_tail_bounds(const Series& s, std::int64_t from, std::int64_t horizon) {
  if (from < s.start()) throw ArgumentError("oracle window starts before the series start");
  if (horizon < from) throw ArgumentError("oracle horizon precedes its start");
  const NumericValue lower = s.streamed_sum(from, horizon);
  if (auto g = geometric_majorant(s, from, horizon, lower)) return *g;
  if (auto p = power_majorant(s, from, horizon, lower)) return *p;
  return TailBounds{lower, std::nullopt, "none", std::nullopt};
}

}  // namespace kummer
