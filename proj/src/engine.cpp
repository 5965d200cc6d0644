#include "kummer/engine.hpp"

namespace kummer {

namespace {

void require_positive_seed(const NumericValue& seed) {
  if (is_positive(seed) != TriBool::True) throw ArgumentError("seed B_N must be provably positive");
}

void require_window(std::int64_t start, std::int64_t end, const Series& s) {
  if (start < s.start()) throw ArgumentError("sequence start precedes the series start");
  if (end < start) throw ArgumentError("window end precedes its start");
}

// Returns false when construction should stop.
bool record_sign(KummerSequence& seq, std::int64_t n, const BuildOptions& options) {
  const TriBool positive = is_positive(seq.values.back());
  if (positive == TriBool::False) {
    if (!seq.first_nonpositive) seq.first_nonpositive = n;
    return options.continue_past_nonpositive;
  }
  if (positive == TriBool::Unknown && !seq.first_undecided_sign) seq.first_undecided_sign = n;
  return true;
}

KummerSequence empty_sequence(const Series& s, std::int64_t start, const NumericValue& seed,
                              std::int64_t end, ConstructionMode mode) {
  KummerSequence seq{s, start, seed, {}, mode, std::nullopt, std::nullopt};
  seq.values.reserve(static_cast<std::size_t>(end - start + 1));
  seq.values.push_back(seed);
  return seq;
}

void require_span(std::span<const NumericValue> b, std::int64_t start, std::int64_t end) {
  if (end < start) throw ArgumentError("window end precedes its start");
  if (b.size() < static_cast<std::size_t>(end - start + 1)) {
    throw ArgumentError("sequence does not cover the window");
  }
}

void finalize(ConditionReport& r) {
  bool unknown = false;
  for (std::size_t i = 0; i < r.status.size(); ++i) {
    if (r.status[i] == TriBool::False) {
      r.overall = ConditionOverall::FailsAt;
      r.failing_index = r.start + static_cast<std::int64_t>(i);
      return;
    }
    if (r.status[i] == TriBool::Unknown) unknown = true;
  }
  r.overall = unknown ? ConditionOverall::Unknown : ConditionOverall::AllHold;
}

}  // namespace

std::string_view to_string(ConstructionMode m) {
  return m == ConstructionMode::Recursion ? "recursion" : "closed_form";
}

std::string_view to_string(ConditionOverall c) {
  switch (c) {
    case ConditionOverall::AllHold: return "all_hold";
    case ConditionOverall::FailsAt: return "fails_at";
    default: return "unknown";
  }
}

const NumericValue& KummerSequence::at(std::int64_t n) const {
  if (n < start || n > end()) throw ArgumentError("index outside the materialized sequence");
  return values[static_cast<std::size_t>(n - start)];
}

KummerSequence build_recursive(const Series& s, std::int64_t start, const NumericValue& seed,
                               std::int64_t end, BuildOptions options) {
  require_positive_seed(seed);
  require_window(start, end, s);
  KummerSequence seq = empty_sequence(s, start, seed, end, ConstructionMode::Recursion);
  for (std::int64_t n = start; n < end; ++n) {
    seq.values.push_back(seq.values.back() * s.ratio(n) - NumericValue(1));
    if (!record_sign(seq, n + 1, options)) break;
  }
  return seq;
}

KummerSequence build_closed_form(const Series& s, std::int64_t start, const NumericValue& seed,
                                 std::int64_t end, BuildOptions options) {
  require_positive_seed(seed);
  require_window(start, end, s);
  KummerSequence seq = empty_sequence(s, start, seed, end, ConstructionMode::ClosedForm);
  const NumericValue budget = seed * s.term(start);
  for (std::int64_t n = start; n < end; ++n) {
    seq.values.push_back((budget - s.partial_sum(start + 1, n + 1)) / s.term(n + 1));
    if (!record_sign(seq, n + 1, options)) break;
  }
  return seq;
}

ConditionReport check_condition(const Series& s, std::span<const NumericValue> b, std::int64_t start,
                                std::int64_t end, const NumericValue& rho) {
  require_span(b, start, end);
  if (is_positive(rho) != TriBool::True) throw ArgumentError("rho must be positive");
  ConditionReport r;
  r.start = start;
  r.end = end;
  r.rho = rho;
  for (std::int64_t n = start; n < end; ++n) {
    const auto i = static_cast<std::size_t>(n - start);
    NumericValue m = b[i] * s.ratio(n) - b[i + 1];
    r.status.push_back(cmp_ge(m, rho));
    r.margins.push_back(std::move(m));
  }
  finalize(r);
  return r;
}

ConditionReport check_rate_form(const Series& s, std::span<const NumericValue> b, std::int64_t start,
                                std::int64_t end, const NumericValue& rho) {
  require_span(b, start, end);
  if (is_positive(rho) != TriBool::True) throw ArgumentError("rho must be positive");
  for (std::int64_t n = start; n <= end; ++n) {
    if (is_positive(b[static_cast<std::size_t>(n - start)]) != TriBool::True) {
      throw ArgumentError("rate form needs B_" + std::to_string(n) + " provably positive");
    }
  }
  ConditionReport r;
  r.start = start;
  r.end = end;
  r.rho = rho;
  for (std::int64_t n = start; n < end; ++n) {
    const auto i = static_cast<std::size_t>(n - start);
    const NumericValue decay = s.term(n + 1) / s.term(n);
    const NumericValue allowed = b[i] / (rho + b[i + 1]);
    r.status.push_back(cmp_le(decay, allowed));
    r.margins.push_back(allowed - decay);
  }
  finalize(r);
  return r;
}

BoundReport sufficiency_bound(const Series& s, std::span<const NumericValue> b, std::int64_t start,
                              std::int64_t end) {
  require_span(b, start, end);
  BoundReport r;
  r.bound = b[0] * s.term(start);
  r.max_partial = NumericValue(0);
  for (std::int64_t m = start + 1; m <= end; ++m) {
    r.max_partial = s.partial_sum(start + 1, m);
    const TriBool ok = cmp_le(r.max_partial, r.bound);
    if (ok == TriBool::False && !r.first_violation) r.first_violation = m;
    r.holds = r.holds && ok;
  }
  return r;
}

BoundReport sufficiency_bound(const Series& s, const KummerSequence& seq, std::int64_t end) {
  if (seq.first_nonpositive) {
    throw ArgumentError("sequence has a non-positive entry at index " +
                        std::to_string(*seq.first_nonpositive));
  }
  if (end > seq.end()) throw ArgumentError("bound window exceeds the materialized sequence");
  return sufficiency_bound(s, seq.values, seq.start, end);
}

KummerSequence construct_from_sum(const Series& s, const NumericValue& sum_upper,
                                  const NumericValue& delta, std::int64_t end, BuildOptions options) {
  if (cmp_ge(delta, NumericValue(0)) != TriBool::True) throw ArgumentError("delta must be >= 0");
  Rational u = sum_upper.upper_rational();
  if (!sum_upper.is_exact() || mpz_sizeinbase(u.get_den_mpz_t(), 2) > 64) {
    BigFloat hi(64);
    mpfr_set_q(hi.get(), u.get_mpq_t(), MPFR_RNDU);
    mpfr_get_q(u.get_mpq_t(), hi.get());
  }
  const std::int64_t start = s.start();
  const NumericValue seed = NumericValue(u) / s.term(start) + delta;
  return build_closed_form(s, start, seed, end, options);
}

std::vector<NumericValue> scale_margin(std::span<const NumericValue> b, const NumericValue& rho) {
  if (is_positive(rho) != TriBool::True) throw ArgumentError("rho must be positive");
  std::vector<NumericValue> out;
  out.reserve(b.size());
  for (const auto& v : b) out.push_back(v / rho);
  return out;
}

}  // namespace kummer
