#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "kummer/numeric.hpp"
#include "kummer/series.hpp"

namespace kummer {

enum class ConstructionMode { Recursion, ClosedForm };

std::string_view to_string(ConstructionMode m);

/// Materialized B_N..B_M for a series, built from the equality recursion
///   B_{n+1} = B_n a_n / a_{n+1} - 1
/// or from its telescoped closed form
///   B_{n+1} = (B_N a_N - (a_{N+1} + ... + a_{n+1})) / a_{n+1}.
struct KummerSequence {
  Series series;
  std::int64_t start = 1;  // N
  NumericValue seed;       // B_N
  std::vector<NumericValue> values;
  ConstructionMode mode = ConstructionMode::Recursion;
  /// Smallest stored index with B <= 0.
  std::optional<std::int64_t> first_nonpositive;
  /// Smallest stored index whose sign could not be decided (approximate mode).
  std::optional<std::int64_t> first_undecided_sign;

  std::int64_t end() const { return start + static_cast<std::int64_t>(values.size()) - 1; }
  const NumericValue& at(std::int64_t n) const;
  bool all_positive() const { return !first_nonpositive && !first_undecided_sign; }
};

struct BuildOptions {
  /// Keep materializing after the first non-positive value (diagnostics).
  bool continue_past_nonpositive = false;
};

KummerSequence build_recursive(const Series& s, std::int64_t start, const NumericValue& seed,
                               std::int64_t end, BuildOptions options = {});
KummerSequence build_closed_form(const Series& s, std::int64_t start, const NumericValue& seed,
                                 std::int64_t end, BuildOptions options = {});

enum class ConditionOverall { AllHold, FailsAt, Unknown };

std::string_view to_string(ConditionOverall c);

/// Per-index margins m_n = B_n a_n / a_{n+1} - B_{n+1} against rho on
/// [start, end - 1] (each margin uses B_n and B_{n+1}).
struct ConditionReport {
  std::int64_t start = 1;
  std::int64_t end = 1;
  NumericValue rho{1};
  std::vector<NumericValue> margins;
  std::vector<TriBool> status;
  ConditionOverall overall = ConditionOverall::AllHold;
  std::optional<std::int64_t> failing_index;
};

/// `b` holds B_start..B_end.
ConditionReport check_condition(const Series& s, std::span<const NumericValue> b, std::int64_t start,
                                std::int64_t end, const NumericValue& rho = NumericValue(1));

/// Same statuses through the rate-of-decrease form a_{n+1}/a_n <= B_n / (rho + B_{n+1});
/// margins hold B_n / (rho + B_{n+1}) - a_{n+1}/a_n. Requires every B provably positive.
ConditionReport check_rate_form(const Series& s, std::span<const NumericValue> b, std::int64_t start,
                                std::int64_t end, const NumericValue& rho = NumericValue(1));

struct BoundReport {
  NumericValue bound;        // B_N a_N
  NumericValue max_partial;  // max over m <= end of a_{N+1} + ... + a_m
  TriBool holds = TriBool::True;
  std::optional<std::int64_t> first_violation;
};

/// Checks a_{N+1} + ... + a_m <= B_N a_N for every m in (N, end].
BoundReport sufficiency_bound(const Series& s, const KummerSequence& seq, std::int64_t end);
BoundReport sufficiency_bound(const Series& s, std::span<const NumericValue> b, std::int64_t start,
                              std::int64_t end);

/// Seeds B_N = u / a_N + delta with N = s.start() and u the sum bound rounded
/// up to a 64-bit dyadic rational, then builds by the closed form.
KummerSequence construct_from_sum(const Series& s, const NumericValue& sum_upper,
                                  const NumericValue& delta, std::int64_t end,
                                  BuildOptions options = {});

/// Divides every entry by rho.
std::vector<NumericValue> scale_margin(std::span<const NumericValue> b, const NumericValue& rho);

}  // namespace kummer
