#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kummer/engine.hpp"
#include "kummer/series.hpp"

namespace kummer {

enum class Outcome { Converges, Diverges, Inconclusive };
enum class Confidence { Certified, Numerical };

std::string_view to_string(Outcome o);
std::string_view to_string(Confidence c);

/// Two-level Richardson extrapolation of a statistic s(n) ~ c0 + c1/n + c2/n^2
/// on geometric nodes n, 2n, 4n ending at the window end.
struct LimitEstimate {
  std::vector<std::pair<std::int64_t, double>> raw;  // (n, s(n)), increasing n
  std::vector<double> extrapolants;                  // latest last
  double value = 0.0;
  double stability = 0.0;  // spread of the last three extrapolants
};

/// nodes: end, end/2, ... down to max(lowest, 1); at least three nodes.
LimitEstimate richardson_limit(const std::function<double(std::int64_t)>& statistic,
                               std::int64_t lowest, std::int64_t end);

/// Position of an estimate relative to a threshold under the tolerance
/// max(1e-6, 10 * stability).
enum class Side { Above, Below, Near };
Side classify(const LimitEstimate& e, double threshold);

struct TestWindow {
  std::int64_t length = 1000;  // statistics use indices in [start, start + length]
  std::int64_t probe_length = 10000;
  std::vector<NumericValue> seeds{NumericValue(1), NumericValue(10), NumericValue(100),
                                  NumericValue(1000)};
  NumericValue rho{1};
};

struct Witness {
  std::string family;  // Kummer B_n family or the statistic used
  std::int64_t window_start = 0;
  std::int64_t window_end = 0;
  std::optional<LimitEstimate> estimate;
  std::optional<std::int64_t> failing_index;
  std::vector<std::pair<std::string, std::string>> details;
};

struct TestVerdict {
  std::string id;
  Outcome outcome = Outcome::Inconclusive;
  Confidence confidence = Confidence::Numerical;
  Witness witness;
  std::optional<std::string> error;
};

// Statistics exposed for checking the specializations directly.
/// n (a_n / a_{n+1} - 1)
NumericValue raabe_statistic(const Series& s, std::int64_t n);
/// ln n * (n (a_n / a_{n+1} - 1) - 1)
NumericValue bertrand_statistic(const Series& s, std::int64_t n);

TestVerdict ratio_test(const Series& s, const TestWindow& w = {});
TestVerdict raabe_test(const Series& s, const TestWindow& w = {});
TestVerdict bertrand_test(const Series& s, const TestWindow& w = {});
TestVerdict root_test(const Series& s, const TestWindow& w = {});
TestVerdict gauss_test(const Series& s, const TestWindow& w = {});

/// Seed sweep: equality recursion from N = start for each seed over the
/// probe window. Diverges (Numerical) when every seed turns non-positive.
struct SeedSweep {
  struct Entry {
    NumericValue seed;
    std::optional<std::int64_t> first_nonpositive;
    std::int64_t probed_to = 0;
  };
  std::vector<Entry> entries;
  bool all_failed() const;
};
SeedSweep seed_sweep(const Series& s, std::int64_t start, std::span<const NumericValue> seeds,
                     std::int64_t probe_end);

struct KummerProbe {
  std::string method;  // "construct_from_sum" or "seed_sweep"
  std::optional<TailBounds> tail;
  std::optional<KummerSequence> sequence;
  std::optional<ConditionReport> condition;
  std::optional<SeedSweep> sweep;
  TestVerdict verdict;
};

KummerProbe kummer_probe(const Series& s, const TestWindow& w = {});

struct AnalysisOptions {
  TestWindow window;
  /// Subset of {root, ratio, raabe, gauss, bertrand, kummer}; empty = all.
  std::vector<std::string> tests;
};

struct FusedVerdict {
  Outcome outcome = Outcome::Inconclusive;
  std::optional<Confidence> confidence;
  std::string source;  // certifying test id, "majority", or "none"
};

struct AnalysisReport {
  std::string expression;
  std::int64_t start = 1;
  bool exact = false;
  std::vector<TestVerdict> verdicts;  // fixed order root, ratio, raabe, gauss, bertrand, kummer
  FusedVerdict fused;
  std::optional<KummerProbe> kummer;
};

AnalysisReport full_analysis(const Series& s, const AnalysisOptions& options = {});
FusedVerdict fuse(const std::vector<TestVerdict>& verdicts);

}  // namespace kummer
