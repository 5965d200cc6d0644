#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "kummer/classical.hpp"

namespace kummer {

enum class OutputFormat { Text, Json, Csv };

struct AnalysisConfig {
  std::string expression;
  std::int64_t start = 1;
  std::vector<std::string> tests;  // empty = all
  std::int64_t window = 1000;
  std::int64_t probe_window = 10000;
  mpfr_prec_t precision = kDefaultPrecision;
  std::vector<NumericValue> seeds{NumericValue(1), NumericValue(10), NumericValue(100),
                                  NumericValue(1000)};
  NumericValue rho{1};
  OutputFormat format = OutputFormat::Text;
  std::optional<NumericValue> b1;  // B_N override for --emit-b
  bool emit_b = false;
  bool rational = false;

  /// ArgumentError on window < 2, precision < 64, non-positive seeds or rho,
  /// or an unknown test id.
  void validate() const;
  AnalysisOptions options() const;
};

/// 10 significant digits, prefixed by "≈" for approximate values.
std::string display(const NumericValue& v);

std::string render_text(const AnalysisReport& r);
/// Stable key order; every number that is not an index is rendered as a
/// string so output is byte-identical across runs.
std::string render_json(const AnalysisReport& r);
/// One row per test: id,outcome,confidence,estimate.
std::string render_csv(const AnalysisReport& r);

/// Rows n,a_n,B_n for the recursion seeded at B_N = seed over [N, end].
/// a_n is written with 30 significant digits, or as p/q when `rational`
/// and the value is exact.
void write_b_csv(std::ostream& out, const Series& s, const NumericValue& seed, std::int64_t end,
                 bool rational);

}  // namespace kummer
