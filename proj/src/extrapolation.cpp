#include <algorithm>
#include <cmath>

#include "kummer/classical.hpp"

namespace kummer {

namespace {

constexpr int kMaxHalvings = 4;

// Eliminates the 1/n and 1/n^2 terms from values at n, 2n, 4n.
double richardson2(double at_n, double at_2n, double at_4n) {
  const double first = 2.0 * at_2n - at_n;
  const double second = 2.0 * at_4n - at_2n;
  return (4.0 * second - first) / 3.0;
}

}  // namespace

LimitEstimate richardson_limit(const std::function<double(std::int64_t)>& statistic,
                               std::int64_t lowest, std::int64_t end) {
  lowest = std::max<std::int64_t>(lowest, 1);
  if (end < 4 * lowest) throw ArgumentError("window too short for extrapolation");
  int halvings = 0;
  while (halvings < kMaxHalvings && (end >> (halvings + 1)) >= lowest) ++halvings;
  const std::int64_t top = (end >> halvings) << halvings;

  LimitEstimate e;
  for (int i = halvings; i >= 0; --i) {
    const std::int64_t n = top >> i;
    e.raw.emplace_back(n, statistic(n));
  }
  for (std::size_t i = 0; i + 2 < e.raw.size(); ++i) {
    e.extrapolants.push_back(richardson2(e.raw[i].second, e.raw[i + 1].second, e.raw[i + 2].second));
  }
  e.value = e.extrapolants.back();
  if (e.extrapolants.size() >= 2) {
    const auto first = e.extrapolants.end() - std::min<std::ptrdiff_t>(3, e.extrapolants.size());
    const auto [lo, hi] = std::minmax_element(first, e.extrapolants.end());
    e.stability = *hi - *lo;
  } else {
    // Single extrapolant: compare against the first-level value.
    const auto& r = e.raw;
    e.stability = std::fabs(e.value - (2.0 * r[2].second - r[1].second));
  }
  if (!std::isfinite(e.stability)) e.stability = HUGE_VAL;
  return e;
}

Side classify(const LimitEstimate& e, double threshold) {
  const auto& r = e.raw;
  const double last = r.back().second;
  if (std::isnan(last)) return Side::Near;
  if (std::isinf(last)) return last > 0 ? Side::Above : Side::Below;

  const double tol = std::max(1e-6, 10.0 * e.stability);
  if (std::isfinite(e.value) && std::fabs(e.value - threshold) > tol) {
    return e.value > threshold ? Side::Above : Side::Below;
  }
  // Statistics that run away from the threshold without settling (increments
  // not shrinking) are decided by their direction.
  if (r.size() >= 3) {
    const double a = r[r.size() - 3].second;
    const double b = r[r.size() - 2].second;
    const double c = last;
    const double d1 = b - a;
    const double d2 = c - b;
    const bool steady = std::fabs(d2) >= 0.75 * std::fabs(d1) && d1 != 0.0;
    if (steady && d1 > 0 && d2 > 0 && a > threshold) return Side::Above;
    if (steady && d1 < 0 && d2 < 0 && a < threshold) return Side::Below;
  }
  return Side::Near;
}

}  // namespace kummer
