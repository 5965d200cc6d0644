#include "kummer/classical.hpp"

#include <algorithm>
#include <cmath>

namespace kummer {

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::int64_t window_end(const Series& s, const TestWindow& w) {
  if (w.length < 2) throw ArgumentError("window length must be >= 2");
  return s.start() + w.length;
}

// Kummer certificates are checked on the second half of the window.
std::int64_t certificate_start(const Series& s, std::int64_t end) {
  return s.start() + (end - s.start()) / 2;
}

std::vector<NumericValue> constant_family(const NumericValue& b, std::int64_t from, std::int64_t to) {
  return std::vector<NumericValue>(static_cast<std::size_t>(to - from + 1), b);
}

std::vector<NumericValue> linear_family(std::int64_t from, std::int64_t to) {
  std::vector<NumericValue> out;
  out.reserve(static_cast<std::size_t>(to - from + 1));
  for (std::int64_t n = from; n <= to; ++n) out.emplace_back(static_cast<long>(n));
  return out;
}

std::vector<NumericValue> log_family(std::int64_t from, std::int64_t to, mpfr_prec_t prec) {
  std::vector<NumericValue> out;
  out.reserve(static_cast<std::size_t>(to - from + 1));
  for (std::int64_t n = from; n <= to; ++n) {
    const NumericValue nv(static_cast<long>(n));
    out.push_back(nv * ln(nv, prec));
  }
  return out;
}

// Non-decreasing terms on [from, to] (exact check): a_n <= a_{n+1}.
std::optional<bool> terms_nondecreasing(const Series& s, std::int64_t from, std::int64_t to) {
  if (!s.is_exact()) return std::nullopt;
  for (std::int64_t n = from; n < to; ++n) {
    if (cmp_le(s.ratio(n), NumericValue(1)) != TriBool::True) return false;
  }
  return true;
}

void add_condition_details(Witness& w, const ConditionReport& r) {
  w.details.emplace_back("kummer_condition", std::string(to_string(r.overall)));
  w.details.emplace_back("rho", r.rho.to_string());
  if (r.failing_index) w.failing_index = r.failing_index;
  if (!r.margins.empty()) {
    w.details.emplace_back("first_margin", r.margins.front().to_string());
    w.details.emplace_back("last_margin", r.margins.back().to_string());
  }
}

// Certified convergence also needs a bounded tail from the oracle.
bool oracle_bounded(const Series& s, std::int64_t end, Witness& w) {
  const TailBounds tail = oracle_tail_bounds(s, s.start(), end);
  w.details.emplace_back("oracle_majorant", tail.majorant);
  return tail.upper.has_value();
}

template <typename Fn>
TestVerdict guarded(std::string id, Fn&& body) {
  try {
    return body();
  } catch (const Error& e) {
    TestVerdict v;
    v.id = std::move(id);
    v.error = e.what();
    v.witness.details.emplace_back("error", e.what());
    return v;
  }
}

LimitEstimate estimate_exact_statistic(const Series& s, std::int64_t end,
                                       NumericValue (*stat)(const Series&, std::int64_t),
                                       std::int64_t lowest) {
  return richardson_limit([&](std::int64_t n) { return stat(s, n).to_double(); },
                          std::max(lowest, s.start()), end);
}

}  // namespace

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::Converges: return "converges";
    case Outcome::Diverges: return "diverges";
    default: return "inconclusive";
  }
}

std::string_view to_string(Confidence c) { return c == Confidence::Certified ? "certified" : "numerical"; }

NumericValue raabe_statistic(const Series& s, std::int64_t n) {
  return NumericValue(static_cast<long>(n)) * (s.ratio(n) - NumericValue(1));
}

NumericValue bertrand_statistic(const Series& s, std::int64_t n) {
  const NumericValue nv(static_cast<long>(n));
  return ln(nv, s.precision()) * (raabe_statistic(s, n) - NumericValue(1));
}

// ---------------------------------------------------------------------------

TestVerdict ratio_test(const Series& s, const TestWindow& w) {
  return guarded("ratio", [&] {
    TestVerdict v;
    v.id = "ratio";
    const std::int64_t end = window_end(s, w);
    const std::int64_t cert_from = certificate_start(s, end);
    v.witness.family = "B_n = const";
    v.witness.window_start = cert_from;
    v.witness.window_end = end;
    const LimitEstimate est = richardson_limit(
        [&](std::int64_t n) { return (NumericValue(1) / s.ratio(n)).to_double(); }, s.start(), end - 1);
    v.witness.estimate = est;
    const Side side = classify(est, 1.0);

    if (side == Side::Below) {
      const double limit = std::max(0.0, est.value);
      Rational q = simplest_rational_between(rational_from_double(limit),
                                             rational_from_double((limit + 1.0) / 2.0));
      if (q >= 1) q = rational_from_double((limit + 1.0) / 2.0);
      // Constant B = 1 / (1 - q) turns a_n / a_{n+1} >= 2 - q into margin >= 1.
      const NumericValue b(Rational(1 / (1 - q)));
      v.witness.family = "B_n = " + b.to_string();
      v.witness.details.emplace_back("q", print_rational(q));
      const auto family = constant_family(b, cert_from, end);
      const ConditionReport r = check_condition(s, family, cert_from, end, NumericValue(1));
      add_condition_details(v.witness, r);
      v.outcome = Outcome::Converges;
      v.confidence = (s.is_exact() && r.overall == ConditionOverall::AllHold && oracle_bounded(s, end, v.witness))
                         ? Confidence::Certified
                         : Confidence::Numerical;
      return v;
    }
    const auto nondecreasing = terms_nondecreasing(s, cert_from, end);
    if (nondecreasing.value_or(false)) {
      v.outcome = Outcome::Diverges;
      v.confidence = Confidence::Certified;
      v.witness.family = "terms non-decreasing";
      v.witness.details.emplace_back("terms_nondecreasing", "true");
      return v;
    }
    if (side == Side::Above) {
      v.outcome = Outcome::Diverges;
      v.confidence = Confidence::Numerical;
    }
    return v;
  });
}

TestVerdict raabe_test(const Series& s, const TestWindow& w) {
  return guarded("raabe", [&] {
    TestVerdict v;
    v.id = "raabe";
    const std::int64_t end = window_end(s, w);
    const std::int64_t cert_from = certificate_start(s, end);
    v.witness.family = "B_n = n";
    v.witness.window_start = cert_from;
    v.witness.window_end = end;
    const LimitEstimate est = estimate_exact_statistic(s, end - 1, &raabe_statistic, s.start());
    v.witness.estimate = est;
    switch (classify(est, 1.0)) {
      case Side::Above: {
        // Margin of B_n = n is the Raabe statistic minus one; any rho below
        // the limit's excess over one is eventually met.
        const double excess = std::isfinite(est.value) ? est.value - 1.0 : 1.0;
        Rational rho = excess >= 2.0 ? Rational(1)
                                     : simplest_rational_between(rational_from_double(excess / 4.0),
                                                                 rational_from_double(excess / 2.0));
        if (rho > 1 || sgn(rho) <= 0) rho = 1;
        const auto family = linear_family(cert_from, end);
        const ConditionReport r = check_condition(s, family, cert_from, end, NumericValue(rho));
        add_condition_details(v.witness, r);
        v.outcome = Outcome::Converges;
        v.confidence =
            (s.is_exact() && r.overall == ConditionOverall::AllHold && oracle_bounded(s, end, v.witness))
                ? Confidence::Certified
                : Confidence::Numerical;
        break;
      }
      case Side::Below:
        v.outcome = Outcome::Diverges;
        break;
      case Side::Near:
        v.witness.details.emplace_back("defer", "bertrand");
        break;
    }
    return v;
  });
}

SeedSweep seed_sweep(const Series& s, std::int64_t start, std::span<const NumericValue> seeds,
                     std::int64_t probe_end) {
  SeedSweep sweep;
  for (const auto& seed : seeds) {
    const KummerSequence seq = build_recursive(s, start, seed, probe_end);
    sweep.entries.push_back({seed, seq.first_nonpositive, seq.end()});
  }
  return sweep;
}

bool SeedSweep::all_failed() const {
  return !entries.empty() && std::all_of(entries.begin(), entries.end(),
                                         [](const Entry& e) { return e.first_nonpositive.has_value(); });
}

namespace {

void add_sweep_details(Witness& w, const SeedSweep& sweep) {
  for (const auto& e : sweep.entries) {
    w.details.emplace_back("seed " + e.seed.to_string(),
                           e.first_nonpositive ? "nonpositive at " + std::to_string(*e.first_nonpositive)
                                               : "positive through " + std::to_string(e.probed_to));
  }
}

}  // namespace

TestVerdict bertrand_test(const Series& s, const TestWindow& w) {
  return guarded("bertrand", [&] {
    TestVerdict v;
    v.id = "bertrand";
    const std::int64_t end = window_end(s, w);
    const std::int64_t cert_from = std::max<std::int64_t>(certificate_start(s, end), 2);
    v.witness.family = "B_n = n ln n";
    v.witness.window_start = cert_from;
    v.witness.window_end = end;
    const LimitEstimate est = estimate_exact_statistic(s, end - 1, &bertrand_statistic, 2);
    v.witness.estimate = est;
    switch (classify(est, 1.0)) {
      case Side::Above: {
        const auto family = log_family(cert_from, end, s.precision());
        const double excess = std::isfinite(est.value) ? est.value - 1.0 : 1.0;
        const Rational rho = excess >= 2.0
                                 ? Rational(1)
                                 : simplest_rational_between(rational_from_double(excess / 4.0),
                                                             rational_from_double(excess / 2.0));
        const ConditionReport r = check_condition(s, family, cert_from, end, NumericValue(rho));
        add_condition_details(v.witness, r);
        v.outcome = Outcome::Converges;
        break;
      }
      case Side::Below:
        v.outcome = Outcome::Diverges;
        break;
      case Side::Near: {
        const SeedSweep sweep = seed_sweep(s, s.start(), w.seeds, s.start() + w.probe_length);
        add_sweep_details(v.witness, sweep);
        v.witness.details.emplace_back("decided_by", "seed_sweep");
        if (sweep.all_failed()) v.outcome = Outcome::Diverges;
        break;
      }
    }
    return v;
  });
}

TestVerdict root_test(const Series& s, const TestWindow& w) {
  return guarded("root", [&] {
    TestVerdict v;
    v.id = "root";
    const std::int64_t end = window_end(s, w);
    v.witness.family = "a_n^(1/n)";
    v.witness.window_start = s.start();
    v.witness.window_end = end;
    const LimitEstimate est = richardson_limit(
        [&](std::int64_t n) { return std::exp(s.term(n).log_abs() / static_cast<double>(n)); },
        s.start(), end);
    v.witness.estimate = est;
    switch (classify(est, 1.0)) {
      case Side::Below: v.outcome = Outcome::Converges; break;
      case Side::Above: v.outcome = Outcome::Diverges; break;
      case Side::Near: break;
    }
    return v;
  });
}

TestVerdict gauss_test(const Series& s, const TestWindow& w) {
  return guarded("gauss", [&] {
    TestVerdict v;
    v.id = "gauss";
    const std::int64_t end = window_end(s, w);
    const std::int64_t fit_from = certificate_start(s, end);
    v.witness.family = "a_n/a_{n+1} = 1 + h/n + O(1/n^2)";
    v.witness.window_start = fit_from;
    v.witness.window_end = end;
    const LimitEstimate est = estimate_exact_statistic(s, end - 1, &raabe_statistic, s.start());
    v.witness.estimate = est;

    // Least squares fit of n (a_n/a_{n+1} - 1) ~ h + c/n on log-spaced points.
    constexpr int kPoints = 12;
    std::vector<std::pair<double, double>> pts;
    const double lo = std::log(static_cast<double>(fit_from));
    const double hi = std::log(static_cast<double>(end - 1));
    std::int64_t prev = -1;
    for (int i = 0; i < kPoints; ++i) {
      const auto n = static_cast<std::int64_t>(std::llround(std::exp(lo + (hi - lo) * i / (kPoints - 1))));
      if (n == prev || n < s.start()) continue;
      prev = n;
      pts.emplace_back(1.0 / static_cast<double>(n), raabe_statistic(s, n).to_double());
    }
    if (pts.size() >= 2) {
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      for (const auto& [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
      }
      const double k = static_cast<double>(pts.size());
      const double det = k * sxx - sx * sx;
      const double c = det != 0.0 ? (k * sxy - sx * sy) / det : 0.0;
      const double h = (sy - c * sx) / k;
      double max_residual = 0;
      for (const auto& [x, y] : pts) max_residual = std::max(max_residual, std::fabs(y - (h + c * x)));
      v.witness.details.emplace_back("fit_h", fmt_double(h));
      v.witness.details.emplace_back("fit_c", fmt_double(c));
      v.witness.details.emplace_back("max_residual", fmt_double(max_residual));
    }

    switch (classify(est, 1.0)) {
      case Side::Above: v.outcome = Outcome::Converges; break;
      case Side::Below: v.outcome = Outcome::Diverges; break;
      case Side::Near: {
        const TestVerdict b = bertrand_test(s, w);
        v.outcome = b.outcome;
        v.witness.details.emplace_back("deferred_to", "bertrand");
        if (b.error) v.witness.details.emplace_back("bertrand_error", *b.error);
        break;
      }
    }
    return v;
  });
}

// ---------------------------------------------------------------------------

KummerProbe kummer_probe(const Series& s, const TestWindow& w) {
  KummerProbe probe;
  probe.verdict.id = "kummer";
  Witness& wit = probe.verdict.witness;
  const std::int64_t probe_end = s.start() + w.probe_length;
  wit.window_start = s.start();
  wit.window_end = probe_end;
  try {
    probe.tail = oracle_tail_bounds(s, s.start(), probe_end);
    wit.details.emplace_back("oracle_majorant", probe.tail->majorant);
    if (probe.tail->upper) {
      probe.method = "construct_from_sum";
      wit.family = "B_N = u/a_N + 1 (closed form)";
      wit.details.emplace_back("sum_upper", probe.tail->upper->to_decimal(12));
      probe.sequence = construct_from_sum(s, *probe.tail->upper, NumericValue(1), probe_end);
      const KummerSequence& seq = *probe.sequence;
      if (!seq.all_positive()) {
        wit.details.emplace_back("positivity", seq.first_nonpositive ? "fails" : "undecided");
        if (seq.first_nonpositive) wit.failing_index = seq.first_nonpositive;
        return probe;
      }
      probe.condition = check_condition(s, seq.values, seq.start, seq.end(), w.rho);
      add_condition_details(wit, *probe.condition);
      if (probe.condition->overall == ConditionOverall::FailsAt) return probe;
      probe.verdict.outcome = Outcome::Converges;
      probe.verdict.confidence = s.is_exact() && probe.condition->overall == ConditionOverall::AllHold
                                     ? Confidence::Certified
                                     : Confidence::Numerical;
      return probe;
    }
    probe.method = "seed_sweep";
    wit.family = "B_N = seed (recursion)";
    probe.sweep = seed_sweep(s, s.start(), w.seeds, probe_end);
    add_sweep_details(wit, *probe.sweep);
    if (!w.seeds.empty()) probe.sequence = build_recursive(s, s.start(), w.seeds.front(), probe_end);
    if (probe.sweep->all_failed()) probe.verdict.outcome = Outcome::Diverges;
  } catch (const Error& e) {
    probe.verdict.error = e.what();
    wit.details.emplace_back("error", e.what());
  }
  return probe;
}

FusedVerdict fuse(const std::vector<TestVerdict>& verdicts) {
  for (const auto& v : verdicts) {
    if (v.outcome != Outcome::Inconclusive && v.confidence == Confidence::Certified) {
      return {v.outcome, Confidence::Certified, v.id};
    }
  }
  int converges = 0;
  int diverges = 0;
  for (const auto& v : verdicts) {
    if (v.outcome == Outcome::Converges) ++converges;
    if (v.outcome == Outcome::Diverges) ++diverges;
  }
  if (converges > diverges) return {Outcome::Converges, Confidence::Numerical, "majority"};
  if (diverges > converges) return {Outcome::Diverges, Confidence::Numerical, "majority"};
  return {Outcome::Inconclusive, std::nullopt, "none"};
}

AnalysisReport full_analysis(const Series& s, const AnalysisOptions& options) {
  auto selected = [&](std::string_view id) {
    return options.tests.empty() ||
           std::find(options.tests.begin(), options.tests.end(), id) != options.tests.end();
  };
  AnalysisReport report;
  report.expression = print(s.expr());
  report.start = s.start();
  report.exact = s.is_exact();
  const TestWindow& w = options.window;
  if (selected("root")) report.verdicts.push_back(root_test(s, w));
  if (selected("ratio")) report.verdicts.push_back(ratio_test(s, w));
  if (selected("raabe")) report.verdicts.push_back(raabe_test(s, w));
  if (selected("gauss")) report.verdicts.push_back(gauss_test(s, w));
  if (selected("bertrand")) report.verdicts.push_back(bertrand_test(s, w));
  if (selected("kummer")) {
    report.kummer = kummer_probe(s, w);
    report.verdicts.push_back(report.kummer->verdict);
  }
  report.fused = fuse(report.verdicts);
  return report;
}

}  // namespace kummer
