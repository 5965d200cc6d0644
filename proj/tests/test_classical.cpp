#include <cmath>

#include "doctest.h"
#include "kummer/classical.hpp"

using namespace kummer;

namespace {

NumericValue q(long num, long den = 1) { return NumericValue(num, den); }

std::string detail_of(const TestVerdict& v, const std::string& key) {
  for (const auto& [k, val] : v.witness.details) {
    if (k == key) return val;
  }
  return {};
}

}  // namespace

TEST_CASE("Richardson extrapolation recovers polynomial-in-1/n limits") {
  const LimitEstimate e =
      richardson_limit([](std::int64_t n) { return 3.0 + 2.0 / static_cast<double>(n) - 5.0 / (double(n) * n); }, 1, 1000);
  CHECK(e.value == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(e.stability >= 0.0);
  CHECK(e.stability < 1e-9);
  CHECK(e.raw.size() == 5);
  CHECK(e.raw.back().first == 992);
  CHECK(classify(e, 1.0) == Side::Above);
  CHECK(classify(e, 3.0) == Side::Near);
  CHECK_THROWS_AS(richardson_limit([](std::int64_t) { return 0.0; }, 10, 20), ArgumentError);
}

TEST_CASE("classify treats runaway statistics by direction") {
  const LimitEstimate grow = richardson_limit([](std::int64_t n) { return std::log(double(n)); }, 1, 10000);
  CHECK(classify(grow, 1.0) == Side::Above);
}

TEST_CASE("Raabe and Bertrand statistics") {
  const Series p2 = Series::parse("1/n^2");
  CHECK(identical(raabe_statistic(p2, 4), q(9, 4)));  // 4 * (25/16 - 1)
  const Series h = Series::parse("1/n");
  CHECK(identical(raabe_statistic(h, 17), q(1)));
  CHECK(bertrand_statistic(h, 17).to_double() == doctest::Approx(0.0));
  // Kummer margin of B_n = n equals the Raabe statistic minus one.
  for (std::int64_t n = 1; n < 30; ++n) {
    const std::vector<NumericValue> b{NumericValue(static_cast<long>(n)), NumericValue(static_cast<long>(n + 1))};
    const ConditionReport r = check_condition(p2, b, n, n + 1);
    CHECK(identical(r.margins[0], raabe_statistic(p2, n) - q(1)));
  }
}

TEST_CASE("ratio test") {
  const TestVerdict g = ratio_test(Series::parse("1/2^n"));
  CHECK(g.outcome == Outcome::Converges);
  CHECK(g.confidence == Confidence::Certified);
  CHECK(g.witness.family == "B_n = 2");
  CHECK(detail_of(g, "first_margin") == "2");
  CHECK(g.witness.estimate->value == doctest::Approx(0.5));

  const TestVerdict h = ratio_test(Series::parse("1/n"));
  CHECK(h.outcome == Outcome::Inconclusive);

  const TestVerdict f = ratio_test(Series::parse("n!"));
  CHECK(f.outcome == Outcome::Diverges);
  CHECK(f.confidence == Confidence::Certified);
}

TEST_CASE("Raabe test") {
  const TestVerdict p2 = raabe_test(Series::parse("1/n^2"));
  CHECK(p2.outcome == Outcome::Converges);
  CHECK(p2.confidence == Confidence::Certified);
  CHECK(p2.witness.estimate->value == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(detail_of(p2, "kummer_condition") == "all_hold");

  const TestVerdict h = raabe_test(Series::parse("1/n"));
  CHECK(h.outcome == Outcome::Inconclusive);
  CHECK(detail_of(h, "defer") == "bertrand");

  const TestVerdict p32 = raabe_test(Series::parse("1/n^(3/2)"));
  CHECK(p32.outcome == Outcome::Converges);
  CHECK(p32.confidence == Confidence::Numerical);
  CHECK(p32.witness.estimate->value == doctest::Approx(1.5).epsilon(1e-6));

  const TestVerdict half = raabe_test(Series::parse("1/n^0.5"));
  CHECK(half.outcome == Outcome::Diverges);
}

TEST_CASE("Bertrand test") {
  const TestVerdict c = bertrand_test(Series::parse("1/(n*ln(n+1)^2)"));
  CHECK(c.outcome == Outcome::Converges);
  CHECK(c.confidence == Confidence::Numerical);

  const TestVerdict p2 = bertrand_test(Series::parse("1/n^2"));
  CHECK(p2.outcome == Outcome::Converges);

  // The boundary case has limit 1 and is left to the seed sweep, which can
  // only rule on seeds whose nonpositive index falls inside the probe window.
  const TestVerdict b = bertrand_test(Series::parse("1/(n*ln(n+1))"));
  CHECK(b.outcome != Outcome::Converges);
  CHECK(detail_of(b, "decided_by") == "seed_sweep");

  TestWindow small_seeds;
  small_seeds.seeds = {q(1), q(3, 2)};
  const TestVerdict swept = bertrand_test(Series::parse("1/(n*ln(n+1))"), small_seeds);
  CHECK(swept.outcome == Outcome::Diverges);
  CHECK(swept.confidence == Confidence::Numerical);
}

TEST_CASE("root test") {
  const TestVerdict g = root_test(Series::parse("1/2^n"));
  CHECK(g.outcome == Outcome::Converges);
  CHECK(g.confidence == Confidence::Numerical);
  CHECK(g.witness.estimate->value == doctest::Approx(0.5).epsilon(1e-6));

  CHECK(root_test(Series::parse("1/n")).outcome == Outcome::Inconclusive);

  const TestVerdict t = root_test(Series::parse("n/3^n"));
  CHECK(t.outcome == Outcome::Converges);
  CHECK(t.witness.estimate->value == doctest::Approx(1.0 / 3.0).epsilon(1e-3));
  CHECK(root_test(Series::parse("2^n")).outcome == Outcome::Diverges);
}

TEST_CASE("Gauss test") {
  const TestVerdict p2 = gauss_test(Series::parse("1/n^2"));
  CHECK(p2.outcome == Outcome::Converges);
  CHECK(std::stod(detail_of(p2, "fit_h")) == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(std::stod(detail_of(p2, "fit_c")) == doctest::Approx(1.0).epsilon(1e-3));

  const TestVerdict h = gauss_test(Series::parse("1/n"));
  CHECK(h.outcome == Outcome::Diverges);
  CHECK(detail_of(h, "deferred_to") == "bertrand");

  const TestVerdict hyper = gauss_test(Series::parse("4^n*n!^2/(2*n+1)!"));
  CHECK(hyper.outcome == Outcome::Diverges);
  CHECK(std::stod(detail_of(hyper, "fit_h")) == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("seed sweep on the harmonic series") {
  // seed B_N is exhausted once H_n - H_N passes B_N, i.e. near n = N e^{B_N}.
  const Series h = Series::parse("1/n");
  const std::vector<NumericValue> seeds{q(1), q(2), q(3), q(5)};
  const SeedSweep sweep = seed_sweep(h, 1, seeds, 2000);
  CHECK(sweep.all_failed());
  CHECK(*sweep.entries[1].first_nonpositive == 11);

  const std::vector<NumericValue> big{q(1), q(10), q(100), q(1000)};
  const SeedSweep large = seed_sweep(h, 1, big, 10000);
  CHECK_FALSE(large.all_failed());
  CHECK(large.entries[0].first_nonpositive.has_value());
}

TEST_CASE("Kummer probe") {
  const KummerProbe p = kummer_probe(Series::parse("1/n^2"));
  CHECK(p.method == "construct_from_sum");
  REQUIRE(p.sequence);
  CHECK(p.sequence->all_positive());
  CHECK(p.sequence->end() == 10001);
  REQUIRE(p.condition);
  CHECK(p.condition->overall == ConditionOverall::AllHold);
  for (const auto& m : p.condition->margins) CHECK(identical(m, q(1)));
  CHECK(p.verdict.outcome == Outcome::Converges);
  CHECK(p.verdict.confidence == Confidence::Certified);

  TestWindow w;
  w.seeds = {q(1), q(2)};
  const KummerProbe h = kummer_probe(Series::parse("1/n"), w);
  CHECK(h.method == "seed_sweep");
  CHECK(h.verdict.outcome == Outcome::Diverges);
  CHECK(h.verdict.confidence == Confidence::Numerical);
}

TEST_CASE("fusion") {
  auto make = [](const char* id, Outcome o, Confidence c) {
    TestVerdict v;
    v.id = id;
    v.outcome = o;
    v.confidence = c;
    return v;
  };
  const FusedVerdict cert = fuse({make("root", Outcome::Diverges, Confidence::Numerical),
                                  make("raabe", Outcome::Converges, Confidence::Certified)});
  CHECK(cert.outcome == Outcome::Converges);
  CHECK(cert.source == "raabe");
  const FusedVerdict maj = fuse({make("root", Outcome::Diverges, Confidence::Numerical),
                                 make("gauss", Outcome::Diverges, Confidence::Numerical),
                                 make("bertrand", Outcome::Converges, Confidence::Numerical)});
  CHECK(maj.outcome == Outcome::Diverges);
  CHECK(maj.confidence == Confidence::Numerical);
  const FusedVerdict tie = fuse({make("root", Outcome::Diverges, Confidence::Numerical),
                                 make("gauss", Outcome::Converges, Confidence::Numerical)});
  CHECK(tie.outcome == Outcome::Inconclusive);
  CHECK_FALSE(tie.confidence.has_value());
  CHECK(fuse({}).outcome == Outcome::Inconclusive);
}

TEST_CASE("full analysis") {
  const AnalysisReport p2 = full_analysis(Series::parse("1/n^2"));
  CHECK(p2.fused.outcome == Outcome::Converges);
  CHECK(p2.fused.confidence == Confidence::Certified);
  CHECK(p2.fused.source == "raabe");
  REQUIRE(p2.verdicts.size() == 6);
  const char* order[] = {"root", "ratio", "raabe", "gauss", "bertrand", "kummer"};
  for (std::size_t i = 0; i < 6; ++i) CHECK(p2.verdicts[i].id == order[i]);
  REQUIRE(p2.kummer);

  const AnalysisReport h = full_analysis(Series::parse("1/n"));
  CHECK(h.fused.outcome == Outcome::Diverges);

  AnalysisOptions only;
  only.tests = {"ratio", "root"};
  const AnalysisReport g = full_analysis(Series::parse("1/2^n"), only);
  CHECK(g.verdicts.size() == 2);
  CHECK(g.verdicts[0].id == "root");
  CHECK_FALSE(g.kummer.has_value());
}

TEST_CASE("per-test errors do not abort the analysis") {
  const AnalysisReport r = full_analysis(Series::parse("n-3000"));
  CHECK(r.verdicts.size() == 6);
  for (const auto& v : r.verdicts) {
    CHECK(v.error.has_value());
    CHECK(v.outcome == Outcome::Inconclusive);
  }
  CHECK(r.fused.outcome == Outcome::Inconclusive);
}
