// Acceptance suite: one PASS/FAIL line per criterion, exit status = number
// of failed criteria.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "kummer/corpus.hpp"
#include "kummer/engine.hpp"
#include "random_expr.hpp"

using namespace kummer;
using Clock = std::chrono::steady_clock;

namespace {

NumericValue q(long num, long den = 1) { return NumericValue(num, den); }

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Criterion {
  bool pass = true;
  std::ostringstream note;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) note << "first failure: " << what << "; ";
      pass = false;
    }
  }
};

int failures = 0;

void report(int id, const char* title, Criterion& c) {
  std::printf("criterion %d %s: %s (%s)\n", id, c.pass ? "PASS" : "FAIL", title, c.note.str().c_str());
  std::fflush(stdout);
  if (!c.pass) ++failures;
}

bool same_values(const KummerSequence& a, const KummerSequence& b) {
  if (a.values.size() != b.values.size()) return false;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const bool ok = a.values[i].is_exact() && b.values[i].is_exact() ? identical(a.values[i], b.values[i])
                                                                      : overlaps(a.values[i], b.values[i]);
    if (!ok) return false;
  }
  return true;
}

/// Longest prefix of `seq` whose values are provably positive.
std::vector<NumericValue> positive_prefix(const KummerSequence& seq) {
  std::vector<NumericValue> out;
  for (const auto& v : seq.values) {
    if (is_positive(v) != TriBool::True) break;
    out.push_back(v);
  }
  return out;
}

std::vector<NumericValue> linear(std::int64_t from, std::int64_t to) {
  std::vector<NumericValue> out;
  for (std::int64_t n = from; n <= to; ++n) out.emplace_back(static_cast<long>(n));
  return out;
}

struct Family {
  std::string name;
  std::vector<NumericValue> b;  // B_N..B_M
  std::int64_t start;
};

/// Positive B families on [start, start + len]: the equality recursion from
/// three seeds, B_n = n and a constant.
std::vector<Family> families(const Series& s, std::int64_t len) {
  std::vector<Family> out;
  const std::int64_t n0 = s.start();
  for (long seed : {1L, 3L, 10L}) {
    const KummerSequence seq = build_recursive(s, n0, q(seed), n0 + len);
    auto b = positive_prefix(seq);
    if (b.size() >= 2) out.push_back({"recursion B_N=" + std::to_string(seed), std::move(b), n0});
  }
  out.push_back({"B_n=n", linear(n0, n0 + len), n0});
  out.push_back({"B_n=2", std::vector<NumericValue>(static_cast<std::size_t>(len + 1), q(2)), n0});
  return out;
}

std::int64_t family_end(const Family& f) { return f.start + static_cast<std::int64_t>(f.b.size()) - 1; }

}  // namespace

int main() {
  const auto entries = load_corpus(default_corpus_path());
  std::vector<Series> corpus;
  for (const auto& e : entries) corpus.push_back(Series::parse(e.expression, e.start));
  std::printf("corpus: %zu entries from %s\n", entries.size(), default_corpus_path().c_str());

  // 1. recursion and closed form agree.
  {
    Criterion c;
    const auto t0 = Clock::now();
    int runs = 0;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      for (std::int64_t n0 : {1, 5}) {
        for (long seed : {1L, 3L, 10L}) {
          const KummerSequence rec = build_recursive(corpus[i], n0, q(seed), n0 + 1000);
          const KummerSequence closed = build_closed_form(corpus[i], n0, q(seed), n0 + 1000);
          c.require(same_values(rec, closed) && rec.first_nonpositive == closed.first_nonpositive,
                    entries[i].expression + " N=" + std::to_string(n0) + " B_N=" + std::to_string(seed));
          ++runs;
        }
      }
    }
    const double elapsed = seconds_since(t0);
    c.require(entries.size() == 25, "corpus size " + std::to_string(entries.size()));
    c.require(elapsed < 30.0, "runtime over 30 s");
    c.note << runs << " runs, " << elapsed << " s";
    report(1, "construction equivalence", c);
  }

  // Full analyses are shared by criteria 2, 5 and 7.
  const auto t_corpus = Clock::now();
  const CorpusResult result = run_corpus(entries, {}, 1);
  const double corpus_seconds = seconds_since(t_corpus);

  // 2. construct_from_sum with delta = 1 on oracle-bounded convergent entries.
  {
    Criterion c;
    int exact = 0;
    int approx = 0;
    for (const auto& row : result.rows) {
      if (row.entry.label != Outcome::Converges) continue;
      const auto& k = row.report.kummer;
      if (!k || !k->tail || !k->tail->upper) continue;
      const std::string& e = row.entry.expression;
      c.require(k->sequence.has_value() && k->sequence->end() >= row.entry.start + 10000, e + " window");
      if (!k->sequence) continue;
      c.require(!k->sequence->first_nonpositive && !k->sequence->first_undecided_sign, e + " positivity");
      c.require(k->condition.has_value(), e + " condition");
      if (!k->condition) continue;
      if (row.report.exact) {
        ++exact;
        c.require(k->condition->overall == ConditionOverall::AllHold, e + " AllHold");
        for (const auto& m : k->condition->margins) {
          if (!identical(m, q(1))) {
            c.require(false, e + " margin " + m.to_string());
            break;
          }
        }
      } else {
        // approximate: margins enclose 1
        ++approx;
        for (const auto& m : k->condition->margins) {
          if (!overlaps(m, q(1))) {
            c.require(false, e + " margin enclosure");
            break;
          }
        }
      }
    }
    c.note << exact << " exact entries with margins exactly 1, " << approx
           << " approximate entries with margins enclosing 1, corpus run " << corpus_seconds << " s";
    report(2, "necessity direction via construct_from_sum", c);
  }

  // 3. AllHold implies the partial-sum bound.
  {
    Criterion c;
    int checked = 0;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      for (const Family& f : families(corpus[i], 1000)) {
        const ConditionReport r = check_condition(corpus[i], f.b, f.start, family_end(f));
        if (r.overall != ConditionOverall::AllHold) continue;
        const BoundReport b = sufficiency_bound(corpus[i], f.b, f.start, family_end(f));
        c.require(b.holds == TriBool::True, entries[i].expression + " " + f.name);
        ++checked;
      }
    }
    std::mt19937_64 rng(1234);
    int trials = 0;
    int vacuous = 0;
    for (int t = 0; t < 100; ++t) {
      const std::size_t i = std::uniform_int_distribution<std::size_t>(0, corpus.size() - 1)(rng);
      const Series& s = corpus[i];
      const long seed = std::uniform_int_distribution<long>(1, 20)(rng);
      const long t_max = std::uniform_int_distribution<long>(1, 999)(rng);
      // B'_{n+1} = (B'_n a_n/a_{n+1} - 1)(1 - u_n), u_n in [0, t_max/1000)
      std::vector<NumericValue> b{q(seed)};
      const std::int64_t n0 = s.start();
      for (std::int64_t n = n0; n < n0 + 300; ++n) {
        const NumericValue eq = b.back() * s.ratio(n) - q(1);
        if (is_positive(eq) != TriBool::True) break;
        const long u = std::uniform_int_distribution<long>(0, t_max - 1)(rng);
        b.push_back(eq * (q(1) - q(u, 1000)));
      }
      if (b.size() < 3) {
        ++vacuous;
        continue;
      }
      const std::int64_t end = n0 + static_cast<std::int64_t>(b.size()) - 1;
      const ConditionReport r = check_condition(s, b, n0, end);
      if (s.is_exact()) c.require(r.overall == ConditionOverall::AllHold, entries[i].expression + " perturbed margins");
      if (r.overall == ConditionOverall::AllHold) {
        c.require(sufficiency_bound(s, b, n0, end).holds == TriBool::True,
                  entries[i].expression + " perturbation trial " + std::to_string(t));
      }
      ++trials;
    }
    c.require(trials >= 50, "too few non-vacuous trials");
    c.note << checked << " corpus AllHold windows, " << trials << " perturbation trials (" << vacuous
           << " vacuous), 0 violations required";
    report(3, "sufficiency bound", c);
  }

  // 4. positivity threshold.
  {
    Criterion c;
    const Series g = Series::parse("1/2^n");
    for (long seed : {3L, 2L}) {
      const KummerSequence seq = build_recursive(g, 1, q(seed), 10000);
      c.require(seq.all_positive() && seq.end() == 10000, "geometric seed " + std::to_string(seed));
    }
    const KummerSequence half = build_recursive(g, 1, q(1, 2), 10000);
    c.require(half.first_nonpositive == std::optional<std::int64_t>(2), "geometric seed 1/2");
    const KummerSequence h = build_recursive(Series::parse("1/n"), 1, q(2), 10000);
    c.require(h.first_nonpositive == std::optional<std::int64_t>(11), "harmonic seed 2");
    c.require(h.at(11).is_exact(), "harmonic exactness");
    c.note << "harmonic B_11 = " << h.at(11).to_string();
    report(4, "positivity threshold", c);
  }

  // 5. rate form and rho scaling.
  {
    Criterion c;
    std::size_t indices = 0;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      for (const Family& f : families(corpus[i], 1000)) {
        for (const NumericValue& rho : {q(1), q(1, 2), q(2)}) {
          const ConditionReport direct = check_condition(corpus[i], f.b, f.start, family_end(f), rho);
          const ConditionReport rate = check_rate_form(corpus[i], f.b, f.start, family_end(f), rho);
          const ConditionReport scaled =
              check_condition(corpus[i], scale_margin(f.b, rho), f.start, family_end(f), q(1));
          c.require(direct.status == rate.status, entries[i].expression + " " + f.name + " rate form");
          c.require(direct.status == scaled.status, entries[i].expression + " " + f.name + " scaling");
          indices += direct.status.size();
        }
      }
    }
    c.note << indices << " indices compared";
    report(5, "rate-form equivalence and rho scaling", c);
  }

  // 6. oracle accuracy.
  {
    Criterion c;
    const double zeta2 = 1.6449340668;  // pi^2/6 = 1.6449340668482264...
    const TailBounds p2 = oracle_tail_bounds(Series::parse("1/n^2"), 1, 100000);
    c.require(p2.upper.has_value(), "1/n^2 unbounded");
    if (p2.upper) {
      const double lo = p2.lower.to_double();
      const double hi = p2.upper->to_double();
      c.require(lo <= zeta2 && zeta2 <= hi && hi - lo <= 1e-4, "1/n^2 enclosure");
      c.note << "1/n^2 in [" << p2.lower.to_decimal(12) << ", " << p2.upper->to_decimal(12) << "]; ";
    }
    const TailBounds g = oracle_tail_bounds(Series::parse("1/2^n"), 2, 30);
    c.require(g.upper.has_value(), "geometric unbounded");
    if (g.upper) {
      c.require(cmp_le(g.lower, q(1, 2)) == TriBool::True && cmp_ge(*g.upper, q(1, 2)) == TriBool::True,
                "geometric enclosure");
      c.require(g.upper->to_double() - g.lower.to_double() <= 1e-8, "geometric width");
      c.note << "2^-n from 2 in [" << g.lower.to_decimal(12) << ", " << g.upper->to_decimal(12) << "]";
    }
    report(6, "oracle accuracy", c);
  }

  // 7. corpus verdicts and p-series Raabe estimates.
  {
    Criterion c;
    c.require(result.mismatches == 0, std::to_string(result.mismatches) + " corpus mismatches");
    int certified = 0;
    int inconclusive = 0;
    for (const auto& row : result.rows) {
      if (row.report.fused.outcome == Outcome::Inconclusive) ++inconclusive;
      for (const auto& v : row.report.verdicts) {
        if (v.outcome == Outcome::Inconclusive || v.confidence != Confidence::Certified) continue;
        ++certified;
        c.require(v.outcome == row.entry.label, row.entry.expression + " certified " + v.id);
      }
    }
    TestWindow w;
    w.length = 10000;
    for (const auto& [expr, p] : std::vector<std::pair<const char*, double>>{
             {"1/n^0.5", 0.5}, {"1/n", 1.0}, {"1/n^(3/2)", 1.5}, {"1/n^2", 2.0}, {"1/n^3", 3.0}}) {
      const TestVerdict v = raabe_test(Series::parse(expr), w);
      const double est = v.witness.estimate ? v.witness.estimate->value : NAN;
      c.require(std::fabs(est - p) <= 1e-6, std::string(expr) + " Raabe estimate");
      c.note << expr << " -> " << est << "; ";
    }
    c.note << certified << " certified verdicts, " << inconclusive << " inconclusive fused rows";
    report(7, "corpus verdicts", c);
  }

  // 8. parser.
  {
    Criterion c;
    c.require(identical(eval(parse("2^3^2"), 1), q(512)), "2^3^2");
    c.require(identical(eval(parse("1+2*3"), 1), q(7)), "1+2*3");
    testing::Rng rng(99);
    for (int i = 0; i < 100; ++i) {
      const TermExpr e = testing::random_any(rng, 5);
      c.require(parse(print(e)) == e, "round trip " + print(e));
    }
    struct Bad {
      const char* text;
      std::size_t offset;
    };
    for (const Bad& b : {Bad{"1/(n", 4}, Bad{"", 0}, Bad{"n+", 2}, Bad{"2n", 1}, Bad{"foo(n)", 0},
                         Bad{"n)", 1}, Bad{"n^", 2}, Bad{"1/(n+1))", 7}, Bad{"ln(n", 4}, Bad{"n $", 2}}) {
      try {
        (void)parse(b.text);
        c.require(false, std::string("accepted '") + b.text + "'");
      } catch (const ParseError& e) {
        c.require(e.offset() == b.offset, std::string("offset for '") + b.text + "'");
      }
    }
    c.note << "golden precedence, 100 round trips, 10 malformed inputs";
    report(8, "parser", c);
  }

  std::printf("%d criteria failed\n", failures);
  return failures;
}
