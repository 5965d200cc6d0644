#include "kummer/report.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace kummer {

namespace {

using Json = nlohmann::ordered_json;

constexpr std::array<std::string_view, 6> kTestIds{"root", "ratio", "raabe", "gauss", "bertrand", "kummer"};
constexpr std::size_t kPreview = 8;

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string capitalized(std::string_view s) {
  std::string out(s);
  if (!out.empty()) out[0] = static_cast<char>(out[0] - 'a' + 'A');
  return out;
}

std::string fused_label(const FusedVerdict& f) {
  std::string out = capitalized(to_string(f.outcome));
  if (f.confidence) out += " (" + capitalized(to_string(*f.confidence)) + ")";
  return out;
}

Json confidence_json(const TestVerdict& v) {
  if (v.outcome == Outcome::Inconclusive) return nullptr;
  return std::string(to_string(v.confidence));
}

Json witness_json(const Witness& w) {
  Json j;
  j["family"] = w.family;
  j["window"] = Json::array({w.window_start, w.window_end});
  if (w.estimate) {
    Json e;
    e["value"] = num(w.estimate->value);
    e["stability"] = num(w.estimate->stability);
    Json raw = Json::array();
    for (const auto& [n, v] : w.estimate->raw) raw.push_back(Json::array({n, num(v)}));
    e["raw"] = raw;
    j["estimate"] = e;
  } else {
    j["estimate"] = nullptr;
  }
  j["failing_index"] = w.failing_index ? Json(*w.failing_index) : Json(nullptr);
  Json details = Json::object();
  for (const auto& [k, v] : w.details) details[k] = v;
  j["details"] = details;
  return j;
}

Json kummer_json(const KummerProbe& k) {
  Json j;
  j["method"] = k.method;
  if (k.sequence) {
    const KummerSequence& seq = *k.sequence;
    j["N"] = seq.start;
    j["seed"] = seq.seed.to_string();
    j["first_nonpositive"] = seq.first_nonpositive ? Json(*seq.first_nonpositive) : Json(nullptr);
    Json preview = Json::array();
    for (std::size_t i = 0; i < std::min(kPreview, seq.values.size()); ++i) {
      preview.push_back(seq.values[i].to_string());
    }
    j["values_preview"] = preview;
  } else {
    j["N"] = nullptr;
    j["seed"] = nullptr;
    j["first_nonpositive"] = nullptr;
    j["values_preview"] = Json::array();
  }
  return j;
}

}  // namespace

void AnalysisConfig::validate() const {
  if (window < 2) throw ArgumentError("window must be >= 2");
  if (probe_window < 2) throw ArgumentError("probe window must be >= 2");
  if (precision < kMinPrecision) throw ArgumentError("precision must be >= 64 bits");
  if (seeds.empty()) throw ArgumentError("seed list is empty");
  for (const auto& s : seeds) {
    if (is_positive(s) != TriBool::True) throw ArgumentError("seeds must be > 0");
  }
  if (is_positive(rho) != TriBool::True) throw ArgumentError("rho must be > 0");
  if (b1 && is_positive(*b1) != TriBool::True) throw ArgumentError("B_N must be > 0");
  for (const auto& t : tests) {
    if (std::find(kTestIds.begin(), kTestIds.end(), t) == kTestIds.end()) {
      throw ArgumentError("unknown test '" + t + "'");
    }
  }
}

AnalysisOptions AnalysisConfig::options() const {
  AnalysisOptions o;
  o.window.length = window;
  o.window.probe_length = probe_window;
  o.window.seeds = seeds;
  o.window.rho = rho;
  o.tests = tests;
  return o;
}

std::string display(const NumericValue& v) {
  return (v.is_approx() ? "≈" : "") + v.to_decimal(10);
}

std::string render_text(const AnalysisReport& r) {
  std::ostringstream out;
  out << "expression: " << r.expression << "\n";
  out << "start:      " << r.start << "\n";
  out << "mode:       " << (r.exact ? "exact" : "approximate") << "\n\n";
  char line[256];
  std::snprintf(line, sizeof line, "%-9s %-13s %-10s %s\n", "test", "outcome", "confidence", "estimate");
  out << line;
  for (const auto& v : r.verdicts) {
    const std::string conf = v.outcome == Outcome::Inconclusive ? "-" : std::string(to_string(v.confidence));
    const std::string est = v.witness.estimate ? "≈" + num(v.witness.estimate->value) : "-";
    std::snprintf(line, sizeof line, "%-9s %-13s %-10s %s\n", v.id.c_str(),
                  std::string(to_string(v.outcome)).c_str(), conf.c_str(), est.c_str());
    out << line;
    if (v.error) out << "          error: " << *v.error << "\n";
  }
  if (r.kummer) {
    const KummerProbe& k = *r.kummer;
    out << "\nkummer:     " << (k.method.empty() ? "-" : k.method);
    if (k.tail && k.tail->upper) out << ", sum <= " << display(*k.tail->upper);
    out << "\n";
    if (k.sequence) {
      const KummerSequence& seq = *k.sequence;
      out << "  N = " << seq.start << ", B_N = " << display(seq.seed) << ", first non-positive: "
          << (seq.first_nonpositive ? std::to_string(*seq.first_nonpositive) : "none") << "\n";
      out << "  B:";
      for (std::size_t i = 0; i < std::min(kPreview, seq.values.size()); ++i) {
        out << " " << display(seq.values[i]);
      }
      out << "\n";
    }
    if (k.condition) out << "  condition: " << to_string(k.condition->overall) << "\n";
  }
  out << "\nfused:      " << fused_label(r.fused);
  if (r.fused.source != "none") out << " via " << r.fused.source;
  out << "\n";
  return out.str();
}

std::string render_json(const AnalysisReport& r) {
  Json j;
  j["expression"] = r.expression;
  j["start"] = r.start;
  j["exact"] = r.exact;
  Json tests = Json::array();
  for (const auto& v : r.verdicts) {
    Json t;
    t["id"] = v.id;
    t["outcome"] = std::string(to_string(v.outcome));
    t["confidence"] = confidence_json(v);
    t["witness"] = witness_json(v.witness);
    if (v.error) t["error"] = *v.error;
    tests.push_back(t);
  }
  j["tests"] = tests;
  Json fused;
  fused["outcome"] = std::string(to_string(r.fused.outcome));
  fused["confidence"] = r.fused.confidence ? Json(std::string(to_string(*r.fused.confidence))) : Json(nullptr);
  fused["source"] = r.fused.source;
  j["fused"] = fused;
  j["kummer"] = r.kummer ? kummer_json(*r.kummer) : Json(nullptr);
  return j.dump(2) + "\n";
}

std::string render_csv(const AnalysisReport& r) {
  std::ostringstream out;
  out << "test,outcome,confidence,estimate\n";
  for (const auto& v : r.verdicts) {
    out << v.id << "," << to_string(v.outcome) << ","
        << (v.outcome == Outcome::Inconclusive ? "" : std::string(to_string(v.confidence))) << ","
        << (v.witness.estimate ? num(v.witness.estimate->value) : "") << "\n";
  }
  out << "fused," << to_string(r.fused.outcome) << ","
      << (r.fused.confidence ? std::string(to_string(*r.fused.confidence)) : "") << ",\n";
  return out.str();
}

void write_b_csv(std::ostream& out, const Series& s, const NumericValue& seed, std::int64_t end,
                 bool rational) {
  const KummerSequence seq = build_recursive(s, s.start(), seed, end);
  auto cell = [&](const NumericValue& v) {
    return rational && v.is_exact() ? v.to_string() : v.to_decimal(30);
  };
  out << "n,a_n,B_n\n";
  for (std::int64_t n = seq.start; n <= seq.end(); ++n) {
    out << n << "," << cell(s.term(n)) << "," << cell(seq.at(n)) << "\n";
  }
}

}  // namespace kummer
