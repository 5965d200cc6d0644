#include "kummer/corpus.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "kummer/expr.hpp"

namespace kummer {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  // The comment (fourth field) may itself contain '|'.
  while (out.size() < 3) {
    const auto bar = line.find('|', pos);
    if (bar == std::string::npos) break;
    out.push_back(trim(std::string_view(line).substr(pos, bar - pos)));
    pos = bar + 1;
  }
  out.push_back(trim(std::string_view(line).substr(pos)));
  return out;
}

bool certified_contradiction(const AnalysisReport& r, Outcome label) {
  return std::any_of(r.verdicts.begin(), r.verdicts.end(), [&](const TestVerdict& v) {
    return v.confidence == Confidence::Certified && v.outcome != Outcome::Inconclusive && v.outcome != label;
  });
}

}  // namespace

std::vector<CorpusEntry> parse_corpus(std::istream& in) {
  std::vector<CorpusEntry> entries;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto fields = split_fields(body);
    if (fields.size() != 4) throw CorpusFormatError(number, "expected 4 '|'-separated fields");
    CorpusEntry e;
    e.line = number;
    e.expression = fields[0];
    try {
      (void)parse(e.expression);
    } catch (const ParseError& err) {
      throw CorpusFormatError(number, err.what());
    }
    const std::string& st = fields[1];
    const auto [ptr, ec] = std::from_chars(st.data(), st.data() + st.size(), e.start);
    if (ec != std::errc() || ptr != st.data() + st.size() || st.empty() || e.start < 1) {
      throw CorpusFormatError(number, "invalid start index '" + st + "'");
    }
    if (fields[2] == "converges") {
      e.label = Outcome::Converges;
    } else if (fields[2] == "diverges") {
      e.label = Outcome::Diverges;
    } else {
      throw CorpusFormatError(number, "label must be 'converges' or 'diverges'");
    }
    e.comment = fields[3];
    entries.push_back(std::move(e));
  }
  return entries;
}

std::vector<CorpusEntry> load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot read corpus file '" + path + "'");
  return parse_corpus(in);
}

std::string default_corpus_path() { return KUMMER_DEFAULT_CORPUS; }

CorpusResult run_corpus(const std::vector<CorpusEntry>& entries, const AnalysisOptions& options,
                        unsigned jobs) {
  CorpusResult result;
  result.rows.resize(entries.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < entries.size(); i = next++) {
      CorpusRow& row = result.rows[i];
      row.entry = entries[i];
      try {
        const Series s = Series::parse(entries[i].expression, entries[i].start);
        row.report = full_analysis(s, options);
      } catch (const Error& e) {
        row.report.expression = entries[i].expression;
        row.report.start = entries[i].start;
        row.report.fused.source = std::string("error: ") + e.what();
      }
      const Outcome got = row.report.fused.outcome;
      row.mismatch = (got != Outcome::Inconclusive && got != entries[i].label) ||
                     certified_contradiction(row.report, entries[i].label);
    }
  };
  jobs = std::clamp<unsigned>(jobs, 1, std::max<std::size_t>(entries.size(), 1));
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  result.mismatches = static_cast<std::size_t>(
      std::count_if(result.rows.begin(), result.rows.end(), [](const CorpusRow& r) { return r.mismatch; }));
  return result;
}

std::string render_corpus_text(const CorpusResult& r) {
  std::ostringstream out;
  char line[512];
  std::snprintf(line, sizeof line, "%-3s %-26s %-10s %-13s %-10s %s\n", "", "expression", "label", "outcome",
                "confidence", "source");
  out << line;
  for (const auto& row : r.rows) {
    const FusedVerdict& f = row.report.fused;
    std::snprintf(line, sizeof line, "%-3s %-26s %-10s %-13s %-10s %s\n", row.mismatch ? "!!" : "",
                  row.entry.expression.c_str(), std::string(to_string(row.entry.label)).c_str(),
                  std::string(to_string(f.outcome)).c_str(),
                  f.confidence ? std::string(to_string(*f.confidence)).c_str() : "-", f.source.c_str());
    out << line;
  }
  out << r.rows.size() << " entries, " << r.mismatches << " mismatches\n";
  return out.str();
}

std::string render_corpus_json(const CorpusResult& r) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    const FusedVerdict& f = row.report.fused;
    nlohmann::ordered_json j;
    j["expression"] = row.entry.expression;
    j["start"] = row.entry.start;
    j["label"] = std::string(to_string(row.entry.label));
    j["outcome"] = std::string(to_string(f.outcome));
    j["confidence"] = f.confidence ? nlohmann::ordered_json(std::string(to_string(*f.confidence)))
                                   : nlohmann::ordered_json(nullptr);
    j["source"] = f.source;
    j["mismatch"] = row.mismatch;
    rows.push_back(j);
  }
  nlohmann::ordered_json j;
  j["entries"] = r.rows.size();
  j["mismatches"] = r.mismatches;
  j["rows"] = rows;
  return j.dump(2) + "\n";
}

}  // namespace kummer
