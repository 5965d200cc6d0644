#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "kummer/classical.hpp"

namespace kummer {

class CorpusFormatError : public Error {
 public:
  CorpusFormatError(std::size_t line, const std::string& message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// One line of `<expression> | <start> | converges|diverges | <comment>`.
struct CorpusEntry {
  std::string expression;
  std::int64_t start = 1;
  Outcome label = Outcome::Converges;
  std::string comment;
  std::size_t line = 0;
};

/// Blank lines and lines starting with '#' are skipped. Expressions are
/// parsed eagerly so a bad entry is reported by line.
std::vector<CorpusEntry> parse_corpus(std::istream& in);
std::vector<CorpusEntry> load_corpus(const std::string& path);
/// Corpus shipped with the sources.
std::string default_corpus_path();

struct CorpusRow {
  CorpusEntry entry;
  AnalysisReport report;
  /// Fused outcome contradicts the label, or some test certified the
  /// opposite of the label.
  bool mismatch = false;
};

struct CorpusResult {
  std::vector<CorpusRow> rows;  // corpus order
  std::size_t mismatches = 0;
};

/// Runs full_analysis on every entry with up to `jobs` worker threads.
CorpusResult run_corpus(const std::vector<CorpusEntry>& entries, const AnalysisOptions& options,
                        unsigned jobs = 1);

std::string render_corpus_text(const CorpusResult& r);
std::string render_corpus_json(const CorpusResult& r);

}  // namespace kummer
