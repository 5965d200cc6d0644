#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "kummer/corpus.hpp"
#include "kummer/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitInput = 2;
constexpr int kExitUsage = 64;

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

kummer::NumericValue parse_value(const std::string& text, const char* what) {
  try {
    return kummer::NumericValue(kummer::parse_rational(text));
  } catch (const std::exception&) {
    throw kummer::ArgumentError(std::string("invalid ") + what + " '" + text + "'");
  }
}

void print_parse_error(const std::string& expr, const kummer::ParseError& e) {
  std::cerr << "error: " << e.what() << "\n  " << expr << "\n  " << std::string(e.offset(), ' ') << "^\n";
}

struct AnalyzeArgs {
  kummer::AnalysisConfig config;
  std::string tests;
  std::string seeds;
  std::string b1;
  std::string rho;
  std::string format = "text";
};

int run_analyze(AnalyzeArgs& a) {
  kummer::AnalysisConfig& c = a.config;
  try {
    c.tests = split_list(a.tests);
    if (!a.seeds.empty()) {
      c.seeds.clear();
      for (const auto& s : split_list(a.seeds)) c.seeds.push_back(parse_value(s, "seed"));
    }
    if (!a.b1.empty()) c.b1 = parse_value(a.b1, "B_N");
    if (!a.rho.empty()) c.rho = parse_value(a.rho, "rho");
    c.format = a.format == "json"  ? kummer::OutputFormat::Json
               : a.format == "csv" ? kummer::OutputFormat::Csv
                                   : kummer::OutputFormat::Text;
    c.validate();
    const kummer::Series s = kummer::Series::parse(c.expression, c.start, kummer::EvalMode::ExactPreferred,
                                                   c.precision);
    if (c.emit_b) {
      const kummer::NumericValue seed = c.b1.value_or(c.seeds.front());
      kummer::write_b_csv(std::cout, s, seed, c.start + c.window, c.rational);
      return kExitOk;
    }
    const kummer::AnalysisReport r = kummer::full_analysis(s, c.options());
    switch (c.format) {
      case kummer::OutputFormat::Json: std::cout << kummer::render_json(r); break;
      case kummer::OutputFormat::Csv: std::cout << kummer::render_csv(r); break;
      case kummer::OutputFormat::Text: std::cout << kummer::render_text(r); break;
    }
    return kExitOk;
  } catch (const kummer::ParseError& e) {
    print_parse_error(c.expression, e);
  } catch (const kummer::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kExitInput;
}

int run_corpus(const std::string& path, const std::string& format, unsigned jobs) {
  try {
    const auto entries = kummer::load_corpus(path);
    const auto result = kummer::run_corpus(entries, {}, jobs);
    std::cout << (format == "json" ? kummer::render_corpus_json(result) : kummer::render_corpus_text(result));
    return result.mismatches == 0 ? kExitOk : kExitMismatch;
  } catch (const kummer::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kummer's test and its classical specializations for positive series"};
  app.require_subcommand(1);

  AnalyzeArgs a;
  auto* analyze = app.add_subcommand("analyze", "Analyze one series sum_{n>=start} a(n)");
  analyze->add_option("expr", a.config.expression, "Term expression in n")->required();
  analyze->add_option("--start", a.config.start, "First index")->check(CLI::PositiveNumber);
  analyze->add_option("--tests", a.tests, "Comma list of root,ratio,raabe,gauss,bertrand,kummer");
  analyze->add_option("--window", a.config.window, "Window length for the statistics");
  analyze->add_option("--probe-window", a.config.probe_window, "Window length for the Kummer probe");
  analyze->add_option("--precision", a.config.precision, "Bits for approximate arithmetic");
  analyze->add_option("--b1", a.b1, "Seed B_N for --emit-b");
  analyze->add_option("--rho", a.rho, "Kummer threshold");
  analyze->add_option("--seeds", a.seeds, "Comma list of sweep seeds");
  analyze->add_option("--format", a.format, "Output format")->check(CLI::IsMember({"text", "json", "csv"}));
  analyze->add_flag("--emit-b", a.config.emit_b, "Emit n,a_n,B_n rows as CSV");
  analyze->add_flag("--rational", a.config.rational, "Exact values as p/q in --emit-b output");

  std::string corpus_path;
  std::string corpus_format = "text";
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  auto* corpus = app.add_subcommand("corpus", "Run the full analysis over a labelled corpus");
  corpus->add_option("path", corpus_path, "Corpus file")->required();
  corpus->add_option("--format", corpus_format, "Output format")->check(CLI::IsMember({"text", "json"}));
  corpus->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (analyze->parsed()) return run_analyze(a);
  return run_corpus(corpus_path, corpus_format, jobs);
}
