#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "reprocheck/classification.hpp"
#include "reprocheck/fetch.hpp"
#include "reprocheck/scoring.hpp"

namespace reprocheck {

/// Process exit codes; a stable contract for scripts.
namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int input_error = 1;    ///< fetch failure, unreadable file, bad flags
inline constexpr int backend_error = 2;
inline constexpr int corpus_error = 3;
}  // namespace exit_code

enum class OutputFormat { json, text };

struct RunConfig {
    ScoreConfig scoring;  ///< view, tau, variant
    BackendSpec backend;
    std::optional<std::string> template_path;
    OutputFormat format = OutputFormat::json;
    /// parse: merge sections by parent header.
    bool grouped = false;
    /// parse: repo_id written to the record; defaults to the Readme source.
    std::optional<std::string> repo_id;
    /// Corpus workers; 0 picks hardware concurrency (lexical) or 1 (external).
    unsigned jobs = 0;
    FetchOptions fetch;
};

/// Fetch, parse, filter and score one Readme. Prints a report JSON (or text)
/// on `out`; diagnostics go to `err` only.
int cmd_score(std::string_view target, const RunConfig& config, std::ostream& out, std::ostream& err);

/// Fetch, parse and filter one Readme and print it as one corpus JSONL line
/// (nothing when every section was dropped).
int cmd_parse(std::string_view target, const RunConfig& config, std::ostream& out, std::ostream& err);

/// Adds predicted_label/predicted_score to every section of a corpus. "-"
/// reads stdin.
int cmd_label(const std::string& corpus_path, const RunConfig& config, std::ostream& out,
              std::ostream& err);

/// Prints correlation/agreement/accuracy of a gold-annotated corpus.
int cmd_evaluate(const std::string& corpus_path, const RunConfig& config, std::ostream& out,
                 std::ostream& err);

/// Full command line (without argv[0]).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace reprocheck
