#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "reprocheck/evaluation.hpp"
#include "reprocheck/sections.hpp"

namespace reprocheck {

// Corpus JSONL: one readme per line,
//
//   {"repo_id": "...", "gold_count": 3,
//    "sections": [{"parent": null, "header": "...", "content": "...",
//                  "level": 1, "order": 0, "gold_label": "training"}]}
//
// gold_count is needed only for evaluation; gold_label is optional but must
// be present on all of a record's sections or none. order defaults to the
// array position and level to 1.

struct CorpusLine {
    std::size_t line_number = 0;  ///< 1-based
    std::string raw;
    EvalRecord record;
    bool has_gold_count = false;
};

/// Throws CorpusFormatError naming `line_number`.
CorpusLine parse_corpus_line(std::string_view raw, std::size_t line_number);

/// Reads every non-blank line. Throws CorpusFormatError on the first bad one.
std::vector<CorpusLine> read_corpus(std::istream& in);
std::vector<CorpusLine> read_corpus_file(const std::string& path);

/// One corpus line (newline terminated) for a parsed readme.
std::string record_to_jsonl(std::string_view repo_id, std::span<const Section> sections,
                            std::optional<int> gold_count = std::nullopt,
                            const std::vector<std::string>* gold_labels = nullptr);

struct SectionPrediction {
    std::string label;
    double score = 0.0;
};

/// Adds predicted_label / predicted_score to every section object of a corpus
/// line. Bytes outside the inserted fields are left untouched; a line whose
/// sections already carry predictions is re-serialized instead.
std::string annotate_corpus_line(const CorpusLine& line,
                                 std::span<const SectionPrediction> predictions);

}  // namespace reprocheck
