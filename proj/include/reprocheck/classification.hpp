#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "reprocheck/sections.hpp"
#include "reprocheck/template.hpp"

namespace reprocheck {

/// One section's score vector over template labels, each in [0,1].
struct ClassScores {
    std::vector<double> scores;
    std::string source;        ///< backend identifier
    bool empty_input = false;  ///< text was empty; scores are all zero

    bool operator==(const ClassScores&) const = default;
};

struct ScoredSection {
    Section section;
    std::string view_text;
    ClassScores class_scores;
    std::string predicted_label;
    double predicted_score = 0.0;
};

struct BackendSpec {
    enum class Kind { lexical, external };

    Kind kind = Kind::lexical;
    std::string command;  ///< shell command, external only

    static BackendSpec lexical() { return {}; }
    static BackendSpec external(std::string command) { return {Kind::external, std::move(command)}; }

    /// "lexical" or "external".
    std::string identifier() const;
    /// Throws std::invalid_argument when an external spec has no command.
    void validate() const;
};

/// Sparse term weights keyed by token, sorted for deterministic iteration.
using TermVector = std::map<std::string, double, std::less<>>;

/// Tokens are maximal runs of ASCII letters and digits; weight is
/// 1 + ln(count).
TermVector lexical_vector(std::string_view normalized_text);

/// Cosine in [0,1]; 0 when either vector is empty.
double cosine_similarity(const TermVector& a, const TermVector& b);

/// Index of the largest score; ties go to the lowest index.
std::size_t argmax(std::span<const double> scores);

class Classifier {
public:
    virtual ~Classifier() = default;

    /// Scores `text` against every template entry. Empty text (after
    /// normalization) yields all-zero scores with `empty_input` set.
    ClassScores classify(std::string_view text, const Template& tmpl);

    virtual std::string identifier() const = 0;

protected:
    /// `normalized` is non-empty.
    virtual std::vector<double> score(const std::string& normalized, const Template& tmpl) = 0;
};

/// Cosine between sublinear term-frequency vectors of the input and of each
/// entry's "label description" text. Stateless and thread-safe.
class LexicalClassifier final : public Classifier {
public:
    std::string identifier() const override { return "lexical"; }

protected:
    std::vector<double> score(const std::string& normalized, const Template& tmpl) override;
};

std::unique_ptr<Classifier> make_classifier(const BackendSpec& spec);

/// One-shot convenience; an external spec spawns a process for this call.
ClassScores classify(std::string_view text, const Template& tmpl, const BackendSpec& backend);

/// Renders each section under `view`, classifies it and attaches the argmax
/// label. Document order is preserved.
std::vector<ScoredSection> auto_label(std::span<const Section> sections, SectionView view,
                                      const Template& tmpl, Classifier& classifier);
std::vector<ScoredSection> auto_label(std::span<const Section> sections, SectionView view,
                                      const Template& tmpl, const BackendSpec& backend);

}  // namespace reprocheck
