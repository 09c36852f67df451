#include "reprocheck/classification.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "reprocheck/error.hpp"
#include "reprocheck/external_backend.hpp"
#include "reprocheck/normalize.hpp"

namespace reprocheck {

namespace {

bool is_token_char(char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

double norm(const TermVector& v) {
    double sum = 0.0;
    for (const auto& [_, w] : v) sum += w * w;
    return sum;
}

}  // namespace

std::string BackendSpec::identifier() const {
    return kind == Kind::lexical ? "lexical" : "external";
}

void BackendSpec::validate() const {
    if (kind == Kind::external && command.find_first_not_of(" \t") == std::string::npos) {
        throw std::invalid_argument("external backend requires a non-empty command");
    }
}

TermVector lexical_vector(std::string_view normalized_text) {
    std::map<std::string, int, std::less<>> counts;
    std::size_t i = 0;
    while (i < normalized_text.size()) {
        while (i < normalized_text.size() && !is_token_char(normalized_text[i])) ++i;
        const auto start = i;
        while (i < normalized_text.size() && is_token_char(normalized_text[i])) ++i;
        if (i > start) ++counts[std::string(normalized_text.substr(start, i - start))];
    }
    TermVector out;
    for (const auto& [term, count] : counts) {
        out.emplace(term, 1.0 + std::log(static_cast<double>(count)));
    }
    return out;
}

double cosine_similarity(const TermVector& a, const TermVector& b) {
    if (a.empty() || b.empty()) return 0.0;
    double dot = 0.0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (ia->first < ib->first) {
            ++ia;
        } else if (ib->first < ia->first) {
            ++ib;
        } else {
            dot += ia->second * ib->second;
            ++ia;
            ++ib;
        }
    }
    // sqrt(na * nb) keeps identical vectors at exactly 1.
    const double value = dot / std::sqrt(norm(a) * norm(b));
    return std::clamp(value, 0.0, 1.0);
}

std::size_t argmax(std::span<const double> scores) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i) {
        if (scores[i] > scores[best]) best = i;
    }
    return best;
}

ClassScores Classifier::classify(std::string_view text, const Template& tmpl) {
    ClassScores out;
    out.source = identifier();
    const auto normalized = normalize_text(text);
    if (normalized.empty()) {
        out.scores.assign(tmpl.size(), 0.0);
        out.empty_input = true;
        return out;
    }
    out.scores = score(normalized, tmpl);
    if (out.scores.size() != tmpl.size()) {
        throw ShapeError("backend returned " + std::to_string(out.scores.size()) + " scores for " +
                         std::to_string(tmpl.size()) + " template entries");
    }
    return out;
}

std::vector<double> LexicalClassifier::score(const std::string& normalized, const Template& tmpl) {
    const auto query = lexical_vector(normalized);
    std::vector<double> scores;
    scores.reserve(tmpl.size());
    for (const auto& entry : tmpl.entries()) {
        const auto reference = lexical_vector(normalize_text(entry.label + " " + entry.description));
        scores.push_back(cosine_similarity(query, reference));
    }
    return scores;
}

std::unique_ptr<Classifier> make_classifier(const BackendSpec& spec) {
    spec.validate();
    if (spec.kind == BackendSpec::Kind::external) {
        return std::make_unique<ExternalClassifier>(spec.command);
    }
    return std::make_unique<LexicalClassifier>();
}

ClassScores classify(std::string_view text, const Template& tmpl, const BackendSpec& backend) {
    return make_classifier(backend)->classify(text, tmpl);
}

std::vector<ScoredSection> auto_label(std::span<const Section> sections, SectionView view,
                                      const Template& tmpl, Classifier& classifier) {
    std::vector<ScoredSection> out;
    out.reserve(sections.size());
    for (const auto& section : sections) {
        ScoredSection scored;
        scored.section = section;
        scored.view_text = render_view(section, view);
        scored.class_scores = classifier.classify(scored.view_text, tmpl);
        const auto best = argmax(scored.class_scores.scores);
        scored.predicted_label = tmpl[best].label;
        scored.predicted_score = scored.class_scores.scores[best];
        out.push_back(std::move(scored));
    }
    return out;
}

std::vector<ScoredSection> auto_label(std::span<const Section> sections, SectionView view,
                                      const Template& tmpl, const BackendSpec& backend) {
    if (sections.empty()) return {};
    auto classifier = make_classifier(backend);
    return auto_label(sections, view, tmpl, *classifier);
}

}  // namespace reprocheck
