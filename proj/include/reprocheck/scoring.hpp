#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "reprocheck/classification.hpp"
#include "reprocheck/sections.hpp"
#include "reprocheck/template.hpp"

namespace reprocheck {

/// Per-template-entry maxima over a readme's sections. Entries with no
/// contributing section are exactly 0.
struct ClassMaxima {
    std::vector<double> maxima;
    std::vector<std::optional<int>> contributing_section;  ///< section order
};

enum class ScoreVariant { base, consecutive };

std::string_view to_string(ScoreVariant variant);
ScoreVariant score_variant_from_string(std::string_view name);

struct ScoreConfig {
    SectionView view = SectionView::parent_header_header_content;
    double tau = 0.5;
    ScoreVariant variant = ScoreVariant::base;
};

struct WeakLabel {
    std::string label;
    double score = 0.0;
};

struct ReproReport {
    double base_score = 0.0;
    double consecutive_score = 0.0;
    int coverage_count = 0;
    ClassMaxima per_class;
    std::vector<std::string> missing_labels;
    std::vector<WeakLabel> weak_labels;
    std::string backend;
    SectionView view = SectionView::parent_header_header_content;
    /// Label predicted for each scored section, document order. Not part of
    /// the JSON report; used by corpus evaluation.
    std::vector<std::string> section_labels;

    /// The score selected by a config's variant.
    double score(ScoreVariant variant) const {
        return variant == ScoreVariant::base ? base_score : consecutive_score;
    }
};

/// Elementwise maximum; ties keep the earliest section. Throws ShapeError if
/// any score vector length differs from the template size.
ClassMaxima per_class_max(std::span<const ScoredSection> scored, const Template& tmpl);

/// Sum of maxima over the template length.
double base_score(const ClassMaxima& maxima, const Template& tmpl);

/// Collapses runs of equal consecutive labels to the mean of their scores.
/// Throws EmptyInput on an empty list.
std::map<std::string, std::vector<double>> consecutive_mean(
    std::span<const std::pair<std::string, double>> pairs);

/// Consecutive-mean of (predicted_label, predicted_score), then per entry the
/// max of that label's means, summed and divided by the template length.
/// An empty readme scores 0.
double consecutive_score(std::span<const ScoredSection> scored, const Template& tmpl);

/// Entries whose maximum reaches tau.
int coverage_count(const ClassMaxima& maxima, double tau);

/// Classifies already filtered sections and assembles the report. The
/// grouped view groups by parent first.
ReproReport score_readme(std::span<const Section> sections, const ScoreConfig& config,
                         const Template& tmpl, Classifier& classifier);

std::string report_to_json(const ReproReport& report);
/// Human-readable rendering: missing labels first, then the rest, each group
/// in template order.
std::string report_to_text(const ReproReport& report, const Template& tmpl,
                           const ScoreConfig& config, std::string_view source);

}  // namespace reprocheck
