#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "reprocheck/classification.hpp"
#include "reprocheck/scoring.hpp"
#include "reprocheck/sections.hpp"
#include "reprocheck/template.hpp"

namespace reprocheck {

struct EvalRecord {
    std::string repo_id;
    std::vector<Section> sections;
    /// Aligned with `sections` when present.
    std::optional<std::vector<std::string>> gold_section_labels;
    int gold_count = 0;
};

struct MetricsSummary {
    /// Pearson r of readme score vs gold count; absent when undefined.
    std::optional<double> correlation;
    double agreement = 0.0;
    /// Micro accuracy over labeled sections; absent when nothing is labeled.
    std::optional<double> accuracy;
    int n = 0;
    std::vector<std::string> flags;  ///< e.g. "ZeroVariance"
};

/// Throws LengthMismatch (unequal or fewer than two values) or ZeroVariance
/// (either series constant).
double pearson(std::span<const double> xs, std::span<const double> ys);

/// Exact-match rate. Throws LengthMismatch.
double count_agreement(std::span<const int> pred, std::span<const int> gold);

/// Micro accuracy. Throws LengthMismatch.
double section_accuracy(std::span<const std::string> pred_labels,
                        std::span<const std::string> gold_labels);

enum class KappaWeighting { linear, quadratic };

/// Weighted Cohen's kappa over the template's label order with disagreement
/// weights |i-j|/(k-1), squared for quadratic. Throws LengthMismatch or
/// UnknownLabel.
double weighted_kappa(std::span<const std::string> labels_a, std::span<const std::string> labels_b,
                      const Template& tmpl, KappaWeighting weighting = KappaWeighting::linear);

/// Scores each record with `classifier` and compares against gold. Degenerate
/// correlation is reported through `flags`, not thrown.
MetricsSummary evaluate_corpus(std::span<const EvalRecord> records, const ScoreConfig& config,
                               const Template& tmpl, Classifier& classifier);

/// Metrics from already computed per-record reports, aligned with `records`.
MetricsSummary summarize(std::span<const EvalRecord> records, std::span<const ReproReport> reports,
                         const ScoreConfig& config, const Template& tmpl);

std::string metrics_to_json(const MetricsSummary& summary);

}  // namespace reprocheck
