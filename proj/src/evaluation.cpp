#include "reprocheck/evaluation.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "reprocheck/error.hpp"

namespace reprocheck {

using json = nlohmann::ordered_json;

namespace {

template <typename A, typename B>
void require_same_length(std::span<A> a, std::span<B> b, std::size_t minimum, const char* what) {
    if (a.size() != b.size()) {
        throw LengthMismatch(std::string(what) + ": lengths differ (" + std::to_string(a.size()) +
                             " vs " + std::to_string(b.size()) + ")");
    }
    if (a.size() < minimum) {
        throw LengthMismatch(std::string(what) + ": needs at least " + std::to_string(minimum) +
                             " values");
    }
}

double mean(std::span<const double> xs) {
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

}  // namespace

double pearson(std::span<const double> xs, std::span<const double> ys) {
    require_same_length(xs, ys, 2, "pearson");
    const double mx = mean(xs);
    const double my = mean(ys);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw ZeroVariance("pearson: a series has zero variance");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double count_agreement(std::span<const int> pred, std::span<const int> gold) {
    require_same_length(pred, gold, 1, "count_agreement");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) hits += pred[i] == gold[i];
    return static_cast<double>(hits) / static_cast<double>(pred.size());
}

double section_accuracy(std::span<const std::string> pred_labels,
                        std::span<const std::string> gold_labels) {
    require_same_length(pred_labels, gold_labels, 1, "section_accuracy");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < pred_labels.size(); ++i) hits += pred_labels[i] == gold_labels[i];
    return static_cast<double>(hits) / static_cast<double>(pred_labels.size());
}

double weighted_kappa(std::span<const std::string> labels_a, std::span<const std::string> labels_b,
                      const Template& tmpl, KappaWeighting weighting) {
    require_same_length(labels_a, labels_b, 1, "weighted_kappa");
    const std::size_t k = tmpl.size();
    auto index = [&tmpl](const std::string& label) {
        const auto i = tmpl.index_of(label);
        if (!i) throw UnknownLabel("label '" + label + "' is not in the template");
        return *i;
    };

    std::vector<double> observed(k * k, 0.0);
    std::vector<double> marginal_a(k, 0.0);
    std::vector<double> marginal_b(k, 0.0);
    const double unit = 1.0 / static_cast<double>(labels_a.size());
    for (std::size_t n = 0; n < labels_a.size(); ++n) {
        const auto i = index(labels_a[n]);
        const auto j = index(labels_b[n]);
        observed[i * k + j] += unit;
        marginal_a[i] += unit;
        marginal_b[j] += unit;
    }
    if (k == 1) return 1.0;

    double disagreement_observed = 0.0;
    double disagreement_expected = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            double w = std::abs(static_cast<double>(i) - static_cast<double>(j)) / static_cast<double>(k - 1);
            if (weighting == KappaWeighting::quadratic) w *= w;
            disagreement_observed += w * observed[i * k + j];
            disagreement_expected += w * marginal_a[i] * marginal_b[j];
        }
    }
    // Both raters used one and the same category throughout.
    if (disagreement_expected == 0.0) return 1.0;
    return 1.0 - disagreement_observed / disagreement_expected;
}

MetricsSummary summarize(std::span<const EvalRecord> records, std::span<const ReproReport> reports,
                         const ScoreConfig& config, const Template& tmpl) {
    if (records.empty()) throw EmptyInput("evaluation corpus is empty");
    if (records.size() != reports.size()) throw LengthMismatch("one report per record is required");

    std::vector<std::size_t> order(records.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return records[a].repo_id < records[b].repo_id;
    });

    MetricsSummary summary;
    summary.n = static_cast<int>(records.size());
    std::vector<double> scores, gold_counts;
    std::vector<int> predicted_counts, gold_ints;
    std::vector<std::string> predicted_labels, gold_labels;
    bool any_labels = false;
    for (const auto i : order) {
        const auto& record = records[i];
        const auto& report = reports[i];
        if (record.gold_count < 0 || static_cast<std::size_t>(record.gold_count) > tmpl.size()) {
            throw ValidationError("record '" + record.repo_id + "' has gold_count outside [0, " +
                                  std::to_string(tmpl.size()) + "]");
        }
        scores.push_back(report.score(config.variant));
        gold_counts.push_back(record.gold_count);
        predicted_counts.push_back(report.coverage_count);
        gold_ints.push_back(record.gold_count);
        if (record.gold_section_labels && config.view != SectionView::grouped) {
            any_labels = true;
            if (record.gold_section_labels->size() != report.section_labels.size()) {
                throw LengthMismatch("record '" + record.repo_id +
                                     "': gold section labels do not align with its sections");
            }
            predicted_labels.insert(predicted_labels.end(), report.section_labels.begin(),
                                    report.section_labels.end());
            gold_labels.insert(gold_labels.end(), record.gold_section_labels->begin(),
                               record.gold_section_labels->end());
        }
    }

    try {
        summary.correlation = pearson(scores, gold_counts);
    } catch (const ZeroVariance&) {
        summary.flags.push_back("ZeroVariance");
    } catch (const LengthMismatch&) {
        // A single record has no variance to correlate.
        summary.flags.push_back("ZeroVariance");
    }
    summary.agreement = count_agreement(predicted_counts, gold_ints);
    if (config.view == SectionView::grouped &&
        std::any_of(records.begin(), records.end(),
                    [](const EvalRecord& r) { return r.gold_section_labels.has_value(); })) {
        summary.flags.push_back("AccuracyUnavailableForGroupedView");
    }
    if (any_labels && !gold_labels.empty()) {
        summary.accuracy = section_accuracy(predicted_labels, gold_labels);
    }
    return summary;
}

MetricsSummary evaluate_corpus(std::span<const EvalRecord> records, const ScoreConfig& config,
                               const Template& tmpl, Classifier& classifier) {
    std::vector<ReproReport> reports;
    reports.reserve(records.size());
    for (const auto& record : records) {
        reports.push_back(score_readme(record.sections, config, tmpl, classifier));
    }
    return summarize(records, reports, config, tmpl);
}

std::string metrics_to_json(const MetricsSummary& summary) {
    json doc;
    doc["correlation"] = summary.correlation ? json(*summary.correlation) : json(nullptr);
    doc["agreement"] = summary.agreement;
    doc["accuracy"] = summary.accuracy ? json(*summary.accuracy) : json(nullptr);
    doc["n"] = summary.n;
    doc["flags"] = summary.flags;
    return doc.dump();
}

}  // namespace reprocheck
