#include "reprocheck/scoring.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "reprocheck/error.hpp"

namespace reprocheck {

using json = nlohmann::ordered_json;

std::string_view to_string(ScoreVariant variant) {
    return variant == ScoreVariant::base ? "base" : "consecutive";
}

ScoreVariant score_variant_from_string(std::string_view name) {
    if (name == "base") return ScoreVariant::base;
    if (name == "consecutive") return ScoreVariant::consecutive;
    throw std::invalid_argument("unknown score variant: " + std::string(name));
}

ClassMaxima per_class_max(std::span<const ScoredSection> scored, const Template& tmpl) {
    ClassMaxima out;
    out.maxima.assign(tmpl.size(), 0.0);
    out.contributing_section.assign(tmpl.size(), std::nullopt);
    for (const auto& s : scored) {
        const auto& scores = s.class_scores.scores;
        if (scores.size() != tmpl.size()) {
            throw ShapeError("section " + std::to_string(s.section.order) + " has " +
                             std::to_string(scores.size()) + " scores, template has " +
                             std::to_string(tmpl.size()) + " entries");
        }
        for (std::size_t i = 0; i < scores.size(); ++i) {
            if (scores[i] > out.maxima[i]) {
                out.maxima[i] = scores[i];
                out.contributing_section[i] = s.section.order;
            }
        }
    }
    return out;
}

double base_score(const ClassMaxima& maxima, const Template& tmpl) {
    const double sum = std::accumulate(maxima.maxima.begin(), maxima.maxima.end(), 0.0);
    return sum / static_cast<double>(tmpl.size());
}

std::map<std::string, std::vector<double>> consecutive_mean(
    std::span<const std::pair<std::string, double>> pairs) {
    if (pairs.empty()) throw EmptyInput("consecutive_mean needs at least one (label, score) pair");

    std::map<std::string, std::vector<double>> result;
    auto previous = pairs.front().first;
    std::vector<double> run;
    auto flush = [&] {
        const double mean = std::accumulate(run.begin(), run.end(), 0.0) / static_cast<double>(run.size());
        result[previous].push_back(mean);
    };
    for (const auto& [label, score] : pairs) {
        if (label == previous) {
            run.push_back(score);
        } else {
            flush();
            run.assign(1, score);
        }
        previous = label;
    }
    flush();
    return result;
}

double consecutive_score(std::span<const ScoredSection> scored, const Template& tmpl) {
    if (scored.empty()) return 0.0;
    std::vector<std::pair<std::string, double>> pairs;
    pairs.reserve(scored.size());
    for (const auto& s : scored) pairs.emplace_back(s.predicted_label, s.predicted_score);
    const auto means = consecutive_mean(pairs);

    double sum = 0.0;
    for (const auto& entry : tmpl.entries()) {
        const auto it = means.find(entry.label);
        if (it == means.end()) continue;
        sum += *std::max_element(it->second.begin(), it->second.end());
    }
    return sum / static_cast<double>(tmpl.size());
}

int coverage_count(const ClassMaxima& maxima, double tau) {
    return static_cast<int>(std::count_if(maxima.maxima.begin(), maxima.maxima.end(),
                                          [tau](double m) { return m >= tau; }));
}

ReproReport score_readme(std::span<const Section> sections, const ScoreConfig& config,
                         const Template& tmpl, Classifier& classifier) {
    if (!(config.tau >= 0.0 && config.tau <= 1.0)) {
        throw std::invalid_argument("tau must lie in [0,1]");
    }
    std::vector<Section> grouped;
    if (config.view == SectionView::grouped) {
        grouped = group_by_parent(sections);
        sections = grouped;
    }
    const auto scored = auto_label(sections, config.view, tmpl, classifier);

    ReproReport report;
    report.per_class = per_class_max(scored, tmpl);
    report.base_score = base_score(report.per_class, tmpl);
    report.consecutive_score = consecutive_score(scored, tmpl);
    report.coverage_count = coverage_count(report.per_class, config.tau);
    for (std::size_t i = 0; i < tmpl.size(); ++i) {
        const double m = report.per_class.maxima[i];
        if (m == 0.0) {
            report.missing_labels.push_back(tmpl[i].label);
        } else if (m < config.tau) {
            report.weak_labels.push_back({tmpl[i].label, m});
        }
    }
    report.backend = classifier.identifier();
    report.view = config.view;
    for (const auto& s : scored) report.section_labels.push_back(s.predicted_label);
    return report;
}

std::string report_to_json(const ReproReport& report) {
    json doc;
    doc["base_score"] = report.base_score;
    doc["consecutive_score"] = report.consecutive_score;
    doc["coverage_count"] = report.coverage_count;
    json per_class;
    per_class["maxima"] = report.per_class.maxima;
    per_class["contributing_section"] = json::array();
    for (const auto& c : report.per_class.contributing_section) {
        per_class["contributing_section"].push_back(c ? json(*c) : json(nullptr));
    }
    doc["per_class"] = std::move(per_class);
    doc["missing_labels"] = report.missing_labels;
    doc["weak_labels"] = json::array();
    for (const auto& w : report.weak_labels) {
        doc["weak_labels"].push_back({{"label", w.label}, {"score", w.score}});
    }
    doc["backend"] = report.backend;
    doc["view"] = std::string(to_string(report.view));
    return doc.dump();
}

std::string report_to_text(const ReproReport& report, const Template& tmpl,
                           const ScoreConfig& config, std::string_view source) {
    std::ostringstream out;
    char buf[64];
    auto fixed = [&buf](double v) {
        std::snprintf(buf, sizeof buf, "%.3f", v);
        return std::string(buf);
    };
    const char* base_mark = config.variant == ScoreVariant::base ? " *" : "";
    const char* cons_mark = config.variant == ScoreVariant::consecutive ? " *" : "";

    out << "Reproducibility report: " << source << "\n";
    out << "  base score         " << fixed(report.base_score) << base_mark << "\n";
    out << "  consecutive score  " << fixed(report.consecutive_score) << cons_mark << "\n";
    out << "  coverage           " << report.coverage_count << "/" << tmpl.size()
        << " sections at tau " << fixed(config.tau) << "\n";
    out << "  view " << to_string(report.view) << ", backend " << report.backend << "\n\n";

    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < tmpl.size(); ++i) {
        if (report.per_class.maxima[i] == 0.0) order.push_back(i);
    }
    for (std::size_t i = 0; i < tmpl.size(); ++i) {
        if (report.per_class.maxima[i] != 0.0) order.push_back(i);
    }

    std::size_t width = 0;
    for (const auto& e : tmpl.entries()) width = std::max(width, e.label.size());
    for (const auto i : order) {
        const double m = report.per_class.maxima[i];
        const char* status = m == 0.0 ? "MISSING" : (m < config.tau ? "WEAK" : "ok");
        out << "  " << status << std::string(9 - std::char_traits<char>::length(status), ' ')
            << tmpl[i].label << std::string(width - tmpl[i].label.size() + 2, ' ') << fixed(m);
        if (const auto& c = report.per_class.contributing_section[i]) out << "  (section " << *c << ")";
        out << "\n";
    }
    return out.str();
}

}  // namespace reprocheck
