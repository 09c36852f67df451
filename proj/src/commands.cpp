#include "reprocheck/commands.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <iostream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "reprocheck/corpus_io.hpp"
#include "reprocheck/error.hpp"
#include "reprocheck/evaluation.hpp"
#include "reprocheck/sections.hpp"

namespace reprocheck {

namespace {

Template resolve_template(const RunConfig& config) {
    return config.template_path ? load_template(*config.template_path) : default_template();
}

template <typename Body>
int guarded(std::ostream& err, Body&& body) {
    try {
        return body();
    } catch (const CorpusFormatError& e) {
        err << "error: corpus format: " << e.what() << "\n";
        return exit_code::corpus_error;
    } catch (const BackendError& e) {
        err << "error: backend: " << e.what() << "\n";
        return exit_code::backend_error;
    } catch (const ShapeError& e) {
        err << "error: backend: " << e.what() << "\n";
        return exit_code::backend_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::input_error;
    }
}

unsigned worker_count(const RunConfig& config, std::size_t items) {
    unsigned jobs = config.jobs;
    if (jobs == 0) {
        jobs = config.backend.kind == BackendSpec::Kind::lexical
                   ? std::max(1u, std::thread::hardware_concurrency())
                   : 1u;
    }
    return static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(jobs, items)));
}

/// Runs body(i, classifier) for i in [0, n) on a bounded pool, one
/// classifier per worker. The first exception wins and is rethrown.
void parallel_for(std::size_t n, const RunConfig& config,
                  const std::function<void(std::size_t, Classifier&)>& body) {
    if (n == 0) return;
    const unsigned workers = worker_count(config, n);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto work = [&] {
        try {
            auto classifier = make_classifier(config.backend);
            for (std::size_t i = next++; i < n && !failed; i = next++) body(i, *classifier);
        } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            failed = true;
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (error) std::rethrow_exception(error);
}

std::vector<CorpusLine> load_corpus(const std::string& path) {
    if (path == "-") return read_corpus(std::cin);
    return read_corpus_file(path);
}

std::vector<Section> ingest(std::string_view target, const RunConfig& config, std::string& source) {
    const auto readme = fetch_readme(target, config.fetch);
    source = readme.source_id;
    return filter_sections(parse_sections(readme));
}

}  // namespace

int cmd_score(std::string_view target, const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        config.backend.validate();
        const auto tmpl = resolve_template(config);
        std::string source;
        const auto sections = ingest(target, config, source);
        auto classifier = make_classifier(config.backend);
        const auto report = score_readme(sections, config.scoring, tmpl, *classifier);
        if (config.format == OutputFormat::json) {
            out << report_to_json(report) << "\n";
        } else {
            out << report_to_text(report, tmpl, config.scoring, source);
        }
        return exit_code::ok;
    });
}

int cmd_parse(std::string_view target, const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        std::string source;
        auto sections = ingest(target, config, source);
        if (config.grouped || config.scoring.view == SectionView::grouped) {
            sections = group_by_parent(sections);
        }
        if (!sections.empty()) out << record_to_jsonl(config.repo_id.value_or(source), sections);
        return exit_code::ok;
    });
}

int cmd_label(const std::string& corpus_path, const RunConfig& config, std::ostream& out,
              std::ostream& err) {
    return guarded(err, [&] {
        config.backend.validate();
        const auto tmpl = resolve_template(config);
        const auto corpus = load_corpus(corpus_path);

        std::vector<std::string> labelled(corpus.size());
        parallel_for(corpus.size(), config, [&](std::size_t i, Classifier& classifier) {
            const auto scored = auto_label(corpus[i].record.sections, config.scoring.view, tmpl, classifier);
            std::vector<SectionPrediction> predictions;
            predictions.reserve(scored.size());
            for (const auto& s : scored) predictions.push_back({s.predicted_label, s.predicted_score});
            labelled[i] = annotate_corpus_line(corpus[i], predictions);
        });
        for (const auto& line : labelled) out << line << "\n";
        return exit_code::ok;
    });
}

int cmd_evaluate(const std::string& corpus_path, const RunConfig& config, std::ostream& out,
                 std::ostream& err) {
    return guarded(err, [&] {
        config.backend.validate();
        const auto tmpl = resolve_template(config);
        const auto corpus = load_corpus(corpus_path);
        if (corpus.empty()) throw CorpusFormatError("corpus has no records");

        std::vector<EvalRecord> records;
        records.reserve(corpus.size());
        for (const auto& line : corpus) {
            if (!line.has_gold_count) throw CorpusFormatError(line.line_number, "\"gold_count\" is required for evaluation");
            if (static_cast<std::size_t>(line.record.gold_count) > tmpl.size()) {
                throw CorpusFormatError(line.line_number, "\"gold_count\" exceeds the template size");
            }
            records.push_back(line.record);
        }

        std::vector<ReproReport> reports(records.size());
        parallel_for(records.size(), config, [&](std::size_t i, Classifier& classifier) {
            reports[i] = score_readme(records[i].sections, config.scoring, tmpl, classifier);
        });
        const auto summary = summarize(records, reports, config.scoring, tmpl);

        if (config.format == OutputFormat::json) {
            out << metrics_to_json(summary) << "\n";
        } else {
            auto show = [](const std::optional<double>& v) {
                return v ? std::to_string(*v) : std::string("n/a");
            };
            out << "records      " << summary.n << "\n"
                << "correlation  " << show(summary.correlation) << "\n"
                << "agreement    " << std::to_string(summary.agreement) << "\n"
                << "accuracy     " << show(summary.accuracy) << "\n";
            for (const auto& flag : summary.flags) out << "flag         " << flag << "\n";
        }
        return exit_code::ok;
    });
}

}  // namespace reprocheck
