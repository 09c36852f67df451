#include <CLI11.hpp>

#include <map>

#include "reprocheck/commands.hpp"

namespace reprocheck {

namespace {

const std::map<std::string, SectionView> kViewNames = {
    {"header", SectionView::header},
    {"parent_header_header", SectionView::parent_header_header},
    {"content", SectionView::content},
    {"header_content", SectionView::header_content},
    {"parent_header_header_content", SectionView::parent_header_header_content},
    {"grouped", SectionView::grouped},
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Scores how well a repository Readme follows the ML reproducibility template."};
    app.name("reprocheck");
    app.require_subcommand(1);

    RunConfig config;
    std::string view = "parent_header_header_content";
    std::string backend = "lexical";
    std::string backend_command;
    std::string variant = "base";
    std::string format = "json";
    std::string template_path;
    std::string repo_id;
    std::string target;
    std::string corpus;
    double timeout_seconds = 10.0;

    auto add_common = [&](CLI::App* cmd, bool scoring) {
        cmd->add_option("--template", template_path, "Template JSON file (default: built-in six sections)")
            ->check(CLI::ExistingFile);
        if (!scoring) return;
        cmd->add_option("--view", view, "Section fields fed to the classifier")
            ->check(CLI::IsMember({"header", "parent_header_header", "content", "header_content",
                                   "parent_header_header_content", "grouped"}));
        cmd->add_option("--backend", backend, "Classifier backend")
            ->check(CLI::IsMember({"lexical", "external"}));
        cmd->add_option("--backend-command", backend_command,
                        "Shell command of an external classifier speaking line-delimited JSON");
        cmd->add_option("--tau", config.scoring.tau, "Coverage threshold")->check(CLI::Range(0.0, 1.0));
        cmd->add_option("--variant", variant, "Score used for correlation and marked in text output")
            ->check(CLI::IsMember({"base", "consecutive"}));
        cmd->add_option("--jobs", config.jobs, "Worker threads for corpus commands (0 = auto)");
    };

    auto* score = app.add_subcommand("score", "Score one Readme (path, directory or repository URL)");
    score->add_option("target", target, "Readme path, directory or URL")->required();
    score->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "text"}));
    score->add_option("--timeout", timeout_seconds, "Network timeout in seconds");
    add_common(score, true);

    auto* parse = app.add_subcommand("parse", "Emit the filtered sections of one Readme as corpus JSONL");
    parse->add_option("target", target, "Readme path, directory or URL")->required();
    parse->add_flag("--grouped", config.grouped, "Merge sections by parent header");
    parse->add_option("--repo-id", repo_id, "repo_id written to the record");
    parse->add_option("--timeout", timeout_seconds, "Network timeout in seconds");

    auto* label = app.add_subcommand("label", "Auto-label every section of a corpus JSONL file");
    label->add_option("corpus", corpus, "Corpus JSONL file, or - for stdin")->required();
    add_common(label, true);

    auto* evaluate = app.add_subcommand("evaluate", "Correlation, agreement and accuracy against gold");
    evaluate->add_option("corpus", corpus, "Corpus JSONL file with gold_count, or - for stdin")->required();
    evaluate->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "text"}));
    add_common(evaluate, true);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_code::ok : exit_code::input_error;
    }

    config.scoring.view = kViewNames.at(view);
    config.scoring.variant = score_variant_from_string(variant);
    config.format = format == "text" ? OutputFormat::text : OutputFormat::json;
    if (!template_path.empty()) config.template_path = template_path;
    if (!repo_id.empty()) config.repo_id = repo_id;
    config.fetch.timeout = std::chrono::milliseconds(static_cast<long long>(timeout_seconds * 1000.0));
    if (backend == "external") {
        if (backend_command.empty()) {
            err << "error: --backend external requires --backend-command\n";
            return exit_code::input_error;
        }
        config.backend = BackendSpec::external(backend_command);
    }

    if (score->parsed()) return cmd_score(target, config, out, err);
    if (parse->parsed()) return cmd_parse(target, config, out, err);
    if (label->parsed()) return cmd_label(corpus, config, out, err);
    return cmd_evaluate(corpus, config, out, err);
}

}  // namespace reprocheck
