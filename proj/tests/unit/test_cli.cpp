#include <doctest.h>

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "reprocheck/commands.hpp"

using namespace reprocheck;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string fixture(const std::string& rel) { return std::string(REPROCHECK_FIXTURE_DIR) + "/" + rel; }

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path temp_file(const std::string& name, const std::string& body) {
    const auto path = fs::temp_directory_path() / name;
    std::ofstream(path, std::ios::binary) << body;
    return path;
}

}  // namespace

TEST_CASE("score") {
    SUBCASE("fixture readme matches the golden report") {
        const auto r = run({"score", fixture("score/example.md")});
        CHECK(r.code == 0);
        CHECK(r.out == slurp(fixture("score/example.json")));
        CHECK(r.err.empty());
    }
    SUBCASE("stdout carries only the JSON report") {
        const auto r = run({"score", fixture("score/example.md"), "--view", "header", "--tau", "0.2"});
        CHECK(r.code == 0);
        const auto doc = nlohmann::json::parse(r.out);
        CHECK(doc["view"] == "header");
    }
    SUBCASE("nonexistent path") {
        const auto r = run({"score", "/nonexistent/README.md"});
        CHECK(r.code == 1);
        CHECK(r.out.empty());
        CHECK_FALSE(r.err.empty());
    }
    SUBCASE("text format on an empty readme lists all six labels as missing") {
        const auto r = run({"score", fixture("score/empty.md"), "--format", "text"});
        CHECK(r.code == 0);
        for (const auto& label : default_template().labels()) {
            CHECK(r.out.find("MISSING  " + label) != std::string::npos);
        }
    }
    SUBCASE("bad flags") {
        CHECK(run({"score", fixture("score/example.md"), "--tau", "2"}).code == 1);
        CHECK(run({"score", fixture("score/example.md"), "--view", "nope"}).code == 1);
        CHECK(run({"score", fixture("score/example.md"), "--backend", "external"}).code == 1);
        CHECK(run({"bogus"}).code == 1);
        CHECK(run({}).code == 1);
        CHECK(run({"--help"}).code == 0);
    }
    SUBCASE("backend failures exit 2") {
        const auto r = run({"score", fixture("score/example.md"), "--backend", "external", "--backend-command",
                            std::string(REPROCHECK_STUB_BACKEND) + " --malformed-at 1"});
        CHECK(r.code == 2);
        CHECK(r.err.find("line 1") != std::string::npos);
    }
    SUBCASE("external backend report") {
        const auto r = run({"score", fixture("score/example.md"), "--backend", "external", "--backend-command",
                            std::string(REPROCHECK_STUB_BACKEND) + " --scores 1"});
        CHECK(r.code == 0);
        const auto doc = nlohmann::json::parse(r.out);
        CHECK(doc["base_score"] == 1.0);
        CHECK(doc["backend"] == "external");
    }
    SUBCASE("custom template") {
        const auto path = temp_file("reprocheck_cli_template.json",
                                    R"({"entries":[{"label":"a","description":"alpha"},{"label":"b","description":"beta"}]})");
        const auto r = run({"score", fixture("score/example.md"), "--template", path.string()});
        CHECK(r.code == 0);
        CHECK(nlohmann::json::parse(r.out)["per_class"]["maxima"].size() == 2);
        fs::remove(path);
    }
}

TEST_CASE("parse") {
    SUBCASE("one heading gives one line") {
        const auto path = temp_file("reprocheck_cli_a.md", "# A\n");
        const auto r = run({"parse", path.string(), "--repo-id", "x"});
        CHECK(r.code == 0);
        CHECK(r.out == R"({"repo_id":"x","sections":[{"parent":null,"header":"A","content":"","level":1,"order":0}]})"
                       "\n");
        fs::remove(path);
    }
    SUBCASE("grouped") {
        const auto path = temp_file("reprocheck_cli_g.md", "# Setup\n## Install\npip\n## Data\nget\n");
        const auto r = run({"parse", path.string(), "--repo-id", "x", "--grouped"});
        CHECK(r.code == 0);
        const auto doc = nlohmann::json::parse(r.out);
        REQUIRE(doc["sections"].size() == 2);
        CHECK(doc["sections"][1]["header"] == "Setup");
        CHECK(doc["sections"][1]["content"] == "Install\npip\nData\nget");
        fs::remove(path);
    }
    SUBCASE("only a drop-list header") {
        const auto path = temp_file("reprocheck_cli_d.md", "## License\nMIT\n");
        const auto r = run({"parse", path.string()});
        CHECK(r.code == 0);
        CHECK(r.out.empty());
        fs::remove(path);
    }
}

TEST_CASE("label") {
    SUBCASE("empty corpus") {
        const auto path = temp_file("reprocheck_cli_empty.jsonl", "");
        const auto r = run({"label", path.string()});
        CHECK(r.code == 0);
        CHECK(r.out.empty());
        fs::remove(path);
    }
    SUBCASE("three sections match the cosine oracle") {
        const auto r = run({"label", fixture("corpus/three.jsonl"), "--jobs", "2"});
        REQUIRE(r.code == 0);
        const auto doc = nlohmann::json::parse(r.out);
        const auto& t = default_template();
        for (const auto& s : doc["sections"]) {
            const auto text = s["header"].get<std::string>() + " " + s["content"].get<std::string>();
            std::size_t best = 0;
            double best_score = -1;
            for (const auto& e : t.entries()) {
                const double c = oracle::cosine(oracle::fold(text), e.label + " " + e.description);
                if (c > best_score) {
                    best_score = c;
                    best = e.index;
                }
            }
            CHECK(s["predicted_label"] == t[best].label);
            CHECK(s["predicted_score"].get<double>() == doctest::Approx(best_score).epsilon(1e-12));
        }
    }
    SUBCASE("corrupt line 7") {
        const auto r = run({"label", fixture("corpus/corrupt_line7.jsonl")});
        CHECK(r.code == 3);
        CHECK(r.out.empty());
        CHECK(r.err.find("line 7") != std::string::npos);
    }
    SUBCASE("output order follows input order") {
        const auto a = run({"label", fixture("corpus/golden20.jsonl"), "--jobs", "1"});
        const auto b = run({"label", fixture("corpus/golden20.jsonl"), "--jobs", "8"});
        CHECK(a.code == 0);
        CHECK(a.out == b.out);
        CHECK(std::count(a.out.begin(), a.out.end(), '\n') == 20);
    }
}

TEST_CASE("evaluate") {
    SUBCASE("golden corpus") {
        const auto r = run({"evaluate", fixture("corpus/golden20.jsonl")});
        REQUIRE(r.code == 0);
        const auto got = nlohmann::json::parse(r.out);
        const auto want = nlohmann::json::parse(slurp(fixture("corpus/golden20.metrics.json")));
        CHECK(std::abs(got["correlation"].get<double>() - want["correlation"].get<double>()) <= 1e-12);
        CHECK(got["agreement"] == want["agreement"]);
        CHECK(std::abs(got["accuracy"].get<double>() - want["accuracy"].get<double>()) <= 1e-12);
        CHECK(got["n"] == 20);
    }
    SUBCASE("without gold section labels accuracy is null") {
        const auto r = run({"evaluate", fixture("corpus/no_gold_labels.jsonl")});
        REQUIRE(r.code == 0);
        const auto got = nlohmann::json::parse(r.out);
        CHECK(got["accuracy"].is_null());
        CHECK(got["correlation"].is_number());
    }
    SUBCASE("single record") {
        const auto path = temp_file("reprocheck_cli_one.jsonl", R"({"repo_id":"r","gold_count":1,"sections":[{"header":"Results"}]})"
                                                                 "\n");
        const auto r = run({"evaluate", path.string()});
        REQUIRE(r.code == 0);
        const auto got = nlohmann::json::parse(r.out);
        CHECK(got["correlation"].is_null());
        CHECK(got["flags"] == nlohmann::json::array({"ZeroVariance"}));
        CHECK(got["agreement"] == 0.0);
        fs::remove(path);
    }
    SUBCASE("missing gold_count") {
        const auto path = temp_file("reprocheck_cli_nogold.jsonl", "{\"repo_id\":\"r\",\"sections\":[]}\n");
        const auto r = run({"evaluate", path.string()});
        CHECK(r.code == 3);
        CHECK(r.err.find("line 1") != std::string::npos);
        fs::remove(path);
    }
    SUBCASE("text format") {
        const auto r = run({"evaluate", fixture("corpus/golden20.jsonl"), "--format", "text"});
        CHECK(r.code == 0);
        CHECK(r.out.find("records      20") != std::string::npos);
    }
}
