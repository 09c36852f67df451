#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "reprocheck/classification.hpp"
#include "reprocheck/error.hpp"
#include "reprocheck/external_backend.hpp"

using namespace reprocheck;

namespace {

std::string reference_text(const TemplateEntry& e) { return e.label + " " + e.description; }

}  // namespace

TEST_CASE("lexical_vector") {
    const auto v = lexical_vector("a a b");
    REQUIRE(v.size() == 2);
    CHECK(v.at("a") == doctest::Approx(1.0 + std::log(2.0)).epsilon(1e-15));
    CHECK(v.at("b") == 1.0);
    CHECK(lexical_vector("").empty());
    CHECK(lexical_vector("pre-trained models!").size() == 3);
}

TEST_CASE("cosine_similarity") {
    CHECK(cosine_similarity(lexical_vector("a b"), lexical_vector("b a")) == 1.0);
    CHECK(cosine_similarity(lexical_vector("a"), lexical_vector("b")) == 0.0);
    CHECK(cosine_similarity(lexical_vector(""), lexical_vector("a")) == 0.0);
    std::mt19937 rng(3);
    const std::vector<std::string> words = {"x", "y", "z", "train", "eval", "pip"};
    for (int i = 0; i < 200; ++i) {
        std::string a, b;
        for (int w = 0; w < 6; ++w) a += words[rng() % words.size()] + " ";
        for (int w = 0; w < 4; ++w) b += words[rng() % words.size()] + " ";
        const double c = cosine_similarity(lexical_vector(a), lexical_vector(b));
        CHECK(c >= 0.0);
        CHECK(c <= 1.0);
        CHECK(c == doctest::Approx(oracle::cosine(a, b)).epsilon(1e-12));
        CHECK(c == cosine_similarity(lexical_vector(b), lexical_vector(a)));
    }
}

TEST_CASE("argmax ties go to the lowest index") {
    const std::vector<double> s = {0.2, 0.7, 0.7, 0.1};
    CHECK(argmax(s) == 1);
    const std::vector<double> zeros(6, 0.0);
    CHECK(argmax(zeros) == 0);
}

TEST_CASE("lexical classifier on the default template") {
    const auto& t = default_template();
    LexicalClassifier classifier;

    SUBCASE("a verbatim reference text scores 1 on its entry") {
        const auto r = classifier.classify(reference_text(t[3]), t);
        CHECK(argmax(r.scores) == 3);
        CHECK(r.scores[3] == 1.0);
        CHECK(r.source == "lexical");
        CHECK_FALSE(r.empty_input);
    }
    SUBCASE("empty text gives zeros and a flag") {
        const auto r = classifier.classify("  \t ", t);
        CHECK(r.scores == std::vector<double>(6, 0.0));
        CHECK(r.empty_input);
    }
    SUBCASE("requirements text, checked against a hand cosine") {
        const std::string text = "install dependencies with pip requirements";
        const auto r = classifier.classify(text, t);
        std::vector<double> expected;
        for (const auto& e : t.entries()) expected.push_back(oracle::cosine(text, reference_text(e)));
        for (std::size_t i = 0; i < 6; ++i) CHECK(r.scores[i] == doctest::Approx(expected[i]).epsilon(1e-12));
        const auto best = std::max_element(expected.begin(), expected.end()) - expected.begin();
        CHECK(best == 1);
        CHECK(argmax(r.scores) == 1);
    }
}

TEST_CASE("auto_label") {
    const auto& t = default_template();
    LexicalClassifier classifier;

    const std::vector<Section> one = {{0, 1, std::nullopt, "results", "numbers"}};
    const auto labelled = auto_label(one, SectionView::header, t, classifier);
    REQUIRE(labelled.size() == 1);
    CHECK(labelled[0].predicted_label == "results");
    CHECK(labelled[0].view_text == "results");
    CHECK(labelled[0].predicted_score == doctest::Approx(oracle::cosine("results", reference_text(t[5]))));

    CHECK(auto_label(std::span<const Section>{}, SectionView::header, t, classifier).empty());

    const std::vector<Section> same(3, Section{0, 2, "Usage", "Training", "python train.py"});
    const auto out = auto_label(same, SectionView::parent_header_header_content, t, classifier);
    for (const auto& s : out) {
        CHECK(s.class_scores == out[0].class_scores);
        CHECK(s.predicted_label == out[0].predicted_label);
    }
}

TEST_CASE("permuting the template permutes the scores") {
    const auto& t = default_template();
    std::vector<std::pair<std::string, std::string>> pairs;
    for (const auto& e : t.entries()) pairs.emplace_back(e.label, e.description);
    std::mt19937 rng(11);
    LexicalClassifier classifier;
    const std::vector<std::string> texts = {"train the model from scratch", "results table", "pip install",
                                            "download pretrained weights", "evaluate metrics"};
    for (int trial = 0; trial < 20; ++trial) {
        auto shuffled = pairs;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        const auto p = Template::from_pairs(shuffled);
        for (const auto& text : texts) {
            const auto base = classifier.classify(text, t);
            const auto perm = classifier.classify(text, p);
            for (std::size_t i = 0; i < p.size(); ++i) {
                CHECK(perm.scores[i] == base.scores[*t.index_of(p[i].label)]);
            }
        }
    }
}

TEST_CASE("external and lexical backends agree on shape") {
    const auto& t = default_template();
    ExternalClassifier external(std::string(REPROCHECK_STUB_BACKEND) + " --scores 0.1,0.9");
    LexicalClassifier lexical;
    const auto a = external.classify("some text", t);
    const auto b = lexical.classify("some text", t);
    CHECK(a.scores.size() == b.scores.size());
    CHECK(a.scores == std::vector<double>{0.1, 0.9, 0.1, 0.9, 0.1, 0.9});
    CHECK(a.source == "external");

    // Empty text never reaches the backend.
    const auto empty = external.classify("", t);
    CHECK(empty.empty_input);
    CHECK(external.requests_sent() == 1);
}

TEST_CASE("backend specs") {
    CHECK(BackendSpec::lexical().identifier() == "lexical");
    CHECK(BackendSpec::external("x").identifier() == "external");
    CHECK_THROWS_AS(BackendSpec::external("").validate(), std::invalid_argument);
    const auto r = classify("training", default_template(), BackendSpec::lexical());
    CHECK(argmax(r.scores) == 3);
    const auto ext = classify("anything", default_template(),
                              BackendSpec::external(std::string(REPROCHECK_STUB_BACKEND) + " --score-label results"));
    CHECK(argmax(ext.scores) == 5);
}
