#include "reprocheck/corpus_io.hpp"

#include <json.hpp>

#include <fstream>

#include "reprocheck/error.hpp"

namespace reprocheck {

using json = nlohmann::ordered_json;

namespace {

const json* find_field(const json& object, const char* key) {
    const auto it = object.find(key);
    return it == object.end() ? nullptr : &*it;
}

Section parse_section(const json& value, std::size_t index, std::size_t line_number,
                      std::optional<std::string>& gold_label) {
    const auto where = "section " + std::to_string(index) + ": ";
    if (!value.is_object()) throw CorpusFormatError(line_number, where + "not an object");

    Section s;
    const auto* header = find_field(value, "header");
    if (!header || !header->is_string()) {
        throw CorpusFormatError(line_number, where + "\"header\" must be a string");
    }
    s.header = header->get<std::string>();
    if (const auto* content = find_field(value, "content")) {
        if (!content->is_string()) throw CorpusFormatError(line_number, where + "\"content\" must be a string");
        s.content = content->get<std::string>();
    }
    if (const auto* parent = find_field(value, "parent"); parent && !parent->is_null()) {
        if (!parent->is_string()) throw CorpusFormatError(line_number, where + "\"parent\" must be a string or null");
        s.parent_header = parent->get<std::string>();
    }
    if (const auto* level = find_field(value, "level")) {
        if (!level->is_number_integer() || level->get<int>() < 1 || level->get<int>() > 6) {
            throw CorpusFormatError(line_number, where + "\"level\" must be an integer in 1..6");
        }
        s.level = level->get<int>();
    }
    s.order = static_cast<int>(index);
    if (const auto* order = find_field(value, "order")) {
        if (!order->is_number_integer() || order->get<int>() < 0) {
            throw CorpusFormatError(line_number, where + "\"order\" must be a non-negative integer");
        }
        s.order = order->get<int>();
    }
    if (const auto* label = find_field(value, "gold_label")) {
        if (!label->is_string()) throw CorpusFormatError(line_number, where + "\"gold_label\" must be a string");
        gold_label = label->get<std::string>();
    }
    return s;
}

json section_to_json(const Section& s) {
    json out;
    out["parent"] = s.parent_header ? json(*s.parent_header) : json(nullptr);
    out["header"] = s.header;
    out["content"] = s.content;
    out["level"] = s.level;
    out["order"] = s.order;
    return out;
}

std::string dump(const json& value) {
    return value.dump(-1, ' ', false, json::error_handler_t::replace);
}

// Byte offsets of the closing brace of each object in the top-level
// "sections" array, paired with whether that object has any members.
struct ObjectEnd {
    std::size_t close;
    bool empty;
};

std::vector<ObjectEnd> section_object_ends(std::string_view text) {
    std::vector<ObjectEnd> ends;
    int depth = 0;
    std::string last_key_at_top;
    int sections_depth = -1;  // depth inside the sections array
    std::size_t object_open = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '"') {
            const auto start = i + 1;
            for (++i; i < text.size() && text[i] != '"'; ++i) {
                if (text[i] == '\\') ++i;
            }
            if (depth == 1) last_key_at_top = std::string(text.substr(start, i - start));
            continue;
        }
        if (c == '{' || c == '[') {
            ++depth;
            if (c == '[' && depth == 2 && last_key_at_top == "sections") sections_depth = 2;
            if (c == '{' && sections_depth == 2 && depth == 3) object_open = i;
        } else if (c == '}' || c == ']') {
            if (c == '}' && sections_depth == 2 && depth == 3) {
                const auto inner = text.substr(object_open + 1, i - object_open - 1);
                ends.push_back({i, inner.find_first_not_of(" \t\r\n") == std::string_view::npos});
            }
            if (c == ']' && depth == 2 && sections_depth == 2) sections_depth = -1;
            --depth;
        }
    }
    return ends;
}

}  // namespace

CorpusLine parse_corpus_line(std::string_view raw, std::size_t line_number) {
    json doc;
    try {
        doc = json::parse(raw);
    } catch (const json::parse_error& e) {
        throw CorpusFormatError(line_number, std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw CorpusFormatError(line_number, "record must be a JSON object");

    CorpusLine line;
    line.line_number = line_number;
    line.raw = std::string(raw);
    const auto* repo_id = find_field(doc, "repo_id");
    if (!repo_id || !repo_id->is_string()) {
        throw CorpusFormatError(line_number, "\"repo_id\" must be a string");
    }
    line.record.repo_id = repo_id->get<std::string>();
    if (const auto* gold = find_field(doc, "gold_count"); gold && !gold->is_null()) {
        if (!gold->is_number_integer() || gold->get<int>() < 0) {
            throw CorpusFormatError(line_number, "\"gold_count\" must be a non-negative integer");
        }
        line.record.gold_count = gold->get<int>();
        line.has_gold_count = true;
    }
    const auto* sections = find_field(doc, "sections");
    if (!sections || !sections->is_array()) {
        throw CorpusFormatError(line_number, "\"sections\" must be an array");
    }
    std::vector<std::string> labels;
    std::size_t labelled = 0;
    for (std::size_t i = 0; i < sections->size(); ++i) {
        std::optional<std::string> gold_label;
        line.record.sections.push_back(parse_section((*sections)[i], i, line_number, gold_label));
        if (gold_label) {
            ++labelled;
            labels.push_back(std::move(*gold_label));
        }
    }
    if (labelled != 0 && labelled != sections->size()) {
        throw CorpusFormatError(line_number, "\"gold_label\" must be set on every section or on none");
    }
    if (labelled != 0) line.record.gold_section_labels = std::move(labels);
    return line;
}

std::vector<CorpusLine> read_corpus(std::istream& in) {
    std::vector<CorpusLine> lines;
    std::string text;
    std::size_t number = 0;
    while (std::getline(in, text)) {
        ++number;
        if (!text.empty() && text.back() == '\r') text.pop_back();
        if (text.find_first_not_of(" \t") == std::string::npos) continue;
        lines.push_back(parse_corpus_line(text, number));
    }
    return lines;
}

std::vector<CorpusLine> read_corpus_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw NotFound("cannot open corpus file " + path);
    return read_corpus(in);
}

std::string record_to_jsonl(std::string_view repo_id, std::span<const Section> sections,
                            std::optional<int> gold_count, const std::vector<std::string>* gold_labels) {
    json doc;
    doc["repo_id"] = std::string(repo_id);
    if (gold_count) doc["gold_count"] = *gold_count;
    doc["sections"] = json::array();
    for (std::size_t i = 0; i < sections.size(); ++i) {
        auto s = section_to_json(sections[i]);
        if (gold_labels) s["gold_label"] = gold_labels->at(i);
        doc["sections"].push_back(std::move(s));
    }
    return dump(doc) + "\n";
}

std::string annotate_corpus_line(const CorpusLine& line,
                                 std::span<const SectionPrediction> predictions) {
    if (predictions.size() != line.record.sections.size()) {
        throw LengthMismatch("one prediction per section is required");
    }
    const auto ends = section_object_ends(line.raw);
    const bool already_labelled = line.raw.find("\"predicted_label\"") != std::string::npos ||
                                  line.raw.find("\"predicted_score\"") != std::string::npos;

    if (ends.size() == predictions.size() && !already_labelled) {
        std::string out = line.raw;
        for (std::size_t k = ends.size(); k-- > 0;) {
            const auto& p = predictions[k];
            std::string fields = ends[k].empty ? "" : ",";
            fields += "\"predicted_label\":" + dump(json(p.label)) +
                      ",\"predicted_score\":" + dump(json(p.score));
            out.insert(ends[k].close, fields);
        }
        return out;
    }

    auto doc = json::parse(line.raw);
    auto& sections = doc["sections"];
    for (std::size_t k = 0; k < predictions.size(); ++k) {
        sections[k]["predicted_label"] = predictions[k].label;
        sections[k]["predicted_score"] = predictions[k].score;
    }
    return dump(doc);
}

}  // namespace reprocheck
