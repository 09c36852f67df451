#include "reprocheck/template.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

#include "default_template.hpp"
#include "reprocheck/error.hpp"
#include "reprocheck/normalize.hpp"

namespace reprocheck {

using json = nlohmann::ordered_json;

Template Template::from_pairs(const std::vector<std::pair<std::string, std::string>>& pairs) {
    if (pairs.empty()) throw ValidationError("template has no entries");
    Template tmpl;
    std::set<std::string> seen;
    for (const auto& [raw_label, raw_description] : pairs) {
        auto label = normalize_text(raw_label);
        auto description = normalize_text(raw_description);
        if (label.empty()) throw ValidationError("template entry " + std::to_string(tmpl.size()) + " has an empty label");
        if (description.empty()) throw ValidationError("template entry '" + label + "' has an empty description");
        if (!seen.insert(label).second) throw ValidationError("duplicate template label '" + label + "'");
        tmpl.entries_.push_back(TemplateEntry{std::move(label), std::move(description), tmpl.size()});
    }
    return tmpl;
}

std::optional<std::size_t> Template::index_of(std::string_view label) const {
    for (const auto& e : entries_) {
        if (e.label == label) return e.index;
    }
    return std::nullopt;
}

std::vector<std::string> Template::labels() const {
    std::vector<std::string> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(e.label);
    return out;
}

Template parse_template(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("template is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("entries") || !doc["entries"].is_array()) {
        throw ParseError("template must be an object with an \"entries\" array");
    }
    std::vector<std::pair<std::string, std::string>> pairs;
    for (const auto& entry : doc["entries"]) {
        if (!entry.is_object() || !entry.contains("label") || !entry["label"].is_string() ||
            !entry.contains("description") || !entry["description"].is_string()) {
            throw ParseError("template entry " + std::to_string(pairs.size()) +
                             " needs string \"label\" and \"description\" fields");
        }
        pairs.emplace_back(entry["label"].get<std::string>(), entry["description"].get<std::string>());
    }
    return Template::from_pairs(pairs);
}

const Template& default_template() {
    static const Template tmpl = parse_template(detail::kDefaultTemplateJson);
    return tmpl;
}

Template load_template(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw NotFound("cannot read template file " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_template(buffer.str());
}

std::string template_to_json(const Template& tmpl) {
    json doc;
    doc["entries"] = json::array();
    for (const auto& e : tmpl.entries()) {
        doc["entries"].push_back({{"label", e.label}, {"description", e.description}});
    }
    return doc.dump(2) + "\n";
}

void save_template(const Template& tmpl, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ParseError("cannot write template file " + path);
    out << template_to_json(tmpl);
}

}  // namespace reprocheck
