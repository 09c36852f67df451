#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace reprocheck {

struct TemplateEntry {
    std::string label;        ///< canonical, lowercase
    std::string description;  ///< normalized reference prose
    std::size_t index = 0;

    bool operator==(const TemplateEntry&) const = default;
};

/// An ordered reproducibility checklist. The built-in one has six entries;
/// loaded checklists may have any length >= 1.
class Template {
public:
    /// Normalizes labels and descriptions, assigns indices in order and
    /// validates. Throws ValidationError on empty input, empty labels or
    /// descriptions, or duplicate labels.
    static Template from_pairs(const std::vector<std::pair<std::string, std::string>>& pairs);

    const std::vector<TemplateEntry>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    const TemplateEntry& operator[](std::size_t i) const { return entries_.at(i); }

    std::optional<std::size_t> index_of(std::string_view label) const;
    std::vector<std::string> labels() const;

    bool operator==(const Template&) const = default;

private:
    std::vector<TemplateEntry> entries_;
};

/// The six-section checklist shipped in data/default_template.json.
const Template& default_template();

/// Parses the template file format:
///   {"entries": [{"label": "...", "description": "..."}, ...]}
/// Throws ParseError or ValidationError.
Template parse_template(std::string_view json_text);
Template load_template(const std::string& path);

std::string template_to_json(const Template& tmpl);
void save_template(const Template& tmpl, const std::string& path);

}  // namespace reprocheck
