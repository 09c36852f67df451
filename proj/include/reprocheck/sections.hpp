#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "reprocheck/fetch.hpp"

namespace reprocheck {

/// One Readme unit delimited by a heading.
struct Section {
    int order = 0;  ///< document position, contiguous from 0 after parsing
    int level = 1;  ///< heading depth 1..6
    std::optional<std::string> parent_header;
    std::string header;
    std::string content;

    bool operator==(const Section&) const = default;
};

/// Which fields of a section are concatenated into classifier input.
enum class SectionView {
    header,
    parent_header_header,
    content,
    header_content,
    parent_header_header_content,
    grouped,
};

inline constexpr std::array<SectionView, 6> kAllSectionViews = {
    SectionView::header,
    SectionView::parent_header_header,
    SectionView::content,
    SectionView::header_content,
    SectionView::parent_header_header_content,
    SectionView::grouped,
};

std::string_view to_string(SectionView view);
/// Throws std::invalid_argument for unknown names.
SectionView section_view_from_string(std::string_view name);

/// Header used for text that precedes the first heading.
inline constexpr std::string_view kPreambleHeader = "introduction";

/// Splits markdown into sections at ATX and Setext headings.
///
/// Headings inside fenced code blocks are content. Text before the first
/// heading becomes a synthetic level-1 "introduction" section, which never
/// acts as a parent. Parsing never fails.
std::vector<Section> parse_sections(const RawReadme& readme);
std::vector<Section> parse_sections(std::string_view markdown);

/// Removes inline markdown from heading text: links and images keep their
/// label, emphasis/code markers, HTML tags and :emoji: shortcodes go away.
std::string strip_inline_markup(std::string_view heading);

/// The header phrases whose sections carry no reproducibility signal.
std::span<const std::string_view> drop_list();

/// Normalized header with surrounding punctuation trimmed; this is what gets
/// compared against the drop-list.
std::string drop_list_key(std::string_view header);
bool is_dropped_header(std::string_view header);

/// Drops sections whose header is on the drop-list and re-compacts order.
std::vector<Section> filter_sections(std::span<const Section> sections);

/// Merges sections that share a parent header into one section per parent,
/// keyed by first occurrence. Sections without a parent pass through.
std::vector<Section> group_by_parent(std::span<const Section> sections);

/// Space-joined normalized parent/header/content as selected by `view`.
std::string render_view(const Section& section, SectionView view);

}  // namespace reprocheck
