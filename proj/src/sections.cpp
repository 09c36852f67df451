#include "reprocheck/sections.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <stdexcept>
#include <unordered_set>

#include "reprocheck/normalize.hpp"

namespace reprocheck {

namespace {

bool is_blank(std::string_view line) {
    return line.find_first_not_of(" \t") == std::string_view::npos;
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::size_t leading_spaces(std::string_view line) {
    std::size_t n = 0;
    while (n < line.size() && line[n] == ' ') ++n;
    return n;
}

bool is_alnum(char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           static_cast<unsigned char>(c) >= 0x80;
}

struct Fence {
    char marker = 0;
    std::size_t length = 0;
};

// Fences are recognised at any indentation: in Readmes an indented fence is
// almost always nested in a list item rather than an indented code block.
std::optional<Fence> fence_open(std::string_view line) {
    const auto body = line.substr(std::min(line.size(), line.find_first_not_of(" \t")));
    if (body.empty() || (body[0] != '`' && body[0] != '~')) return std::nullopt;
    const char marker = body[0];
    std::size_t run = 0;
    while (run < body.size() && body[run] == marker) ++run;
    if (run < 3) return std::nullopt;
    if (marker == '`' && body.substr(run).find('`') != std::string_view::npos) return std::nullopt;
    return Fence{marker, run};
}

bool fence_closes(std::string_view line, const Fence& fence) {
    const auto body = line.substr(std::min(line.size(), line.find_first_not_of(" \t")));
    std::size_t run = 0;
    while (run < body.size() && body[run] == fence.marker) ++run;
    return run >= fence.length && is_blank(body.substr(run));
}

struct AtxHeading {
    int level;
    std::string text;
};

std::optional<AtxHeading> atx_heading(std::string_view line) {
    const auto indent = leading_spaces(line);
    if (indent > 3) return std::nullopt;
    auto rest = line.substr(indent);
    std::size_t hashes = 0;
    while (hashes < rest.size() && rest[hashes] == '#') ++hashes;
    if (hashes == 0 || hashes > 6) return std::nullopt;
    if (hashes < rest.size() && rest[hashes] != ' ' && rest[hashes] != '\t') return std::nullopt;

    auto text = trim(rest.substr(hashes));
    // optional closing sequence
    const auto last_non_hash = text.find_last_not_of('#');
    if (last_non_hash == std::string_view::npos) {
        text = {};
    } else if (last_non_hash + 1 < text.size() &&
               (text[last_non_hash] == ' ' || text[last_non_hash] == '\t')) {
        text = trim(text.substr(0, last_non_hash));
    }
    return AtxHeading{static_cast<int>(hashes), std::string(text)};
}

// 1 for '=', 2 for '-', 0 otherwise.
int setext_underline_level(std::string_view line) {
    const auto indent = leading_spaces(line);
    if (indent > 3) return 0;
    const auto body = trim(line.substr(indent));
    if (body.empty() || (body[0] != '=' && body[0] != '-')) return 0;
    if (body.find_first_not_of(body[0]) != std::string_view::npos) return 0;
    return body[0] == '=' ? 1 : 2;
}

bool is_thematic_break(std::string_view line) {
    if (leading_spaces(line) > 3) return false;
    const auto body = trim(line);
    if (body.empty() || (body[0] != '-' && body[0] != '*' && body[0] != '_')) return false;
    std::size_t count = 0;
    for (char c : body) {
        if (c == body[0]) {
            ++count;
        } else if (c != ' ' && c != '\t') {
            return false;
        }
    }
    return count >= 3;
}

bool is_list_item(std::string_view line) {
    if (leading_spaces(line) > 3) return false;
    const auto body = line.substr(leading_spaces(line));
    if (body.empty()) return false;
    if (body[0] == '-' || body[0] == '+' || body[0] == '*') {
        return body.size() == 1 || body[1] == ' ' || body[1] == '\t';
    }
    std::size_t digits = 0;
    while (digits < body.size() && digits < 9 && body[digits] >= '0' && body[digits] <= '9') ++digits;
    if (digits == 0 || digits >= body.size()) return false;
    if (body[digits] != '.' && body[digits] != ')') return false;
    return digits + 1 == body.size() || body[digits + 1] == ' ' || body[digits + 1] == '\t';
}

// Whether a line can open a paragraph (and thus later become Setext text).
bool starts_paragraph(std::string_view line) {
    if (is_blank(line) || leading_spaces(line) > 3) return false;
    if (is_thematic_break(line) || is_list_item(line)) return false;
    const auto body = trim(line);
    if (body[0] == '>' || body[0] == '|') return false;
    if (body[0] == '<' && body.size() > 1 &&
        (body[1] == '/' || body[1] == '!' || (body[1] >= 'a' && body[1] <= 'z') ||
         (body[1] >= 'A' && body[1] <= 'Z'))) {
        return false;
    }
    return setext_underline_level(line) != 2;
}

// A paragraph continues through any line that does not start another block.
bool continues_paragraph(std::string_view line) {
    if (is_blank(line) || is_thematic_break(line) || is_list_item(line)) return false;
    const auto body = trim(line);
    return body[0] != '>';
}

std::string join_content(const std::vector<std::string_view>& lines) {
    std::size_t first = 0;
    while (first < lines.size() && is_blank(lines[first])) ++first;
    std::size_t last = lines.size();
    while (last > first && is_blank(lines[last - 1])) --last;
    std::string out;
    for (std::size_t i = first; i < last; ++i) {
        if (i != first) out.push_back('\n');
        out.append(lines[i]);
    }
    return out;
}

struct PendingSection {
    bool synthetic = true;
    int level = 1;
    std::string header;
    std::vector<std::string_view> lines;
};

std::size_t find_closing(std::string_view s, std::size_t open, char open_ch, char close_ch) {
    int depth = 0;
    for (std::size_t i = open; i < s.size(); ++i) {
        if (s[i] == '\\') {
            ++i;
            continue;
        }
        if (s[i] == open_ch) ++depth;
        if (s[i] == close_ch && --depth == 0) return i;
    }
    return std::string_view::npos;
}

bool is_shortcode_char(char c) {
    return is_alnum(c) || c == '_' || c == '+' || c == '-';
}

}  // namespace

std::string_view to_string(SectionView view) {
    switch (view) {
        case SectionView::header: return "header";
        case SectionView::parent_header_header: return "parent_header_header";
        case SectionView::content: return "content";
        case SectionView::header_content: return "header_content";
        case SectionView::parent_header_header_content: return "parent_header_header_content";
        case SectionView::grouped: return "grouped";
    }
    return "unknown";
}

SectionView section_view_from_string(std::string_view name) {
    for (auto view : kAllSectionViews) {
        if (to_string(view) == name) return view;
    }
    throw std::invalid_argument("unknown section view: " + std::string(name));
}

std::string strip_inline_markup(std::string_view heading) {
    std::string out;
    out.reserve(heading.size());
    for (std::size_t i = 0; i < heading.size(); ++i) {
        const char c = heading[i];
        if (c == '\\' && i + 1 < heading.size()) {
            out.push_back(heading[++i]);
            continue;
        }
        // [label](target), [label][ref], ![alt](src)
        const bool image = c == '!' && i + 1 < heading.size() && heading[i + 1] == '[';
        if (image || c == '[') {
            const auto open = image ? i + 1 : i;
            const auto close = find_closing(heading, open, '[', ']');
            if (close != std::string_view::npos) {
                out += strip_inline_markup(heading.substr(open + 1, close - open - 1));
                std::size_t next = close + 1;
                if (next < heading.size() && (heading[next] == '(' || heading[next] == '[')) {
                    const auto target_close = find_closing(
                        heading, next, heading[next], heading[next] == '(' ? ')' : ']');
                    if (target_close != std::string_view::npos) next = target_close + 1;
                }
                i = next - 1;
                continue;
            }
        }
        if (c == '<' && i + 1 < heading.size() &&
            (heading[i + 1] == '/' || heading[i + 1] == '!' || std::isalpha(static_cast<unsigned char>(heading[i + 1])))) {
            const auto close = heading.find('>', i);
            if (close != std::string_view::npos) {
                out.push_back(' ');
                i = close;
                continue;
            }
        }
        if (c == ':') {
            std::size_t j = i + 1;
            while (j < heading.size() && is_shortcode_char(heading[j])) ++j;
            if (j > i + 1 && j < heading.size() && heading[j] == ':') {
                out.push_back(' ');
                i = j;
                continue;
            }
        }
        if (c == '*' || c == '`' || c == '~') continue;
        if (c == '_') {
            const bool inner = i > 0 && i + 1 < heading.size() && is_alnum(heading[i - 1]) &&
                               is_alnum(heading[i + 1]);
            if (!inner) continue;
        }
        out.push_back(c);
    }

    std::string collapsed;
    bool space = false;
    for (char c : out) {
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            space = true;
            continue;
        }
        if (space && !collapsed.empty()) collapsed.push_back(' ');
        space = false;
        collapsed.push_back(c);
    }
    return collapsed;
}

std::vector<Section> parse_sections(const RawReadme& readme) {
    return parse_sections(readme.markdown);
}

std::vector<Section> parse_sections(std::string_view markdown) {
    std::vector<std::string_view> lines;
    for (std::size_t pos = 0; pos <= markdown.size();) {
        auto end = markdown.find('\n', pos);
        if (end == std::string_view::npos) end = markdown.size();
        auto line = markdown.substr(pos, end - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        pos = end + 1;
    }

    std::vector<PendingSection> pending(1);  // slot 0 is the preamble
    std::optional<Fence> fence;
    std::optional<std::size_t> paragraph_start;  // index into pending.back().lines

    auto open_heading = [&](int level, std::string text) {
        paragraph_start.reset();
        auto header = strip_inline_markup(text);
        if (header.empty()) return false;
        pending.push_back(PendingSection{false, level, std::move(header), {}});
        return true;
    };

    for (const auto line : lines) {
        auto& current = pending.back().lines;
        if (fence) {
            current.push_back(line);
            if (fence_closes(line, *fence)) fence.reset();
            continue;
        }
        if (auto f = fence_open(line)) {
            fence = f;
            paragraph_start.reset();
            current.push_back(line);
            continue;
        }
        if (auto atx = atx_heading(line)) {
            if (!open_heading(atx->level, std::move(atx->text))) current.push_back(line);
            continue;
        }
        if (paragraph_start) {
            if (const int level = setext_underline_level(line)) {
                std::string text;
                for (auto i = *paragraph_start; i < current.size(); ++i) {
                    if (!text.empty()) text.push_back(' ');
                    text.append(trim(current[i]));
                }
                const auto start = *paragraph_start;
                if (!strip_inline_markup(text).empty()) {
                    current.resize(start);
                    open_heading(level, std::move(text));
                } else {
                    current.push_back(line);
                    paragraph_start.reset();
                }
                continue;
            }
            if (continues_paragraph(line)) {
                current.push_back(line);
                continue;
            }
            paragraph_start.reset();
        }
        if (starts_paragraph(line)) paragraph_start = current.size();
        current.push_back(line);
    }

    std::vector<Section> sections;
    std::vector<std::pair<int, std::string>> ancestors;
    for (auto& p : pending) {
        Section s;
        s.level = p.level;
        s.header = p.synthetic ? std::string(kPreambleHeader) : p.header;
        s.content = join_content(p.lines);
        if (p.synthetic) {
            if (s.content.empty()) continue;
        } else {
            while (!ancestors.empty() && ancestors.back().first >= p.level) ancestors.pop_back();
            if (!ancestors.empty()) s.parent_header = ancestors.back().second;
            ancestors.emplace_back(p.level, p.header);
        }
        s.order = static_cast<int>(sections.size());
        sections.push_back(std::move(s));
    }
    return sections;
}

std::span<const std::string_view> drop_list() {
    static constexpr std::string_view entries[] = {
        "get involved", "problems", "question", "disclaimer", "issues", "miscellaneous",
        "misc", "troubleshoot", "reference", "references", "thoughts", "abusive corpus",
        "acknolwedgement", "inquiries", "changes", "ethical guidelines", "change logs",
        "citation", "cite", "credit", "contact", "licence", "acknowledgement", "license",
        "referense", "contribution", "contribute", "contributing", "author", "changelog",
        "faq", "citing", "news", "table of contents", "note", "links", "updates",
        "contributor", "todo", "acknowledgment", "leaderboard", "structure", "copyright",
        "motivation", "acknowledge", "what new", "bibtex",
    };
    return entries;
}

std::string drop_list_key(std::string_view header) {
    const auto normalized = normalize_text(header);
    auto is_edge = [](char c) { return c == ' ' || (!is_alnum(c)); };
    std::size_t first = 0;
    std::size_t last = normalized.size();
    while (first < last && is_edge(normalized[first])) ++first;
    while (last > first && is_edge(normalized[last - 1])) --last;
    return normalized.substr(first, last - first);
}

bool is_dropped_header(std::string_view header) {
    static const std::unordered_set<std::string_view> set(drop_list().begin(), drop_list().end());
    return set.contains(drop_list_key(header));
}

std::vector<Section> filter_sections(std::span<const Section> sections) {
    std::vector<Section> kept;
    for (const auto& s : sections) {
        if (is_dropped_header(s.header)) continue;
        kept.push_back(s);
        kept.back().order = static_cast<int>(kept.size()) - 1;
    }
    return kept;
}

std::vector<Section> group_by_parent(std::span<const Section> sections) {
    std::vector<Section> out;
    std::map<std::string, std::size_t> group_index;
    for (const auto& s : sections) {
        if (!s.parent_header) {
            out.push_back(s);
            continue;
        }
        std::string piece = s.header;
        if (!s.content.empty()) piece += "\n" + s.content;

        const auto [it, inserted] = group_index.try_emplace(*s.parent_header, out.size());
        if (inserted) {
            Section group;
            group.order = s.order;
            group.level = std::max(1, s.level - 1);
            group.header = *s.parent_header;
            group.content = std::move(piece);
            out.push_back(std::move(group));
        } else {
            auto& group = out[it->second];
            group.order = std::min(group.order, s.order);
            group.level = std::min(group.level, std::max(1, s.level - 1));
            group.content += "\n" + piece;
        }
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const Section& a, const Section& b) { return a.order < b.order; });
    return out;
}

std::string render_view(const Section& section, SectionView view) {
    const bool with_parent = view == SectionView::parent_header_header ||
                             view == SectionView::parent_header_header_content ||
                             view == SectionView::grouped;
    const bool with_header = view != SectionView::content;
    const bool with_content = view == SectionView::content || view == SectionView::header_content ||
                              view == SectionView::parent_header_header_content ||
                              view == SectionView::grouped;

    std::string out;
    auto append = [&out](std::string_view part) {
        auto normalized = normalize_text(part);
        if (normalized.empty()) return;
        if (!out.empty()) out.push_back(' ');
        out += normalized;
    };
    if (with_parent && section.parent_header) append(*section.parent_header);
    if (with_header) append(section.header);
    if (with_content) append(section.content);
    return out;
}

}  // namespace reprocheck
