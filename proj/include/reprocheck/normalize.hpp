#pragma once

#include <string>
#include <string_view>

namespace reprocheck {

/// Folds arbitrary UTF-8 text down to lowercase ASCII letters, digits,
/// punctuation and single spaces.
///
/// Accented Latin letters lose their diacritics (compatibility decomposition,
/// then combining marks dropped). Any other codepoint, including control
/// characters and invalid byte sequences, becomes whitespace; whitespace runs
/// collapse to one space and the result is trimmed. Idempotent.
std::string normalize_text(std::string_view raw);

/// Replaces invalid UTF-8 sequences with U+FFFD and drops a leading BOM.
std::string sanitize_utf8(std::string_view raw);

bool is_valid_utf8(std::string_view text);

}  // namespace reprocheck
