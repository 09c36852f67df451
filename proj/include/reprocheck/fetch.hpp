#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>

namespace reprocheck {

struct RawReadme {
    std::string source_id;  ///< URL or file path, never empty
    std::string markdown;   ///< valid UTF-8
    std::int64_t retrieved_at = 0;  ///< UTC seconds
};

/// Environment variable holding the repository-host API token.
inline constexpr const char* kTokenEnvVar = "GITHUB_TOKEN";

/// Readme names probed in this order, on the default branch for URLs and
/// inside the directory for local paths.
inline constexpr std::array<std::string_view, 4> kReadmeCandidates = {
    "README.md", "Readme.md", "readme.md", "README.markdown"};

bool has_markdown_extension(std::string_view path);

struct FetchOptions {
    std::chrono::milliseconds timeout{10000};
    /// Overrides the token from kTokenEnvVar when set.
    std::string token;
};

/// Loads a Readme from a local file, a local directory, a direct file URL or
/// a repository URL (github.com repositories resolve to raw content on HEAD;
/// other URLs are probed as a directory).
///
/// Throws NetworkError, NotFound or NotMarkdown.
RawReadme fetch_readme(std::string_view target, const FetchOptions& options = {});

}  // namespace reprocheck
